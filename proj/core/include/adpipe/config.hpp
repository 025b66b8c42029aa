#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "adpipe/placement.hpp"
#include "adpipe/sponsor.hpp"

namespace adpipe {

enum class BoxSource { gt, predicted };

std::string to_string(BoxSource s);
BoxSource box_source_from_string(const std::string& s);

/// One backend slot: a registry name plus free-form parameters. Credentials
/// may only be referenced through *_env keys; inline secrets are rejected at
/// validation.
struct BackendSpec {
    std::string name;
    nlohmann::json params = nlohmann::json::object();
};

/// Validated run configuration. Relative paths are resolved against the
/// config file's directory. A seed is mandatory: no run may draw implicit
/// entropy.
struct RunConfig {
    std::uint64_t seed = 0;
    CategoryTaxonomy taxonomy;
    std::filesystem::path template_dir;

    BackendSpec vlm;
    BackendSpec detector;
    BackendSpec generator;
    BackendSpec embedder;
    std::map<std::string, BackendSpec> vlm_pool;  // extra VLMs for ablation sweeps

    CollisionThresholds collision;
    MattingParams matting;
    SeamlessParams seamless;

    int generation_size = 512;
    double opacity = 1.0;
    BlendMode blend_mode = BlendMode::alpha;
    PromptingStrategy prompting = PromptingStrategy::two_stage;
    BoxSource box_source = BoxSource::gt;
    LogoSource logo_source = LogoSource::prompt;
    int samples_per_image = 3;

    int retries = 2;
    int timeout_ms = 30000;

    std::filesystem::path config_path;
    std::string checksum;  // of the raw config bytes

    std::filesystem::path resolve(const std::string& path) const;
};

RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace adpipe
