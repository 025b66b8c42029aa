#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "adpipe/dataset.hpp"
#include "adpipe/mock_backends.hpp"
#include "adpipe/types.hpp"

namespace adpipe::synthetic {

/// Synthetic desk-scale sample data: small deterministic scenes, datasets,
/// mock scripts and a ready-to-run config. Tests and the `make-fixtures` CLI
/// subcommand both build from here, so what the docs demo and what the
/// suite asserts are the same bytes.

inline constexpr int kInsertionSceneCount = 10;
inline constexpr int kSponsorSceneCount = 9;  // three per variant

/// Background palette the insertion scenes cycle through; the mock VLM
/// script conditions its category answer on these, which is what makes
/// suggestions vary across scenes.
const std::vector<Rgb>& insertion_backgrounds();

Rgb sponsor_background(int index);  // unique per sponsor scene

Rgb shampoo_product_color();
Rgb soda_product_color();
Rgb wrong_logo_color();
Rgb distractor_color();

CategoryTaxonomy taxonomy();

/// 64x48 scene: cycled background, one furniture rectangle (masked), and on
/// scene 5 an "important"-tagged face region.
SceneImage make_insertion_scene(int index);

/// 80x60 scene: unique background; variants 1/2 of 3 carry a product
/// rectangle, variant 2 an extra wrong-logo patch, variant 0 a distractor.
SceneImage make_sponsor_scene(int index);

DatasetRecordA make_insertion_record(int index);
DatasetRecordB make_sponsor_record(int index);

std::vector<SponsorSpec> sponsors();

/// The full mock VLM script covering every prompt the pipelines issue over
/// the fixture scenes, including the mode-collapsing single-stage entry.
std::vector<VlmScriptEntry> standard_vlm_script();

MockDetectorConfig standard_detector_config();
std::vector<EmbedderAffinity> standard_embedder_affinities();

/// Everything written by write_fixture_tree, with the seven
/// invariant-violation files paired to the error class each must raise
/// ("MalformedRecord", "MissingImage", "UnknownCategory").
struct FixtureTree {
    std::filesystem::path root;
    std::filesystem::path config;
    std::filesystem::path dataset_a;
    std::filesystem::path dataset_b;
    std::filesystem::path sponsor_registry;
    std::filesystem::path vlm_script;
    std::filesystem::path ablation_grid;
    std::filesystem::path human_composite;
    std::filesystem::path human_logo;
    std::vector<std::filesystem::path> invalid_files;
    std::vector<std::string> invalid_expected;
    std::vector<std::filesystem::path> scene_images;    // insertion scenes
    std::vector<std::filesystem::path> sponsor_images;  // sponsor scenes
};

/// Writes the complete fixture tree under `dir` (images/, datasets, mock
/// scripts, config.json, ablation grid, annotation files, invalid/). Prompt
/// templates are copied from `template_source_dir` so the tree is
/// self-contained.
FixtureTree write_fixture_tree(const std::filesystem::path& dir,
                               const std::filesystem::path& template_source_dir);

}  // namespace adpipe::synthetic
