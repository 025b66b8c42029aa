#include "adpipe/config.hpp"

#include <fstream>

#include "adpipe/hash.hpp"

namespace adpipe {

using nlohmann::json;

std::string to_string(BoxSource s) { return s == BoxSource::gt ? "gt" : "predicted"; }

BoxSource box_source_from_string(const std::string& s) {
    if (s == "gt") return BoxSource::gt;
    if (s == "predicted") return BoxSource::predicted;
    throw ConfigError("unknown box source: " + s);
}

std::filesystem::path RunConfig::resolve(const std::string& path) const {
    const std::filesystem::path p(path);
    if (p.is_absolute()) return p;
    return config_path.parent_path() / p;
}

namespace {

BackendSpec parse_backend_spec(const json& j, const std::string& slot) {
    if (!j.contains("name")) {
        throw ConfigError("backend '" + slot + "' needs a name");
    }
    BackendSpec spec;
    spec.name = j.at("name").get<std::string>();
    spec.params = j;
    spec.params.erase("name");
    for (const auto& [key, value] : spec.params.items()) {
        (void)value;
        // Secrets go through the environment, never inline.
        if (key == "api_key" || key == "token" || key == "secret") {
            throw ConfigError("backend '" + slot + "' inlines a credential ('" + key +
                              "'); use '" + key + "_env' instead");
        }
    }
    return spec;
}

}  // namespace

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    RunConfig config;
    config.config_path = std::filesystem::absolute(path);
    config.checksum = file_checksum(path.string());

    try {
        if (!j.contains("seed")) {
            throw ConfigError("config must set an explicit seed");
        }
        config.seed = j.at("seed").get<std::uint64_t>();

        if (j.contains("taxonomy")) {
            config.taxonomy = CategoryTaxonomy(j.at("taxonomy").get<std::vector<std::string>>());
        } else if (j.contains("taxonomy_path")) {
            const auto tax_path = config.resolve(j.at("taxonomy_path").get<std::string>());
            std::ifstream tin(tax_path);
            if (!tin) {
                throw ConfigError("cannot open taxonomy file: " + tax_path.string());
            }
            std::vector<std::string> names;
            std::string line;
            while (std::getline(tin, line)) {
                if (!line.empty()) names.push_back(line);
            }
            config.taxonomy = CategoryTaxonomy(std::move(names));
        } else {
            throw ConfigError("config must set 'taxonomy' or 'taxonomy_path'");
        }
        if (config.taxonomy.empty()) {
            throw ConfigError("taxonomy must be non-empty");
        }

        config.template_dir = config.resolve(j.value("template_dir", std::string("templates")));
        if (!std::filesystem::is_directory(config.template_dir)) {
            throw ConfigError("template_dir does not exist: " + config.template_dir.string());
        }

        const json backends = j.value("backends", json::object());
        config.vlm = parse_backend_spec(backends.value("vlm", json{{"name", "mock-vlm"}}), "vlm");
        config.detector = parse_backend_spec(
            backends.value("detector", json{{"name", "mock-detector"}}), "detector");
        config.generator = parse_backend_spec(
            backends.value("generator", json{{"name", "mock-generator"}}), "generator");
        config.embedder = parse_backend_spec(
            backends.value("embedder", json{{"name", "mock-embedder"}}), "embedder");
        const json pool = j.value("vlm_pool", json::object());
        for (const auto& [name, spec] : pool.items()) {
            config.vlm_pool[name] = parse_backend_spec(spec, "vlm_pool." + name);
        }

        const json thresholds = j.value("thresholds", json::object());
        config.collision.oob_pixels = thresholds.value("tau_oob", 0.0);
        config.collision.overlap_ratio = thresholds.value("tau_overlap", 0.25);
        config.collision.occlusion_ratio = thresholds.value("tau_occl", 0.10);
        config.matting.white_threshold = thresholds.value("matting_threshold", 245);
        config.matting.feather_radius = thresholds.value("matting_feather", 2);
        config.seamless.epsilon = thresholds.value("solver_epsilon", 1e-4);
        config.seamless.max_sweeps = thresholds.value("solver_max_sweeps", 10000);

        const json generation = j.value("generation", json::object());
        config.generation_size = generation.value("size", 512);
        config.opacity = generation.value("opacity", 1.0);

        config.blend_mode = blend_mode_from_string(j.value("blend_mode", std::string("alpha")));
        config.prompting =
            prompting_strategy_from_string(j.value("prompting", std::string("two-stage")));
        config.box_source = box_source_from_string(j.value("box_source", std::string("gt")));
        const std::string logo_source = j.value("logo_source", std::string("prompt"));
        if (logo_source == "prompt") {
            config.logo_source = LogoSource::prompt;
        } else if (logo_source == "asset") {
            config.logo_source = LogoSource::asset;
        } else {
            throw ConfigError("unknown logo_source: " + logo_source);
        }
        config.samples_per_image = j.value("samples_per_image", 3);
        if (config.samples_per_image < 1) {
            throw ConfigError("samples_per_image must be >= 1");
        }

        const json timeouts = j.value("timeouts", json::object());
        config.retries = timeouts.value("retries", 2);
        config.timeout_ms = timeouts.value("per_call_ms", 30000);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("bad config: ") + e.what());
    }
    return config;
}

}  // namespace adpipe
