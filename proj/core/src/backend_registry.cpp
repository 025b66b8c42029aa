#include "adpipe/backend_registry.hpp"

#include <fstream>

namespace adpipe {

using nlohmann::json;

std::vector<VlmScriptEntry> parse_vlm_script(const json& j) {
    std::vector<VlmScriptEntry> entries;
    for (const auto& e : j.value("entries", json::array())) {
        VlmScriptEntry entry;
        entry.pattern = e.at("pattern").get<std::string>();
        entry.response = e.at("response").get<std::string>();
        if (e.contains("when_dominant")) {
            entry.when_dominant = rgb_from_hex(e.at("when_dominant").get<std::string>());
        }
        entries.push_back(std::move(entry));
    }
    return entries;
}

namespace {

json load_script_json(const BackendSpec& spec, const RunConfig& config) {
    if (spec.params.contains("script_path")) {
        const auto path = config.resolve(spec.params.at("script_path").get<std::string>());
        std::ifstream in(path);
        if (!in) {
            throw ConfigError("cannot open mock script: " + path.string());
        }
        json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw ConfigError("mock script is not valid JSON: " + std::string(e.what()));
        }
        return j;
    }
    return spec.params;
}

[[noreturn]] void unknown_backend(const std::string& slot, const std::string& name) {
    throw ConfigError("unknown " + slot + " backend: '" + name + "'");
}

}  // namespace

std::shared_ptr<VlmBackend> make_vlm(const BackendSpec& spec, const RunConfig& config) {
    if (spec.name == "mock-vlm") {
        try {
            return std::make_shared<MockVlm>(parse_vlm_script(load_script_json(spec, config)),
                                             spec.params.value("id", std::string("mock-vlm")));
        } catch (const AmbiguousScript&) {
            throw;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("bad mock-vlm script: " + std::string(e.what()));
        }
    }
    unknown_backend("vlm", spec.name);
}

std::shared_ptr<DetectorBackend> make_detector(const BackendSpec& spec, const RunConfig& config) {
    (void)config;
    if (spec.name == "mock-detector") {
        try {
            MockDetectorConfig mc;
            const json regions = spec.params.value("regions", json::object());
            for (const auto& [hex, region] : regions.items()) {
                MockRegionSpec rs;
                rs.label = region.at("label").get<std::string>();
                rs.confidence = region.value("confidence", 0.9);
                mc.regions[rgb_from_hex(hex).packed()] = std::move(rs);
            }
            const json boxes = spec.params.value("category_boxes", json::object());
            for (const auto& [category, box] : boxes.items()) {
                mc.category_boxes[category] = box.get<std::array<double, 4>>();
            }
            if (spec.params.contains("default_box")) {
                mc.default_box = spec.params.at("default_box").get<std::array<double, 4>>();
            }
            mc.predict_confidence = spec.params.value("predict_confidence", 0.9);
            mc.default_region_confidence = spec.params.value("default_region_confidence", 0.25);
            mc.min_region_area = spec.params.value("min_region_area", 4);
            mc.emit_masks = spec.params.value("emit_masks", false);
            return std::make_shared<MockDetector>(
                std::move(mc), spec.params.value("id", std::string("mock-detector")));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("bad mock-detector params: " + std::string(e.what()));
        }
    }
    unknown_backend("detector", spec.name);
}

std::shared_ptr<GeneratorBackend> make_generator(const BackendSpec& spec, const RunConfig& config) {
    (void)config;
    if (spec.name == "mock-generator") {
        return std::make_shared<MockGenerator>(
            spec.params.value("disc_radius", 0.32),
            spec.params.value("id", std::string("mock-generator")));
    }
    unknown_backend("generator", spec.name);
}

std::shared_ptr<EmbedderBackend> make_embedder(const BackendSpec& spec, const RunConfig& config) {
    (void)config;
    if (spec.name == "mock-embedder") {
        try {
            std::vector<EmbedderAffinity> affinities;
            for (const auto& a : spec.params.value("affinities", json::array())) {
                affinities.push_back(EmbedderAffinity{
                    a.at("pattern").get<std::string>(),
                    rgb_from_hex(a.at("color").get<std::string>())});
            }
            return std::make_shared<MockEmbedder>(
                std::move(affinities), spec.params.value("dim", 64),
                spec.params.value("id", std::string("mock-embedder")));
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError("bad mock-embedder params: " + std::string(e.what()));
        }
    }
    unknown_backend("embedder", spec.name);
}

BackendSet make_backends(const RunConfig& config) {
    BackendSet set;
    set.vlm = make_vlm(config.vlm, config);
    set.detector = make_detector(config.detector, config);
    set.generator = make_generator(config.generator, config);
    set.embedder = make_embedder(config.embedder, config);
    return set;
}

std::map<std::string, std::shared_ptr<VlmBackend>> make_vlm_pool(const RunConfig& config,
                                                                 const BackendSet& backends) {
    std::map<std::string, std::shared_ptr<VlmBackend>> pool;
    pool[backends.vlm->descriptor().id] = backends.vlm;
    for (const auto& [name, spec] : config.vlm_pool) {
        auto vlm = make_vlm(spec, config);
        pool[name] = std::move(vlm);
    }
    return pool;
}

}  // namespace adpipe
