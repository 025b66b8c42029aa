#pragma once

#include <map>
#include <memory>

#include "adpipe/backends.hpp"
#include "adpipe/config.hpp"
#include "adpipe/mock_backends.hpp"

namespace adpipe {

/// Instantiates a backend from its registry name. The pipeline never
/// constructs concrete backends itself, so swapping a model is purely a
/// config change. Known names: mock-vlm, mock-detector, mock-generator,
/// mock-embedder. Real-model adapters register here when added; unknown
/// names raise ConfigError.
std::shared_ptr<VlmBackend> make_vlm(const BackendSpec& spec, const RunConfig& config);
std::shared_ptr<DetectorBackend> make_detector(const BackendSpec& spec, const RunConfig& config);
std::shared_ptr<GeneratorBackend> make_generator(const BackendSpec& spec, const RunConfig& config);
std::shared_ptr<EmbedderBackend> make_embedder(const BackendSpec& spec, const RunConfig& config);

BackendSet make_backends(const RunConfig& config);

/// The named VLM instances an ablation grid selects among: the primary slot
/// (under its backend id) plus every vlm_pool entry.
std::map<std::string, std::shared_ptr<VlmBackend>> make_vlm_pool(const RunConfig& config,
                                                                 const BackendSet& backends);

/// Parses the mock VLM script format ({"entries": [{pattern, response,
/// when_dominant?}]}) from a JSON value.
std::vector<VlmScriptEntry> parse_vlm_script(const nlohmann::json& j);

}  // namespace adpipe
