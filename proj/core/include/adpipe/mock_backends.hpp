#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adpipe/backends.hpp"

namespace adpipe {

/// Glob match with `*` wildcards only.
bool glob_match(const std::string& pattern, const std::string& text);

/// One scripted exchange. `pattern` globs against the prompt; when
/// `when_dominant` is set the entry additionally requires the image's
/// dominant color to equal it, which is how fixtures make responses vary
/// per image while staying a pure function of (image, prompt).
struct VlmScriptEntry {
    std::string pattern;
    std::string response;
    std::optional<Rgb> when_dominant;
};

/// Deterministic scripted VLM. Construction rejects scripts where one
/// pattern subsumes another applicable one (AmbiguousScript); answering a
/// prompt no entry matches raises UnscriptedPrompt, and a prompt matched by
/// more than one entry raises AmbiguousScript.
class MockVlm : public VlmBackend {
public:
    explicit MockVlm(std::vector<VlmScriptEntry> script, std::string id = "mock-vlm");

    std::string answer(const SceneImage& image, const std::string& prompt) override;
    BackendDescriptor descriptor() const override;

    int call_count() const { return calls_.load(); }

private:
    std::vector<VlmScriptEntry> script_;
    std::string id_;
    std::atomic<int> calls_{0};
};

struct MockRegionSpec {
    std::string label;
    double confidence = 0.0;
};

struct MockDetectorConfig {
    // Exact colors that count as known objects when they appear as uniform
    // regions in the scene.
    std::map<std::uint32_t, MockRegionSpec> regions;
    // Per-category placement boxes, as fractions of image width/height.
    std::map<std::string, std::array<double, 4>> category_boxes;
    std::array<double, 4> default_box{0.30, 0.55, 0.70, 0.90};
    double predict_confidence = 0.9;
    double default_region_confidence = 0.25;
    int min_region_area = 4;
    bool emit_masks = false;
};

/// Detector double driven by the scene itself: every uniform non-background
/// color region becomes a candidate (background = dominant color). Placement
/// regression returns the configured per-category box. Pure per image.
class MockDetector : public DetectorBackend {
public:
    explicit MockDetector(MockDetectorConfig config, std::string id = "mock-detector");

    std::pair<PlacementBox, double> predict_box(const SceneImage& image,
                                                const std::string& category) override;
    std::vector<DetectionCandidate> detect_candidates(const SceneImage& image) override;
    BackendDescriptor descriptor() const override;

    int call_count() const { return calls_.load(); }

private:
    MockDetectorConfig config_;
    std::string id_;
    std::atomic<int> calls_{0};
};

/// Deterministic stand-in for the diffusion backend: a solid disc whose
/// color is a hash of the prompt, centered on a pure white canvas (the white
/// background mirrors the generation prompt contract).
class MockGenerator : public GeneratorBackend {
public:
    explicit MockGenerator(double disc_radius_fraction = 0.32, std::string id = "mock-generator");

    SceneImage generate(const std::string& prompt, const std::string& negative_prompt,
                        std::uint64_t seed, int size) override;
    BackendDescriptor descriptor() const override;

    int call_count() const { return calls_.load(); }

    static Rgb disc_color(const std::string& prompt);

private:
    double disc_radius_fraction_;
    std::string id_;
    std::atomic<int> calls_{0};
};

struct EmbedderAffinity {
    std::string pattern;  // glob over the text
    Rgb color;            // images dominated by this color embed to the same point
};

/// Hash-projection embedder. Text embeds to a seeded-hash unit vector;
/// images embed to the vector of their dominant color. An affinity script
/// pins chosen text patterns to chosen colors so region-scoring tests can
/// stage "this description matches that region" without any model.
class MockEmbedder : public EmbedderBackend {
public:
    explicit MockEmbedder(std::vector<EmbedderAffinity> affinities = {}, int dim = 64,
                          std::string id = "mock-embedder");

    std::vector<double> embed_image(const SceneImage& image) override;
    std::vector<double> embed_text(const std::string& text) override;
    BackendDescriptor descriptor() const override;

    int call_count() const { return calls_.load(); }

private:
    std::vector<double> vector_for_key(std::uint64_t key) const;

    std::vector<EmbedderAffinity> affinities_;
    int dim_;
    std::string id_;
    std::atomic<int> calls_{0};
};

}  // namespace adpipe
