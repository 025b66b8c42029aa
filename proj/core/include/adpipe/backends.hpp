#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adpipe/types.hpp"

namespace adpipe {

/// Identity and concurrency contract of a backend instance. max_concurrency
/// of 0 means "no limit"; the pipeline scheduler clamps its worker count to
/// the smallest declared limit.
struct BackendDescriptor {
    std::string id;
    bool deterministic = false;
    int max_concurrency = 0;
};

class VlmBackend {
public:
    virtual ~VlmBackend() = default;
    virtual std::string answer(const SceneImage& image, const std::string& prompt) = 0;
    virtual BackendDescriptor descriptor() const = 0;
};

struct DetectionCandidate {
    PlacementBox box;
    std::string label;
    double confidence = 0.0;
    std::optional<BinaryMask> mask;  // detectors that segment may attach one
};

class DetectorBackend {
public:
    virtual ~DetectorBackend() = default;

    /// Category-conditioned placement regression: the best box for inserting
    /// an object of `category`, with a confidence in [0,1].
    virtual std::pair<PlacementBox, double> predict_box(const SceneImage& image,
                                                        const std::string& category) = 0;

    /// All candidate object regions, sorted by descending confidence; ties
    /// broken by ascending box area, then ascending x_min.
    virtual std::vector<DetectionCandidate> detect_candidates(const SceneImage& image) = 0;

    virtual BackendDescriptor descriptor() const = 0;
};

class GeneratorBackend {
public:
    virtual ~GeneratorBackend() = default;
    virtual SceneImage generate(const std::string& prompt, const std::string& negative_prompt,
                                std::uint64_t seed, int size) = 0;
    virtual BackendDescriptor descriptor() const = 0;
};

class EmbedderBackend {
public:
    virtual ~EmbedderBackend() = default;
    virtual std::vector<double> embed_image(const SceneImage& image) = 0;
    virtual std::vector<double> embed_text(const std::string& text) = 0;
    virtual BackendDescriptor descriptor() const = 0;
};

/// All four model slots a pipeline run needs.
struct BackendSet {
    std::shared_ptr<VlmBackend> vlm;
    std::shared_ptr<DetectorBackend> detector;
    std::shared_ptr<GeneratorBackend> generator;
    std::shared_ptr<EmbedderBackend> embedder;
};

/// Dot product of two unit vectors. Throws NormViolation if either norm
/// strays from 1 by more than 1e-6, and InvalidArgument on length mismatch.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

void normalize_unit(std::vector<double>& v);

/// Applies the sorting contract of detect_candidates in place.
void sort_candidates(std::vector<DetectionCandidate>& candidates);

/// Retry policy for remote backends: transient failures (Timeout,
/// RateLimited) are retried up to `retries` additional attempts; other
/// exceptions map to ProviderError so provider-specific types never leak.
template <typename Fn>
auto call_with_retries(Fn&& fn, int retries) -> decltype(fn()) {
    for (int attempt = 0;; ++attempt) {
        try {
            return fn();
        } catch (const Timeout&) {
            if (attempt >= retries) throw;
        } catch (const RateLimited&) {
            if (attempt >= retries) throw;
        } catch (const BackendError&) {
            throw;
        } catch (const std::exception& e) {
            throw ProviderError(e.what());
        }
    }
}

}  // namespace adpipe
