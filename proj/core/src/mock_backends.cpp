#include "adpipe/mock_backends.hpp"

#include <algorithm>
#include <cmath>

#include "adpipe/hash.hpp"
#include "adpipe/image_io.hpp"

namespace adpipe {

bool glob_match(const std::string& pattern, const std::string& text) {
    // Iterative * matcher with backtracking.
    std::size_t p = 0, t = 0;
    std::size_t star = std::string::npos, mark = 0;
    while (t < text.size()) {
        if (p < pattern.size() && (pattern[p] == text[t])) {
            ++p;
            ++t;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = t;
        } else if (star != std::string::npos) {
            p = star + 1;
            t = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

namespace {

std::string strip_wildcards(const std::string& pattern) {
    std::string out;
    for (char c : pattern) {
        if (c != '*') out.push_back(c);
    }
    return out;
}

bool conditions_can_coapply(const VlmScriptEntry& a, const VlmScriptEntry& b) {
    if (!a.when_dominant || !b.when_dominant) return true;
    return a.when_dominant->packed() == b.when_dominant->packed();
}

}  // namespace

MockVlm::MockVlm(std::vector<VlmScriptEntry> script, std::string id)
    : script_(std::move(script)), id_(std::move(id)) {
    // Reject scripts where one pattern subsumes another's literal core while
    // their image conditions can hold at once.
    for (std::size_t i = 0; i < script_.size(); ++i) {
        for (std::size_t j = 0; j < script_.size(); ++j) {
            if (i == j || !conditions_can_coapply(script_[i], script_[j])) continue;
            if (glob_match(script_[i].pattern, strip_wildcards(script_[j].pattern))) {
                throw AmbiguousScript("overlapping script patterns: '" + script_[i].pattern +
                                      "' and '" + script_[j].pattern + "'");
            }
        }
    }
}

std::string MockVlm::answer(const SceneImage& image, const std::string& prompt) {
    calls_.fetch_add(1);
    const Rgb dominant = dominant_color(image);
    const VlmScriptEntry* hit = nullptr;
    for (const auto& entry : script_) {
        if (!glob_match(entry.pattern, prompt)) continue;
        if (entry.when_dominant && entry.when_dominant->packed() != dominant.packed()) continue;
        if (hit != nullptr) {
            throw AmbiguousScript("prompt matched by multiple script entries: " + prompt);
        }
        hit = &entry;
    }
    if (hit == nullptr) {
        throw UnscriptedPrompt(prompt);
    }
    return hit->response;
}

BackendDescriptor MockVlm::descriptor() const { return {id_, true, 0}; }

MockDetector::MockDetector(MockDetectorConfig config, std::string id)
    : config_(std::move(config)), id_(std::move(id)) {}

std::pair<PlacementBox, double> MockDetector::predict_box(const SceneImage& image,
                                                          const std::string& category) {
    calls_.fetch_add(1);
    image.validate();
    auto it = config_.category_boxes.find(category);
    const auto& rel = it != config_.category_boxes.end() ? it->second : config_.default_box;
    PlacementBox box{rel[0] * image.width, rel[1] * image.height, rel[2] * image.width,
                     rel[3] * image.height};
    return {box, config_.predict_confidence};
}

std::vector<DetectionCandidate> MockDetector::detect_candidates(const SceneImage& image) {
    calls_.fetch_add(1);
    image.validate();
    const std::uint32_t background = dominant_color(image).packed();

    struct Extent {
        int min_x, min_y, max_x, max_y;
        std::size_t count = 0;
    };
    std::map<std::uint32_t, Extent> extents;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const std::uint32_t c = image.at(x, y).packed();
            if (c == background) continue;
            auto [it, fresh] = extents.try_emplace(c, Extent{x, y, x, y, 0});
            Extent& e = it->second;
            e.min_x = std::min(e.min_x, x);
            e.min_y = std::min(e.min_y, y);
            e.max_x = std::max(e.max_x, x);
            e.max_y = std::max(e.max_y, y);
            e.count += 1;
        }
    }

    std::vector<DetectionCandidate> candidates;
    for (const auto& [color, e] : extents) {
        if (e.count < static_cast<std::size_t>(config_.min_region_area)) continue;
        DetectionCandidate cand;
        cand.box = PlacementBox{double(e.min_x), double(e.min_y), double(e.max_x + 1),
                                double(e.max_y + 1)};
        auto it = config_.regions.find(color);
        if (it != config_.regions.end()) {
            cand.label = it->second.label;
            cand.confidence = it->second.confidence;
        } else {
            cand.label = "object";
            cand.confidence = config_.default_region_confidence;
        }
        if (config_.emit_masks) {
            BinaryMask mask = BinaryMask::filled(image.width, image.height, false);
            for (int y = e.min_y; y <= e.max_y; ++y) {
                for (int x = e.min_x; x <= e.max_x; ++x) {
                    if (image.at(x, y).packed() == color) mask.set(x, y, true);
                }
            }
            cand.mask = std::move(mask);
        }
        candidates.push_back(std::move(cand));
    }
    sort_candidates(candidates);
    return candidates;
}

BackendDescriptor MockDetector::descriptor() const { return {id_, true, 0}; }

MockGenerator::MockGenerator(double disc_radius_fraction, std::string id)
    : disc_radius_fraction_(disc_radius_fraction), id_(std::move(id)) {}

Rgb MockGenerator::disc_color(const std::string& prompt) {
    const std::uint64_t h = fnv1a64(prompt);
    // Scale each channel into [0, 200) so the object never collides with the
    // pure-white background the matting rule keys on.
    auto channel = [&](int shift) {
        return static_cast<std::uint8_t>(((h >> shift) & 0xff) * 200 / 256);
    };
    return {channel(0), channel(8), channel(16)};
}

SceneImage MockGenerator::generate(const std::string& prompt, const std::string& negative_prompt,
                                   std::uint64_t seed, int size) {
    (void)negative_prompt;
    (void)seed;  // content is a pure function of the prompt
    calls_.fetch_add(1);
    if (size < 1) {
        throw InvalidArgument("generation size must be >= 1");
    }
    SceneImage img = SceneImage::create(size, size, Rgb{255, 255, 255});
    const Rgb color = disc_color(prompt);
    const double c = size / 2.0;
    const double r = size * disc_radius_fraction_;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            const double dx = x + 0.5 - c;
            const double dy = y + 0.5 - c;
            if (dx * dx + dy * dy <= r * r) {
                img.set(x, y, color);
            }
        }
    }
    return img;
}

BackendDescriptor MockGenerator::descriptor() const { return {id_, true, 0}; }

MockEmbedder::MockEmbedder(std::vector<EmbedderAffinity> affinities, int dim, std::string id)
    : affinities_(std::move(affinities)), dim_(dim), id_(std::move(id)) {
    if (dim_ < 2) {
        throw InvalidArgument("embedder dimension must be >= 2");
    }
}

std::vector<double> MockEmbedder::vector_for_key(std::uint64_t key) const {
    std::uint64_t state = key;
    std::vector<double> v(static_cast<std::size_t>(dim_));
    for (double& x : v) {
        const std::uint64_t bits = splitmix64(state);
        x = (double(bits >> 11) / double(1ULL << 53)) * 2.0 - 1.0;
    }
    normalize_unit(v);
    return v;
}

std::vector<double> MockEmbedder::embed_image(const SceneImage& image) {
    calls_.fetch_add(1);
    const Rgb dom = dominant_color(image);
    return vector_for_key(fnv1a64("color:" + rgb_to_hex(dom)));
}

std::vector<double> MockEmbedder::embed_text(const std::string& text) {
    calls_.fetch_add(1);
    for (const auto& aff : affinities_) {
        if (glob_match(aff.pattern, text)) {
            return vector_for_key(fnv1a64("color:" + rgb_to_hex(aff.color)));
        }
    }
    return vector_for_key(fnv1a64("text:" + to_lower(text)));
}

BackendDescriptor MockEmbedder::descriptor() const { return {id_, true, 0}; }

}  // namespace adpipe
