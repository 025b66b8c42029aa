#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adpipe/backends.hpp"
#include "adpipe/compositing.hpp"
#include "adpipe/prompts.hpp"
#include "adpipe/suggestion.hpp"
#include "adpipe/types.hpp"

namespace adpipe {

/// Presence verdict is tri-state: a parse failure is "undetermined", which
/// gates the pipeline like "absent" but is distinguishable in evaluation.
enum class Presence { absent, present, undetermined };

std::string to_string(Presence p);

struct SponsorDecision {
    Presence presence = Presence::absent;
    std::string coarse_location;
    std::optional<BrandedObjectFinding> finding;    // only when present
    std::optional<std::string> sponsor_id;          // matched sponsor, when present
    std::string note;                               // diagnostic detail

    bool present() const { return presence == Presence::present; }
};

struct RegionScore {
    PlacementBox box;
    std::string label;
    double detector_confidence = 0.0;
    double clip_similarity = 0.0;
    std::optional<BinaryMask> mask;  // detector-supplied segmentation, when any
};

enum class LogoSource { prompt, asset };

struct SponsorParams {
    LogoSource logo_source = LogoSource::prompt;
    BlendMode mode = BlendMode::alpha;
    double opacity = 1.0;
    std::uint64_t seed = 0;
    int generation_size = 256;
    double mask_inset_fraction = 0.10;  // of the box min-dimension, for box-derived masks
    double logo_scale = 0.60;           // of the mask bounding rectangle
    MattingParams matting;
    SeamlessParams seamless;
};

/// Asks the branded-object prompt and maps the finding onto the sponsor
/// registry via each sponsor's product keywords. A NoListedObject response
/// is a clean "absent"; other parse failures yield "undetermined".
SponsorDecision detect_sponsor_presence(const SceneImage& image,
                                        const std::vector<SponsorSpec>& sponsors, VlmBackend& vlm,
                                        const PromptLibrary& prompts);

/// Scores each detector candidate by cosine similarity between the cropped
/// region's embedding and the sponsor's product description embedding.
/// Sorted by descending similarity; ties by descending detector confidence,
/// then ascending area, then ascending x_min.
std::vector<RegionScore> score_regions(const SceneImage& image,
                                       const std::vector<DetectionCandidate>& candidates,
                                       const SponsorSpec& spec, EmbedderBackend& embedder);

/// The winning region and its placement mask: the detector's segmentation
/// when supplied, otherwise the box rasterized at full image size and shrunk
/// by the inset margin.
std::pair<PlacementBox, BinaryMask> select_region(const std::vector<RegionScore>& scores,
                                                  const SceneImage& image,
                                                  double inset_fraction = 0.10);

/// Loads the sponsor's logo asset, or generates one from its logo prompt.
SceneImage obtain_logo(const SponsorSpec& spec, GeneratorBackend& generator,
                       const PromptLibrary& prompts, const SponsorParams& params);

/// Mattes the logo, fits it to the mask's bounding rectangle (scaled,
/// centered) and blends. The matte is intersected with the region mask, so
/// pixels outside the mask are untouched. Throws EmptyMask.
SceneImage place_logo(const SceneImage& image, const BinaryMask& region_mask,
                      const PlacementBox& box, const SceneImage& logo,
                      const SponsorParams& params);

/// Convenience overload that obtains the logo itself.
SceneImage place_logo(const SceneImage& image, const BinaryMask& region_mask,
                      const PlacementBox& box, const SponsorSpec& spec,
                      GeneratorBackend& generator, const PromptLibrary& prompts,
                      const SponsorParams& params);

/// Final output of the sponsor pipeline. When no sponsor product is present
/// the image passes through unchanged and scores stay empty. On the edit
/// path stage_artifacts holds the three stage images (00_scene, 01_logo,
/// 02_final).
struct SponsorOutput {
    SceneImage image;
    SponsorDecision decision;
    std::vector<RegionScore> scores;
    std::map<std::string, SceneImage> stage_artifacts;
    std::optional<PlacementBox> selected_box;
    std::optional<BinaryMask> selected_mask;
    std::string mask_source;  // "detector" or "box", when a mask was selected
};

/// Presence check, candidate detection, similarity-based region selection,
/// logo generation and blending. Stage errors are tagged: 1 = presence,
/// 2 = detection/selection, 3 = logo generation, 4 = compositing.
SponsorOutput run_sponsor_pipeline(const SceneImage& image,
                                   const std::vector<SponsorSpec>& sponsors,
                                   const BackendSet& backends, const PromptLibrary& prompts,
                                   const SponsorParams& params = {});

}  // namespace adpipe
