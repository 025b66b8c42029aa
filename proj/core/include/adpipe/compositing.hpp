#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "adpipe/backends.hpp"
#include "adpipe/prompts.hpp"
#include "adpipe/suggestion.hpp"
#include "adpipe/types.hpp"

namespace adpipe {

/// Everything the generator backend needs for one object synthesis.
struct GenerationRequest {
    std::string prompt;
    std::string negative_prompt;
    std::uint64_t seed = 0;
    int size = 512;
};

/// Generated object separated from its white background: RGB plus a [0,1]
/// matte per pixel.
struct CutoutObject {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;   // width * height * 3
    std::vector<double> alpha;       // width * height

    double alpha_at(int x, int y) const { return alpha[static_cast<std::size_t>(y) * width + x]; }
    Rgb rgb_at(int x, int y) const {
        std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        return {rgb[i], rgb[i + 1], rgb[i + 2]};
    }
};

struct MattingParams {
    int white_threshold = 245;  // min-channel at or above this is background
    int feather_radius = 2;     // box-blur radius applied to the matte
};

struct SeamlessParams {
    double epsilon = 1e-4;   // stop when mean absolute update per sweep drops below
    int max_sweeps = 10000;  // NonConvergence past this
};

enum class BlendMode { alpha, seamless };

std::string to_string(BlendMode m);
BlendMode blend_mode_from_string(const std::string& s);

/// Interpolates the generation template with the object phrase and attaches
/// the negative prompt. Throws EmptyObjectPhrase.
GenerationRequest build_generation_request(const std::string& object_phrase, std::uint64_t seed,
                                           const PromptLibrary& prompts, int size = 512);

/// Extracts the object from a white-background generation: alpha 0 where the
/// minimum channel is at or above the threshold, 1 elsewhere, then a box
/// blur of the given radius over the matte only. Throws AllBackground when
/// no foreground pixel survives the threshold.
CutoutObject matte_from_white(const SceneImage& image, const MattingParams& params = {});

/// Bilinear resample of rgb and matte to the box's rounded pixel size. The
/// box dictates both output dimensions; aspect ratio is not preserved.
CutoutObject resize_to_box(const CutoutObject& cutout, const PlacementBox& box);

/// Per-pixel blend out = m*fg + (1-m)*bg with m = alpha * opacity, rounded
/// half-up at the write. The cutout's top-left lands at the box origin;
/// off-image parts are cropped; pixels outside the box are untouched.
SceneImage alpha_composite(const SceneImage& scene, const CutoutObject& cutout,
                           const PlacementBox& box, double opacity = 1.0);

/// Gradient-domain blend: Gauss-Seidel solve of the discrete Poisson system
/// on the box interior, guidance gradients mixed between cutout and scene by
/// the matte, boundary pinned to the scene. The box must sit strictly inside
/// the image (>= 1 px margin). Throws NonConvergence at the sweep cap.
SceneImage seamless_clone(const SceneImage& scene, const CutoutObject& cutout,
                          const PlacementBox& box, const SeamlessParams& params = {});

/// The solved field behind seamless_clone, in region coordinates (cutout
/// width x height, one plane per channel), before byte quantization.
struct SeamlessField {
    int width = 0;
    int height = 0;
    std::array<std::vector<double>, 3> planes;
};

SeamlessField seamless_clone_field(const SceneImage& scene, const CutoutObject& cutout,
                                   const PlacementBox& box, const SeamlessParams& params = {});

/// Per-sweep mean absolute update of the last seamless_clone solve on this
/// thread, for convergence diagnostics.
const std::vector<double>& last_seamless_residuals();

struct InsertParams {
    BlendMode mode = BlendMode::alpha;
    double opacity = 1.0;
    int generation_size = 512;
    std::uint64_t seed = 0;
    MattingParams matting;
    SeamlessParams seamless;
};

/// Composite plus the per-stage images of the insertion pipeline, keyed by
/// their dump filenames (00_source, 01_object, 02_box, 03_composite).
struct CompositeOutput {
    SceneImage image;
    std::map<std::string, SceneImage> stage_artifacts;
    GenerationRequest request;
};

/// Full insertion tail: generate the suggested object, matte it, resize it
/// to the box and blend. Stage errors propagate tagged with stage index
/// (3 = generation, 4 = compositing).
CompositeOutput insert_object(const SceneImage& scene, const SuggestionResult& suggestion,
                              const PlacementBox& box, GeneratorBackend& generator,
                              const PromptLibrary& prompts, const InsertParams& params = {});

}  // namespace adpipe
