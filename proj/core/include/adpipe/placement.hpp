#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "adpipe/backends.hpp"
#include "adpipe/prompts.hpp"
#include "adpipe/types.hpp"

namespace adpipe {

enum class CollisionFlag {
    overlaps_object,
    occludes_important,
    out_of_bounds,
};

std::string to_string(CollisionFlag f);

/// Spatial-quality verdict for one predicted box.
struct PlacementAssessment {
    double iou = 0.0;
    double context_score = 0.0;
    std::set<CollisionFlag> collision_flags;

    /// 1 when any flag is raised; what dataset_collision_rate averages.
    int collision_score_contrib() const { return collision_flags.empty() ? 0 : 1; }
};

/// Thresholds of the collision scorer, all config-overridable.
struct CollisionThresholds {
    double oob_pixels = 0.0;       // slack before a box counts as out of bounds
    double overlap_ratio = 0.25;   // (box ∩ mask) / box area
    double occlusion_ratio = 0.10; // same ratio against "important"-tagged masks
};

/// Intersection-over-union of two boxes by area. Symmetric, in [0,1], exact
/// for integer coordinates (boxes are half-open, matching pixel counting).
double iou(const PlacementBox& a, const PlacementBox& b);

double mean_iou(const std::vector<std::pair<PlacementBox, PlacementBox>>& pairs);

/// Mean IoU per category; categories with no examples are omitted.
std::map<std::string, double> per_category_iou(
    const std::vector<std::tuple<std::string, PlacementBox, PlacementBox>>& labeled_pairs);

/// Flags a box against image bounds and the scene's object masks. Without
/// masks only the boundary check applies.
std::set<CollisionFlag> collision_score(const PlacementBox& box, const SceneImage& image,
                                        const CollisionThresholds& thresholds = {});

/// Fraction of assessments with at least one collision flag.
double dataset_collision_rate(const std::vector<PlacementAssessment>& assessments);

/// VLM-rated appropriateness of placing `category` at `box`, in [0,1]. The
/// box is rendered into the image as the blue ROI before asking.
double contextual_plausibility(const SceneImage& image, const PlacementBox& box,
                               const std::string& category, VlmBackend& vlm,
                               const PromptLibrary& prompts);

/// Category-conditioned box regression via the detector backend. The raw box
/// is returned unclamped so collision scoring can see out-of-bounds
/// predictions. Throws DetectorFailure when the backend emits an invalid box
/// or confidence.
std::pair<PlacementBox, double> predict_placement(const SceneImage& image,
                                                  const std::string& category,
                                                  DetectorBackend& detector,
                                                  const CategoryTaxonomy& taxonomy);

/// IoU of two binary masks (bit-count intersection over union).
double mask_iou(const BinaryMask& a, const BinaryMask& b);

}  // namespace adpipe
