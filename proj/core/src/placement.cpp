#include "adpipe/placement.hpp"

#include <algorithm>
#include <cmath>

#include "adpipe/image_io.hpp"
#include "adpipe/suggestion.hpp"

namespace adpipe {

std::string to_string(CollisionFlag f) {
    switch (f) {
        case CollisionFlag::overlaps_object: return "overlaps_object";
        case CollisionFlag::occludes_important: return "occludes_important";
        case CollisionFlag::out_of_bounds: return "out_of_bounds";
    }
    throw InvalidArgument("bad CollisionFlag value");
}

double iou(const PlacementBox& a, const PlacementBox& b) {
    a.validate();
    b.validate();
    const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return inter / uni;
}

double mean_iou(const std::vector<std::pair<PlacementBox, PlacementBox>>& pairs) {
    if (pairs.empty()) {
        throw EmptyInput("mean_iou over zero pairs");
    }
    double sum = 0.0;
    for (const auto& [pred, gt] : pairs) {
        sum += iou(pred, gt);
    }
    return sum / static_cast<double>(pairs.size());
}

std::map<std::string, double> per_category_iou(
    const std::vector<std::tuple<std::string, PlacementBox, PlacementBox>>& labeled_pairs) {
    std::map<std::string, std::pair<double, int>> acc;
    for (const auto& [category, pred, gt] : labeled_pairs) {
        auto& [sum, n] = acc[category];
        sum += iou(pred, gt);
        n += 1;
    }
    std::map<std::string, double> out;
    for (const auto& [category, sum_n] : acc) {
        out[category] = sum_n.first / sum_n.second;
    }
    return out;
}

namespace {

// Fraction of the box's area covered by set mask pixels. Pixels are counted
// by index against the half-open box.
double mask_overlap_ratio(const PlacementBox& box, const BinaryMask& mask) {
    const int x0 = std::max(0, static_cast<int>(std::ceil(box.x_min)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(box.y_min)));
    const int x1 = std::min(mask.width, static_cast<int>(std::ceil(box.x_max)));
    const int y1 = std::min(mask.height, static_cast<int>(std::ceil(box.y_max)));
    std::size_t covered = 0;
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            if (mask.at(x, y)) {
                ++covered;
            }
        }
    }
    return static_cast<double>(covered) / box.area();
}

}  // namespace

std::set<CollisionFlag> collision_score(const PlacementBox& box, const SceneImage& image,
                                        const CollisionThresholds& thresholds) {
    box.validate();
    image.validate();
    std::set<CollisionFlag> flags;
    const double t = thresholds.oob_pixels;
    if (box.x_min < -t || box.y_min < -t || box.x_max > image.width + t ||
        box.y_max > image.height + t) {
        flags.insert(CollisionFlag::out_of_bounds);
    }
    for (const auto& om : image.object_masks) {
        const double ratio = mask_overlap_ratio(box, om.mask);
        if (ratio > thresholds.overlap_ratio) {
            flags.insert(CollisionFlag::overlaps_object);
        }
        if (om.important() && ratio > thresholds.occlusion_ratio) {
            flags.insert(CollisionFlag::occludes_important);
        }
    }
    return flags;
}

double dataset_collision_rate(const std::vector<PlacementAssessment>& assessments) {
    if (assessments.empty()) {
        throw EmptyInput("collision rate over zero assessments");
    }
    int flagged = 0;
    for (const auto& a : assessments) {
        flagged += a.collision_score_contrib();
    }
    return static_cast<double>(flagged) / static_cast<double>(assessments.size());
}

double contextual_plausibility(const SceneImage& image, const PlacementBox& box,
                               const std::string& category, VlmBackend& vlm,
                               const PromptLibrary& prompts) {
    const SceneImage marked = draw_roi_box(image, box);
    const std::string response = vlm.answer(marked, prompts.plausibility_rating(category));
    return parse_rating(response);
}

std::pair<PlacementBox, double> predict_placement(const SceneImage& image,
                                                  const std::string& category,
                                                  DetectorBackend& detector,
                                                  const CategoryTaxonomy& taxonomy) {
    if (!taxonomy.contains(category)) {
        throw UnknownCategory(category);
    }
    auto [box, confidence] = detector.predict_box(image, category);
    if (!box.is_valid()) {
        throw DetectorFailure("detector returned a degenerate box for category " + category);
    }
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
        throw DetectorFailure("detector confidence outside [0,1]");
    }
    return {box, confidence};
}

double mask_iou(const BinaryMask& a, const BinaryMask& b) {
    a.validate();
    b.validate();
    if (a.width != b.width || a.height != b.height) {
        throw InvalidArgument("mask_iou requires identical dimensions");
    }
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.bits.size(); ++i) {
        const bool ba = a.bits[i] != 0;
        const bool bb = b.bits[i] != 0;
        inter += (ba && bb) ? 1 : 0;
        uni += (ba || bb) ? 1 : 0;
    }
    if (uni == 0) {
        throw InvalidArgument("mask_iou of two empty masks");
    }
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace adpipe
