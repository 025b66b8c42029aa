#pragma once

#include <filesystem>

#include "adpipe/types.hpp"

namespace adpipe {

/// Binary PPM (P6, maxval 255). The toolkit's lossless raster format: trivial
/// to write byte-deterministically, which the reproducibility contract needs.
SceneImage load_ppm(const std::filesystem::path& path);
void save_ppm(const SceneImage& image, const std::filesystem::path& path);

/// Draws a box outline into a copy of the image. stroke grows inward from the
/// box edge. Off-image parts of the outline are clipped.
SceneImage draw_box_outline(const SceneImage& image, const PlacementBox& box, Rgb color,
                            int stroke = 3);

/// Pure blue, 3 px: the region-of-interest convention the prompts refer to.
inline SceneImage draw_roi_box(const SceneImage& image, const PlacementBox& box) {
    return draw_box_outline(image, box, Rgb{0, 0, 255}, 3);
}

/// Crops the box region, clamped to the image. The clamped region must span
/// at least one pixel; throws NoOverlap otherwise.
SceneImage crop(const SceneImage& image, const PlacementBox& box);

/// Most frequent exact color; ties broken by smallest packed RGB value.
Rgb dominant_color(const SceneImage& image);

/// Pixel positions (x, y) at which the two images differ. Images must have
/// identical dimensions.
std::vector<std::pair<int, int>> pixel_diff(const SceneImage& a, const SceneImage& b);

}  // namespace adpipe
