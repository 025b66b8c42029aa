#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adpipe/errors.hpp"

namespace adpipe {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    bool operator==(const Rgb&) const = default;
    std::uint32_t packed() const {
        return (std::uint32_t(r) << 16) | (std::uint32_t(g) << 8) | std::uint32_t(b);
    }
};

Rgb rgb_from_packed(std::uint32_t packed);
std::string rgb_to_hex(Rgb c);          // "#rrggbb"
Rgb rgb_from_hex(const std::string& s); // throws InvalidArgument on bad input

/// Axis-aligned box in absolute pixel coordinates, half-open on both axes:
/// pixel (i, j) belongs to the box iff x_min <= i < x_max and y_min <= j < y_max.
/// Coordinates may lie outside the image; the collision scorer flags that case.
struct PlacementBox {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
    double area() const { return width() * height(); }

    bool is_valid() const { return x_min < x_max && y_min < y_max; }
    void validate() const {
        if (!is_valid()) {
            throw InvalidArgument("invalid box: zero or negative extent");
        }
    }

    bool operator==(const PlacementBox&) const = default;
};

/// Row-major boolean raster. bits[y * width + x] is 1 for foreground.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    static BinaryMask filled(int width, int height, bool value = false);

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool value) {
        bits[static_cast<std::size_t>(y) * width + x] = value ? 1 : 0;
    }
    std::size_t count() const;

    bool is_valid() const {
        return width > 0 && height > 0 &&
               bits.size() == static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }
    void validate() const {
        if (!is_valid()) {
            throw InvalidArgument("invalid mask: bit count must equal width*height");
        }
    }

    bool operator==(const BinaryMask&) const = default;
};

/// A mask attached to a scene, with free-form tags ("important" marks regions
/// the collision scorer must not see occluded).
struct ObjectMask {
    BinaryMask mask;
    std::vector<std::string> tags;

    bool has_tag(const std::string& tag) const;
    bool important() const { return has_tag("important"); }
};

/// Decoded raster, row-major RGB8. Immutable by convention once a pipeline
/// stage has handed it on; stages return modified copies.
struct SceneImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // width * height * 3 bytes
    std::vector<ObjectMask> object_masks;

    static SceneImage create(int width, int height, Rgb fill = {255, 255, 255});

    Rgb at(int x, int y) const {
        std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        return {pixels[i], pixels[i + 1], pixels[i + 2]};
    }
    void set(int x, int y, Rgb c) {
        std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
        pixels[i] = c.r;
        pixels[i + 1] = c.g;
        pixels[i + 2] = c.b;
    }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }

    bool is_valid() const;
    void validate() const;

    bool same_pixels(const SceneImage& other) const {
        return width == other.width && height == other.height && pixels == other.pixels;
    }
};

/// Ordered, duplicate-free category label space. Single source of truth for
/// prompt interpolation and the metric label space.
class CategoryTaxonomy {
public:
    CategoryTaxonomy() = default;
    explicit CategoryTaxonomy(std::vector<std::string> categories);

    const std::vector<std::string>& categories() const { return categories_; }
    bool empty() const { return categories_.empty(); }
    std::size_t size() const { return categories_.size(); }

    bool contains(const std::string& name) const;

    /// Case-insensitive exact match, then singular/plural normalization.
    /// Returns the taxonomy spelling, or nullopt. No edit-distance guessing.
    std::optional<std::string> match(const std::string& raw) const;

    /// Comma-separated list in taxonomy order, for prompt interpolation.
    std::string joined() const;

private:
    std::vector<std::string> categories_;
};

/// Sponsor registry entry. Exactly one of logo_prompt / logo_asset is used per
/// run; which one is a run-config choice.
struct SponsorSpec {
    std::string sponsor_id;
    std::string product_description;
    std::string logo_prompt;
    std::optional<std::string> logo_asset;
    std::vector<std::string> product_keywords;  // object names that map to this sponsor

    void validate() const {
        if (product_description.empty()) {
            throw InvalidArgument("sponsor " + sponsor_id + ": product_description must be non-empty");
        }
    }
};

// Case-fold helper shared by parsers and matchers (ASCII lowering).
std::string to_lower(const std::string& s);

}  // namespace adpipe
