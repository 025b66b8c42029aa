#include "adpipe/types.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <numeric>
#include <set>

namespace adpipe {

Rgb rgb_from_packed(std::uint32_t packed) {
    return {std::uint8_t((packed >> 16) & 0xff), std::uint8_t((packed >> 8) & 0xff),
            std::uint8_t(packed & 0xff)};
}

std::string rgb_to_hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", c.r, c.g, c.b);
    return std::string(buf);
}

Rgb rgb_from_hex(const std::string& s) {
    if (s.size() != 7 || s[0] != '#') {
        throw InvalidArgument("expected #rrggbb color, got: " + s);
    }
    auto nibble = [&](char c) -> unsigned {
        if (c >= '0' && c <= '9') return unsigned(c - '0');
        if (c >= 'a' && c <= 'f') return unsigned(c - 'a' + 10);
        if (c >= 'A' && c <= 'F') return unsigned(c - 'A' + 10);
        throw InvalidArgument("bad hex digit in color: " + s);
    };
    auto byte = [&](int i) { return std::uint8_t(nibble(s[i]) * 16 + nibble(s[i + 1])); };
    return {byte(1), byte(3), byte(5)};
}

std::string to_lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

BinaryMask BinaryMask::filled(int width, int height, bool value) {
    BinaryMask m;
    m.width = width;
    m.height = height;
    m.bits.assign(static_cast<std::size_t>(width) * height, value ? 1 : 0);
    return m;
}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count_if(bits.begin(), bits.end(),
                                                  [](std::uint8_t b) { return b != 0; }));
}

bool ObjectMask::has_tag(const std::string& tag) const {
    return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

SceneImage SceneImage::create(int width, int height, Rgb fill) {
    if (width < 1 || height < 1) {
        throw InvalidArgument("image dimensions must be >= 1");
    }
    SceneImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(static_cast<std::size_t>(width) * height * 3);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            img.set(x, y, fill);
        }
    }
    return img;
}

bool SceneImage::is_valid() const {
    if (width < 1 || height < 1) return false;
    if (pixels.size() != static_cast<std::size_t>(width) * height * 3) return false;
    for (const auto& om : object_masks) {
        if (!om.mask.is_valid() || om.mask.width != width || om.mask.height != height) {
            return false;
        }
    }
    return true;
}

void SceneImage::validate() const {
    if (width < 1 || height < 1) {
        throw InvalidArgument("image dimensions must be >= 1");
    }
    if (pixels.size() != static_cast<std::size_t>(width) * height * 3) {
        throw InvalidArgument("pixel buffer length must equal width*height*3");
    }
    for (const auto& om : object_masks) {
        om.mask.validate();
        if (om.mask.width != width || om.mask.height != height) {
            throw InvalidArgument("attached mask dimensions must match the image");
        }
    }
}

namespace {

// Singular/plural normalization: strip a trailing "es" or "s".
std::string strip_plural(const std::string& lower) {
    if (lower.size() > 2 && lower.ends_with("es")) return lower.substr(0, lower.size() - 2);
    if (lower.size() > 1 && lower.ends_with("s")) return lower.substr(0, lower.size() - 1);
    return lower;
}

}  // namespace

CategoryTaxonomy::CategoryTaxonomy(std::vector<std::string> categories)
    : categories_(std::move(categories)) {
    std::set<std::string> seen;
    for (const auto& c : categories_) {
        if (c.empty()) {
            throw InvalidArgument("taxonomy entries must be non-empty");
        }
        if (!seen.insert(to_lower(c)).second) {
            throw InvalidArgument("duplicate taxonomy entry: " + c);
        }
    }
}

bool CategoryTaxonomy::contains(const std::string& name) const {
    return std::find(categories_.begin(), categories_.end(), name) != categories_.end();
}

std::optional<std::string> CategoryTaxonomy::match(const std::string& raw) const {
    const std::string lowered = to_lower(raw);
    for (const auto& c : categories_) {
        if (to_lower(c) == lowered) return c;
    }
    const std::string stripped = strip_plural(lowered);
    for (const auto& c : categories_) {
        const std::string cl = to_lower(c);
        if (strip_plural(cl) == stripped) return c;
    }
    return std::nullopt;
}

std::string CategoryTaxonomy::joined() const {
    std::string out;
    for (std::size_t i = 0; i < categories_.size(); ++i) {
        if (i > 0) out += ", ";
        out += categories_[i];
    }
    return out;
}

}  // namespace adpipe
