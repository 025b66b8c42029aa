#include "adpipe/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace adpipe {

namespace {

// Skips PPM whitespace and '#' comments, then reads one ASCII token.
std::string next_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {
            }
            continue;
        }
        if (!std::isspace(c)) {
            tok.push_back(static_cast<char>(c));
            break;
        }
    }
    while ((c = in.get()) != EOF && !std::isspace(c)) {
        tok.push_back(static_cast<char>(c));
    }
    return tok;
}

}  // namespace

SceneImage load_ppm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw MissingImage(path.string());
    }
    if (next_token(in) != "P6") {
        throw InvalidArgument("not a P6 PPM file: " + path.string());
    }
    int width = 0, height = 0, maxval = 0;
    try {
        width = std::stoi(next_token(in));
        height = std::stoi(next_token(in));
        maxval = std::stoi(next_token(in));
    } catch (const std::exception&) {
        throw InvalidArgument("bad PPM header: " + path.string());
    }
    if (width < 1 || height < 1 || maxval != 255) {
        throw InvalidArgument("unsupported PPM geometry (need maxval 255): " + path.string());
    }
    SceneImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(static_cast<std::size_t>(width) * height * 3);
    in.read(reinterpret_cast<char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
    if (in.gcount() != static_cast<std::streamsize>(img.pixels.size())) {
        throw InvalidArgument("truncated PPM pixel data: " + path.string());
    }
    return img;
}

void save_ppm(const SceneImage& image, const std::filesystem::path& path) {
    image.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write image: " + path.string());
    }
    out << "P6\n" << image.width << " " << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.pixels.data()),
              static_cast<std::streamsize>(image.pixels.size()));
}

SceneImage draw_box_outline(const SceneImage& image, const PlacementBox& box, Rgb color,
                            int stroke) {
    box.validate();
    SceneImage out = image;
    const int x0 = static_cast<int>(std::lround(box.x_min));
    const int y0 = static_cast<int>(std::lround(box.y_min));
    const int x1 = static_cast<int>(std::lround(box.x_max));
    const int y1 = static_cast<int>(std::lround(box.y_max));
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            const bool on_edge = (x - x0 < stroke) || (x1 - 1 - x < stroke) ||
                                 (y - y0 < stroke) || (y1 - 1 - y < stroke);
            if (on_edge && out.in_bounds(x, y)) {
                out.set(x, y, color);
            }
        }
    }
    return out;
}

SceneImage crop(const SceneImage& image, const PlacementBox& box) {
    box.validate();
    const int x0 = std::max(0, static_cast<int>(std::floor(box.x_min)));
    const int y0 = std::max(0, static_cast<int>(std::floor(box.y_min)));
    const int x1 = std::min(image.width, static_cast<int>(std::ceil(box.x_max)));
    const int y1 = std::min(image.height, static_cast<int>(std::ceil(box.y_max)));
    if (x0 >= x1 || y0 >= y1) {
        throw NoOverlap("crop box does not intersect the image");
    }
    SceneImage out = SceneImage::create(x1 - x0, y1 - y0);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            out.set(x - x0, y - y0, image.at(x, y));
        }
    }
    return out;
}

Rgb dominant_color(const SceneImage& image) {
    image.validate();
    std::map<std::uint32_t, std::size_t> counts;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            counts[image.at(x, y).packed()] += 1;
        }
    }
    std::uint32_t best = 0;
    std::size_t best_count = 0;
    for (const auto& [packed, count] : counts) {
        if (count > best_count) {  // map order makes the tie-break "smallest packed wins"
            best = packed;
            best_count = count;
        }
    }
    return rgb_from_packed(best);
}

std::vector<std::pair<int, int>> pixel_diff(const SceneImage& a, const SceneImage& b) {
    if (a.width != b.width || a.height != b.height) {
        throw InvalidArgument("pixel_diff requires identical dimensions");
    }
    std::vector<std::pair<int, int>> diff;
    for (int y = 0; y < a.height; ++y) {
        for (int x = 0; x < a.width; ++x) {
            if (!(a.at(x, y) == b.at(x, y))) {
                diff.emplace_back(x, y);
            }
        }
    }
    return diff;
}

}  // namespace adpipe
