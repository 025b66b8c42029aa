#include "adpipe/compositing.hpp"

#include <algorithm>
#include <cmath>

#include "adpipe/image_io.hpp"

namespace adpipe {

namespace {

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::clamp(round_half_up(v), 0, 255));
}

thread_local std::vector<double> g_last_residuals;

}  // namespace

std::string to_string(BlendMode m) { return m == BlendMode::alpha ? "alpha" : "seamless"; }

BlendMode blend_mode_from_string(const std::string& s) {
    if (s == "alpha") return BlendMode::alpha;
    if (s == "seamless") return BlendMode::seamless;
    throw ConfigError("unknown blend mode: " + s);
}

GenerationRequest build_generation_request(const std::string& object_phrase, std::uint64_t seed,
                                           const PromptLibrary& prompts, int size) {
    if (object_phrase.empty()) {
        throw EmptyObjectPhrase("cannot build a generation request for an empty object phrase");
    }
    GenerationRequest request;
    request.prompt = prompts.generation(object_phrase);
    request.negative_prompt = prompts.generation_negative();
    request.seed = seed;
    request.size = size;
    return request;
}

CutoutObject matte_from_white(const SceneImage& image, const MattingParams& params) {
    image.validate();
    if (params.white_threshold <= 0 || params.white_threshold >= 256) {
        throw InvalidArgument("white threshold must be in (0,255]");
    }
    if (params.feather_radius < 0) {
        throw InvalidArgument("feather radius must be >= 0");
    }

    CutoutObject cutout;
    cutout.width = image.width;
    cutout.height = image.height;
    cutout.rgb = image.pixels;
    cutout.alpha.assign(static_cast<std::size_t>(image.width) * image.height, 0.0);

    bool any_foreground = false;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const Rgb c = image.at(x, y);
            const int min_channel = std::min({int(c.r), int(c.g), int(c.b)});
            const bool foreground = min_channel < params.white_threshold;
            cutout.alpha[static_cast<std::size_t>(y) * image.width + x] = foreground ? 1.0 : 0.0;
            any_foreground = any_foreground || foreground;
        }
    }
    if (!any_foreground) {
        throw AllBackground("matting found no foreground pixel; generation broke the contract");
    }

    // Feather: box blur over the matte only, replicated borders.
    const int r = params.feather_radius;
    if (r > 0) {
        std::vector<double> blurred(cutout.alpha.size());
        const double norm = 1.0 / ((2 * r + 1) * (2 * r + 1));
        for (int y = 0; y < image.height; ++y) {
            for (int x = 0; x < image.width; ++x) {
                double sum = 0.0;
                for (int dy = -r; dy <= r; ++dy) {
                    for (int dx = -r; dx <= r; ++dx) {
                        const int sx = std::clamp(x + dx, 0, image.width - 1);
                        const int sy = std::clamp(y + dy, 0, image.height - 1);
                        sum += cutout.alpha[static_cast<std::size_t>(sy) * image.width + sx];
                    }
                }
                blurred[static_cast<std::size_t>(y) * image.width + x] = sum * norm;
            }
        }
        cutout.alpha = std::move(blurred);
    }
    return cutout;
}

namespace {

double sample_bilinear(const std::vector<double>& data, int width, int height, double x, double y) {
    const double cx = std::clamp(x, 0.0, double(width - 1));
    const double cy = std::clamp(y, 0.0, double(height - 1));
    const int x0 = static_cast<int>(std::floor(cx));
    const int y0 = static_cast<int>(std::floor(cy));
    const int x1 = std::min(x0 + 1, width - 1);
    const int y1 = std::min(y0 + 1, height - 1);
    const double fx = cx - x0;
    const double fy = cy - y0;
    const auto at = [&](int xx, int yy) { return data[static_cast<std::size_t>(yy) * width + xx]; };
    return at(x0, y0) * (1 - fx) * (1 - fy) + at(x1, y0) * fx * (1 - fy) +
           at(x0, y1) * (1 - fx) * fy + at(x1, y1) * fx * fy;
}

}  // namespace

CutoutObject resize_to_box(const CutoutObject& cutout, const PlacementBox& box) {
    box.validate();
    const int out_w = round_half_up(box.width());
    const int out_h = round_half_up(box.height());
    if (out_w < 1 || out_h < 1) {
        throw DegenerateBox("box rounds to a zero-size raster");
    }

    // Split channels into double planes once, then sample.
    const std::size_t n = static_cast<std::size_t>(cutout.width) * cutout.height;
    std::vector<double> planes[3];
    for (int c = 0; c < 3; ++c) planes[c].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        planes[0][i] = cutout.rgb[i * 3 + 0];
        planes[1][i] = cutout.rgb[i * 3 + 1];
        planes[2][i] = cutout.rgb[i * 3 + 2];
    }

    CutoutObject out;
    out.width = out_w;
    out.height = out_h;
    out.rgb.resize(static_cast<std::size_t>(out_w) * out_h * 3);
    out.alpha.resize(static_cast<std::size_t>(out_w) * out_h);
    const double sx = double(cutout.width) / out_w;
    const double sy = double(cutout.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        for (int x = 0; x < out_w; ++x) {
            const double src_x = (x + 0.5) * sx - 0.5;
            const double src_y = (y + 0.5) * sy - 0.5;
            const std::size_t i = static_cast<std::size_t>(y) * out_w + x;
            for (int c = 0; c < 3; ++c) {
                out.rgb[i * 3 + c] =
                    to_byte(sample_bilinear(planes[c], cutout.width, cutout.height, src_x, src_y));
            }
            out.alpha[i] = sample_bilinear(cutout.alpha, cutout.width, cutout.height, src_x, src_y);
        }
    }
    return out;
}

SceneImage alpha_composite(const SceneImage& scene, const CutoutObject& cutout,
                           const PlacementBox& box, double opacity) {
    scene.validate();
    box.validate();
    if (opacity < 0.0 || opacity > 1.0) {
        throw InvalidArgument("opacity must be in [0,1]");
    }
    const int ox = round_half_up(box.x_min);
    const int oy = round_half_up(box.y_min);
    SceneImage out = scene;
    bool any = false;
    for (int y = 0; y < cutout.height; ++y) {
        for (int x = 0; x < cutout.width; ++x) {
            const int dx = ox + x;
            const int dy = oy + y;
            if (!out.in_bounds(dx, dy)) continue;
            any = true;
            const double m = cutout.alpha_at(x, y) * opacity;
            const Rgb fg = cutout.rgb_at(x, y);
            const Rgb bg = scene.at(dx, dy);
            out.set(dx, dy,
                    Rgb{to_byte(m * fg.r + (1.0 - m) * bg.r), to_byte(m * fg.g + (1.0 - m) * bg.g),
                        to_byte(m * fg.b + (1.0 - m) * bg.b)});
        }
    }
    if (!any) {
        throw NoOverlap("composite box lies fully outside the scene");
    }
    return out;
}

const std::vector<double>& last_seamless_residuals() { return g_last_residuals; }

SeamlessField seamless_clone_field(const SceneImage& scene, const CutoutObject& cutout,
                                   const PlacementBox& box, const SeamlessParams& params) {
    scene.validate();
    box.validate();
    const int ox = round_half_up(box.x_min);
    const int oy = round_half_up(box.y_min);
    const int w = cutout.width;
    const int h = cutout.height;
    if (ox < 1 || oy < 1 || ox + w > scene.width - 1 || oy + h > scene.height - 1) {
        throw InvalidArgument("seamless clone requires the box strictly inside the image");
    }
    if (w < 3 || h < 3) {
        throw DegenerateBox("seamless clone needs a box of at least 3x3 pixels");
    }

    // Region pixels in scene coordinates: [ox, ox+w) x [oy, oy+h). Border
    // pixels of the region are Dirichlet-pinned to the scene; the interior
    // is solved. Guidance field: cutout gradients where the matte is opaque,
    // blended toward scene gradients as it fades.
    auto cut_at = [&](int rx, int ry, int c) -> double {
        const std::size_t i = (static_cast<std::size_t>(ry) * w + rx) * 3 + c;
        return cutout.rgb[i];
    };
    auto scene_at = [&](int rx, int ry, int c) -> double {
        const Rgb p = scene.at(ox + rx, oy + ry);
        return c == 0 ? p.r : (c == 1 ? p.g : p.b);
    };
    auto matte_at = [&](int rx, int ry) { return cutout.alpha_at(rx, ry); };

    // Guidance difference along the edge (rx,ry)->(nx,ny).
    auto guidance = [&](int rx, int ry, int nx, int ny, int c) -> double {
        const double m = 0.5 * (matte_at(rx, ry) + matte_at(nx, ny));
        const double grad_cut = cut_at(rx, ry, c) - cut_at(nx, ny, c);
        const double grad_scene = scene_at(rx, ry, c) - scene_at(nx, ny, c);
        return m * grad_cut + (1.0 - m) * grad_scene;
    };

    const int iw = w - 2;  // interior extent
    const int ih = h - 2;
    const std::size_t interior = static_cast<std::size_t>(iw) * ih;
    const int dxs[4] = {1, -1, 0, 0};
    const int dys[4] = {0, 0, 1, -1};

    // Solve per channel; initialize the interior with the scene (so a
    // self-clone starts converged).
    std::vector<std::vector<double>> u(3, std::vector<double>(static_cast<std::size_t>(w) * h));
    for (int c = 0; c < 3; ++c) {
        for (int ry = 0; ry < h; ++ry) {
            for (int rx = 0; rx < w; ++rx) {
                u[c][static_cast<std::size_t>(ry) * w + rx] = scene_at(rx, ry, c);
            }
        }
    }

    g_last_residuals.clear();
    bool converged = false;
    for (int sweep = 0; sweep < params.max_sweeps; ++sweep) {
        double total_update = 0.0;
        for (int c = 0; c < 3; ++c) {
            auto& plane = u[c];
            for (int ry = 1; ry < h - 1; ++ry) {
                for (int rx = 1; rx < w - 1; ++rx) {
                    double rhs = 0.0;
                    for (int k = 0; k < 4; ++k) {
                        const int nx = rx + dxs[k];
                        const int ny = ry + dys[k];
                        rhs += plane[static_cast<std::size_t>(ny) * w + nx];
                        rhs += guidance(rx, ry, nx, ny, c);
                    }
                    const std::size_t i = static_cast<std::size_t>(ry) * w + rx;
                    const double next = rhs / 4.0;
                    total_update += std::abs(next - plane[i]);
                    plane[i] = next;
                }
            }
        }
        const double mean_update = total_update / (3.0 * static_cast<double>(interior));
        g_last_residuals.push_back(mean_update);
        if (mean_update < params.epsilon) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw NonConvergence("seamless clone hit the sweep cap before reaching epsilon");
    }

    SeamlessField field;
    field.width = w;
    field.height = h;
    field.planes = {std::move(u[0]), std::move(u[1]), std::move(u[2])};
    return field;
}

SceneImage seamless_clone(const SceneImage& scene, const CutoutObject& cutout,
                          const PlacementBox& box, const SeamlessParams& params) {
    const SeamlessField field = seamless_clone_field(scene, cutout, box, params);
    const int ox = round_half_up(box.x_min);
    const int oy = round_half_up(box.y_min);
    const int w = field.width;
    const int h = field.height;
    SceneImage out = scene;
    for (int ry = 1; ry < h - 1; ++ry) {
        for (int rx = 1; rx < w - 1; ++rx) {
            const std::size_t i = static_cast<std::size_t>(ry) * w + rx;
            out.set(ox + rx, oy + ry,
                    Rgb{to_byte(field.planes[0][i]), to_byte(field.planes[1][i]),
                        to_byte(field.planes[2][i])});
        }
    }
    return out;
}

CompositeOutput insert_object(const SceneImage& scene, const SuggestionResult& suggestion,
                              const PlacementBox& box, GeneratorBackend& generator,
                              const PromptLibrary& prompts, const InsertParams& params) {
    CompositeOutput output;
    output.stage_artifacts["00_source"] = scene;

    SceneImage generated;
    try {
        output.request = build_generation_request(suggestion.object_phrase, params.seed, prompts,
                                                  params.generation_size);
        generated = generator.generate(output.request.prompt, output.request.negative_prompt,
                                       output.request.seed, output.request.size);
        output.stage_artifacts["01_object"] = generated;
    } catch (Error& e) {
        e.set_stage(3);
        throw;
    }

    try {
        output.stage_artifacts["02_box"] = draw_roi_box(scene, box);
        const CutoutObject cutout = matte_from_white(generated, params.matting);
        const CutoutObject fitted = resize_to_box(cutout, box);
        if (params.mode == BlendMode::alpha) {
            output.image = alpha_composite(scene, fitted, box, params.opacity);
        } else {
            output.image = seamless_clone(scene, fitted, box, params.seamless);
        }
        output.stage_artifacts["03_composite"] = output.image;
    } catch (Error& e) {
        e.set_stage(4);
        throw;
    }
    return output;
}

}  // namespace adpipe
