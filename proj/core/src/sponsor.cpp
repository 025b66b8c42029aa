#include "adpipe/sponsor.hpp"

#include <algorithm>
#include <cmath>

#include "adpipe/image_io.hpp"

namespace adpipe {

std::string to_string(Presence p) {
    switch (p) {
        case Presence::absent: return "absent";
        case Presence::present: return "present";
        case Presence::undetermined: return "undetermined";
    }
    throw InvalidArgument("bad Presence value");
}

SponsorDecision detect_sponsor_presence(const SceneImage& image,
                                        const std::vector<SponsorSpec>& sponsors, VlmBackend& vlm,
                                        const PromptLibrary& prompts) {
    if (sponsors.empty()) {
        throw InvalidArgument("sponsor list must be non-empty");
    }
    SponsorDecision decision;
    BrandedObjectFinding finding;
    try {
        finding = find_branded_object(image, vlm, prompts);
    } catch (const NoListedObject&) {
        decision.presence = Presence::absent;
        decision.note = "no listed object visible";
        return decision;
    } catch (const ParseError& e) {
        decision.presence = Presence::undetermined;
        decision.note = e.what();
        return decision;
    }

    const std::string object_lower = to_lower(finding.object_name);
    for (const auto& sponsor : sponsors) {
        for (const auto& keyword : sponsor.product_keywords) {
            if (to_lower(keyword) == object_lower) {
                decision.presence = Presence::present;
                decision.coarse_location = finding.location_phrase;
                decision.finding = finding;
                decision.sponsor_id = sponsor.sponsor_id;
                return decision;
            }
        }
    }
    decision.presence = Presence::absent;
    decision.note = "found '" + finding.object_name + "' but no sponsor sells it";
    return decision;
}

std::vector<RegionScore> score_regions(const SceneImage& image,
                                       const std::vector<DetectionCandidate>& candidates,
                                       const SponsorSpec& spec, EmbedderBackend& embedder) {
    if (candidates.empty()) {
        throw EmptyCandidates("no detector candidates to score");
    }
    const std::vector<double> text_vec = embedder.embed_text(spec.product_description);
    std::vector<RegionScore> scores;
    scores.reserve(candidates.size());
    for (const auto& cand : candidates) {
        RegionScore rs;
        rs.box = cand.box;
        rs.label = cand.label;
        rs.detector_confidence = cand.confidence;
        rs.mask = cand.mask;
        const SceneImage region = crop(image, cand.box);  // clamps to the image
        rs.clip_similarity = cosine_similarity(embedder.embed_image(region), text_vec);
        if (!std::isfinite(rs.clip_similarity)) {
            throw InvalidArgument("non-finite similarity score");
        }
        scores.push_back(std::move(rs));
    }
    std::stable_sort(scores.begin(), scores.end(), [](const RegionScore& a, const RegionScore& b) {
        if (a.clip_similarity != b.clip_similarity) return a.clip_similarity > b.clip_similarity;
        if (a.detector_confidence != b.detector_confidence)
            return a.detector_confidence > b.detector_confidence;
        if (a.box.area() != b.box.area()) return a.box.area() < b.box.area();
        return a.box.x_min < b.box.x_min;
    });
    return scores;
}

std::pair<PlacementBox, BinaryMask> select_region(const std::vector<RegionScore>& scores,
                                                  const SceneImage& image,
                                                  double inset_fraction) {
    if (scores.empty()) {
        throw InvalidArgument("select_region requires at least one scored region");
    }
    const RegionScore& top = scores.front();
    if (top.mask) {
        return {top.box, *top.mask};
    }
    const double inset = inset_fraction * std::min(top.box.width(), top.box.height());
    const PlacementBox inner{top.box.x_min + inset, top.box.y_min + inset, top.box.x_max - inset,
                             top.box.y_max - inset};
    BinaryMask mask = BinaryMask::filled(image.width, image.height, false);
    if (inner.is_valid()) {
        const int x0 = std::max(0, static_cast<int>(std::ceil(inner.x_min)));
        const int y0 = std::max(0, static_cast<int>(std::ceil(inner.y_min)));
        const int x1 = std::min(image.width, static_cast<int>(std::ceil(inner.x_max)));
        const int y1 = std::min(image.height, static_cast<int>(std::ceil(inner.y_max)));
        for (int y = y0; y < y1; ++y) {
            for (int x = x0; x < x1; ++x) {
                mask.set(x, y, true);
            }
        }
    }
    return {top.box, mask};
}

SceneImage obtain_logo(const SponsorSpec& spec, GeneratorBackend& generator,
                       const PromptLibrary& prompts, const SponsorParams& params) {
    if (params.logo_source == LogoSource::asset) {
        if (!spec.logo_asset) {
            throw ConfigError("sponsor " + spec.sponsor_id +
                              " has no logo_asset but logo_source is 'asset'");
        }
        return load_ppm(*spec.logo_asset);
    }
    const GenerationRequest request =
        build_generation_request(spec.logo_prompt, params.seed, prompts, params.generation_size);
    return generator.generate(request.prompt, request.negative_prompt, request.seed, request.size);
}

namespace {

PlacementBox mask_bounding_box(const BinaryMask& mask) {
    int min_x = mask.width, min_y = mask.height, max_x = -1, max_y = -1;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y)) continue;
            min_x = std::min(min_x, x);
            min_y = std::min(min_y, y);
            max_x = std::max(max_x, x);
            max_y = std::max(max_y, y);
        }
    }
    return PlacementBox{double(min_x), double(min_y), double(max_x + 1), double(max_y + 1)};
}

}  // namespace

SceneImage place_logo(const SceneImage& image, const BinaryMask& region_mask,
                      const PlacementBox& box, const SceneImage& logo,
                      const SponsorParams& params) {
    (void)box;  // the mask, not the raw box, governs placement
    region_mask.validate();
    if (region_mask.width != image.width || region_mask.height != image.height) {
        throw InvalidArgument("region mask must match the image dimensions");
    }
    if (region_mask.count() == 0) {
        throw EmptyMask("cannot place a logo into an empty mask");
    }

    const PlacementBox mask_box = mask_bounding_box(region_mask);
    const double lw = std::max(1.0, mask_box.width() * params.logo_scale);
    const double lh = std::max(1.0, mask_box.height() * params.logo_scale);
    const double cx = (mask_box.x_min + mask_box.x_max) / 2.0;
    const double cy = (mask_box.y_min + mask_box.y_max) / 2.0;
    const PlacementBox logo_box{cx - lw / 2.0, cy - lh / 2.0, cx + lw / 2.0, cy + lh / 2.0};

    CutoutObject fitted = resize_to_box(matte_from_white(logo, params.matting), logo_box);

    if (params.mode == BlendMode::alpha) {
        // Intersect the matte with the region mask so nothing bleeds past it.
        const int ox = static_cast<int>(std::floor(logo_box.x_min + 0.5));
        const int oy = static_cast<int>(std::floor(logo_box.y_min + 0.5));
        for (int y = 0; y < fitted.height; ++y) {
            for (int x = 0; x < fitted.width; ++x) {
                const int dx = ox + x;
                const int dy = oy + y;
                const bool inside =
                    dx >= 0 && dx < image.width && dy >= 0 && dy < image.height &&
                    region_mask.at(dx, dy);
                if (!inside) {
                    fitted.alpha[static_cast<std::size_t>(y) * fitted.width + x] = 0.0;
                }
            }
        }
        return alpha_composite(image, fitted, logo_box, params.opacity);
    }

    // Seamless mode: clone into the logo box, then gate strictly to the mask.
    SceneImage cloned = seamless_clone(image, fitted, logo_box, params.seamless);
    SceneImage out = image;
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            if (region_mask.at(x, y)) {
                out.set(x, y, cloned.at(x, y));
            }
        }
    }
    return out;
}

SceneImage place_logo(const SceneImage& image, const BinaryMask& region_mask,
                      const PlacementBox& box, const SponsorSpec& spec,
                      GeneratorBackend& generator, const PromptLibrary& prompts,
                      const SponsorParams& params) {
    return place_logo(image, region_mask, box, obtain_logo(spec, generator, prompts, params),
                      params);
}

SponsorOutput run_sponsor_pipeline(const SceneImage& image,
                                   const std::vector<SponsorSpec>& sponsors,
                                   const BackendSet& backends, const PromptLibrary& prompts,
                                   const SponsorParams& params) {
    SponsorOutput output;
    try {
        output.decision = detect_sponsor_presence(image, sponsors, *backends.vlm, prompts);
    } catch (Error& e) {
        e.set_stage(1);
        throw;
    }
    if (!output.decision.present()) {
        output.image = image;
        return output;
    }

    const auto spec_it =
        std::find_if(sponsors.begin(), sponsors.end(), [&](const SponsorSpec& s) {
            return s.sponsor_id == *output.decision.sponsor_id;
        });

    try {
        const auto candidates = backends.detector->detect_candidates(image);
        output.scores = score_regions(image, candidates, *spec_it, *backends.embedder);
        auto [box, mask] = select_region(output.scores, image, params.mask_inset_fraction);
        output.selected_box = box;
        output.selected_mask = std::move(mask);
        output.mask_source = output.scores.front().mask ? "detector" : "box";
    } catch (Error& e) {
        e.set_stage(2);
        throw;
    }

    SceneImage logo;
    try {
        logo = obtain_logo(*spec_it, *backends.generator, prompts, params);
    } catch (Error& e) {
        e.set_stage(3);
        throw;
    }

    try {
        output.image =
            place_logo(image, *output.selected_mask, *output.selected_box, logo, params);
    } catch (Error& e) {
        e.set_stage(4);
        throw;
    }

    output.stage_artifacts["00_scene"] = image;
    output.stage_artifacts["01_logo"] = std::move(logo);
    output.stage_artifacts["02_final"] = output.image;
    return output;
}

}  // namespace adpipe
