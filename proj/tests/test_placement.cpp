#include <doctest.h>

#include <random>

#include "adpipe/mock_backends.hpp"
#include "adpipe/placement.hpp"
#include "adpipe/synthetic.hpp"
#include "support.hpp"

using namespace adpipe;

namespace {

// Independent IoU oracle: count pixels of a 64x64 grid inside each half-open
// integer box.
double pixel_iou(const PlacementBox& a, const PlacementBox& b) {
    long long inter = 0, uni = 0;
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            const bool in_a = x >= a.x_min && x < a.x_max && y >= a.y_min && y < a.y_max;
            const bool in_b = x >= b.x_min && x < b.x_max && y >= b.y_min && y < b.y_max;
            inter += (in_a && in_b) ? 1 : 0;
            uni += (in_a || in_b) ? 1 : 0;
        }
    }
    return static_cast<double>(inter) / static_cast<double>(uni);
}

PlacementBox random_int_box(std::mt19937& rng) {
    std::uniform_int_distribution<int> coord(0, 64);
    for (;;) {
        int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
        if (x0 > x1) std::swap(x0, x1);
        if (y0 > y1) std::swap(y0, y1);
        if (x0 < x1 && y0 < y1) {
            return PlacementBox{double(x0), double(y0), double(x1), double(y1)};
        }
    }
}

}  // namespace

TEST_CASE("iou basics") {
    const PlacementBox a{0, 0, 10, 10};
    CHECK(iou(a, a) == doctest::Approx(1.0));
    CHECK(iou(a, PlacementBox{20, 20, 30, 30}) == doctest::Approx(0.0));
    CHECK(iou(a, PlacementBox{5, 0, 15, 10}) == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("iou equals the pixel-counting oracle on integer boxes") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const PlacementBox a = random_int_box(rng);
        const PlacementBox b = random_int_box(rng);
        CHECK(iou(a, b) == pixel_iou(a, b));  // exactly, no tolerance
    }
}

TEST_CASE("iou symmetry, bounds and scale invariance") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> coord(0.0, 50.0);
    std::uniform_real_distribution<double> extent(0.5, 30.0);
    for (int trial = 0; trial < 100; ++trial) {
        const PlacementBox a{coord(rng), coord(rng), 0, 0};
        const PlacementBox a2{a.x_min, a.y_min, a.x_min + extent(rng), a.y_min + extent(rng)};
        const PlacementBox b{coord(rng), coord(rng), 0, 0};
        const PlacementBox b2{b.x_min, b.y_min, b.x_min + extent(rng), b.y_min + extent(rng)};
        const double v = iou(a2, b2);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(iou(b2, a2) == v);
        const double k = 3.25;
        const PlacementBox as{a2.x_min * k, a2.y_min * k, a2.x_max * k, a2.y_max * k};
        const PlacementBox bs{b2.x_min * k, b2.y_min * k, b2.x_max * k, b2.y_max * k};
        CHECK(iou(as, bs) == doctest::Approx(v).epsilon(1e-12));
    }
    CHECK(iou(PlacementBox{1, 1, 5, 5}, PlacementBox{1, 1, 5, 5}) == 1.0);
}

TEST_CASE("mean and per-category iou") {
    const PlacementBox unit{0, 0, 10, 10};
    const PlacementBox same = unit;
    const PlacementBox disjoint{50, 50, 60, 60};
    CHECK(mean_iou({{unit, same}, {unit, disjoint}}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(mean_iou({}), EmptyInput);

    const auto per = per_category_iou({{"Food", unit, same}, {"Drinks", unit, disjoint}});
    CHECK(per.at("Food") == doctest::Approx(1.0));
    CHECK(per.at("Drinks") == doctest::Approx(0.0));
    CHECK(per.count("Electronics") == 0);  // no examples, omitted
}

TEST_CASE("collision flags") {
    SceneImage plain = SceneImage::create(100, 80);
    CHECK(collision_score(PlacementBox{10, 10, 30, 30}, plain).empty());
    CHECK(collision_score(PlacementBox{80, 10, 150, 30}, plain) ==
          std::set<CollisionFlag>{CollisionFlag::out_of_bounds});
    CHECK(collision_score(PlacementBox{-3, 10, 30, 30}, plain) ==
          std::set<CollisionFlag>{CollisionFlag::out_of_bounds});

    // Mask covering 40% of the box area with tau_overlap 0.25.
    SceneImage masked = SceneImage::create(100, 80);
    ObjectMask object;
    object.mask = BinaryMask::filled(100, 80, false);
    for (int y = 10; y < 30; ++y)
        for (int x = 10; x < 18; ++x) object.mask.set(x, y, true);  // 8x20 = 160 px
    masked.object_masks.push_back(object);
    const PlacementBox box{10, 10, 30, 30};  // area 400, overlap 160/400 = 0.4
    CHECK(collision_score(box, masked) ==
          std::set<CollisionFlag>{CollisionFlag::overlaps_object});

    // The same mask tagged important trips the occlusion flag at 0.10.
    masked.object_masks[0].tags = {"important"};
    const auto flags = collision_score(box, masked);
    CHECK(flags.count(CollisionFlag::overlaps_object) == 1);
    CHECK(flags.count(CollisionFlag::occludes_important) == 1);

    // Below threshold: 40 px / 400 = 0.1 < 0.25, untagged.
    SceneImage slight = SceneImage::create(100, 80);
    ObjectMask small;
    small.mask = BinaryMask::filled(100, 80, false);
    for (int y = 10; y < 15; ++y)
        for (int x = 10; x < 18; ++x) small.mask.set(x, y, true);
    slight.object_masks.push_back(small);
    CHECK(collision_score(box, slight).empty());
}

TEST_CASE("collision monotonicity under box enlargement") {
    // Enlarging a box never clears out_of_bounds and never loses overlap
    // pixels (the normalized ratio may shrink as the box dilutes; the flag
    // therefore keys on a monotone quantity only through the threshold).
    SceneImage scene = SceneImage::create(60, 60);
    ObjectMask object;
    object.mask = BinaryMask::filled(60, 60, false);
    for (int y = 20; y < 30; ++y)
        for (int x = 20; x < 30; ++x) object.mask.set(x, y, true);
    scene.object_masks.push_back(object);

    std::mt19937 rng(17);
    std::uniform_real_distribution<double> pos(0.0, 50.0);
    std::uniform_real_distribution<double> grow(0.0, 15.0);
    auto overlap_pixels = [&](const PlacementBox& b) {
        int count = 0;
        for (int y = 0; y < 60; ++y)
            for (int x = 0; x < 60; ++x)
                if (scene.object_masks[0].mask.at(x, y) && x >= b.x_min && x < b.x_max &&
                    y >= b.y_min && y < b.y_max)
                    ++count;
        return count;
    };
    for (int trial = 0; trial < 50; ++trial) {
        const double x0 = pos(rng), y0 = pos(rng);
        const PlacementBox box{x0, y0, x0 + 5 + grow(rng), y0 + 5 + grow(rng)};
        const PlacementBox bigger{box.x_min - grow(rng), box.y_min - grow(rng),
                                  box.x_max + grow(rng), box.y_max + grow(rng)};
        const auto flags = collision_score(box, scene);
        const auto big_flags = collision_score(bigger, scene);
        if (flags.count(CollisionFlag::out_of_bounds)) {
            CHECK(big_flags.count(CollisionFlag::out_of_bounds) == 1);
        }
        CHECK(overlap_pixels(bigger) >= overlap_pixels(box));
    }
}

TEST_CASE("dataset collision rate") {
    PlacementAssessment clean;
    PlacementAssessment flagged;
    flagged.collision_flags.insert(CollisionFlag::out_of_bounds);
    CHECK(flagged.collision_score_contrib() == 1);
    CHECK(clean.collision_score_contrib() == 0);

    std::vector<PlacementAssessment> all_clean(4, clean);
    CHECK(dataset_collision_rate(all_clean) == doctest::Approx(0.0));
    std::vector<PlacementAssessment> all_flagged(4, flagged);
    CHECK(dataset_collision_rate(all_flagged) == doctest::Approx(1.0));

    std::vector<PlacementAssessment> mixed(10, clean);
    mixed[1] = mixed[4] = mixed[7] = flagged;
    CHECK(dataset_collision_rate(mixed) == doctest::Approx(0.3));
    CHECK_THROWS_AS(dataset_collision_rate({}), EmptyInput);
}

TEST_CASE("contextual plausibility normalizes the scripted rating") {
    const SceneImage img = SceneImage::create(32, 32);
    MockVlm vlm({{"*semantically appropriate*", "8", std::nullopt}});
    CHECK(contextual_plausibility(img, PlacementBox{4, 4, 20, 20}, "Food", vlm,
                                  testsupport::prompts()) == doctest::Approx(0.8));

    MockVlm words({{"*semantically appropriate*", "ten", std::nullopt}});
    CHECK_THROWS_AS(contextual_plausibility(img, PlacementBox{4, 4, 20, 20}, "Food", words,
                                            testsupport::prompts()),
                    UnparseableRating);
}

TEST_CASE("predict placement guards the detector contract") {
    const CategoryTaxonomy tax = synthetic::taxonomy();
    const SceneImage img = SceneImage::create(40, 40);

    MockDetectorConfig config;
    config.category_boxes["Food"] = {0.25, 0.25, 0.75, 0.75};
    MockDetector detector(config);
    const auto [box, conf] = predict_placement(img, "Food", detector, tax);
    CHECK(box == PlacementBox{10, 10, 30, 30});
    CHECK(conf == doctest::Approx(0.9));

    CHECK_THROWS_AS(predict_placement(img, "Spaceships", detector, tax), UnknownCategory);

    // A detector emitting inverted coordinates is an invariant breach.
    struct BrokenDetector : DetectorBackend {
        std::pair<PlacementBox, double> predict_box(const SceneImage&,
                                                    const std::string&) override {
            return {PlacementBox{30, 30, 10, 10}, 0.5};
        }
        std::vector<DetectionCandidate> detect_candidates(const SceneImage&) override {
            return {};
        }
        BackendDescriptor descriptor() const override { return {"broken", true, 0}; }
    } broken;
    CHECK_THROWS_AS(predict_placement(img, "Food", broken, tax), DetectorFailure);
}

TEST_CASE("mask iou") {
    BinaryMask a = BinaryMask::filled(8, 8, false);
    BinaryMask b = BinaryMask::filled(8, 8, false);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) a.set(x, y, true);
    for (int y = 2; y < 6; ++y)
        for (int x = 2; x < 6; ++x) b.set(x, y, true);
    CHECK(mask_iou(a, a) == doctest::Approx(1.0));
    CHECK(mask_iou(a, b) == doctest::Approx(4.0 / 28.0));
    CHECK_THROWS_AS(mask_iou(a, BinaryMask::filled(4, 4, true)), InvalidArgument);
}
