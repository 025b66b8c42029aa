#include <doctest.h>

#include <cmath>

#include "adpipe/backends.hpp"
#include "adpipe/image_io.hpp"
#include "adpipe/mock_backends.hpp"

using namespace adpipe;

TEST_CASE("cosine similarity contract") {
    const std::vector<double> a{1.0, 0.0};
    const std::vector<double> b{0.0, 1.0};
    CHECK(cosine_similarity(a, a) == doctest::Approx(1.0));
    CHECK(cosine_similarity(a, b) == doctest::Approx(0.0));

    const double s = std::sqrt(2.0) / 2.0;
    CHECK(cosine_similarity(a, {s, s}) == doctest::Approx(0.7071).epsilon(1e-4));

    CHECK_THROWS_AS(cosine_similarity({1.0, 1.0}, a), NormViolation);
    CHECK_THROWS_AS(cosine_similarity(a, {0.5, 0.0}), NormViolation);
    CHECK_THROWS_AS(cosine_similarity(a, {1.0, 0.0, 0.0}), InvalidArgument);
}

TEST_CASE("glob matching") {
    CHECK(glob_match("*three best*", "pick the three best categories"));
    CHECK(glob_match("exact", "exact"));
    CHECK_FALSE(glob_match("exact", "exactly"));
    CHECK(glob_match("a*b*c", "aXXbYYc"));
    CHECK_FALSE(glob_match("a*b*c", "acb"));
    CHECK(glob_match("*", ""));
}

TEST_CASE("mock vlm answers its script") {
    const SceneImage img = SceneImage::create(4, 4);
    MockVlm vlm({{"*three best category*", "Food, Drinks, Electronics", std::nullopt}});
    CHECK(vlm.answer(img, "name the three best category options") ==
          "Food, Drinks, Electronics");
    CHECK(vlm.call_count() == 1);
    CHECK_THROWS_AS(vlm.answer(img, "something unscripted"), UnscriptedPrompt);
}

TEST_CASE("overlapping script patterns are rejected at construction") {
    CHECK_THROWS_AS(MockVlm({{"*category*", "a", std::nullopt},
                             {"*best category*", "b", std::nullopt}}),
                    AmbiguousScript);
    // Same patterns under mutually exclusive image conditions are fine.
    CHECK_NOTHROW(MockVlm({{"*category*", "a", Rgb{1, 2, 3}},
                           {"*category*", "b", Rgb{4, 5, 6}}}));
}

TEST_CASE("a prompt matched by two disjoint patterns fails at call time") {
    const SceneImage img = SceneImage::create(4, 4);
    MockVlm vlm({{"*alpha*", "a", std::nullopt}, {"*beta*", "b", std::nullopt}});
    CHECK_THROWS_AS(vlm.answer(img, "alpha and beta"), AmbiguousScript);
}

TEST_CASE("image-conditioned entries key on the dominant color") {
    SceneImage red = SceneImage::create(8, 8, Rgb{200, 0, 0});
    SceneImage blue = SceneImage::create(8, 8, Rgb{0, 0, 200});
    MockVlm vlm({{"*rank*", "red answer", Rgb{200, 0, 0}},
                 {"*rank*", "blue answer", Rgb{0, 0, 200}}});
    CHECK(vlm.answer(red, "rank these") == "red answer");
    CHECK(vlm.answer(blue, "rank these") == "blue answer");
}

TEST_CASE("mock generator is a pure function of the prompt") {
    MockGenerator gen;
    const SceneImage a = gen.generate("a can of Coke", "", 1, 32);
    const SceneImage b = gen.generate("a can of Coke", "", 1, 32);
    CHECK(a.pixels == b.pixels);
    CHECK(a.at(0, 0) == Rgb{255, 255, 255});  // background stays pure white
    CHECK(a.width == 32);
    CHECK(a.height == 32);

    // Distinct prompts hash to distinct disc colors.
    const Rgb c1 = MockGenerator::disc_color("a can of Coke");
    const Rgb c2 = MockGenerator::disc_color("a bottle of water");
    CHECK_FALSE(c1 == c2);
    const SceneImage other = gen.generate("a bottle of water", "", 1, 32);
    CHECK(other.at(16, 16) == c2);
    CHECK(a.at(16, 16) == c1);
    CHECK(gen.call_count() == 3);
}

TEST_CASE("mock embedder emits unit vectors and honors affinities") {
    MockEmbedder embedder({{"*shampoo*", Rgb{170, 40, 40}}});
    const auto text = embedder.embed_text("a bottle of shampoo");
    double norm = 0.0;
    for (double x : text) norm += x * x;
    CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-6);

    const SceneImage red_crop = SceneImage::create(6, 6, Rgb{170, 40, 40});
    CHECK(cosine_similarity(embedder.embed_image(red_crop), text) == doctest::Approx(1.0));

    const SceneImage gray = SceneImage::create(6, 6, Rgb{128, 128, 128});
    CHECK(std::abs(cosine_similarity(embedder.embed_image(gray), text)) < 0.5);

    // Repeatability.
    CHECK(embedder.embed_text("anything") == embedder.embed_text("anything"));
}

TEST_CASE("mock detector finds colored regions with the documented order") {
    MockDetectorConfig config;
    config.regions[Rgb{170, 40, 40}.packed()] = {"shampoo bottle", 0.9};
    config.regions[Rgb{40, 90, 170}.packed()] = {"soda can", 0.9};
    MockDetector detector(config);

    SceneImage scene = SceneImage::create(40, 30, Rgb{220, 220, 220});
    for (int y = 5; y < 15; ++y)
        for (int x = 5; x < 11; ++x) scene.set(x, y, Rgb{170, 40, 40});      // area 60
    for (int y = 5; y < 10; ++y)
        for (int x = 20; x < 26; ++x) scene.set(x, y, Rgb{40, 90, 170});     // area 30
    for (int y = 20; y < 24; ++y)
        for (int x = 30; x < 34; ++x) scene.set(x, y, Rgb{10, 10, 10});      // unknown, area 16

    const auto candidates = detector.detect_candidates(scene);
    REQUIRE(candidates.size() == 3);
    // Equal confidences tie-break by ascending area.
    CHECK(candidates[0].label == "soda can");
    CHECK(candidates[1].label == "shampoo bottle");
    CHECK(candidates[2].label == "object");
    CHECK(candidates[0].box == PlacementBox{20, 5, 26, 10});

    const auto [box, conf] = detector.predict_box(scene, "Drinks");
    CHECK(box.is_valid());
    CHECK(conf == doctest::Approx(0.9));
}

TEST_CASE("detector can attach segmentation masks") {
    MockDetectorConfig config;
    config.emit_masks = true;
    MockDetector detector(config);
    SceneImage scene = SceneImage::create(16, 16, Rgb{220, 220, 220});
    for (int y = 4; y < 8; ++y)
        for (int x = 4; x < 8; ++x) scene.set(x, y, Rgb{10, 10, 10});
    const auto candidates = detector.detect_candidates(scene);
    REQUIRE(candidates.size() == 1);
    REQUIRE(candidates[0].mask.has_value());
    CHECK(candidates[0].mask->count() == 16);
    CHECK(candidates[0].mask->at(5, 5));
    CHECK_FALSE(candidates[0].mask->at(0, 0));
}

TEST_CASE("retry wrapper maps and retries failures") {
    int attempts = 0;
    const int result = call_with_retries(
        [&] {
            if (++attempts < 3) throw Timeout("slow");
            return 7;
        },
        2);
    CHECK(result == 7);
    CHECK(attempts == 3);

    attempts = 0;
    CHECK_THROWS_AS(call_with_retries(
                        [&]() -> int {
                            ++attempts;
                            throw RateLimited("429");
                        },
                        1),
                    RateLimited);
    CHECK(attempts == 2);  // initial try + one retry

    // Provider-specific exceptions never leak: they map to ProviderError.
    CHECK_THROWS_AS(call_with_retries([]() -> int { throw std::runtime_error("socket"); }, 0),
                    ProviderError);
    // Scripted-backend errors pass through untranslated.
    CHECK_THROWS_AS(call_with_retries([]() -> int { throw UnscriptedPrompt("x"); }, 2),
                    UnscriptedPrompt);
}
