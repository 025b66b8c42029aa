#include <doctest.h>

#include <random>

#include "adpipe/rle.hpp"
#include "adpipe/types.hpp"

using namespace adpipe;

TEST_CASE("placement box validity") {
    CHECK(PlacementBox{0, 0, 10, 10}.is_valid());
    CHECK_FALSE(PlacementBox{0, 0, 0, 10}.is_valid());   // zero width
    CHECK_FALSE(PlacementBox{0, 0, 10, 0}.is_valid());   // zero height
    CHECK_FALSE(PlacementBox{10, 0, 0, 10}.is_valid());  // inverted
    CHECK_THROWS_AS((PlacementBox{5, 5, 5, 9}.validate()), InvalidArgument);
    CHECK(PlacementBox{0, 0, 4, 5}.area() == doctest::Approx(20.0));
}

TEST_CASE("scene image invariants") {
    SceneImage img = SceneImage::create(4, 3, Rgb{1, 2, 3});
    CHECK(img.pixels.size() == 4 * 3 * 3);
    CHECK(img.at(2, 1) == Rgb{1, 2, 3});
    img.pixels.pop_back();
    CHECK_THROWS_AS(img.validate(), InvalidArgument);

    SceneImage ok = SceneImage::create(4, 3);
    ObjectMask mask;
    mask.mask = BinaryMask::filled(5, 3, false);  // wrong width
    ok.object_masks.push_back(mask);
    CHECK_THROWS_AS(ok.validate(), InvalidArgument);
}

TEST_CASE("taxonomy rejects duplicates and empties") {
    CHECK_THROWS_AS(CategoryTaxonomy({"Food", "food"}), InvalidArgument);
    CHECK_THROWS_AS(CategoryTaxonomy({"Food", ""}), InvalidArgument);
}

TEST_CASE("taxonomy matching: case, plural, no guessing") {
    const CategoryTaxonomy tax({"Food", "Drinks", "Electronics"});
    CHECK(tax.match("food") == "Food");
    CHECK(tax.match("DRINKS") == "Drinks");
    CHECK(tax.match("Drink") == "Drinks");       // singular of a plural entry
    CHECK(tax.match("Foods") == "Food");         // plural of a singular entry
    CHECK_FALSE(tax.match("Fod").has_value());   // no edit-distance repair
    CHECK_FALSE(tax.match("Tools").has_value());
    CHECK(tax.joined() == "Food, Drinks, Electronics");
}

TEST_CASE("rgb hex round trip") {
    CHECK(rgb_to_hex(Rgb{170, 40, 40}) == "#aa2828");
    CHECK(rgb_from_hex("#aa2828") == Rgb{170, 40, 40});
    CHECK_THROWS_AS(rgb_from_hex("aa2828"), InvalidArgument);
    CHECK_THROWS_AS(rgb_from_hex("#zz0000"), InvalidArgument);
}

TEST_CASE("rle canonical encoding") {
    BinaryMask mask = BinaryMask::filled(4, 2, false);
    CHECK(rle_encode(mask) == std::vector<std::uint64_t>{8});

    mask.set(0, 0, true);  // mask starts with a 1-bit: leading zero run
    auto runs = rle_encode(mask);
    CHECK(runs.front() == 0);
    CHECK(rle_decode(4, 2, runs) == mask);
}

TEST_CASE("rle rejects non-canonical streams") {
    CHECK_THROWS_AS(rle_decode(4, 2, {3, 2}), InvalidArgument);        // short
    CHECK_THROWS_AS(rle_decode(4, 2, {3, 0, 5}), InvalidArgument);     // zero interior
    CHECK_THROWS_AS(rle_decode(4, 2, {9}), InvalidArgument);           // too long
    CHECK_THROWS_AS(rle_decode(4, 2, {}), InvalidArgument);
}

TEST_CASE("rle round trip on random masks") {
    std::mt19937 rng(7);
    std::bernoulli_distribution bit(0.3);
    for (int trial = 0; trial < 50; ++trial) {
        BinaryMask mask = BinaryMask::filled(13, 9, false);
        for (auto& b : mask.bits) b = bit(rng) ? 1 : 0;
        const auto runs = rle_encode(mask);
        std::uint64_t sum = 0;
        for (auto r : runs) sum += r;
        CHECK(sum == 13 * 9);
        CHECK(rle_decode(13, 9, runs) == mask);
    }
}
