#include "adpipe/synthetic.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "adpipe/image_io.hpp"
#include "adpipe/rle.hpp"

namespace adpipe::synthetic {

using nlohmann::json;

namespace {

void fill_rect(SceneImage& img, int x0, int y0, int x1, int y1, Rgb color) {
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            if (img.in_bounds(x, y)) img.set(x, y, color);
        }
    }
}

BinaryMask rect_mask(int width, int height, int x0, int y0, int x1, int y1) {
    BinaryMask mask = BinaryMask::filled(width, height, false);
    for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
            mask.set(x, y, true);
        }
    }
    return mask;
}

// Insertion scene geometry.
constexpr int kSceneW = 64;
constexpr int kSceneH = 48;
constexpr int kFurnitureX0 = 44, kFurnitureY0 = 8, kFurnitureX1 = 60, kFurnitureY1 = 20;
constexpr int kFaceX0 = 2, kFaceY0 = 2, kFaceX1 = 12, kFaceY1 = 12;

// Sponsor scene geometry.
constexpr int kSponsorW = 80;
constexpr int kSponsorH = 60;
constexpr int kProductX0 = 30, kProductY0 = 20, kProductX1 = 50, kProductY1 = 48;

const std::vector<std::string> kLocales = {
    "Bathroom", "Bathroom", "Bathroom", "Kitchen", "Living Room",
    "Garden",   "Office",   "Cafe",     "Garage",  "Kitchen",
};

}  // namespace

const std::vector<Rgb>& insertion_backgrounds() {
    static const std::vector<Rgb> palette = {
        Rgb{210, 220, 230},
        Rgb{220, 210, 230},
        Rgb{230, 220, 210},
    };
    return palette;
}

Rgb sponsor_background(int index) {
    return Rgb{200, 205, static_cast<std::uint8_t>(180 + 5 * index)};
}

Rgb shampoo_product_color() { return Rgb{170, 40, 40}; }
Rgb soda_product_color() { return Rgb{40, 90, 170}; }
Rgb wrong_logo_color() { return Rgb{240, 240, 60}; }
Rgb distractor_color() { return Rgb{30, 30, 30}; }

CategoryTaxonomy taxonomy() {
    return CategoryTaxonomy({"Food", "Drinks", "Electronics", "FMCG", "Cosmetics"});
}

SceneImage make_insertion_scene(int index) {
    const Rgb bg = insertion_backgrounds()[index % insertion_backgrounds().size()];
    SceneImage img = SceneImage::create(kSceneW, kSceneH, bg);
    fill_rect(img, kFurnitureX0, kFurnitureY0, kFurnitureX1, kFurnitureY1, Rgb{90, 120, 90});
    ObjectMask furniture;
    furniture.mask = rect_mask(kSceneW, kSceneH, kFurnitureX0, kFurnitureY0, kFurnitureX1,
                               kFurnitureY1);
    img.object_masks.push_back(std::move(furniture));
    if (index == 5) {
        fill_rect(img, kFaceX0, kFaceY0, kFaceX1, kFaceY1, Rgb{230, 190, 160});
        ObjectMask face;
        face.mask = rect_mask(kSceneW, kSceneH, kFaceX0, kFaceY0, kFaceX1, kFaceY1);
        face.tags = {"important"};
        img.object_masks.push_back(std::move(face));
    }
    return img;
}

SceneImage make_sponsor_scene(int index) {
    SceneImage img = SceneImage::create(kSponsorW, kSponsorH, sponsor_background(index));
    const int variant = index / 3;  // 0: none, 1: no logo, 2: wrong logo
    if (variant == 0) {
        fill_rect(img, 8, 40, 20, 48, distractor_color());
        return img;
    }
    const bool shampoo = (index % 2) != 0;  // 3,5,7 shampoo; 4,6,8 soda
    const Rgb product = shampoo ? shampoo_product_color() : soda_product_color();
    fill_rect(img, kProductX0, kProductY0, kProductX1, kProductY1, product);
    if (variant == 2) {
        fill_rect(img, 36, 26, 44, 32, wrong_logo_color());
    }
    return img;
}

DatasetRecordA make_insertion_record(int index) {
    DatasetRecordA rec;
    rec.image_path = "images/scene_" + std::to_string(index) + ".ppm";
    rec.locale = kLocales[static_cast<std::size_t>(index)];
    const int shift = index % 4;
    rec.gt_box = PlacementBox{double(8 + shift), 22.0, double(28 + shift), 42.0};
    switch (index % 3) {
        case 0: rec.plausible_categories = {"Food", "Drinks"}; break;
        case 1: rec.plausible_categories = {"Drinks"}; break;
        default: rec.plausible_categories = {"Electronics", "FMCG"}; break;
    }
    if (index == 9) {
        rec.plausible_categories = {"Cosmetics"};  // the deliberate miss
    }
    if (index == 0 || index == 1) rec.safety_flags.insert("alcohol");
    if (index == 2) rec.safety_flags.insert("children");

    ObjectMask furniture;
    furniture.mask =
        rect_mask(kSceneW, kSceneH, kFurnitureX0, kFurnitureY0, kFurnitureX1, kFurnitureY1);
    rec.object_masks.push_back(std::move(furniture));
    if (index == 5) {
        ObjectMask face;
        face.mask = rect_mask(kSceneW, kSceneH, kFaceX0, kFaceY0, kFaceX1, kFaceY1);
        face.tags = {"important"};
        rec.object_masks.push_back(std::move(face));
    }
    return rec;
}

DatasetRecordB make_sponsor_record(int index) {
    DatasetRecordB rec;
    rec.image_path = "images/sponsor_" + std::to_string(index) + ".ppm";
    const int variant = index / 3;
    const bool shampoo = (index % 2) != 0;
    if (variant == 0) {
        rec.variant = SponsorVariant::no_sponsor_product;
        rec.product_category = "none";
        return rec;
    }
    rec.variant =
        variant == 1 ? SponsorVariant::product_no_logo : SponsorVariant::product_wrong_logo;
    rec.product_category = shampoo ? "shampoo bottle" : "soda can";
    rec.gt_box = PlacementBox{double(kProductX0), double(kProductY0), double(kProductX1),
                              double(kProductY1)};
    rec.gt_mask = rect_mask(kSponsorW, kSponsorH, kProductX0, kProductY0, kProductX1, kProductY1);
    rec.sponsor_id = shampoo ? "aquapure" : "fizzco";
    return rec;
}

std::vector<SponsorSpec> sponsors() {
    SponsorSpec aquapure;
    aquapure.sponsor_id = "aquapure";
    aquapure.product_description = "a bottle of shampoo on a bathroom counter";
    aquapure.logo_prompt = "minimalist AquaPure water-drop logo";
    aquapure.product_keywords = {"shampoo bottle"};

    SponsorSpec fizzco;
    fizzco.sponsor_id = "fizzco";
    fizzco.product_description = "a can of soda on a kitchen table";
    fizzco.logo_prompt = "retro FizzCo soda logo";
    fizzco.product_keywords = {"soda can"};

    return {aquapure, fizzco};
}

std::vector<VlmScriptEntry> standard_vlm_script() {
    std::vector<VlmScriptEntry> script;
    const auto& bgs = insertion_backgrounds();

    // Stage 1: category ranking conditioned on the scene background.
    script.push_back({"*three most likely categories*", "Food, Drinks, Electronics", bgs[0]});
    script.push_back({"*three most likely categories*", "Drinks, Food, Electronics", bgs[1]});
    script.push_back({"*three most likely categories*", "Electronics, FMCG, Food", bgs[2]});

    // Stage 2: object per category.
    script.push_back({"*specific object for the category 'Food'*", "a bowl of ramen", std::nullopt});
    script.push_back(
        {"*specific object for the category 'Drinks'*", "a bottle of water", std::nullopt});
    script.push_back(
        {"*specific object for the category 'Electronics'*", "a pair of headphones", std::nullopt});
    script.push_back(
        {"*specific object for the category 'FMCG'*", "a packet of chips", std::nullopt});
    script.push_back(
        {"*specific object for the category 'Cosmetics'*", "a jar of face cream", std::nullopt});

    // Single-stage baseline: the same generic answer for every scene.
    script.push_back({"*'Category: object name'*", "Drinks: a bottle of water", std::nullopt});

    // Branded-object answers per sponsor scene.
    for (int i = 0; i < kSponsorSceneCount; ++i) {
        const int variant = i / 3;
        const bool shampoo = (i % 2) != 0;
        std::string response;
        if (variant == 0) {
            response = "a wooden chair near the window";
        } else if (shampoo) {
            response = "shampoo bottle on the counter PANTENE";
        } else {
            response = "soda can on the table PEPSI";
        }
        script.push_back({"*find one of the following objects*", response, sponsor_background(i)});
    }

    // Ratings.
    script.push_back({"*semantically appropriate*", "8", std::nullopt});
    script.push_back({"*realistic and visually coherent*", "7", std::nullopt});
    return script;
}

MockDetectorConfig standard_detector_config() {
    MockDetectorConfig config;
    config.regions[shampoo_product_color().packed()] = {"shampoo bottle", 0.9};
    config.regions[soda_product_color().packed()] = {"soda can", 0.9};
    config.regions[wrong_logo_color().packed()] = {"logo patch", 0.5};
    config.regions[distractor_color().packed()] = {"object", 0.3};
    config.category_boxes["Food"] = {0.15, 0.45, 0.45, 0.85};
    config.category_boxes["Drinks"] = {0.20, 0.50, 0.45, 0.90};
    config.category_boxes["Electronics"] = {0.10, 0.50, 0.40, 0.85};
    return config;
}

std::vector<EmbedderAffinity> standard_embedder_affinities() {
    return {
        {"*shampoo*", shampoo_product_color()},
        {"*soda*", soda_product_color()},
    };
}

namespace {

json vlm_script_json() {
    json entries = json::array();
    for (const auto& e : standard_vlm_script()) {
        json entry;
        entry["pattern"] = e.pattern;
        entry["response"] = e.response;
        if (e.when_dominant) {
            entry["when_dominant"] = rgb_to_hex(*e.when_dominant);
        }
        entries.push_back(std::move(entry));
    }
    return json{{"entries", entries}};
}

json detector_params_json() {
    const MockDetectorConfig config = standard_detector_config();
    json regions = json::object();
    for (const auto& [packed, spec] : config.regions) {
        regions[rgb_to_hex(rgb_from_packed(packed))] = {{"label", spec.label},
                                                        {"confidence", spec.confidence}};
    }
    json boxes = json::object();
    for (const auto& [category, box] : config.category_boxes) {
        boxes[category] = box;
    }
    return json{{"name", "mock-detector"}, {"regions", regions}, {"category_boxes", boxes}};
}

json embedder_params_json() {
    json affinities = json::array();
    for (const auto& a : standard_embedder_affinities()) {
        affinities.push_back({{"pattern", a.pattern}, {"color", rgb_to_hex(a.color)}});
    }
    return json{{"name", "mock-embedder"}, {"affinities", affinities}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write fixture file: " + path.string());
    }
    out << text;
}

void write_invalid_fixtures(const std::filesystem::path& dir, FixtureTree& tree) {
    std::filesystem::create_directories(dir);
    const auto add = [&](const std::string& file, const std::string& line,
                         const std::string& expected) {
        const auto path = dir / file;
        write_text(path, line + "\n");
        tree.invalid_files.push_back(path);
        tree.invalid_expected.push_back(expected);
    };

    // Each file holds exactly one record violating one invariant.
    add("01_zero_area_box.jsonl",
        R"({"schema_version":1,"image_path":"../images/scene_0.ppm","plausible_categories":["Food"],"gt_box":{"x_min":10,"y_min":10,"x_max":10,"y_max":20},"locale":"Kitchen","safety_flags":[]})",
        "MalformedRecord");
    add("02_unknown_category.jsonl",
        R"({"schema_version":1,"image_path":"../images/scene_0.ppm","plausible_categories":["Spaceships"],"gt_box":{"x_min":10,"y_min":10,"x_max":20,"y_max":20},"locale":"Kitchen","safety_flags":[]})",
        "UnknownCategory");
    add("03_missing_image.jsonl",
        R"({"schema_version":1,"image_path":"../images/nope.ppm","plausible_categories":["Food"],"gt_box":{"x_min":10,"y_min":10,"x_max":20,"y_max":20},"locale":"Kitchen","safety_flags":[]})",
        "MissingImage");
    add("04_bad_schema_version.jsonl",
        R"({"schema_version":2,"image_path":"../images/scene_0.ppm","plausible_categories":["Food"],"gt_box":{"x_min":10,"y_min":10,"x_max":20,"y_max":20},"locale":"Kitchen","safety_flags":[]})",
        "MalformedRecord");
    add("05_bad_rle.jsonl",
        R"({"schema_version":1,"image_path":"../images/scene_0.ppm","plausible_categories":["Food"],"gt_box":{"x_min":10,"y_min":10,"x_max":20,"y_max":20},"locale":"Kitchen","safety_flags":[],"object_masks":[{"width":4,"height":4,"rle":[3,2]}]})",
        "MalformedRecord");
    add("06_empty_categories.jsonl",
        R"({"schema_version":1,"image_path":"../images/scene_0.ppm","plausible_categories":[],"gt_box":{"x_min":10,"y_min":10,"x_max":20,"y_max":20},"locale":"Kitchen","safety_flags":[]})",
        "MalformedRecord");
    add("07_variant_field_conflict.jsonl",
        R"({"schema_version":1,"image_path":"../images/sponsor_0.ppm","variant":"no_sponsor_product","product_category":"none","gt_box":{"x_min":30,"y_min":20,"x_max":50,"y_max":48}})",
        "MalformedRecord");
}

}  // namespace

FixtureTree write_fixture_tree(const std::filesystem::path& dir,
                               const std::filesystem::path& template_source_dir) {
    FixtureTree tree;
    tree.root = dir;
    std::filesystem::create_directories(dir / "images");
    std::filesystem::create_directories(dir / "templates");

    for (const auto& entry : std::filesystem::directory_iterator(template_source_dir)) {
        if (entry.path().extension() == ".txt") {
            std::filesystem::copy_file(entry.path(), dir / "templates" / entry.path().filename(),
                                       std::filesystem::copy_options::overwrite_existing);
        }
    }

    std::vector<DatasetRecordA> records_a;
    for (int i = 0; i < kInsertionSceneCount; ++i) {
        const auto image_path = dir / "images" / ("scene_" + std::to_string(i) + ".ppm");
        save_ppm(make_insertion_scene(i), image_path);
        tree.scene_images.push_back(image_path);
        records_a.push_back(make_insertion_record(i));
    }
    tree.dataset_a = dir / "dataset_a.jsonl";
    save_dataset_a(tree.dataset_a, records_a);

    std::vector<DatasetRecordB> records_b;
    for (int i = 0; i < kSponsorSceneCount; ++i) {
        const auto image_path = dir / "images" / ("sponsor_" + std::to_string(i) + ".ppm");
        save_ppm(make_sponsor_scene(i), image_path);
        tree.sponsor_images.push_back(image_path);
        records_b.push_back(make_sponsor_record(i));
    }
    tree.dataset_b = dir / "dataset_b.jsonl";
    save_dataset_b(tree.dataset_b, records_b);

    tree.sponsor_registry = dir / "sponsors.jsonl";
    save_sponsor_registry(tree.sponsor_registry, sponsors());

    tree.vlm_script = dir / "vlm_script.json";
    write_text(tree.vlm_script, vlm_script_json().dump(2) + "\n");

    json config;
    config["seed"] = 42;
    config["taxonomy"] = taxonomy().categories();
    config["template_dir"] = "templates";
    config["backends"] = {
        {"vlm", {{"name", "mock-vlm"}, {"script_path", "vlm_script.json"}}},
        {"detector", detector_params_json()},
        {"generator", {{"name", "mock-generator"}}},
        {"embedder", embedder_params_json()},
    };
    config["vlm_pool"] = {
        {"llava-mock",
         {{"name", "mock-vlm"}, {"script_path", "vlm_script.json"}, {"id", "llava-mock"}}},
        {"qwen-mock",
         {{"name", "mock-vlm"}, {"script_path", "vlm_script.json"}, {"id", "qwen-mock"}}},
    };
    config["generation"] = {{"size", 64}, {"opacity", 1.0}};
    config["samples_per_image"] = 3;
    tree.config = dir / "config.json";
    write_text(tree.config, config.dump(2) + "\n");

    json grid = json::array();
    grid.push_back({{"prompting", "single-stage"}, {"vlm", "llava-mock"}});
    grid.push_back({{"prompting", "two-stage"}, {"vlm", "llava-mock"}});
    grid.push_back({{"prompting", "two-stage"}, {"vlm", "qwen-mock"}});
    grid.push_back({{"prompting", "two-stage"}, {"vlm", "mock-vlm"}});
    tree.ablation_grid = dir / "ablation_grid.json";
    write_text(tree.ablation_grid, grid.dump(2) + "\n");

    tree.human_composite = dir / "human_composite.jsonl";
    write_text(tree.human_composite,
               R"({"image_id":"scene_0","rater_id":"r1","score":3})" "\n"
               R"({"image_id":"scene_0","rater_id":"r2","score":4})" "\n");
    tree.human_logo = dir / "human_logo.jsonl";
    write_text(tree.human_logo,
               R"({"image_id":"sponsor_3","rater_id":"r1","score":3})" "\n"
               R"({"image_id":"sponsor_4","rater_id":"r2","score":4})" "\n"
               R"({"image_id":"sponsor_5","rater_id":"r1","score":3})" "\n");

    write_invalid_fixtures(dir / "invalid", tree);
    return tree;
}

}  // namespace adpipe::synthetic
