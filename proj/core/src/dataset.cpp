#include "adpipe/dataset.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "adpipe/rle.hpp"

namespace adpipe {

using nlohmann::json;

namespace {

json box_to_json(const PlacementBox& box) {
    return json{{"x_min", box.x_min}, {"y_min", box.y_min}, {"x_max", box.x_max}, {"y_max", box.y_max}};
}

PlacementBox box_from_json(const json& j) {
    PlacementBox box{j.at("x_min").get<double>(), j.at("y_min").get<double>(),
                     j.at("x_max").get<double>(), j.at("y_max").get<double>()};
    if (!box.is_valid()) {
        throw InvalidArgument("gt_box has zero or negative extent");
    }
    return box;
}

json mask_to_json(const BinaryMask& mask) {
    return json{{"width", mask.width}, {"height", mask.height}, {"rle", rle_encode(mask)}};
}

BinaryMask mask_from_json(const json& j) {
    return rle_decode(j.at("width").get<int>(), j.at("height").get<int>(),
                      j.at("rle").get<std::vector<std::uint64_t>>());
}

void check_schema_version(const json& j) {
    if (!j.contains("schema_version")) {
        throw InvalidArgument("missing schema_version");
    }
    const int v = j.at("schema_version").get<int>();
    if (v != kDatasetSchemaVersion) {
        throw InvalidArgument("unsupported schema_version " + std::to_string(v));
    }
}

// Reads one file line-by-line, parsing each non-empty line as JSON and
// mapping any per-line failure to MalformedRecord with its 1-based line
// number. MissingImage / UnknownCategory pass through untranslated.
template <typename Record, typename ParseFn>
std::vector<Record> load_lines(const std::filesystem::path& path, ParseFn parse) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open dataset file: " + path.string());
    }
    std::vector<Record> records;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            records.push_back(parse(json::parse(line)));
        } catch (const MissingImage&) {
            throw;
        } catch (const UnknownCategory&) {
            throw;
        } catch (const std::exception& e) {
            throw MalformedRecord(line_no, e.what());
        }
    }
    return records;
}

void check_image_exists(const std::filesystem::path& dataset_file, const std::string& image_path) {
    if (!std::filesystem::exists(resolve_dataset_path(dataset_file, image_path))) {
        throw MissingImage(image_path);
    }
}

}  // namespace

std::string to_string(SponsorVariant v) {
    switch (v) {
        case SponsorVariant::no_sponsor_product: return "no_sponsor_product";
        case SponsorVariant::product_no_logo: return "product_no_logo";
        case SponsorVariant::product_wrong_logo: return "product_wrong_logo";
    }
    throw InvalidArgument("bad SponsorVariant value");
}

SponsorVariant sponsor_variant_from_string(const std::string& s) {
    if (s == "no_sponsor_product") return SponsorVariant::no_sponsor_product;
    if (s == "product_no_logo") return SponsorVariant::product_no_logo;
    if (s == "product_wrong_logo") return SponsorVariant::product_wrong_logo;
    throw InvalidArgument("unknown variant: " + s);
}

std::filesystem::path resolve_dataset_path(const std::filesystem::path& dataset_file,
                                           const std::string& image_path) {
    const std::filesystem::path p(image_path);
    if (p.is_absolute()) return p;
    return dataset_file.parent_path() / p;
}

std::vector<DatasetRecordA> load_dataset_a(const std::filesystem::path& path,
                                           const CategoryTaxonomy& taxonomy) {
    return load_lines<DatasetRecordA>(path, [&](const json& j) {
        check_schema_version(j);
        DatasetRecordA rec;
        rec.image_path = j.at("image_path").get<std::string>();
        rec.plausible_categories = j.at("plausible_categories").get<std::vector<std::string>>();
        if (rec.plausible_categories.empty()) {
            throw InvalidArgument("plausible_categories must be non-empty");
        }
        for (const auto& c : rec.plausible_categories) {
            if (!taxonomy.contains(c)) {
                throw UnknownCategory(c);
            }
        }
        rec.gt_box = box_from_json(j.at("gt_box"));
        rec.locale = j.at("locale").get<std::string>();
        if (j.contains("safety_flags")) {
            for (const auto& f : j.at("safety_flags")) {
                rec.safety_flags.insert(f.get<std::string>());
            }
        }
        if (j.contains("object_masks")) {
            for (const auto& m : j.at("object_masks")) {
                ObjectMask om;
                om.mask = mask_from_json(m);
                if (m.contains("tags")) {
                    om.tags = m.at("tags").get<std::vector<std::string>>();
                }
                rec.object_masks.push_back(std::move(om));
            }
        }
        check_image_exists(path, rec.image_path);
        return rec;
    });
}

std::vector<DatasetRecordB> load_dataset_b(const std::filesystem::path& path) {
    return load_lines<DatasetRecordB>(path, [&](const json& j) {
        check_schema_version(j);
        DatasetRecordB rec;
        rec.image_path = j.at("image_path").get<std::string>();
        rec.variant = sponsor_variant_from_string(j.at("variant").get<std::string>());
        rec.product_category = j.at("product_category").get<std::string>();
        const bool has_box = j.contains("gt_box");
        const bool has_mask = j.contains("gt_mask");
        const bool has_sponsor = j.contains("sponsor_id");
        if (rec.variant == SponsorVariant::no_sponsor_product) {
            if (has_box || has_mask || has_sponsor) {
                throw InvalidArgument(
                    "no_sponsor_product records must not carry gt_box/gt_mask/sponsor_id");
            }
        } else {
            if (!has_box || !has_mask || !has_sponsor) {
                throw InvalidArgument(
                    "sponsor-product records must carry gt_box, gt_mask and sponsor_id");
            }
        }
        if (has_box) rec.gt_box = box_from_json(j.at("gt_box"));
        if (has_mask) rec.gt_mask = mask_from_json(j.at("gt_mask"));
        if (has_sponsor) rec.sponsor_id = j.at("sponsor_id").get<std::string>();
        check_image_exists(path, rec.image_path);
        return rec;
    });
}

std::string serialize_record(const DatasetRecordA& record) {
    json j;
    j["schema_version"] = kDatasetSchemaVersion;
    j["image_path"] = record.image_path;
    j["plausible_categories"] = record.plausible_categories;
    j["gt_box"] = box_to_json(record.gt_box);
    j["locale"] = record.locale;
    j["safety_flags"] = record.safety_flags;
    if (!record.object_masks.empty()) {
        json masks = json::array();
        for (const auto& om : record.object_masks) {
            json m = mask_to_json(om.mask);
            if (!om.tags.empty()) m["tags"] = om.tags;
            masks.push_back(std::move(m));
        }
        j["object_masks"] = std::move(masks);
    }
    return j.dump();
}

std::string serialize_record(const DatasetRecordB& record) {
    json j;
    j["schema_version"] = kDatasetSchemaVersion;
    j["image_path"] = record.image_path;
    j["variant"] = to_string(record.variant);
    j["product_category"] = record.product_category;
    if (record.gt_box) j["gt_box"] = box_to_json(*record.gt_box);
    if (record.gt_mask) j["gt_mask"] = mask_to_json(*record.gt_mask);
    if (record.sponsor_id) j["sponsor_id"] = *record.sponsor_id;
    return j.dump();
}

namespace {

template <typename Record>
void save_lines(const std::filesystem::path& path, const std::vector<Record>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write dataset file: " + path.string());
    }
    for (const auto& r : records) {
        out << serialize_record(r) << '\n';
    }
}

}  // namespace

void save_dataset_a(const std::filesystem::path& path, const std::vector<DatasetRecordA>& records) {
    save_lines(path, records);
}

void save_dataset_b(const std::filesystem::path& path, const std::vector<DatasetRecordB>& records) {
    save_lines(path, records);
}

std::vector<SponsorSpec> load_sponsor_registry(const std::filesystem::path& path) {
    return load_lines<SponsorSpec>(path, [&](const json& j) {
        check_schema_version(j);
        SponsorSpec spec;
        spec.sponsor_id = j.at("sponsor_id").get<std::string>();
        spec.product_description = j.at("product_description").get<std::string>();
        if (j.contains("logo_prompt")) spec.logo_prompt = j.at("logo_prompt").get<std::string>();
        if (j.contains("logo_asset")) spec.logo_asset = j.at("logo_asset").get<std::string>();
        if (j.contains("product_keywords")) {
            spec.product_keywords = j.at("product_keywords").get<std::vector<std::string>>();
        }
        spec.validate();
        return spec;
    });
}

std::string serialize_record(const SponsorSpec& spec) {
    json j;
    j["schema_version"] = kDatasetSchemaVersion;
    j["sponsor_id"] = spec.sponsor_id;
    j["product_description"] = spec.product_description;
    if (!spec.logo_prompt.empty()) j["logo_prompt"] = spec.logo_prompt;
    if (spec.logo_asset) j["logo_asset"] = *spec.logo_asset;
    if (!spec.product_keywords.empty()) j["product_keywords"] = spec.product_keywords;
    return j.dump();
}

void save_sponsor_registry(const std::filesystem::path& path,
                           const std::vector<SponsorSpec>& sponsors) {
    save_lines(path, sponsors);
}

SummaryReport dataset_summary(const std::vector<DatasetRecordA>& records) {
    SummaryReport report;
    report.total_records = static_cast<int>(records.size());
    for (const auto& r : records) {
        report.locale_histogram[r.locale] += 1;
        for (const auto& f : r.safety_flags) {
            report.safety_flag_counts[f] += 1;
        }
    }
    return report;
}

SummaryReport dataset_summary(const std::vector<DatasetRecordB>& records) {
    SummaryReport report;
    report.total_records = static_cast<int>(records.size());
    for (const auto& r : records) {
        report.variant_counts[to_string(r.variant)] += 1;
    }
    return report;
}

}  // namespace adpipe
