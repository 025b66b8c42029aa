#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adpipe/types.hpp"

namespace adpipe {

inline constexpr int kDatasetSchemaVersion = 1;

/// Object-insertion dataset record: a scene, the categories a human judged
/// plausible for insertion, and one ground-truth placement box. Scene object
/// masks (with optional tags such as "important") ride along for the
/// collision scorer.
struct DatasetRecordA {
    std::string image_path;
    std::vector<std::string> plausible_categories;
    PlacementBox gt_box;
    std::string locale;
    std::set<std::string> safety_flags;
    std::vector<ObjectMask> object_masks;
};

enum class SponsorVariant {
    no_sponsor_product,
    product_no_logo,
    product_wrong_logo,
};

std::string to_string(SponsorVariant v);
SponsorVariant sponsor_variant_from_string(const std::string& s);

/// Sponsor-augmentation dataset record. The three variants and the
/// presence/absence coupling of gt_box / gt_mask / sponsor_id are a hard
/// invariant: annotations exist exactly when a sponsor product is in frame.
struct DatasetRecordB {
    std::string image_path;
    SponsorVariant variant = SponsorVariant::no_sponsor_product;
    std::string product_category;
    std::optional<PlacementBox> gt_box;
    std::optional<BinaryMask> gt_mask;
    std::optional<std::string> sponsor_id;

    bool has_sponsor_product() const { return variant != SponsorVariant::no_sponsor_product; }
};

/// Loads a line-delimited Dataset A file. Every record is validated against
/// the type invariants and its categories against the taxonomy; image paths
/// are checked to exist relative to the dataset root (the file's directory).
/// Throws MalformedRecord / MissingImage / UnknownCategory.
std::vector<DatasetRecordA> load_dataset_a(const std::filesystem::path& path,
                                           const CategoryTaxonomy& taxonomy);

std::vector<DatasetRecordB> load_dataset_b(const std::filesystem::path& path);

/// Canonical one-line serialization (key-sorted JSON, no whitespace). A
/// loaded record re-serializes to the exact bytes it was loaded from.
std::string serialize_record(const DatasetRecordA& record);
std::string serialize_record(const DatasetRecordB& record);

void save_dataset_a(const std::filesystem::path& path, const std::vector<DatasetRecordA>& records);
void save_dataset_b(const std::filesystem::path& path, const std::vector<DatasetRecordB>& records);

/// Sponsor registry: line-delimited SponsorSpec records in the same format.
std::vector<SponsorSpec> load_sponsor_registry(const std::filesystem::path& path);
std::string serialize_record(const SponsorSpec& spec);
void save_sponsor_registry(const std::filesystem::path& path,
                           const std::vector<SponsorSpec>& sponsors);

/// Aggregate counts over a validated dataset. Histogram keys iterate in
/// sorted order, so reports are deterministic.
struct SummaryReport {
    std::map<std::string, int> locale_histogram;
    std::map<std::string, int> safety_flag_counts;
    std::map<std::string, int> variant_counts;
    int total_records = 0;
};

SummaryReport dataset_summary(const std::vector<DatasetRecordA>& records);
SummaryReport dataset_summary(const std::vector<DatasetRecordB>& records);

std::filesystem::path resolve_dataset_path(const std::filesystem::path& dataset_file,
                                           const std::string& image_path);

}  // namespace adpipe
