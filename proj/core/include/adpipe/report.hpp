#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adpipe/evaluation.hpp"

namespace adpipe {

/// Where a report number came from. Every cell carries one of these;
/// reference (paper-constant) cells must also carry their table citation.
enum class CellProvenance { computed, ingested, paper_constant };

std::string to_string(CellProvenance p);

struct ReportCell {
    std::optional<double> value;  // absent renders as "-"
    CellProvenance provenance = CellProvenance::computed;
    std::string citation;  // e.g. "Table 3" for reference constants
};

ReportCell computed_cell(double value);
ReportCell ingested_cell(double value);
ReportCell reference_cell(double value, const std::string& citation);
ReportCell missing_cell();

struct ReportRow {
    std::string name;
    std::vector<ReportCell> cells;  // aligned with the section's columns
};

struct ReportSection {
    std::string id;     // machine key, e.g. "category_prediction"
    std::string title;  // rendered heading
    std::vector<std::string> columns;
    std::vector<ReportRow> rows;
    std::vector<std::string> notes;
};

struct EvalReport {
    std::vector<ReportSection> sections;
    std::map<std::string, std::string> provenance;  // config/dataset checksums, backend ids, seed
    std::vector<std::string> footnotes;
};

/// Inputs the standard report is assembled from; every field is optional so
/// partial runs still produce the sections they can fill.
struct ReportInputs {
    std::optional<double> category_accuracy;
    std::optional<double> category_balanced_accuracy;
    std::optional<double> category_macro_f1;
    std::string vlm_id;

    std::optional<DiversityMetrics> two_stage_diversity;
    std::optional<DiversityMetrics> single_stage_diversity;

    std::optional<double> mean_iou;
    std::optional<double> context_score;
    std::optional<double> collision_rate;
    std::map<std::string, double> per_category_iou;
    std::string detector_id;

    std::optional<RealismScores> realism;
    std::optional<SponsorEvalResult> sponsor;

    std::vector<AblationResult> ablation;  // empty = no ablation section
};

/// Builds the full report: computed rows from the inputs next to the
/// published reference rows (provenance-tagged, table-cited), with the
/// standard footnotes.
EvalReport build_standard_report(const ReportInputs& inputs,
                                 const std::map<std::string, std::string>& provenance);

/// Machine-readable form, full precision.
std::string report_to_json(const EvalReport& report);

/// Rendered text tables, two decimal places.
std::string render_report_text(const EvalReport& report);

}  // namespace adpipe
