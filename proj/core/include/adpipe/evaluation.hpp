#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adpipe/backends.hpp"
#include "adpipe/compositing.hpp"
#include "adpipe/dataset.hpp"
#include "adpipe/sponsor.hpp"
#include "adpipe/suggestion.hpp"

namespace adpipe {

/// Square confusion matrix over an ordered label space; rows are true
/// labels, columns predictions. All derived classification metrics consume
/// only this.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::vector<std::string> labels);

    void add(const std::string& true_label, const std::string& predicted_label);

    const std::vector<std::string>& labels() const { return labels_; }
    std::size_t size() const { return labels_.size(); }
    long long at(std::size_t row, std::size_t col) const;
    void set(std::size_t row, std::size_t col, long long count);
    long long total() const;
    long long row_total(std::size_t row) const;
    long long col_total(std::size_t col) const;

    /// Labels whose row is all-zero; excluded from balanced accuracy and
    /// macro F1 with a warning.
    std::vector<std::string> empty_classes() const;

private:
    std::size_t index(const std::string& label) const;

    std::vector<std::string> labels_;
    std::vector<long long> counts_;
};

double accuracy(const ConfusionMatrix& cm);
double balanced_accuracy(const ConfusionMatrix& cm);
double macro_f1(const ConfusionMatrix& cm);

/// Scores predictions against multi-label ground truth: a prediction
/// matching ANY annotated category is correct and is credited to the
/// record's canonical (first) label; otherwise the matrix records the
/// confusion from canonical label to prediction.
ConfusionMatrix category_eval(const std::vector<DatasetRecordA>& records,
                              const std::vector<std::string>& predictions,
                              const CategoryTaxonomy& taxonomy);

struct DiversityMetrics {
    double avg_unique_per_image = 0.0;
    double repetition_rate = 0.0;
};

/// Phrase normalization used by the diversity metrics: case-fold and strip
/// one leading article.
std::string normalize_phrase(const std::string& phrase);

/// avg_unique = mean over images of the count of distinct normalized
/// phrases; repetition = 1 - (globally distinct / total).
DiversityMetrics diversity_metrics(const std::map<std::string, std::vector<std::string>>& runs);

struct HumanAnnotation {
    std::string image_id;
    std::string rater_id;
    int score = 0;  // 1..5
};

std::vector<HumanAnnotation> load_human_annotations(const std::filesystem::path& path);
double mean_human_score(const std::vector<HumanAnnotation>& annotations);

struct RealismScores {
    double clip_realism = 0.0;
    double vlm_plausibility = 0.0;
    std::optional<double> human_mean;  // ingested, never computed
};

RealismScores realism_scores(const std::vector<SceneImage>& composites,
                             const std::vector<SceneImage>& originals, EmbedderBackend& embedder,
                             VlmBackend& vlm, const PromptLibrary& prompts,
                             const std::optional<std::filesystem::path>& human_file = {});

struct SponsorEvalResult {
    double detection_accuracy = 0.0;
    std::optional<double> segmentation_iou;  // absent when no record carries a gt mask
    std::optional<double> human_logo_mean;   // ingested
};

SponsorEvalResult sponsor_eval(const std::vector<DatasetRecordB>& records,
                               const std::vector<SponsorOutput>& outputs,
                               const std::optional<std::filesystem::path>& human_file = {});

// --- ablation grid -----------------------------------------------------------

struct AblationRow {
    PromptingStrategy prompting = PromptingStrategy::two_stage;
    std::string vlm_name;
};

struct AblationResult {
    AblationRow row;
    bool failed = false;
    std::string error;
    double category_accuracy = 0.0;
    double realism = 0.0;
};

struct AblationInputs {
    const CategoryTaxonomy& taxonomy;
    const PromptLibrary& prompts;
    /// Records paired with their decoded scenes, aligned.
    const std::vector<DatasetRecordA>& records;
    const std::vector<SceneImage>& images;
    /// Named VLM instances the grid rows select among.
    const std::map<std::string, std::shared_ptr<VlmBackend>>& vlm_pool;
    GeneratorBackend& generator;
    EmbedderBackend& embedder;
    InsertParams insert_params;
};

/// Runs each grid row end to end (suggestion accuracy + composite realism at
/// the annotated box). A failing row is recorded and the run continues.
std::vector<AblationResult> run_ablation(const std::vector<AblationRow>& grid,
                                         const AblationInputs& inputs);

}  // namespace adpipe
