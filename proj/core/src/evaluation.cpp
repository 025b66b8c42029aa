#include "adpipe/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "adpipe/placement.hpp"

namespace adpipe {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) {
        throw InvalidArgument("confusion matrix needs at least one label");
    }
    counts_.assign(labels_.size() * labels_.size(), 0);
}

std::size_t ConfusionMatrix::index(const std::string& label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw UnknownCategory(label);
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

void ConfusionMatrix::add(const std::string& true_label, const std::string& predicted_label) {
    counts_[index(true_label) * labels_.size() + index(predicted_label)] += 1;
}

long long ConfusionMatrix::at(std::size_t row, std::size_t col) const {
    return counts_.at(row * labels_.size() + col);
}

void ConfusionMatrix::set(std::size_t row, std::size_t col, long long count) {
    if (count < 0) {
        throw InvalidArgument("confusion matrix counts must be non-negative");
    }
    counts_.at(row * labels_.size() + col) = count;
}

long long ConfusionMatrix::total() const {
    long long t = 0;
    for (long long c : counts_) t += c;
    return t;
}

long long ConfusionMatrix::row_total(std::size_t row) const {
    long long t = 0;
    for (std::size_t col = 0; col < labels_.size(); ++col) t += at(row, col);
    return t;
}

long long ConfusionMatrix::col_total(std::size_t col) const {
    long long t = 0;
    for (std::size_t row = 0; row < labels_.size(); ++row) t += at(row, col);
    return t;
}

std::vector<std::string> ConfusionMatrix::empty_classes() const {
    std::vector<std::string> out;
    for (std::size_t row = 0; row < labels_.size(); ++row) {
        if (row_total(row) == 0) out.push_back(labels_[row]);
    }
    return out;
}

namespace {

void require_nonempty(const ConfusionMatrix& cm) {
    if (cm.total() == 0) {
        throw EmptyMatrix("confusion matrix has no observations");
    }
}

}  // namespace

double accuracy(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    long long diag = 0;
    for (std::size_t i = 0; i < cm.size(); ++i) diag += cm.at(i, i);
    return static_cast<double>(diag) / static_cast<double>(cm.total());
}

double balanced_accuracy(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    double sum = 0.0;
    int classes = 0;
    for (std::size_t i = 0; i < cm.size(); ++i) {
        const long long row = cm.row_total(i);
        if (row == 0) continue;  // empty classes are excluded
        sum += static_cast<double>(cm.at(i, i)) / static_cast<double>(row);
        ++classes;
    }
    return sum / classes;
}

double macro_f1(const ConfusionMatrix& cm) {
    require_nonempty(cm);
    double sum = 0.0;
    int classes = 0;
    for (std::size_t i = 0; i < cm.size(); ++i) {
        const long long row = cm.row_total(i);
        if (row == 0) continue;
        const long long col = cm.col_total(i);
        const double recall = static_cast<double>(cm.at(i, i)) / static_cast<double>(row);
        const double precision =
            col == 0 ? 0.0 : static_cast<double>(cm.at(i, i)) / static_cast<double>(col);
        const double f1 =
            (precision + recall) == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
        sum += f1;
        ++classes;
    }
    return sum / classes;
}

ConfusionMatrix category_eval(const std::vector<DatasetRecordA>& records,
                              const std::vector<std::string>& predictions,
                              const CategoryTaxonomy& taxonomy) {
    if (records.size() != predictions.size()) {
        throw LengthMismatch("need exactly one prediction per record");
    }
    ConfusionMatrix cm(taxonomy.categories());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        const auto& pred = predictions[i];
        if (!taxonomy.contains(pred)) {
            throw UnknownCategory(pred);
        }
        const std::string& canonical = rec.plausible_categories.front();
        const bool correct = std::find(rec.plausible_categories.begin(),
                                       rec.plausible_categories.end(),
                                       pred) != rec.plausible_categories.end();
        cm.add(canonical, correct ? canonical : pred);
    }
    return cm;
}

std::string normalize_phrase(const std::string& phrase) {
    std::string s = to_lower(phrase);
    for (const char* article : {"a ", "an ", "the "}) {
        const std::size_t len = std::string(article).size();
        if (s.rfind(article, 0) == 0) {
            s = s.substr(len);
            break;
        }
    }
    return s;
}

DiversityMetrics diversity_metrics(const std::map<std::string, std::vector<std::string>>& runs) {
    if (runs.empty()) {
        throw EmptyRun("diversity metrics over an empty run");
    }
    double unique_sum = 0.0;
    std::set<std::string> global_unique;
    std::size_t total = 0;
    for (const auto& [image_id, phrases] : runs) {
        if (phrases.empty()) {
            throw EmptyRun("image " + image_id + " has no suggestions");
        }
        std::set<std::string> local;
        for (const auto& p : phrases) {
            const std::string n = normalize_phrase(p);
            local.insert(n);
            global_unique.insert(n);
        }
        unique_sum += static_cast<double>(local.size());
        total += phrases.size();
    }
    DiversityMetrics m;
    m.avg_unique_per_image = unique_sum / static_cast<double>(runs.size());
    m.repetition_rate =
        1.0 - static_cast<double>(global_unique.size()) / static_cast<double>(total);
    return m;
}

std::vector<HumanAnnotation> load_human_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw MalformedAnnotationFile("cannot open annotation file: " + path.string());
    }
    std::vector<HumanAnnotation> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            HumanAnnotation a;
            a.image_id = j.at("image_id").get<std::string>();
            a.rater_id = j.at("rater_id").get<std::string>();
            a.score = j.at("score").get<int>();
            if (a.score < 1 || a.score > 5) {
                throw InvalidArgument("score must be 1..5");
            }
            out.push_back(std::move(a));
        } catch (const std::exception& e) {
            throw MalformedAnnotationFile("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

double mean_human_score(const std::vector<HumanAnnotation>& annotations) {
    if (annotations.empty()) {
        throw EmptyInput("no human annotations");
    }
    double sum = 0.0;
    for (const auto& a : annotations) sum += a.score;
    return sum / static_cast<double>(annotations.size());
}

RealismScores realism_scores(const std::vector<SceneImage>& composites,
                             const std::vector<SceneImage>& originals, EmbedderBackend& embedder,
                             VlmBackend& vlm, const PromptLibrary& prompts,
                             const std::optional<std::filesystem::path>& human_file) {
    if (composites.size() != originals.size()) {
        throw MisalignedInputs("composite/original lists differ in length");
    }
    if (composites.empty()) {
        throw EmptyInput("no composites to score");
    }
    RealismScores scores;
    double clip_sum = 0.0;
    double vlm_sum = 0.0;
    for (std::size_t i = 0; i < composites.size(); ++i) {
        clip_sum += cosine_similarity(embedder.embed_image(composites[i]),
                                      embedder.embed_image(originals[i]));
        vlm_sum += parse_rating(vlm.answer(composites[i], prompts.realism_rating()));
    }
    scores.clip_realism = clip_sum / static_cast<double>(composites.size());
    scores.vlm_plausibility = vlm_sum / static_cast<double>(composites.size());
    if (human_file) {
        scores.human_mean = mean_human_score(load_human_annotations(*human_file));
    }
    return scores;
}

SponsorEvalResult sponsor_eval(const std::vector<DatasetRecordB>& records,
                               const std::vector<SponsorOutput>& outputs,
                               const std::optional<std::filesystem::path>& human_file) {
    if (records.size() != outputs.size()) {
        throw LengthMismatch("need exactly one pipeline output per record");
    }
    if (records.empty()) {
        throw EmptyInput("no sponsor records to evaluate");
    }
    SponsorEvalResult result;
    int correct = 0;
    double iou_sum = 0.0;
    int iou_count = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const bool expected = records[i].has_sponsor_product();
        // "undetermined" never counts as a correct presence call.
        const bool predicted = outputs[i].decision.present();
        if (predicted == expected && outputs[i].decision.presence != Presence::undetermined) {
            ++correct;
        }
        if (records[i].gt_mask && outputs[i].selected_mask) {
            iou_sum += mask_iou(*outputs[i].selected_mask, *records[i].gt_mask);
            ++iou_count;
        }
    }
    result.detection_accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
    if (iou_count > 0) {
        result.segmentation_iou = iou_sum / iou_count;
    }
    if (human_file) {
        result.human_logo_mean = mean_human_score(load_human_annotations(*human_file));
    }
    return result;
}

std::vector<AblationResult> run_ablation(const std::vector<AblationRow>& grid,
                                         const AblationInputs& inputs) {
    if (inputs.records.size() != inputs.images.size()) {
        throw LengthMismatch("ablation needs one decoded image per record");
    }
    std::vector<AblationResult> results;
    for (const auto& row : grid) {
        AblationResult result;
        result.row = row;
        try {
            const auto vlm_it = inputs.vlm_pool.find(row.vlm_name);
            if (vlm_it == inputs.vlm_pool.end()) {
                throw ConfigError("ablation row names unknown VLM: " + row.vlm_name);
            }
            VlmBackend& vlm = *vlm_it->second;

            std::vector<std::string> predictions;
            double clip_sum = 0.0;
            for (std::size_t i = 0; i < inputs.records.size(); ++i) {
                const auto& rec = inputs.records[i];
                const auto& image = inputs.images[i];
                SuggestOptions options;
                options.roi_box = rec.gt_box;
                SuggestionResult suggestion =
                    row.prompting == PromptingStrategy::two_stage
                        ? two_stage_suggest(image, inputs.taxonomy, vlm, inputs.prompts, options)
                        : single_stage_suggest(image, inputs.taxonomy, vlm, inputs.prompts,
                                               options);
                predictions.push_back(suggestion.chosen_category);

                const CompositeOutput composite = insert_object(
                    image, suggestion, rec.gt_box, inputs.generator, inputs.prompts,
                    inputs.insert_params);
                clip_sum += cosine_similarity(inputs.embedder.embed_image(composite.image),
                                              inputs.embedder.embed_image(image));
            }
            result.category_accuracy =
                accuracy(category_eval(inputs.records, predictions, inputs.taxonomy));
            result.realism = clip_sum / static_cast<double>(inputs.records.size());
        } catch (const std::exception& e) {
            result.failed = true;
            result.error = e.what();
        }
        results.push_back(std::move(result));
    }
    return results;
}

}  // namespace adpipe
