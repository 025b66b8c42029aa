// adpipe: context-aware object insertion and sponsor logo augmentation.
//
// Subcommands map one-to-one onto the toolkit's experiments: insert,
// sponsor, evaluate, ablate, dataset-summary, plus make-fixtures for a
// self-contained demo tree. Exit codes: 0 success, 2 configuration or input
// format, 3 backend failure, 4 pipeline/metric failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "adpipe/backend_registry.hpp"
#include "adpipe/compositing.hpp"
#include "adpipe/config.hpp"
#include "adpipe/dataset.hpp"
#include "adpipe/evaluation.hpp"
#include "adpipe/hash.hpp"
#include "adpipe/image_io.hpp"
#include "adpipe/parallel.hpp"
#include "adpipe/placement.hpp"
#include "adpipe/prompts.hpp"
#include "adpipe/report.hpp"
#include "adpipe/sponsor.hpp"
#include "adpipe/suggestion.hpp"
#include "adpipe/synthetic.hpp"

namespace {

using adpipe::RunConfig;
using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitConfig = 2;
constexpr int kExitBackend = 3;
constexpr int kExitPipeline = 4;

struct CommonFlags {
    std::string config_path;
    std::string output_dir;
    bool dump_stages = false;
    int jobs = 1;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> blend_mode;
    std::optional<std::string> prompting;
    std::optional<std::string> box_source;
};

void add_override_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--seed", flags.seed, "Override the config seed");
    cmd->add_option("--blend-mode", flags.blend_mode, "alpha|seamless");
    cmd->add_option("--prompting", flags.prompting, "single|two-stage");
    cmd->add_option("--box-source", flags.box_source, "gt|predicted");
}

RunConfig load_config_with_overrides(const CommonFlags& flags) {
    RunConfig config = adpipe::load_run_config(flags.config_path);
    if (flags.seed) config.seed = *flags.seed;
    if (flags.blend_mode) config.blend_mode = adpipe::blend_mode_from_string(*flags.blend_mode);
    if (flags.prompting) {
        config.prompting = adpipe::prompting_strategy_from_string(*flags.prompting);
    }
    if (flags.box_source) config.box_source = adpipe::box_source_from_string(*flags.box_source);
    return config;
}

adpipe::InsertParams insert_params_from(const RunConfig& config) {
    adpipe::InsertParams params;
    params.mode = config.blend_mode;
    params.opacity = config.opacity;
    params.generation_size = config.generation_size;
    params.seed = config.seed;
    params.matting = config.matting;
    params.seamless = config.seamless;
    return params;
}

adpipe::SponsorParams sponsor_params_from(const RunConfig& config) {
    adpipe::SponsorParams params;
    params.logo_source = config.logo_source;
    params.mode = config.blend_mode;
    params.opacity = config.opacity;
    params.seed = config.seed;
    params.generation_size = std::min(config.generation_size, 256);
    params.matting = config.matting;
    params.seamless = config.seamless;
    return params;
}

json provenance_json(const RunConfig& config, const adpipe::BackendSet& backends,
                     const adpipe::PromptLibrary& prompts,
                     const std::map<std::string, std::string>& extra) {
    json j;
    j["config_checksum"] = config.checksum;
    j["seed"] = config.seed;
    j["backends"] = {
        {"vlm", backends.vlm->descriptor().id},
        {"detector", backends.detector->descriptor().id},
        {"generator", backends.generator->descriptor().id},
        {"embedder", backends.embedder->descriptor().id},
    };
    j["template_checksums"] = prompts.checksums();
    for (const auto& [k, v] : extra) {
        j[k] = v;
    }
    return j;
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw adpipe::ConfigError("cannot write output file: " + path.string());
    }
    out << content;
}

std::map<std::string, std::string> provenance_map_from(const RunConfig& config,
                                                       const adpipe::BackendSet& backends) {
    return {
        {"config_checksum", config.checksum},
        {"seed", std::to_string(config.seed)},
        {"vlm", backends.vlm->descriptor().id},
        {"detector", backends.detector->descriptor().id},
        {"generator", backends.generator->descriptor().id},
        {"embedder", backends.embedder->descriptor().id},
    };
}

adpipe::PlacementBox parse_box_flag(const std::string& spec) {
    std::vector<double> values;
    std::stringstream in(spec);
    std::string part;
    while (std::getline(in, part, ',')) {
        values.push_back(std::stod(part));
    }
    if (values.size() != 4) {
        throw adpipe::ConfigError("--box expects x_min,y_min,x_max,y_max");
    }
    adpipe::PlacementBox box{values[0], values[1], values[2], values[3]};
    if (!box.is_valid()) {
        throw adpipe::ConfigError("--box has zero or negative extent");
    }
    return box;
}

int effective_jobs(int requested, const adpipe::BackendSet& backends) {
    int jobs = std::max(1, requested);
    for (int limit : {backends.vlm->descriptor().max_concurrency,
                      backends.detector->descriptor().max_concurrency,
                      backends.generator->descriptor().max_concurrency,
                      backends.embedder->descriptor().max_concurrency}) {
        if (limit > 0) jobs = std::min(jobs, limit);
    }
    return jobs;
}

// Distinguishes input/validation failures (exit 2) from runtime pipeline
// failures (backend 3, everything else 4).
template <typename Fn>
int run_load_phase(Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const adpipe::Error& e) {
        std::cerr << "error (input): " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error (input): " << e.what() << "\n";
        return kExitConfig;
    }
}

template <typename Fn>
int run_pipeline_phase(Fn&& fn) {
    try {
        fn();
        return 0;
    } catch (const adpipe::BackendError& e) {
        std::cerr << "error (backend";
        if (e.stage() >= 0) std::cerr << ", stage " << e.stage();
        std::cerr << "): " << e.what() << "\n";
        return kExitBackend;
    } catch (const adpipe::Error& e) {
        std::cerr << "error (pipeline";
        if (e.stage() >= 0) std::cerr << ", stage " << e.stage();
        std::cerr << "): " << e.what() << "\n";
        return kExitPipeline;
    } catch (const std::exception& e) {
        std::cerr << "error (pipeline): " << e.what() << "\n";
        return kExitPipeline;
    }
}

json box_json(const adpipe::PlacementBox& box) {
    return json{{"x_min", box.x_min}, {"y_min", box.y_min}, {"x_max", box.x_max},
                {"y_max", box.y_max}};
}

// --- insert -----------------------------------------------------------------

int cmd_insert(const CommonFlags& flags, const std::string& image_path,
               const std::string& box_flag) {
    RunConfig config;
    adpipe::BackendSet backends;
    std::optional<adpipe::PromptLibrary> prompts;
    adpipe::SceneImage scene;
    std::optional<adpipe::PlacementBox> given_box;

    const int load_rc = run_load_phase([&] {
        config = load_config_with_overrides(flags);
        prompts = adpipe::PromptLibrary::load_dir(config.template_dir);
        backends = adpipe::make_backends(config);
        scene = adpipe::load_ppm(image_path);
        if (!box_flag.empty()) {
            given_box = parse_box_flag(box_flag);
        }
        if (config.box_source == adpipe::BoxSource::gt && !given_box) {
            throw adpipe::ConfigError("--box-source gt needs an explicit --box for insert");
        }
        fs::create_directories(flags.output_dir);
    });
    if (load_rc != 0) return load_rc;

    return run_pipeline_phase([&] {
        adpipe::SuggestOptions options;
        if (config.box_source == adpipe::BoxSource::gt) {
            options.roi_box = given_box;
        }
        const adpipe::SuggestionResult suggestion =
            config.prompting == adpipe::PromptingStrategy::two_stage
                ? adpipe::two_stage_suggest(scene, config.taxonomy, *backends.vlm, *prompts,
                                            options)
                : adpipe::single_stage_suggest(scene, config.taxonomy, *backends.vlm, *prompts,
                                               options);

        adpipe::PlacementBox box{};
        if (config.box_source == adpipe::BoxSource::gt) {
            box = *given_box;
        } else {
            box = adpipe::predict_placement(scene, suggestion.chosen_category, *backends.detector,
                                            config.taxonomy)
                      .first;
        }

        const adpipe::CompositeOutput output = adpipe::insert_object(
            scene, suggestion, box, *backends.generator, *prompts, insert_params_from(config));

        const fs::path out_dir(flags.output_dir);
        adpipe::save_ppm(output.image, out_dir / "composite.ppm");
        if (flags.dump_stages) {
            for (const auto& [name, image] : output.stage_artifacts) {
                adpipe::save_ppm(image, out_dir / (name + ".ppm"));
            }
        }

        json meta;
        meta["command"] = "insert";
        meta["image"] = image_path;
        meta["seed"] = config.seed;
        meta["prompt"] = output.request.prompt;
        meta["negative_prompt"] = output.request.negative_prompt;
        meta["box"] = box_json(box);
        meta["box_source"] = adpipe::to_string(config.box_source);
        meta["blend_mode"] = adpipe::to_string(config.blend_mode);
        meta["prompting"] = adpipe::to_string(config.prompting);
        meta["chosen_category"] = suggestion.chosen_category;
        meta["object_phrase"] = suggestion.object_phrase;
        meta["backends"] = provenance_json(config, backends, *prompts, {})["backends"];
        meta["template_checksums"] = prompts->checksums();
        write_file(out_dir / "composite_meta.json", meta.dump(2) + "\n");
        write_file(out_dir / "run_provenance.json",
                   provenance_json(config, backends, *prompts, {{"command", "insert"}}).dump(2) +
                       "\n");
        std::cout << "composite written: " << (out_dir / "composite.ppm").string() << "\n";
    });
}

// --- sponsor ----------------------------------------------------------------

int cmd_sponsor(const CommonFlags& flags, const std::string& image_path,
                const std::string& registry_path) {
    RunConfig config;
    adpipe::BackendSet backends;
    std::optional<adpipe::PromptLibrary> prompts;
    adpipe::SceneImage scene;
    std::vector<adpipe::SponsorSpec> sponsors;

    const int load_rc = run_load_phase([&] {
        config = load_config_with_overrides(flags);
        prompts = adpipe::PromptLibrary::load_dir(config.template_dir);
        backends = adpipe::make_backends(config);
        scene = adpipe::load_ppm(image_path);
        sponsors = adpipe::load_sponsor_registry(registry_path);
        fs::create_directories(flags.output_dir);
    });
    if (load_rc != 0) return load_rc;

    return run_pipeline_phase([&] {
        const adpipe::SponsorOutput output = adpipe::run_sponsor_pipeline(
            scene, sponsors, backends, *prompts, sponsor_params_from(config));

        const fs::path out_dir(flags.output_dir);
        adpipe::save_ppm(output.image, out_dir / "augmented.ppm");
        if (flags.dump_stages) {
            for (const auto& [name, image] : output.stage_artifacts) {
                adpipe::save_ppm(image, out_dir / (name + ".ppm"));
            }
        }

        json meta;
        meta["command"] = "sponsor";
        meta["image"] = image_path;
        meta["seed"] = config.seed;
        meta["presence"] = adpipe::to_string(output.decision.presence);
        meta["coarse_location"] = output.decision.coarse_location;
        if (output.decision.sponsor_id) meta["sponsor_id"] = *output.decision.sponsor_id;
        if (!output.decision.note.empty()) meta["note"] = output.decision.note;
        if (output.selected_box) meta["selected_box"] = box_json(*output.selected_box);
        if (!output.mask_source.empty()) meta["mask_source"] = output.mask_source;
        json scores = json::array();
        for (const auto& s : output.scores) {
            scores.push_back({{"label", s.label},
                              {"detector_confidence", s.detector_confidence},
                              {"clip_similarity", s.clip_similarity},
                              {"box", box_json(s.box)}});
        }
        meta["region_scores"] = std::move(scores);
        meta["blend_mode"] = adpipe::to_string(config.blend_mode);
        write_file(out_dir / "sponsor_meta.json", meta.dump(2) + "\n");
        write_file(out_dir / "run_provenance.json",
                   provenance_json(config, backends, *prompts, {{"command", "sponsor"}}).dump(2) +
                       "\n");
        std::cout << "presence: " << adpipe::to_string(output.decision.presence)
                  << ", output written: " << (out_dir / "augmented.ppm").string() << "\n";
    });
}

// --- evaluate / ablate --------------------------------------------------------

struct CannedPrediction {
    std::string category;
    std::optional<adpipe::PlacementBox> box;
};

std::map<std::string, CannedPrediction> load_predictions(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw adpipe::ConfigError("cannot open predictions file: " + path.string());
    }
    std::map<std::string, CannedPrediction> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json j = json::parse(line);
            CannedPrediction p;
            p.category = j.at("category").get<std::string>();
            if (j.contains("box")) {
                const json& b = j.at("box");
                p.box = adpipe::PlacementBox{b.at("x_min").get<double>(),
                                             b.at("y_min").get<double>(),
                                             b.at("x_max").get<double>(),
                                             b.at("y_max").get<double>()};
            }
            out[j.at("image_path").get<std::string>()] = std::move(p);
        } catch (const std::exception& e) {
            throw adpipe::MalformedRecord(line_no, e.what());
        }
    }
    return out;
}

std::vector<adpipe::AblationRow> load_ablation_grid(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw adpipe::ConfigError("cannot open ablation grid: " + path.string());
    }
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw adpipe::ConfigError("ablation grid is not valid JSON: " + std::string(e.what()));
    }
    std::vector<adpipe::AblationRow> grid;
    for (const auto& row : j) {
        adpipe::AblationRow r;
        r.prompting =
            adpipe::prompting_strategy_from_string(row.at("prompting").get<std::string>());
        r.vlm_name = row.at("vlm").get<std::string>();
        grid.push_back(std::move(r));
    }
    return grid;
}

struct EvaluateArgs {
    std::string dataset_a;
    std::string dataset_b;
    std::string registry;
    std::string predictions;
    std::string human_composite;
    std::string human_logo;
    std::string ablate;
};

int cmd_evaluate(const CommonFlags& flags, const EvaluateArgs& args) {
    RunConfig config;
    adpipe::BackendSet backends;
    std::optional<adpipe::PromptLibrary> prompts;

    std::vector<adpipe::DatasetRecordA> records_a;
    std::vector<adpipe::SceneImage> images_a;
    std::vector<adpipe::DatasetRecordB> records_b;
    std::vector<adpipe::SceneImage> images_b;
    std::vector<adpipe::SponsorSpec> sponsors;
    std::map<std::string, CannedPrediction> canned;
    std::vector<adpipe::AblationRow> grid;
    std::map<std::string, std::string> extra_provenance;

    const int load_rc = run_load_phase([&] {
        config = load_config_with_overrides(flags);
        prompts = adpipe::PromptLibrary::load_dir(config.template_dir);
        backends = adpipe::make_backends(config);
        if (!args.dataset_a.empty()) {
            records_a = adpipe::load_dataset_a(args.dataset_a, config.taxonomy);
            for (const auto& rec : records_a) {
                adpipe::SceneImage image =
                    adpipe::load_ppm(adpipe::resolve_dataset_path(args.dataset_a, rec.image_path));
                image.object_masks = rec.object_masks;
                image.validate();
                images_a.push_back(std::move(image));
            }
            extra_provenance["dataset_a_checksum"] = adpipe::file_checksum(args.dataset_a);
        }
        if (!args.dataset_b.empty()) {
            if (args.registry.empty()) {
                throw adpipe::ConfigError("--dataset-b needs --registry");
            }
            records_b = adpipe::load_dataset_b(args.dataset_b);
            for (const auto& rec : records_b) {
                images_b.push_back(adpipe::load_ppm(
                    adpipe::resolve_dataset_path(args.dataset_b, rec.image_path)));
            }
            sponsors = adpipe::load_sponsor_registry(args.registry);
            extra_provenance["dataset_b_checksum"] = adpipe::file_checksum(args.dataset_b);
        }
        if (!args.predictions.empty()) {
            canned = load_predictions(args.predictions);
        }
        if (!args.ablate.empty()) {
            grid = load_ablation_grid(args.ablate);
        }
        fs::create_directories(flags.output_dir);
    });
    if (load_rc != 0) return load_rc;

    return run_pipeline_phase([&] {
        adpipe::ReportInputs inputs;
        inputs.vlm_id = backends.vlm->descriptor().id;
        inputs.detector_id = backends.detector->descriptor().id;
        const int jobs = effective_jobs(flags.jobs, backends);
        const adpipe::InsertParams insert_params = insert_params_from(config);

        if (!args.dataset_a.empty()) {
            if (records_a.empty()) {
                throw adpipe::EmptyInput("dataset A has no records");
            }
            std::vector<std::string> predictions(records_a.size());
            std::vector<std::optional<adpipe::PlacementBox>> pred_boxes(records_a.size());
            std::vector<double> context(records_a.size(), -1.0);
            std::vector<adpipe::PlacementAssessment> assessments(records_a.size());
            std::vector<adpipe::SceneImage> composites(records_a.size());
            bool live = canned.empty();

            if (live) {
                adpipe::parallel_for(records_a.size(), jobs, [&](std::size_t i) {
                    const auto& rec = records_a[i];
                    const auto& image = images_a[i];
                    adpipe::SuggestOptions options;
                    options.roi_box = rec.gt_box;
                    const adpipe::SuggestionResult suggestion =
                        config.prompting == adpipe::PromptingStrategy::two_stage
                            ? adpipe::two_stage_suggest(image, config.taxonomy, *backends.vlm,
                                                        *prompts, options)
                            : adpipe::single_stage_suggest(image, config.taxonomy, *backends.vlm,
                                                           *prompts, options);
                    predictions[i] = suggestion.chosen_category;
                    const auto [box, confidence] = adpipe::predict_placement(
                        image, suggestion.chosen_category, *backends.detector, config.taxonomy);
                    (void)confidence;
                    pred_boxes[i] = box;
                    context[i] = adpipe::contextual_plausibility(
                        image, box, suggestion.chosen_category, *backends.vlm, *prompts);
                    adpipe::PlacementAssessment assessment;
                    assessment.iou = adpipe::iou(box, rec.gt_box);
                    assessment.context_score = context[i];
                    assessment.collision_flags =
                        adpipe::collision_score(box, image, config.collision);
                    assessments[i] = std::move(assessment);

                    const adpipe::PlacementBox composite_box =
                        config.box_source == adpipe::BoxSource::gt ? rec.gt_box : box;
                    composites[i] = adpipe::insert_object(image, suggestion, composite_box,
                                                          *backends.generator, *prompts,
                                                          insert_params)
                                        .image;
                });
            } else {
                for (std::size_t i = 0; i < records_a.size(); ++i) {
                    const auto it = canned.find(records_a[i].image_path);
                    if (it == canned.end()) {
                        throw adpipe::LengthMismatch("no canned prediction for " +
                                                     records_a[i].image_path);
                    }
                    predictions[i] = it->second.category;
                    pred_boxes[i] = it->second.box;
                }
            }

            const adpipe::ConfusionMatrix cm =
                adpipe::category_eval(records_a, predictions, config.taxonomy);
            inputs.category_accuracy = adpipe::accuracy(cm);
            inputs.category_balanced_accuracy = adpipe::balanced_accuracy(cm);
            inputs.category_macro_f1 = adpipe::macro_f1(cm);

            std::vector<std::pair<adpipe::PlacementBox, adpipe::PlacementBox>> iou_pairs;
            std::vector<std::tuple<std::string, adpipe::PlacementBox, adpipe::PlacementBox>>
                labeled;
            for (std::size_t i = 0; i < records_a.size(); ++i) {
                if (!pred_boxes[i]) continue;
                iou_pairs.emplace_back(*pred_boxes[i], records_a[i].gt_box);
                labeled.emplace_back(predictions[i], *pred_boxes[i], records_a[i].gt_box);
            }
            if (!iou_pairs.empty()) {
                inputs.mean_iou = adpipe::mean_iou(iou_pairs);
                inputs.per_category_iou = adpipe::per_category_iou(labeled);
            }

            if (live) {
                double context_sum = 0.0;
                for (double c : context) context_sum += c;
                inputs.context_score = context_sum / static_cast<double>(context.size());
                inputs.collision_rate = adpipe::dataset_collision_rate(assessments);

                // Per-image assessment records, one line each, for downstream
                // tooling.
                std::ostringstream assessment_lines;
                for (std::size_t i = 0; i < records_a.size(); ++i) {
                    json line;
                    line["image_path"] = records_a[i].image_path;
                    line["category"] = predictions[i];
                    line["predicted_box"] = box_json(*pred_boxes[i]);
                    line["iou"] = assessments[i].iou;
                    line["context_score"] = assessments[i].context_score;
                    json flag_list = json::array();
                    for (const auto flag : assessments[i].collision_flags) {
                        flag_list.push_back(adpipe::to_string(flag));
                    }
                    line["collision_flags"] = std::move(flag_list);
                    assessment_lines << line.dump() << "\n";
                }
                fs::create_directories(flags.output_dir);
                write_file(fs::path(flags.output_dir) / "assessments.jsonl",
                           assessment_lines.str());

                std::vector<std::pair<std::string, adpipe::SceneImage>> keyed;
                for (std::size_t i = 0; i < records_a.size(); ++i) {
                    keyed.emplace_back(records_a[i].image_path, images_a[i]);
                }
                inputs.two_stage_diversity = adpipe::diversity_metrics(adpipe::sample_suggestions(
                    keyed, config.taxonomy, *backends.vlm, *prompts,
                    adpipe::PromptingStrategy::two_stage, config.samples_per_image));
                inputs.single_stage_diversity =
                    adpipe::diversity_metrics(adpipe::sample_suggestions(
                        keyed, config.taxonomy, *backends.vlm, *prompts,
                        adpipe::PromptingStrategy::single_stage, config.samples_per_image));

                std::optional<fs::path> human;
                if (!args.human_composite.empty()) human = fs::path(args.human_composite);
                inputs.realism = adpipe::realism_scores(composites, images_a, *backends.embedder,
                                                        *backends.vlm, *prompts, human);
            }
        }

        if (!args.dataset_b.empty()) {
            if (records_b.empty()) {
                throw adpipe::EmptyInput("dataset B has no records");
            }
            const adpipe::SponsorParams sponsor_params = sponsor_params_from(config);
            std::vector<adpipe::SponsorOutput> outputs(records_b.size());
            adpipe::parallel_for(records_b.size(), jobs, [&](std::size_t i) {
                outputs[i] = adpipe::run_sponsor_pipeline(images_b[i], sponsors, backends,
                                                          *prompts, sponsor_params);
            });
            std::optional<fs::path> human;
            if (!args.human_logo.empty()) human = fs::path(args.human_logo);
            inputs.sponsor = adpipe::sponsor_eval(records_b, outputs, human);
        }

        if (!grid.empty()) {
            if (records_a.empty()) {
                throw adpipe::EmptyInput("ablation needs dataset A records");
            }
            const auto vlm_pool = adpipe::make_vlm_pool(config, backends);
            adpipe::AblationInputs ablation_inputs{
                config.taxonomy, *prompts,           records_a,
                images_a,        vlm_pool,           *backends.generator,
                *backends.embedder, insert_params};
            inputs.ablation = adpipe::run_ablation(grid, ablation_inputs);
        }

        auto provenance = provenance_map_from(config, backends);
        for (const auto& [k, v] : extra_provenance) provenance[k] = v;
        const adpipe::EvalReport report = adpipe::build_standard_report(inputs, provenance);

        const fs::path out_dir(flags.output_dir);
        write_file(out_dir / "report.json", adpipe::report_to_json(report) + "\n");
        const std::string text = adpipe::render_report_text(report);
        write_file(out_dir / "report.txt", text);
        write_file(
            out_dir / "run_provenance.json",
            provenance_json(config, backends, *prompts, extra_provenance).dump(2) + "\n");
        std::cout << text;
    });
}

// --- dataset-summary ----------------------------------------------------------

int cmd_dataset_summary(const CommonFlags& flags, const std::string& dataset_path,
                        const std::string& schema) {
    RunConfig config;
    adpipe::SummaryReport summary;
    const int load_rc = run_load_phase([&] {
        config = load_config_with_overrides(flags);
        if (schema == "A") {
            summary = adpipe::dataset_summary(adpipe::load_dataset_a(dataset_path, config.taxonomy));
        } else if (schema == "B") {
            summary = adpipe::dataset_summary(adpipe::load_dataset_b(dataset_path));
        } else {
            throw adpipe::ConfigError("--schema must be A or B");
        }
    });
    if (load_rc != 0) return load_rc;

    std::cout << "records: " << summary.total_records << "\n";
    if (!summary.locale_histogram.empty()) {
        std::cout << "locales:\n";
        for (const auto& [locale, count] : summary.locale_histogram) {
            std::cout << "  " << locale << ": " << count << "\n";
        }
    }
    if (!summary.safety_flag_counts.empty()) {
        std::cout << "safety flags:\n";
        for (const auto& [flag, count] : summary.safety_flag_counts) {
            std::cout << "  " << flag << ": " << count << "\n";
        }
    }
    if (!summary.variant_counts.empty()) {
        std::cout << "variants:\n";
        for (const auto& [variant, count] : summary.variant_counts) {
            std::cout << "  " << variant << ": " << count << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Context-aware object insertion and sponsor logo augmentation toolkit"};
    app.require_subcommand(1);

    // insert
    CommonFlags insert_flags;
    std::string insert_image, insert_box;
    auto* insert = app.add_subcommand("insert", "Suggest, generate and composite an object");
    insert->add_option("--config", insert_flags.config_path, "Run config JSON")->required();
    insert->add_option("--image", insert_image, "Scene image (PPM)")->required();
    insert->add_option("--output-dir", insert_flags.output_dir, "Output directory")->required();
    insert->add_option("--box", insert_box, "Placement box x_min,y_min,x_max,y_max");
    insert->add_flag("--dump-stages", insert_flags.dump_stages, "Write per-stage images");
    add_override_flags(insert, insert_flags);

    // sponsor
    CommonFlags sponsor_flags;
    std::string sponsor_image, sponsor_registry;
    auto* sponsor = app.add_subcommand("sponsor", "Detect sponsor products and place logos");
    sponsor->add_option("--config", sponsor_flags.config_path, "Run config JSON")->required();
    sponsor->add_option("--image", sponsor_image, "Scene image (PPM)")->required();
    sponsor->add_option("--registry", sponsor_registry, "Sponsor registry JSONL")->required();
    sponsor->add_option("--output-dir", sponsor_flags.output_dir, "Output directory")->required();
    sponsor->add_flag("--dump-stages", sponsor_flags.dump_stages, "Write per-stage images");
    add_override_flags(sponsor, sponsor_flags);

    // evaluate
    CommonFlags eval_flags;
    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "Run the metric suites and emit reports");
    evaluate->add_option("--config", eval_flags.config_path, "Run config JSON")->required();
    evaluate->add_option("--output-dir", eval_flags.output_dir, "Output directory")->required();
    evaluate->add_option("--dataset-a", eval_args.dataset_a, "Object-insertion dataset JSONL");
    evaluate->add_option("--dataset-b", eval_args.dataset_b, "Sponsor dataset JSONL");
    evaluate->add_option("--registry", eval_args.registry, "Sponsor registry JSONL");
    evaluate->add_option("--predictions", eval_args.predictions, "Canned predictions JSONL");
    evaluate->add_option("--human-composite", eval_args.human_composite,
                         "Human realism annotations JSONL");
    evaluate->add_option("--human-logo", eval_args.human_logo,
                         "Human logo-realism annotations JSONL");
    evaluate->add_option("--ablate", eval_args.ablate, "Ablation grid JSON");
    evaluate->add_option("--jobs", eval_flags.jobs, "Worker count for batch stages");
    add_override_flags(evaluate, eval_flags);

    // ablate (evaluate restricted to the grid)
    CommonFlags ablate_flags;
    EvaluateArgs ablate_args;
    auto* ablate = app.add_subcommand("ablate", "Run only the ablation grid");
    ablate->add_option("--config", ablate_flags.config_path, "Run config JSON")->required();
    ablate->add_option("--output-dir", ablate_flags.output_dir, "Output directory")->required();
    ablate->add_option("--dataset-a", ablate_args.dataset_a, "Object-insertion dataset JSONL")
        ->required();
    ablate->add_option("--grid", ablate_args.ablate, "Ablation grid JSON")->required();
    ablate->add_option("--jobs", ablate_flags.jobs, "Worker count for batch stages");
    add_override_flags(ablate, ablate_flags);

    // dataset-summary
    CommonFlags summary_flags;
    std::string summary_dataset, summary_schema;
    auto* summary = app.add_subcommand("dataset-summary", "Validate a dataset and print counts");
    summary->add_option("--config", summary_flags.config_path, "Run config JSON")->required();
    summary->add_option("--dataset", summary_dataset, "Dataset JSONL")->required();
    summary->add_option("--schema", summary_schema, "A or B")->required();

    // make-fixtures
    std::string fixtures_dir;
    std::string fixtures_templates = ADPIPE_SOURCE_TEMPLATE_DIR;
    auto* fixtures = app.add_subcommand("make-fixtures", "Write the synthetic demo tree");
    fixtures->add_option("--output-dir", fixtures_dir, "Target directory")->required();
    fixtures->add_option("--templates", fixtures_templates, "Prompt template source directory");

    CLI11_PARSE(app, argc, argv);

    if (insert->parsed()) return cmd_insert(insert_flags, insert_image, insert_box);
    if (sponsor->parsed()) return cmd_sponsor(sponsor_flags, sponsor_image, sponsor_registry);
    if (evaluate->parsed()) return cmd_evaluate(eval_flags, eval_args);
    if (ablate->parsed()) return cmd_evaluate(ablate_flags, ablate_args);
    if (summary->parsed()) return cmd_dataset_summary(summary_flags, summary_dataset,
                                                      summary_schema);
    if (fixtures->parsed()) {
        return run_load_phase([&] {
            const auto tree = adpipe::synthetic::write_fixture_tree(fixtures_dir,
                                                                    fixtures_templates);
            std::cout << "fixture tree written: " << tree.root.string() << "\n";
        });
    }
    return 0;
}
