// Acceptance suite: runs every release criterion end to end and prints one
// pass/fail line per criterion. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

#include "adpipe/compositing.hpp"
#include "adpipe/dataset.hpp"
#include "adpipe/evaluation.hpp"
#include "adpipe/image_io.hpp"
#include "adpipe/placement.hpp"
#include "adpipe/sponsor.hpp"
#include "adpipe/suggestion.hpp"
#include "adpipe/synthetic.hpp"
#include "../parser_cases.hpp"
#include "../poisson_oracle.hpp"
#include "../support.hpp"

namespace fs = std::filesystem;
using namespace adpipe;
using nlohmann::json;

namespace {

struct CriterionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool condition, const std::string& message) {
    if (!condition) throw CriterionFailure(message);
}

class Harness {
public:
    void run(const std::string& id, const std::string& name,
             const std::function<void()>& body, double budget_seconds = 0.0) {
        const auto start = std::chrono::steady_clock::now();
        std::string failure;
        try {
            body();
        } catch (const std::exception& e) {
            failure = e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (failure.empty() && budget_seconds > 0.0 && elapsed > budget_seconds) {
            std::ostringstream msg;
            msg << "runtime " << elapsed << "s exceeds budget " << budget_seconds << "s";
            failure = msg.str();
        }
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(2);
        if (failure.empty()) {
            line << "[PASS] " << id << ": " << name << " (" << elapsed << "s)";
        } else {
            line << "[FAIL] " << id << ": " << name << " (" << elapsed << "s) - " << failure;
            ++failures_;
        }
        std::cout << line.str() << "\n";
    }

    int finish() const {
        std::cout << (failures_ == 0 ? "ALL CRITERIA PASSED" : "CRITERIA FAILED") << "\n";
        return failures_ == 0 ? 0 : 1;
    }

private:
    int failures_ = 0;
};

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd =
        std::string(ADPIPE_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    if (status == -1) return -1;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<fs::path> sorted_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    return files;
}

// Pixel-counting IoU oracle over the 64x64 grid.
double pixel_iou_64(const PlacementBox& a, const PlacementBox& b) {
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

CutoutObject random_cutout(std::mt19937& rng, int w, int h) {
    CutoutObject cut;
    cut.width = w;
    cut.height = h;
    cut.rgb.resize(static_cast<std::size_t>(w) * h * 3);
    cut.alpha.resize(static_cast<std::size_t>(w) * h);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto& b : cut.rgb) b = static_cast<std::uint8_t>(rng() % 256);
    for (auto& a : cut.alpha) a = unit(rng);
    return cut;
}

}  // namespace

int main() {
    Harness harness;
    const fs::path work = testsupport::make_temp_dir("acceptance");
    const synthetic::FixtureTree tree =
        synthetic::write_fixture_tree(work / "fixtures", testsupport::template_dir());

    // 1. Geometry oracle equivalence.
    harness.run("C1", "analytic IoU equals the pixel-counting oracle on 1000 integer pairs", [&] {
        std::mt19937 rng(2024);
        std::uniform_int_distribution<int> coord(0, 64);
        auto random_box = [&] {
            for (;;) {
                int x0 = coord(rng), x1 = coord(rng), y0 = coord(rng), y1 = coord(rng);
                if (x0 > x1) std::swap(x0, x1);
                if (y0 > y1) std::swap(y0, y1);
                if (x0 < x1 && y0 < y1)
                    return PlacementBox{double(x0), double(y0), double(x1), double(y1)};
            }
        };
        for (int trial = 0; trial < 1000; ++trial) {
            const PlacementBox a = random_box();
            const PlacementBox b = random_box();
            const double analytic = iou(a, b);
            const double counted = pixel_iou_64(a, b);
            expect(analytic == counted, "IoU mismatch at trial " + std::to_string(trial));
        }
    }, 5.0);

    // 2. Compositing invariants on random scenes.
    harness.run("C2", "compositing invariants hold on 50 random scenes", [&] {
        std::mt19937 rng(77);
        std::uniform_int_distribution<int> pos(4, 30);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int trial = 0; trial < 50; ++trial) {
            const SceneImage scene = testsupport::random_scene(rng, 48, 48);
            const int bw = 10, bh = 10;
            const int ox = pos(rng), oy = pos(rng);
            const PlacementBox box{double(ox), double(oy), double(ox + bw), double(oy + bh)};
            const CutoutObject cut = random_cutout(rng, bw, bh);

            expect(alpha_composite(scene, cut, box, 0.0).pixels == scene.pixels,
                   "opacity 0 must be byte-identical to the input");

            const SceneImage alpha_out = alpha_composite(scene, cut, box, unit(rng));
            const SceneImage seamless_out = seamless_clone(scene, cut, box);
            for (int y = 0; y < 48; ++y) {
                for (int x = 0; x < 48; ++x) {
                    const bool inside = x >= ox && x < ox + bw && y >= oy && y < oy + bh;
                    if (inside) continue;
                    expect(alpha_out.at(x, y) == scene.at(x, y),
                           "alpha mode touched a pixel outside the box");
                    expect(seamless_out.at(x, y) == scene.at(x, y),
                           "seamless mode touched a pixel outside the box");
                }
            }
            const SceneImage full = alpha_composite(scene, cut, box, 1.0);
            for (int y = 0; y < bh; ++y) {
                for (int x = 0; x < bw; ++x) {
                    const Rgb fg = cut.rgb_at(x, y);
                    const Rgb bg = scene.at(ox + x, oy + y);
                    const Rgb o = full.at(ox + x, oy + y);
                    const bool convex =
                        o.r >= std::min(fg.r, bg.r) && o.r <= std::max(fg.r, bg.r) &&
                        o.g >= std::min(fg.g, bg.g) && o.g <= std::max(fg.g, bg.g) &&
                        o.b >= std::min(fg.b, bg.b) && o.b <= std::max(fg.b, bg.b);
                    expect(convex, "channel left the [min(fg,bg), max(fg,bg)] interval");
                }
            }
        }
    }, 10.0);

    // 3. Poisson oracle.
    harness.run("C3", "seamless clone matches the dense Poisson solve; self-clone is fixed", [&] {
        const SceneImage scene = SceneImage::create(24, 24, Rgb{60, 60, 60});
        CutoutObject cut;
        cut.width = 10;
        cut.height = 10;
        cut.rgb.resize(10 * 10 * 3);
        cut.alpha.assign(100, 1.0);
        // Curved channels give the Poisson system a nontrivial right-hand
        // side; a linear ramp would make the constant scene already exact.
        for (int y = 0; y < 10; ++y) {
            for (int x = 0; x < 10; ++x) {
                cut.rgb[(y * 10 + x) * 3 + 0] = static_cast<std::uint8_t>(2 * x * x);
                cut.rgb[(y * 10 + x) * 3 + 1] = static_cast<std::uint8_t>(100 + 10 * x);
                cut.rgb[(y * 10 + x) * 3 + 2] = static_cast<std::uint8_t>(2 * y * y + x);
            }
        }
        const PlacementBox box{7, 7, 17, 17};  // 8x8 interior: the 64-unknown system
        const SeamlessField field = seamless_clone_field(scene, cut, box);
        const auto oracle = testsupport::dense_poisson_oracle(scene, cut, box);
        for (int c = 0; c < 3; ++c) {
            double err = 0.0;
            for (int ry = 1; ry < 9; ++ry)
                for (int rx = 1; rx < 9; ++rx)
                    err += std::abs(field.planes[c][ry * 10 + rx] -
                                    oracle[c][(ry - 1) * 8 + (rx - 1)]);
            err /= 64.0;
            expect(err < 1e-2, "channel " + std::to_string(c) + " MAE " + std::to_string(err) +
                                   " exceeds 1e-2");
        }

        // Self-clone fixed point.
        std::mt19937 rng(5);
        const SceneImage noisy = testsupport::random_scene(rng, 24, 24);
        CutoutObject self;
        self.width = 10;
        self.height = 10;
        self.rgb.resize(10 * 10 * 3);
        self.alpha.assign(100, 1.0);
        for (int y = 0; y < 10; ++y) {
            for (int x = 0; x < 10; ++x) {
                const Rgb p = noisy.at(7 + x, 7 + y);
                self.rgb[(y * 10 + x) * 3 + 0] = p.r;
                self.rgb[(y * 10 + x) * 3 + 1] = p.g;
                self.rgb[(y * 10 + x) * 3 + 2] = p.b;
            }
        }
        expect(seamless_clone(noisy, self, box).pixels == noisy.pixels,
               "self-clone must reproduce the scene exactly");
    }, 30.0);

    // 4. Metric hand-check.
    harness.run("C4", "classification metrics match the hand-computed values", [&] {
        ConfusionMatrix cm({"a", "b"});
        cm.set(0, 0, 8);
        cm.set(0, 1, 2);
        cm.set(1, 0, 4);
        cm.set(1, 1, 6);
        expect(std::abs(accuracy(cm) - 0.70) < 1e-3, "accuracy != 0.70");
        expect(std::abs(balanced_accuracy(cm) - 0.70) < 1e-3, "balanced accuracy != 0.70");
        expect(std::abs(macro_f1(cm) - 0.6970) < 1e-3, "macro F1 != 0.6970");

        ConfusionMatrix diag({"a", "b", "c"});
        diag.set(0, 0, 5);
        diag.set(1, 1, 2);
        diag.set(2, 2, 9);
        expect(accuracy(diag) == 1.0 && balanced_accuracy(diag) == 1.0 && macro_f1(diag) == 1.0,
               "diagonal matrix must score exactly 1.0");
    });

    // 5. Two-stage harness property.
    harness.run("C5", "two-stage beats the collapse mock on both diversity metrics", [&] {
        MockVlm vlm(synthetic::standard_vlm_script());
        std::vector<std::pair<std::string, SceneImage>> images;
        for (int i = 0; i < synthetic::kInsertionSceneCount; ++i) {
            images.emplace_back("scene_" + std::to_string(i),
                                synthetic::make_insertion_scene(i));
        }
        const CategoryTaxonomy tax = synthetic::taxonomy();
        const DiversityMetrics two = diversity_metrics(sample_suggestions(
            images, tax, vlm, testsupport::prompts(), PromptingStrategy::two_stage, 3));
        const DiversityMetrics one = diversity_metrics(sample_suggestions(
            images, tax, vlm, testsupport::prompts(), PromptingStrategy::single_stage, 3));
        expect(two.avg_unique_per_image > one.avg_unique_per_image,
               "two-stage avg-unique must be strictly higher");
        expect(two.repetition_rate < one.repetition_rate,
               "two-stage repetition must be strictly lower");
    });

    // 6. Sponsor gating.
    harness.run("C6", "sponsor gating is exact and edits stay inside the mask", [&] {
        auto vlm = std::make_shared<MockVlm>(synthetic::standard_vlm_script());
        auto generator = std::make_shared<MockGenerator>();
        BackendSet backends;
        backends.vlm = vlm;
        backends.generator = generator;
        backends.detector =
            std::make_shared<MockDetector>(synthetic::standard_detector_config());
        backends.embedder =
            std::make_shared<MockEmbedder>(synthetic::standard_embedder_affinities());
        SponsorParams params;
        params.generation_size = 32;

        const auto registry = synthetic::sponsors();
        for (int i = 0; i < synthetic::kSponsorSceneCount; ++i) {
            const DatasetRecordB record = synthetic::make_sponsor_record(i);
            const SceneImage scene = synthetic::make_sponsor_scene(i);
            const int gen_before = generator->call_count();
            const SponsorOutput output =
                run_sponsor_pipeline(scene, registry, backends, testsupport::prompts(), params);
            expect(output.decision.present() == record.has_sponsor_product(),
                   "gating wrong on fixture " + std::to_string(i));
            if (!record.has_sponsor_product()) {
                expect(generator->call_count() == gen_before,
                       "generator invoked for a no-sponsor image");
                expect(output.image.pixels == scene.pixels,
                       "no-sponsor output must be the unchanged input");
                expect(output.scores.empty(), "no-sponsor run must have empty scores");
            } else {
                expect(output.selected_mask.has_value(), "edit path must select a mask");
                for (const auto& [x, y] : pixel_diff(output.image, scene)) {
                    expect(output.selected_mask->at(x, y),
                           "pixel diff escaped the selected mask");
                }
            }
        }
    });

    // 7. End-to-end determinism through the CLI.
    harness.run("C7", "insert and sponsor runs are byte-identical across 3 invocations", [&] {
        const std::string config = tree.config.string();
        const std::string scene = tree.scene_images[0].string();
        const std::string sponsor_scene = tree.sponsor_images[3].string();
        const std::string registry = tree.sponsor_registry.string();

        std::vector<fs::path> insert_dirs, sponsor_dirs;
        for (int run = 0; run < 3; ++run) {
            const fs::path ins = work / ("insert_run" + std::to_string(run));
            const fs::path spo = work / ("sponsor_run" + std::to_string(run));
            int rc = run_cli("insert --config " + config + " --image " + scene +
                             " --box 8,22,28,42 --output-dir " + ins.string() +
                             " --dump-stages",
                             work / ("insert" + std::to_string(run) + ".log"));
            expect(rc == 0, "insert run exited " + std::to_string(rc));
            rc = run_cli("sponsor --config " + config + " --image " + sponsor_scene +
                         " --registry " + registry + " --output-dir " + spo.string() +
                         " --dump-stages",
                         work / ("sponsor" + std::to_string(run) + ".log"));
            expect(rc == 0, "sponsor run exited " + std::to_string(rc));
            insert_dirs.push_back(ins);
            sponsor_dirs.push_back(spo);
        }
        for (const auto& dirs : {insert_dirs, sponsor_dirs}) {
            const auto reference = sorted_files(dirs[0]);
            expect(!reference.empty(), "first run produced no files");
            for (int run = 1; run < 3; ++run) {
                const auto files = sorted_files(dirs[run]);
                expect(files.size() == reference.size(), "file sets differ across runs");
                for (std::size_t i = 0; i < files.size(); ++i) {
                    expect(files[i].filename() == reference[i].filename(),
                           "file names differ across runs");
                    expect(testsupport::file_bytes(files[i]) ==
                               testsupport::file_bytes(reference[i]),
                           "bytes differ for " + files[i].filename().string());
                }
            }
        }
    });

    // 8. Dataset validation.
    harness.run("C8", "all 7 crafted violations rejected; valid records round-trip", [&] {
        expect(tree.invalid_files.size() == 7, "expected 7 violation fixtures");
        for (std::size_t i = 0; i < tree.invalid_files.size(); ++i) {
            const auto& path = tree.invalid_files[i];
            const auto& expected = tree.invalid_expected[i];
            const bool is_b = path.filename().string().find("variant") != std::string::npos;
            std::string got = "none";
            try {
                if (is_b) {
                    load_dataset_b(path);
                } else {
                    load_dataset_a(path, synthetic::taxonomy());
                }
            } catch (const MalformedRecord&) {
                got = "MalformedRecord";
            } catch (const MissingImage&) {
                got = "MissingImage";
            } catch (const UnknownCategory&) {
                got = "UnknownCategory";
            }
            expect(got == expected, path.filename().string() + " raised " + got +
                                        ", expected " + expected);
        }

        // Round trip: serialized form of every loaded record equals its line.
        const auto records = load_dataset_a(tree.dataset_a, synthetic::taxonomy());
        std::ifstream in(tree.dataset_a);
        std::string line;
        std::size_t i = 0;
        while (std::getline(in, line)) {
            expect(i < records.size(), "more lines than records");
            expect(serialize_record(records[i]) == line,
                   "record " + std::to_string(i) + " did not round-trip byte-identically");
            ++i;
        }
        const auto records_b = load_dataset_b(tree.dataset_b);
        std::ifstream in_b(tree.dataset_b);
        i = 0;
        while (std::getline(in_b, line)) {
            expect(serialize_record(records_b[i]) == line,
                   "B record " + std::to_string(i) + " did not round-trip");
            ++i;
        }
    });

    // 9. Parser conformance.
    harness.run("C9", "category parser passes the 20-case conformance table", [&] {
        const CategoryTaxonomy tax = synthetic::taxonomy();
        const auto& cases = testsupport::parser_conformance_cases();
        expect(cases.size() == 20, "conformance table must hold 20 cases");
        for (const auto& c : cases) {
            if (c.expected_error.empty()) {
                const auto parsed = parse_category_response(c.response, tax);
                expect(parsed == c.expected, "wrong parse for: " + c.response);
            } else {
                std::string got = "none";
                try {
                    parse_category_response(c.response, tax);
                } catch (const UnparseableResponse&) {
                    got = "UnparseableResponse";
                } catch (const UnknownCategory&) {
                    got = "UnknownCategory";
                }
                expect(got == c.expected_error,
                       "case '" + c.response + "' raised " + got + ", expected " +
                           c.expected_error);
            }
        }
    });

    // 10. Report shape.
    harness.run("C10", "evaluate emits the six table-shaped, provenance-tagged sections", [&] {
        const fs::path out = work / "evaluate";
        const int rc = run_cli(
            "evaluate --config " + tree.config.string() + " --dataset-a " +
                tree.dataset_a.string() + " --dataset-b " + tree.dataset_b.string() +
                " --registry " + tree.sponsor_registry.string() + " --human-composite " +
                tree.human_composite.string() + " --human-logo " + tree.human_logo.string() +
                " --ablate " + tree.ablation_grid.string() + " --output-dir " + out.string(),
            work / "evaluate.log");
        expect(rc == 0, "evaluate exited " + std::to_string(rc));

        const json report = json::parse(testsupport::file_bytes(out / "report.json"));
        const std::vector<std::string> wanted = {
            "category_prediction", "object_suggestion", "box_prediction",
            "composite_realism",   "sponsor_augmentation", "ablation"};
        expect(report.at("sections").size() == wanted.size(), "wrong section count");
        for (std::size_t i = 0; i < wanted.size(); ++i) {
            expect(report.at("sections")[i].at("id") == wanted[i],
                   "section " + std::to_string(i) + " is not " + wanted[i]);
        }
        int reference_cells = 0, computed_cells = 0, ingested_cells = 0;
        for (const auto& section : report.at("sections")) {
            for (const auto& row : section.at("rows")) {
                expect(row.at("cells").size() == section.at("columns").size(),
                       "row/column arity mismatch in " +
                           section.at("id").get<std::string>());
                for (const auto& cell : row.at("cells")) {
                    const std::string provenance = cell.at("provenance").get<std::string>();
                    if (provenance == "paper-constant") {
                        ++reference_cells;
                        expect(cell.contains("citation") &&
                                   cell.at("citation").get<std::string>().rfind("Table ", 0) ==
                                       0,
                               "reference cell lacks its table citation");
                    } else if (provenance == "computed") {
                        ++computed_cells;
                    } else if (provenance == "ingested") {
                        ++ingested_cells;
                    } else {
                        expect(false, "unknown provenance tag: " + provenance);
                    }
                }
            }
        }
        expect(reference_cells >= 20, "expected reference cells in every section");
        expect(computed_cells >= 10, "expected computed cells from the live run");
        expect(ingested_cells >= 2, "expected ingested human-score cells");
        // The ablation grid ran all four configured rows.
        const auto& ablation = report.at("sections")[5];
        expect(ablation.at("rows").size() >= 8, "ablation grid incomplete");
    });

    const int rc = harness.finish();
    fs::remove_all(work);
    return rc;
}
