#include "cfsep/cli.hpp"

#include "cfsep/data.hpp"
#include "cfsep/error.hpp"
#include "cfsep/image_io.hpp"
#include "cfsep/pipeline.hpp"
#include "cfsep/synth.hpp"
#include "cfsep/tune.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <map>
#include <optional>

namespace cfsep {
namespace {

namespace fs = std::filesystem;

nlohmann::json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw MissingAsset("cannot open '" + path.string() + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

void write_json_file(const nlohmann::json& j, const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << std::setw(2) << j << '\n';
}

/// Options shared by every command that runs the separation engine.
struct EngineOptions {
    std::string params_file;
    std::string preset = "optimal";
    std::vector<std::string> illu;
    std::string routing = "auto";
    std::string variant = "once";
    int workers = 0;

    void add_to(CLI::App* app) {
        app->add_option("--params", params_file, "Parameter JSON (missing keys use the preset)");
        app->add_option("--preset", preset, "Base parameters")->check(CLI::IsMember({"optimal", "initial"}));
        app->add_option("--illu", illu, "Illustration model, optionally strategy=path; repeatable");
        app->add_option("--routing", routing, "Separator detector")->check(CLI::IsMember({"auto", "band", "edge"}));
        app->add_option("--variant", variant, "Routing frequency")->check(CLI::IsMember({"once", "per-subfigure"}));
        app->add_option("--workers", workers, "Worker threads (default: CFSEP_WORKERS or all cores)");
    }

    CfsParams params() const {
        const CfsParams base = preset == "initial" ? CfsParams::initial() : CfsParams::optimal();
        return params_file.empty() ? base : params_from_json(read_json_file(params_file), base);
    }

    IlluModels models() const {
        IlluModels m;
        for (const std::string& spec : illu) {
            const auto eq = spec.find('=');
            if (eq == std::string::npos) {
                const IlluModel model = illu_model_from_json(read_json_file(spec));
                for (auto s : {MappingStrategy::First, MappingStrategy::Majority, MappingStrategy::Unanimous,
                               MappingStrategy::Greedy}) {
                    m.by_strategy.emplace(s, model);
                }
            } else {
                m.by_strategy[parse_strategy(spec.substr(0, eq))] =
                    illu_model_from_json(read_json_file(spec.substr(eq + 1)));
            }
        }
        return m;
    }

    std::optional<Routing> fixed_routing() const {
        if (routing == "band") return Routing::BandBased;
        if (routing == "edge") return Routing::EdgeBased;
        return std::nullopt;
    }

    Variant engine_variant() const {
        return variant == "per-subfigure" ? Variant::ClassifyPerSubfigure : Variant::ClassifyOnce;
    }

    int worker_count() const { return workers > 0 ? workers : default_workers(); }
};

std::vector<FigureAnnotation> separate_corpus(const Corpus& corpus, const std::vector<bool>& compound,
                                              const CfsParams& params, const EngineOptions& eo,
                                              const std::string& overlay_dir = {}) {
    const IlluModels models = eo.models();
    const auto routing = eo.fixed_routing();
    if (!routing && models.empty()) {
        throw DomainError("--routing auto needs at least one --illu model");
    }
    if (!overlay_dir.empty()) fs::create_directories(overlay_dir);
    std::vector<FigureAnnotation> out(corpus.entries.size());
    parallel_for(corpus.entries.size(), eo.worker_count(), [&](std::size_t i) {
        const CorpusEntry& e = corpus.entries[i];
        const GrayImage img = load_gray(corpus.image_file(e));
        out[i] = separate_figure(img, e.image_id, compound[i], params, &models, eo.engine_variant(), routing);
        if (!overlay_dir.empty()) {
            write_png(draw_overlay(img, out[i].rects), fs::path(overlay_dir) / (e.image_id + ".png"));
        }
    });
    return out;
}

std::vector<FigureAnnotation> load_ground_truth(const std::string& path) {
    if (fs::is_directory(path)) {
        return load_corpus(path).annotations();
    }
    return load_annotations(path);
}

LossMatrix loss_from_flags(double alpha, double threshold) {
    return threshold > 0.0 ? LossMatrix::from_threshold(threshold) : LossMatrix{alpha};
}

int cmd_synth(const std::string& spec_file, const std::string& out_dir, std::optional<int> count,
              std::optional<std::uint64_t> seed, std::ostream& out) {
    SynthSpec spec = spec_file.empty() ? SynthSpec{} : synth_spec_from_json(read_json_file(spec_file));
    if (count) spec.count = *count;
    if (seed) spec.seed = *seed;
    const Corpus c = write_synth_corpus(synth_generate(spec), out_dir);
    write_json_file(to_json(spec), fs::path(out_dir) / "synth_spec.json");
    out << "wrote " << c.entries.size() << " figures to " << out_dir << '\n';
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compound figure classification and separation"};
    app.require_subcommand(1);
    std::uint64_t seed_flag = 0;
    app.fallthrough();
    app.add_option("--seed", seed_flag, "Seed for every random choice");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
    std::string synth_spec;
    std::string synth_out;
    std::optional<int> synth_count;
    synth->add_option("--spec", synth_spec, "SynthSpec JSON");
    synth->add_option("--out", synth_out, "Output corpus directory")->required();
    synth->add_option("--count", synth_count, "Override the figure count");

    // features
    auto* features = app.add_subcommand("features", "Extract CFC features for a corpus");
    features->set_help_flag("--help", "Print this help message and exit");
    std::string feat_corpus;
    std::string feat_out;
    std::string feat_set = "434";
    int feat_k = 8;
    QuantizationParams qp;
    int feat_workers = 0;
    features->add_option("--corpus", feat_corpus)->required();
    features->add_option("--out", feat_out, "Feature JSONL")->required();
    features->add_option("--set", feat_set, "Three-digit feature set code");
    features->add_option("--k", feat_k, "Spatial bins");
    features->add_option("--p", qp.p, "Mean quantisation bins");
    features->add_option("--q", qp.q, "Variance quantisation bins");
    features->add_option("--h", qp.h, "Hough quantisation bins");
    features->add_option("--workers", feat_workers);

    // train-cfc
    auto* train_cfc = app.add_subcommand("train-cfc", "Train the compound figure classifier");
    std::string tc_features;
    std::string tc_out;
    std::string tc_algo = "logreg";
    LogRegOptions lr_opt;
    SvmOptions svm_opt;
    train_cfc->add_option("--features", tc_features, "Feature JSONL")->required();
    train_cfc->add_option("--out", tc_out, "Model JSON")->required();
    train_cfc->add_option("--algo", tc_algo)->check(CLI::IsMember({"logreg", "svm"}));
    train_cfc->add_option("--epochs", lr_opt.epochs);
    train_cfc->add_option("--lr", lr_opt.learning_rate);
    train_cfc->add_option("--l2", lr_opt.l2);
    train_cfc->add_option("--c", svm_opt.c);

    // train-illu
    auto* train_illu = app.add_subcommand("train-illu", "Train the illustration classifier");
    std::string ti_corpus;
    std::string ti_out;
    std::string ti_algo = "logreg";
    std::string ti_strategy = "greedy";
    std::string ti_kind = "simple2";
    double ti_threshold = CfsParams{}.decision_threshold;
    train_illu->add_option("--corpus", ti_corpus, "Corpus with meta labels")->required();
    train_illu->add_option("--out", ti_out, "Model JSON")->required();
    train_illu->add_option("--algo", ti_algo)->check(CLI::IsMember({"logreg", "svm"}));
    train_illu->add_option("--strategy", ti_strategy)
        ->check(CLI::IsMember({"first", "majority", "unanimous", "greedy"}));
    train_illu->add_option("--kind", ti_kind)->check(CLI::IsMember({"simple2", "simple11"}));
    train_illu->add_option("--threshold", ti_threshold, "Routing decision threshold")->check(CLI::Range(0.0, 1.0));

    // classify
    auto* classify = app.add_subcommand("classify", "Predict compound / non-compound");
    std::string cl_model;
    std::string cl_corpus;
    std::string cl_out;
    double cl_alpha = 1.0;
    double cl_threshold = 0.0;
    int cl_workers = 0;
    classify->add_option("--model", cl_model)->required();
    classify->add_option("--corpus", cl_corpus)->required();
    classify->add_option("--out", cl_out, "Predictions JSONL")->required();
    classify->add_option("--alpha", cl_alpha, "False-negative loss weight")->check(CLI::PositiveNumber);
    classify->add_option("--threshold", cl_threshold, "Decision threshold d (overrides --alpha)")
        ->check(CLI::Range(0.0, 1.0));
    classify->add_option("--workers", cl_workers);

    // separate
    auto* separate_cmd = app.add_subcommand("separate", "Separate compound figures");
    EngineOptions sep_opt;
    std::string sep_corpus;
    std::string sep_out;
    std::string sep_overlay;
    std::string sep_predictions;
    sep_opt.add_to(separate_cmd);
    separate_cmd->add_option("--corpus", sep_corpus)->required();
    separate_cmd->add_option("--out", sep_out, "Annotation JSONL")->required();
    separate_cmd->add_option("--overlay", sep_overlay, "Directory for overlay PNGs");
    separate_cmd->add_option("--predictions", sep_predictions, "CFC predictions; non-compound figures are kept whole");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Score separation output");
    std::string ev_gt;
    std::string ev_pred;
    std::string ev_protocol = "imageclef";
    std::string ev_report;
    evaluate->add_option("--gt", ev_gt, "Corpus directory or annotation JSONL")->required();
    evaluate->add_option("--pred", ev_pred, "Annotation JSONL")->required();
    evaluate->add_option("--protocol", ev_protocol)->check(CLI::IsMember({"imageclef", "nlm"}));
    evaluate->add_option("--report", ev_report, "Report JSON");

    // chain
    auto* chain = app.add_subcommand("chain", "Classify, separate and evaluate in one pass");
    EngineOptions ch_opt;
    std::string ch_corpus;
    std::string ch_cfc;
    std::string ch_mode = "model";
    double ch_alpha = 1.0;
    double ch_threshold = 0.0;
    std::string ch_protocol = "imageclef";
    std::string ch_out;
    std::string ch_report;
    ch_opt.add_to(chain);
    chain->add_option("--corpus", ch_corpus)->required();
    chain->add_option("--cfc", ch_cfc, "CFC model JSON");
    chain->add_option("--cfc-mode", ch_mode, "model, ideal (ground truth), none (all compound) or inverted")
        ->check(CLI::IsMember({"model", "ideal", "none", "inverted"}));
    chain->add_option("--alpha", ch_alpha)->check(CLI::PositiveNumber);
    chain->add_option("--threshold", ch_threshold, "Decision threshold d (overrides --alpha)")
        ->check(CLI::Range(0.0, 1.0));
    chain->add_option("--protocol", ch_protocol)->check(CLI::IsMember({"imageclef", "nlm"}));
    chain->add_option("--out", ch_out, "Annotation JSONL");
    chain->add_option("--report", ch_report, "Report JSON");

    // tune
    auto* tune_cmd = app.add_subcommand("tune", "Optimise separation parameters on a corpus");
    EngineOptions tu_opt;
    tu_opt.preset = "initial";
    std::string tu_corpus;
    std::string tu_space;
    std::string tu_out;
    std::string tu_trace;
    std::string tu_protocol = "imageclef";
    HillClimbOptions hc_opt;
    int tu_top = 5;
    tu_opt.add_to(tune_cmd);
    tune_cmd->add_option("--corpus", tu_corpus)->required();
    tune_cmd->add_option("--space", tu_space, "Search space JSON {name: [values]}")->required();
    tune_cmd->add_option("--out", tu_out, "Best parameters JSON")->required();
    tune_cmd->add_option("--trace", tu_trace, "Trace CSV");
    tune_cmd->add_option("--protocol", tu_protocol)->check(CLI::IsMember({"imageclef", "nlm"}));
    tune_cmd->add_option("--min-improvement", hc_opt.min_improvement, "Stop when a round gains no more");
    tune_cmd->add_option("--top", tu_top, "Parameters refined on the grid");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        err << app.help();
        return kExitUsage;
    }
    const std::optional<std::uint64_t> seed =
        app.count("--seed") > 0 ? std::optional<std::uint64_t>(seed_flag) : std::nullopt;

    try {
        if (*synth) {
            return cmd_synth(synth_spec, synth_out, synth_count, seed, out);
        }

        if (*features) {
            const FeatureSetSpec spec = FeatureSetSpec::parse(feat_set, feat_k);
            const Corpus corpus = load_corpus(feat_corpus);
            std::vector<FeatureVector> rows(corpus.entries.size());
            parallel_for(rows.size(), feat_workers > 0 ? feat_workers : default_workers(), [&](std::size_t i) {
                rows[i] = extract_cfc_features(load_gray(corpus.image_file(corpus.entries[i])), spec, qp);
            });
            if (fs::path(feat_out).has_parent_path()) fs::create_directories(fs::path(feat_out).parent_path());
            std::ofstream o(feat_out);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const auto& e = corpus.entries[i];
                nlohmann::json j{{"image_id", e.image_id},
                                 {"is_compound", e.annotation.is_compound},
                                 {"set", spec.code()},
                                 {"k", spec.k},
                                 {"p", qp.p},
                                 {"q", qp.q},
                                 {"h", qp.h},
                                 {"features", rows[i]}};
                o << j.dump() << '\n';
            }
            out << "wrote " << rows.size() << " feature vectors of length "
                << feature_dimensionality(spec, qp) << '\n';
            return kExitOk;
        }

        if (*train_cfc) {
            FeatureMatrix x;
            std::vector<int> y;
            ModelMetadata meta;
            for (const auto& [line, j] : read_jsonl(tc_features)) {
                try {
                    x.push_back(j.at("features").get<std::vector<double>>());
                    y.push_back(j.at("is_compound").get<bool>() ? 1 : 0);
                    meta = {j.at("set").get<std::string>(), j.at("k").get<int>(), j.at("p").get<int>(),
                            j.at("q").get<int>(), j.at("h").get<int>()};
                } catch (const nlohmann::json::exception& e) {
                    throw ParseError(std::string("malformed feature record: ") + e.what(), line);
                }
            }
            AnyModel model;
            if (tc_algo == "svm") {
                svm_opt.epochs = lr_opt.epochs;
                svm_opt.learning_rate = lr_opt.learning_rate;
                LinearSvmModel m = train_linear_svm(x, y, svm_opt);
                m.metadata = meta;
                model = m;
            } else {
                LogRegModel m = train_logreg(x, y, lr_opt);
                m.metadata = meta;
                model = m;
            }
            save_model(model, tc_out);
            std::vector<int> pred;
            for (const auto& row : x) pred.push_back(predict_compound(model, row, LossMatrix{}) ? 1 : 0);
            const auto m = classifier_metrics(pred, y);
            out << "training accuracy " << m.accuracy_pct << "% on " << x.size() << " samples\n";
            return kExitOk;
        }

        if (*train_illu) {
            const Corpus corpus = load_corpus(ti_corpus);
            const MappingStrategy strategy = parse_strategy(ti_strategy);
            std::vector<GrayImage> images;
            std::vector<MappedLabel> labels;
            for (const auto& e : corpus.entries) {
                if (e.labels.empty()) continue;
                images.push_back(load_gray(corpus.image_file(e)));
                labels.push_back(map_labels(e.labels, strategy));
            }
            const IlluModel model =
                train_illustration(images, labels, parse_feature_kind(ti_kind), ti_algo == "svm", ti_threshold);
            write_json_file(illu_model_to_json(model), ti_out);
            out << "trained on " << std::count_if(labels.begin(), labels.end(),
                                                   [](MappedLabel l) { return l != MappedLabel::Dropped; })
                << " labelled figures\n";
            return kExitOk;
        }

        if (*classify) {
            const AnyModel model = load_model(cl_model);
            const LossMatrix loss = loss_from_flags(cl_alpha, cl_threshold);
            const Corpus corpus = load_corpus(cl_corpus);
            const FeatureSetSpec spec = feature_spec_of(model);
            const QuantizationParams mq = quantization_of(model);
            std::vector<double> scores(corpus.entries.size());
            std::vector<int> pred(corpus.entries.size());
            parallel_for(scores.size(), cl_workers > 0 ? cl_workers : default_workers(), [&](std::size_t i) {
                const auto f = extract_cfc_features(load_gray(corpus.image_file(corpus.entries[i])), spec, mq);
                scores[i] = score_class1(model, f);
                pred[i] = predict_compound(model, f, loss) ? 1 : 0;
            });
            std::ofstream o(cl_out);
            std::vector<int> truth;
            for (std::size_t i = 0; i < scores.size(); ++i) {
                o << nlohmann::json{{"image_id", corpus.entries[i].image_id},
                                    {"score", scores[i]},
                                    {"is_compound", pred[i] == 1}}
                         .dump()
                  << '\n';
                truth.push_back(corpus.entries[i].annotation.is_compound ? 1 : 0);
            }
            const auto m = classifier_metrics(pred, truth);
            out << "accuracy " << m.accuracy_pct << "% FP " << m.fp_pct << "% FN " << m.fn_pct << "% (threshold "
                << loss.threshold() << ")\n";
            return kExitOk;
        }

        if (*separate_cmd) {
            const Corpus corpus = load_corpus(sep_corpus);
            std::vector<bool> compound(corpus.entries.size(), true);
            if (!sep_predictions.empty()) {
                std::map<std::string, bool> by_id;
                for (const auto& [line, j] : read_jsonl(sep_predictions)) {
                    try {
                        by_id[j.at("image_id").get<std::string>()] = j.at("is_compound").get<bool>();
                    } catch (const nlohmann::json::exception& e) {
                        throw ParseError(std::string("malformed prediction: ") + e.what(), line);
                    }
                }
                for (std::size_t i = 0; i < compound.size(); ++i) {
                    const auto it = by_id.find(corpus.entries[i].image_id);
                    if (it == by_id.end()) {
                        throw AlignmentError("no prediction for '" + corpus.entries[i].image_id + "'");
                    }
                    compound[i] = it->second;
                }
            }
            const auto result = separate_corpus(corpus, compound, sep_opt.params(), sep_opt, sep_overlay);
            save_annotations(result, sep_out);
            out << "separated " << result.size() << " figures\n";
            return kExitOk;
        }

        if (*evaluate) {
            const auto gt = load_ground_truth(ev_gt);
            const auto pred = load_annotations(ev_pred);
            const EvalReport r = chain_evaluate(gt, pred, parse_protocol(ev_protocol));
            out << summary_table(r);
            if (!ev_report.empty()) write_json_file(to_json(r), ev_report);
            return kExitOk;
        }

        if (*chain) {
            const Corpus corpus = load_corpus(ch_corpus);
            const CfsParams params = ch_opt.params();
            std::vector<bool> compound(corpus.entries.size(), true);
            if (ch_mode == "model") {
                if (ch_cfc.empty()) throw CLI::RequiredError("--cfc");
                const AnyModel model = load_model(ch_cfc);
                const LossMatrix loss = loss_from_flags(ch_alpha, ch_threshold);
                const FeatureSetSpec spec = feature_spec_of(model);
                const QuantizationParams mq = quantization_of(model);
                std::vector<int> flags(compound.size());
                parallel_for(compound.size(), ch_opt.worker_count(), [&](std::size_t i) {
                    const auto f = extract_cfc_features(load_gray(corpus.image_file(corpus.entries[i])), spec, mq);
                    flags[i] = predict_compound(model, f, loss) ? 1 : 0;
                });
                for (std::size_t i = 0; i < compound.size(); ++i) compound[i] = flags[i] == 1;
            } else if (ch_mode != "none") {
                for (std::size_t i = 0; i < compound.size(); ++i) {
                    const bool truth = corpus.entries[i].annotation.is_compound;
                    compound[i] = ch_mode == "ideal" ? truth : !truth;
                }
            }
            const auto result = separate_corpus(corpus, compound, params, ch_opt);
            if (!ch_out.empty()) save_annotations(result, ch_out);
            const EvalReport r = chain_evaluate(corpus.annotations(), result, parse_protocol(ch_protocol));
            out << summary_table(r);
            if (!ch_report.empty()) {
                nlohmann::json j = to_json(r);
                j["params"] = to_json(params);
                j["cfc_mode"] = ch_mode;
                write_json_file(j, ch_report);
            }
            return kExitOk;
        }

        if (*tune_cmd) {
            const Corpus corpus = load_corpus(tu_corpus);
            std::ifstream space_in(tu_space);
            if (!space_in) throw MissingAsset("cannot open '" + tu_space + "'");
            nlohmann::ordered_json space_json;
            try {
                space_json = nlohmann::ordered_json::parse(space_in);
            } catch (const nlohmann::json::parse_error& e) {
                throw ParseError(tu_space + ": " + e.what(), 0);
            }
            const SearchSpace space = search_space_from_json(space_json);
            const CfsParams base = tu_opt.params();
            const Protocol protocol = parse_protocol(tu_protocol);
            const std::vector<bool> compound(corpus.entries.size(), true);
            const auto annotations = corpus.annotations();
            ParamSet initial;
            const ParamSet all = to_param_set(base);
            for (const auto& ladder : space) {
                if (!all.contains(ladder.name)) throw DomainError("unknown parameter '" + ladder.name + "'");
                initial[ladder.name] = all.at(ladder.name);
            }
            const EvalFn eval = [&](const ParamSet& p) {
                const CfsParams params = from_param_set(p, base);
                params.validate();
                const EvalReport r = chain_evaluate(annotations, separate_corpus(corpus, compound, params, tu_opt),
                                                    protocol);
                return protocol == Protocol::ImageClef ? r.accuracy_pct / 100.0 : r.nlm.f1_pct / 100.0;
            };
            const TuneResult res = tune(space, initial, eval, hc_opt, tu_top);
            write_json_file(to_json(from_param_set(res.best, base)), tu_out);
            if (!tu_trace.empty()) {
                std::ofstream t(tu_trace);
                write_trace_csv(res.trace, t);
            }
            out << "best accuracy " << res.best_accuracy << " after " << res.evaluations << " evaluations\n";
            return kExitOk;
        }
    } catch (const CLI::Error& e) {
        err << e.what() << '\n';
        return kExitUsage;
    } catch (const EvaluationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace cfsep
