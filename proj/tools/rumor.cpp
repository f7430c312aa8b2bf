#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rumor/artifacts.hpp"
#include "rumor/container.hpp"
#include "rumor/errors.hpp"
#include "rumor/pipeline.hpp"
#include "rumor/report.hpp"
#include "rumor/synth.hpp"

namespace fs = std::filesystem;
using namespace rumor;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    int intervals = 48;
    std::string out_dir = ".";
    std::string config_file;
};

struct Options {
    // inputs
    std::string corpus, lexicons, domains, split, model_file, features, credit, dsts, input;
    std::vector<std::string> epi;
    std::string out;
    // synth
    int events = 60;
    double margin = 1.0, credit_strength = 1.0;
    // windows and features
    double hours = 48.0;
    std::string cutoffs = "1,6,12,18,24,30,36,42,48";
    bool no_credit = false, no_crowd = false, no_epi = false, no_spikem = false, without_credit = false;
    std::optional<bool> normalize;
    // models
    std::string model = "rf";
    int trees = 350;
    double svm_c = 3.0, svm_gamma = 0.2;
    int folds = 10;
    double pretrain_fraction = 1.0 / 3.0;
    int tweets_per_event = 60;
    int epochs = 20;
    double learning_rate = 0.05;
    std::string epi_model = "sis", epi_mode = "prefix";
    int epi_starts = 2, epi_evaluations = 400, epi_restarts = 1;
    std::vector<std::string> formats{"csv", "svg"};
};

// key=value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::vector<std::pair<std::string, std::string>> items;
    std::string line;
    for (std::size_t no = 1; std::getline(in, line); ++no) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(no) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        if (key.rfind("--", 0) == 0) key.erase(0, 2);
        items.emplace_back(key, trim(line.substr(eq + 1)));
    }
    return items;
}

// Values from the file fill options the command line left unset. Keys of
// other subcommands are skipped so one file can serve several commands.
void apply_config(CLI::App& app, CLI::App* sub, const std::vector<std::pair<std::string, std::string>>& items) {
    for (const auto& [key, value] : items) {
        CLI::Option* opt = nullptr;
        for (CLI::App* scope : {sub, &app}) {
            if (!scope) continue;
            try {
                opt = scope->get_option("--" + key);
                break;
            } catch (const CLI::OptionNotFound&) {
            }
        }
        if (key == "config") throw UsageError("config files cannot nest");
        if (!opt) {
            bool elsewhere = false;
            for (const CLI::App* other : app.get_subcommands({}))
                for (const CLI::Option* o : other->get_options())
                    elsewhere = elsewhere || o->check_lname(key);
            if (elsewhere) continue;
            throw UsageError("unknown config key '" + key + "'");
        }
        if (opt->count() > 0) continue;
        try {
            opt->add_result(value);
            opt->run_callback();
        } catch (const CLI::ParseError& e) {
            throw UsageError("config key '" + key + "': " + e.what());
        }
    }
}

std::string out_path(const Globals& g, const Options& o, const std::string& fallback) {
    return o.out.empty() ? (fs::path(g.out_dir) / fallback).string() : o.out;
}

std::vector<double> parse_cutoffs(const std::string& text) {
    std::vector<double> out;
    std::stringstream in(text);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        if (cell.empty()) continue;
        try {
            out.push_back(parse_number(cell));
        } catch (const DataError&) {
            throw UsageError("bad cutoff '" + cell + "'");
        }
    }
    return out;
}

PipelineConfig make_config(const Globals& g, const Options& o) {
    PipelineConfig c;
    c.corpus_path = o.corpus;
    c.lexicon_dir = o.lexicons;
    c.domains_path = o.domains;
    c.intervals = g.intervals;
    c.cutoffs = parse_cutoffs(o.cutoffs);
    c.seed = g.seed;
    c.features = {!o.no_credit, !o.no_crowd, !o.no_epi, !o.no_spikem};
    if (o.model == "rf") {
        c.model.kind = ModelKind::forest;
    } else if (o.model == "svm") {
        c.model.kind = ModelKind::svm;
    } else {
        throw UsageError("unknown model '" + o.model + "' (rf|svm)");
    }
    c.model.forest.n_trees = o.trees;
    c.model.forest.seed = g.seed;
    c.model.svm.c = o.svm_c;
    c.model.svm.gamma = o.svm_gamma;
    c.normalize = o.normalize;
    c.out_dir = g.out_dir;
    c.folds = o.folds;
    c.ablation = o.without_credit;
    c.pretrain_fraction = o.pretrain_fraction;
    c.credit_tweets_per_event = o.tweets_per_event;
    c.credit.epochs = o.epochs;
    c.credit.learning_rate = o.learning_rate;
    c.credit.seed = g.seed;
    c.epi_mode = parse_epi_mode(o.epi_mode);
    c.epi.starts = o.epi_starts;
    c.epi.max_evaluations = o.epi_evaluations;
    c.epi.restarts = o.epi_restarts;
    c.epi.seed = g.seed;
    c.validate();
    return c;
}

std::vector<Event> load_corpus(const Globals& g, const Options& o) {
    if (o.corpus.empty()) throw UsageError("--corpus is required");
    return read_corpus_file(o.corpus, g.intervals);
}

// Keeps the classification side of a split file, when one is given.
std::vector<Event> restrict_to_split(std::vector<Event> events, const std::string& split_path) {
    if (split_path.empty()) return events;
    const CsvTable split = read_csv_file(split_path);
    const auto id = split.column("event_id"), role = split.column("role");
    std::set<std::string> keep;
    for (const auto& r : split.rows)
        if (r[role] == "classify") keep.insert(r[id]);
    std::vector<Event> out;
    for (auto& e : events)
        if (keep.count(e.event_id)) out.push_back(std::move(e));
    return out;
}

std::string container_kind(const std::string& path) {
    return read_container_file(path).header.at("kind").get<std::string>();
}

int cmd_synth(const Globals& g, const Options& o) {
    SynthConfig cfg;
    cfg.margin = o.margin;
    cfg.credit_strength = o.credit_strength;
    cfg.interval_count = g.intervals;
    write_corpus_file(out_path(g, o, "corpus.jsonl"), generate_synthetic_corpus(g.seed, o.events, cfg));
    return 0;
}

int cmd_features(const Globals& g, const Options& o) {
    const auto cfg = make_config(g, o);
    const auto events = restrict_to_split(load_corpus(g, o), o.split);
    write_csv_file(out_path(g, o, "features.csv"),
                   features_table(events, o.hours, g.intervals, FeatureContext::from_config(cfg)));
    return 0;
}

int cmd_train_credit(const Globals& g, const Options& o) {
    auto cfg = make_config(g, o);
    cfg.features.credit = true;
    const auto events = load_corpus(g, o);
    const EventSplit split = split_events(events, cfg.pretrain_fraction, cfg.seed);
    check_disjoint(split);
    write_csv_file((fs::path(g.out_dir) / "split.csv").string(), split_table(split));
    save_model_file(out_path(g, o, "credit_model.rmdl"), train_credit_model(events, split, cfg));
    return 0;
}

int cmd_score_credit(const Globals& g, const Options& o) {
    if (o.model_file.empty()) throw UsageError("--model-file is required");
    const auto model = load_model_file(o.model_file);
    const auto events = restrict_to_split(load_corpus(g, o), o.split);
    write_csv_file(out_path(g, o, "credit.csv"), credit_table(events, o.hours, g.intervals, model));
    return 0;
}

int cmd_fit_epi(const Globals& g, const Options& o) {
    const auto cfg = make_config(g, o);
    const EpiModel model = parse_epi_model(o.epi_model);
    const auto events = restrict_to_split(load_corpus(g, o), o.split);
    write_csv_file(out_path(g, o, "epi_" + std::string(to_string(model)) + ".csv"),
                   epi_table(events, o.hours, g.intervals, model, cfg.epi, cfg.epi_mode));
    return 0;
}

int cmd_build_dsts(const Globals& g, const Options& o) {
    if (o.features.empty()) throw UsageError("--features is required");
    const CsvTable features = read_csv_file(o.features);
    std::optional<CsvTable> credit;
    if (!o.credit.empty()) credit = read_csv_file(o.credit);
    std::vector<CsvTable> epi;
    for (const auto& path : o.epi) epi.push_back(read_csv_file(path));
    AssembleOptions opts{o.hours, g.intervals, o.normalize.value_or(false), !o.no_crowd};
    std::vector<std::optional<Label>> truth;
    const Dataset data = assemble_dsts(features, credit ? &*credit : nullptr, epi, opts, &truth);
    write_csv_file(out_path(g, o, "dsts.csv"), dataset_table(data, truth));
    return 0;
}

int cmd_train(const Globals& g, const Options& o) {
    if (o.dsts.empty()) throw UsageError("--dsts is required");
    const auto cfg = make_config(g, o);
    const Dataset data = dataset_from_table(read_csv_file(o.dsts));
    const std::string path = out_path(g, o, "model.rmdl");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open '" + path + "' for writing");
    if (cfg.model.kind == ModelKind::forest)
        save_forest(out, train_forest(data, cfg.model.forest));
    else
        save_svm(out, train_svm_rbf(data, cfg.model.svm));
    if (!out) throw DataError("failed writing '" + path + "'");
    return 0;
}

int cmd_predict(const Globals& g, const Options& o) {
    if (o.dsts.empty() || o.model_file.empty()) throw UsageError("--dsts and --model-file are required");
    std::vector<std::optional<Label>> truth;
    const Dataset data = dataset_from_table(read_csv_file(o.dsts), &truth);
    const std::string kind = container_kind(o.model_file);
    std::ifstream in(o.model_file, std::ios::binary);
    std::vector<Prediction> preds;
    if (kind == "random-forest") {
        const Forest forest = load_forest(in);
        if (forest.columns != data.columns) throw DataError("DSTS columns do not match the model");
        for (std::size_t i = 0; i < data.rows(); ++i) preds.push_back(predict_forest(forest, data.row(i)));
    } else {
        const SvmModel svm = load_svm(in);
        for (std::size_t i = 0; i < data.rows(); ++i) preds.push_back(predict_svm(svm, data.row(i)));
    }
    write_csv_file(out_path(g, o, "preds.csv"), predictions_table(data.ids, truth, preds));
    return 0;
}

int cmd_importance(const Globals& g, const Options& o) {
    if (o.model_file.empty()) throw UsageError("--model-file is required");
    std::ifstream in(o.model_file, std::ios::binary);
    if (!in) throw DataError("cannot open '" + o.model_file + "'");
    const Forest forest = load_forest(in);
    write_csv_file(out_path(g, o, "importance.csv"), ranking_table(feature_importance(forest)));
    return 0;
}

void write_report_files(const EvaluationReport& report, const Options& o, const fs::path& dir) {
    for (const auto& f : o.formats) emit_report(report, parse_report_format(f), dir);
}

int cmd_evaluate(const Globals& g, const Options& o) {
    const auto cfg = make_config(g, o);
    const auto events = load_corpus(g, o);
    const EvaluationReport report = evaluate_over_time(cfg, events);
    const fs::path dir(g.out_dir);
    write_text_file(dir / "report.json", report_to_json(report));
    write_report_files(report, o, dir);
    return 0;
}

int cmd_run(const Globals& g, const Options& o) {
    auto cfg = make_config(g, o);
    cfg.cutoffs = {o.hours};
    const auto events = load_corpus(g, o);
    const PipelineResult result = run_pipeline(cfg, events);
    std::vector<std::string> ids;
    std::vector<std::optional<Label>> truth;
    std::vector<Prediction> preds;
    for (const auto& p : result.predictions) {
        ids.push_back(p.event_id);
        truth.push_back(p.truth);
        preds.push_back(p.prediction);
    }
    write_csv_file((fs::path(g.out_dir) / "split.csv").string(), split_table(result.split));
    write_csv_file(out_path(g, o, "predictions.csv"), predictions_table(ids, truth, preds));
    return 0;
}

int cmd_report(const Globals& g, const Options& o) {
    if (o.input.empty()) throw UsageError("--input is required");
    std::ifstream in(o.input, std::ios::binary);
    if (!in) throw DataError("cannot open '" + o.input + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    write_report_files(report_from_json(buf.str()), o, g.out_dir);
    return 0;
}

std::string find_config_arg(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return {};
}

int run(int argc, char** argv) {
    Globals g;
    Options o;
    CLI::App app{"Early rumor detection on micro-blog event streams"};
    app.fallthrough();
    app.require_subcommand(1);
    app.add_option("--seed", g.seed, "Seed for every random choice")->capture_default_str();
    app.add_option("--intervals", g.intervals, "Intervals N in the 48-hour window")->capture_default_str();
    app.add_option("--out-dir", g.out_dir, "Output directory")->capture_default_str();
    app.add_option("--config", g.config_file, "key=value file; command-line flags take precedence");

    auto corpus = [&](CLI::App* s) { s->add_option("--corpus", o.corpus, "Line-delimited corpus file"); };
    auto out = [&](CLI::App* s) { s->add_option("--out", o.out, "Output file (default: inside --out-dir)"); };
    auto hours = [&](CLI::App* s) { s->add_option("--hours", o.hours, "Cutoff hours")->capture_default_str(); };
    auto lexicon = [&](CLI::App* s) {
        s->add_option("--lexicons", o.lexicons, "Directory of lexicon lists (default: built in)");
        s->add_option("--domains", o.domains, "Domain metadata snapshot (default: built in)");
    };
    auto split = [&](CLI::App* s) {
        s->add_option("--split", o.split, "split.csv; keep only classification events");
    };
    auto normalize = [&](CLI::App* s) {
        s->add_flag("--normalize{true},--no-normalize{false}", o.normalize, "Per-event z-score of feature rows");
    };
    auto toggles = [&](CLI::App* s) {
        s->add_flag("--no-credit", o.no_credit, "Drop CreditScore");
        s->add_flag("--no-crowd", o.no_crowd, "Drop CrowdWisdom");
        s->add_flag("--no-epi", o.no_epi, "Drop SIS and SEIZ parameters");
        s->add_flag("--no-spikem", o.no_spikem, "Drop SpikeM parameters");
    };
    auto classifier = [&](CLI::App* s) {
        s->add_option("--model", o.model, "rf or svm")->capture_default_str();
        s->add_option("--trees", o.trees, "Random forest size")->capture_default_str();
        s->add_option("--svm-c", o.svm_c, "SVM box constraint")->capture_default_str();
        s->add_option("--svm-gamma", o.svm_gamma, "RBF width")->capture_default_str();
    };
    auto credit = [&](CLI::App* s) {
        s->add_option("--pretrain-fraction", o.pretrain_fraction, "Share of events for the tweet model")
            ->capture_default_str();
        s->add_option("--tweets-per-event", o.tweets_per_event, "Training tweets per event (0 = all)")
            ->capture_default_str();
        s->add_option("--epochs", o.epochs, "Tweet model epochs")->capture_default_str();
        s->add_option("--learning-rate", o.learning_rate, "Initial SGD step")->capture_default_str();
    };
    auto epi = [&](CLI::App* s) {
        s->add_option("--epi-mode", o.epi_mode, "prefix or expanding")->capture_default_str();
        s->add_option("--epi-starts", o.epi_starts, "Multi-start count")->capture_default_str();
        s->add_option("--epi-evaluations", o.epi_evaluations, "Simplex evaluations per run")->capture_default_str();
        s->add_option("--epi-restarts", o.epi_restarts, "Simplex restarts")->capture_default_str();
    };
    auto formats = [&](CLI::App* s) {
        s->add_option("--format", o.formats, "csv and/or svg")->capture_default_str()->delimiter(',');
    };

    std::map<CLI::App*, int (*)(const Globals&, const Options&)> handlers;
    auto sub = [&](const char* name, const char* help, int (*fn)(const Globals&, const Options&)) {
        CLI::App* s = app.add_subcommand(name, help);
        handlers[s] = fn;
        return s;
    };

    auto* s = sub("synth", "Generate a labeled synthetic corpus", cmd_synth);
    s->add_option("--events", o.events, "Number of events")->capture_default_str();
    s->add_option("--margin", o.margin, "Class separation (0 = none)")->capture_default_str();
    s->add_option("--credit-strength", o.credit_strength, "Rate of class-specific words")->capture_default_str();
    out(s);

    s = sub("features", "Per-interval lexical features", cmd_features);
    corpus(s), hours(s), lexicon(s), split(s), out(s);

    s = sub("train-credit", "Train the tweet credibility model on the pretraining events", cmd_train_credit);
    corpus(s), credit(s), out(s);

    s = sub("score-credit", "Per-interval CreditScore", cmd_score_credit);
    corpus(s), hours(s), split(s), out(s);
    s->add_option("--model-file", o.model_file, "Credibility model file");

    s = sub("fit-epi", "Fit an epidemic model per event", cmd_fit_epi);
    corpus(s), hours(s), split(s), epi(s), out(s);
    s->add_option("--model", o.epi_model, "sis, seiz or spikem")->capture_default_str();

    s = sub("build-dsts", "Assemble DSTS vectors from feature tables", cmd_build_dsts);
    s->add_option("--features", o.features, "features.csv");
    s->add_option("--credit", o.credit, "credit.csv");
    s->add_option("--epi", o.epi, "epi_<model>.csv (repeatable)");
    s->add_flag("--no-crowd", o.no_crowd, "Drop CrowdWisdom");
    hours(s), normalize(s), out(s);

    s = sub("train", "Train a classifier on a DSTS table", cmd_train);
    s->add_option("--dsts", o.dsts, "dsts.csv");
    classifier(s), out(s);

    s = sub("predict", "Classify the events of a DSTS table", cmd_predict);
    s->add_option("--dsts", o.dsts, "dsts.csv");
    s->add_option("--model-file", o.model_file, "Classifier file");
    out(s);

    s = sub("importance", "Feature importance ranking of a random forest", cmd_importance);
    s->add_option("--model-file", o.model_file, "Random forest file");
    out(s);

    s = sub("evaluate", "Cross-validated accuracy at each cutoff", cmd_evaluate);
    corpus(s), lexicon(s), toggles(s), classifier(s), normalize(s), credit(s), epi(s), formats(s);
    s->add_option("--cutoffs", o.cutoffs, "Comma-separated hours")->capture_default_str();
    s->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();
    s->add_flag("--without-credit", o.without_credit, "Also evaluate with CreditScore removed");

    s = sub("run", "End-to-end pipeline at one cutoff", cmd_run);
    corpus(s), hours(s), lexicon(s), toggles(s), classifier(s), normalize(s), credit(s), epi(s), out(s);
    s->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();

    s = sub("report", "Render a saved report.json", cmd_report);
    s->add_option("--input", o.input, "report.json");
    formats(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    CLI::App* chosen = app.get_subcommands().front();
    if (const std::string cfg = find_config_arg(argc, argv); !cfg.empty())
        apply_config(app, chosen, read_config_file(cfg));
    fs::create_directories(g.out_dir);
    return handlers.at(chosen)(g, o);
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
