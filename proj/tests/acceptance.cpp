// Prints one PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rumor/artifacts.hpp"
#include "rumor/credibility.hpp"
#include "rumor/crossval.hpp"
#include "rumor/dsts.hpp"
#include "rumor/epifit.hpp"
#include "rumor/forest.hpp"
#include "rumor/lexfeatures.hpp"
#include "rumor/nelder_mead.hpp"
#include "rumor/pipeline.hpp"
#include "rumor/synth.hpp"
#include "rumor/tables.hpp"

namespace fs = std::filesystem;
using namespace rumor;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += "failed: " + what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string num(double v, int digits = 4) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1
Outcome gradient_check() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    CredibilityHyper h;
    h.embedding = 4;
    h.window = 2;
    h.filters = 3;
    h.pool = 2;
    h.hidden = 5;
    h.max_length = 6;
    h.seed = 42;
    const std::vector<std::string> texts{"alpha beta gamma", "beta delta", "epsilon alpha"};
    auto model = init_model(h, build_vocabulary(texts));
    out.require(model.params.size() <= 500, "model has at most 500 parameters");
    const std::vector<EncodedTweet> batch{{encode_tweet("alpha beta gamma", model.vocab, 6), Label::rumor},
                                          {encode_tweet("delta epsilon alpha beta", model.vocab, 6), Label::news},
                                          {encode_tweet("zzz gamma", model.vocab, 6), Label::news}};
    std::vector<double> grad;
    loss_and_gradient(model, batch, grad);
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(h.embedding), model.params.size() - 1);
    const double eps = 1e-5;
    double worst = 0.0;
    for (int c = 0; c < 20; ++c) {
        const std::size_t i = pick(rng);
        const double keep = model.params[i];
        model.params[i] = keep + eps;
        const double up = loss(model, batch);
        model.params[i] = keep - eps;
        const double down = loss(model, batch);
        model.params[i] = keep;
        const double numeric = (up - down) / (2 * eps);
        worst = std::max(worst, std::abs(numeric - grad[i]) / std::max({std::abs(numeric), std::abs(grad[i]), 1e-7}));
    }
    const double secs = seconds_since(t0);
    out.require(worst <= 1e-4, "max relative error <= 1e-4");
    out.require(secs < 10.0, "runtime < 10 s");
    out.note(std::to_string(model.params.size()) + " parameters, max rel err " + num(worst, 3) + ", " + num(secs, 3) +
             " s");
    return out;
}

// ---------------------------------------------------------------- 2
Outcome formula_goldens() {
    Outcome out;
    Matrix m(3, 1);
    m.data = {1, 2, 3};
    const auto z = zscore_normalize(m);
    out.require(std::abs(z.data[0] + 1.2247) <= 1e-3 && std::abs(z.data[1]) <= 1e-3 &&
                    std::abs(z.data[2] - 1.2247) <= 1e-3,
                "z-score of [1,2,3]");
    out.require(std::abs(cross_entropy({0.5, 0.5}, Label::rumor) - std::log(2.0)) <= 1e-9 &&
                    std::abs(cross_entropy({0.5, 0.5}, Label::news) - std::log(2.0)) <= 1e-9,
                "uniform loss = ln 2");

    Tweet t;
    t.id = "1";
    t.text = "plain words";
    t.user.followers = 30;
    t.user.friends = 10;
    const auto rep = tweet_surface_features(t, Lexicons::builtin(), DomainMetadata{});
    const auto idx = *catalog_index("UserReputationScore");
    out.require(rep[idx] == 0.25, "UserReputationScore(30,10) = 0.25");

    auto tweets = [](std::initializer_list<const char*> texts) {
        std::vector<Tweet> v;
        for (const char* s : texts) {
            Tweet x;
            x.id = s;
            x.text = s;
            v.push_back(x);
        }
        return v;
    };
    Lexicons lex;
    lex.debunking_terms = {"hoax"};
    out.require(crowd_wisdom(tweets({"this is a hoax", "breaking news"}), lex) == 0.5, "CrowdWisdom = 0.5");
    Lexicons none;
    out.require(crowd_wisdom(tweets({"this is a hoax"}), none) == 0.0, "CrowdWisdom with no terms = 0");
    Lexicons phrase;
    phrase.debunking_terms = {"not true"};
    out.require(crowd_wisdom(tweets({"not true at all", "not a fan", "ok"}), phrase) == 1.0 / 3.0,
                "CrowdWisdom phrase = 1/3");
    out.note("z = [" + num(z.data[0], 5) + ", " + num(z.data[1]) + ", " + num(z.data[2], 5) + "]");
    return out;
}

// ---------------------------------------------------------------- 3
Outcome dsts_structure() {
    Outcome out;
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g(0.0, 3.0);
    std::uniform_real_distribution<double> shift(-50, 50), scale(0.1, 10);
    double worst = 0.0;
    for (int n : {1, 4, 12, 24, 48})
        for (int d : {1, 3, 7}) {
            Matrix f(n, d);
            for (auto& x : f.data) x = g(rng);
            const auto base = build_dsts_vector(f, 48.0 / n);
            out.require(base.size() == static_cast<std::size_t>(2 * d * n),
                        "length 2*D*N for N=" + std::to_string(n) + " D=" + std::to_string(d));
            Matrix moved = f;
            for (int c = 0; c < d; ++c) {
                const double a = shift(rng), s = scale(rng);
                for (int r = 0; r < n; ++r) moved(r, c) = s * moved(r, c) + a;
            }
            const auto v = build_dsts_vector(moved, 48.0 / n);
            for (std::size_t i = 0; i < base.size(); ++i) worst = std::max(worst, std::abs(v[i] - base[i]));
        }
    out.require(worst <= 1e-12, "shift/scale invariance to 1e-12");
    out.note("max deviation " + num(worst, 3));
    return out;
}

// ---------------------------------------------------------------- 4
Outcome epidemic_consistency() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    std::vector<double> hours(48);
    for (int k = 0; k < 48; ++k) hours[k] = k;
    const SeizParams truth{0.6, 0.3, 0.4, 0.08, 0.3, 0.6};
    const double n = 1000;
    const auto path = simulate_seiz(truth, n, {980, 0, 10, 10}, hours, 0.01);
    VolumeSeries series;
    series.interval_hours = 1.0;
    series.population = n;
    double prev = 0.0, peak = 0.0;
    for (const auto& s : path) {
        series.counts.push_back(s.i - prev);
        prev = s.i;
        peak = std::max(peak, s.i);
    }
    const auto r = fit_model(series, EpiModel::seiz);
    const auto p = std::get<SeizParams>(r.params);
    const double fitted[] = {p.beta, p.b, p.rho, p.epsilon, p.p, p.l};
    const double expected[] = {truth.beta, truth.b, truth.rho, truth.epsilon, truth.p, truth.l};
    double worst_rel = 0.0;
    for (int k = 0; k < 6; ++k) worst_rel = std::max(worst_rel, std::abs(fitted[k] - expected[k]) / expected[k]);
    out.require(worst_rel <= 0.1, "SEIZ parameters within 10%");
    out.require(r.rms_residual <= 0.01 * peak, "rms <= 1% of peak");

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> rate(0.0, 3.0), prob(0.0, 1.0);
    double drift = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const double pop = 5000;
        const SeizParams q{rate(rng), rate(rng), rate(rng), rate(rng), prob(rng), prob(rng)};
        for (const auto& s : simulate_seiz(q, pop, {4900, 20, 50, 30}, hours, 0.05))
            drift = std::max(drift, std::abs(s.total() - pop) / pop);
    }
    out.require(drift <= 1e-8, "conservation drift <= 1e-8 N");

    std::vector<double> t11(11);
    for (int k = 0; k < 11; ++k) t11[k] = k;
    auto error = [&](double step) {
        const auto sis = simulate_sis({1.0, 0.0}, 1000, 2, t11, step);
        double worst = 0.0;
        for (std::size_t k = 0; k < t11.size(); ++k)
            worst = std::max(worst, std::abs(sis[k] - 1000 / (1.0 + (1000 / 2.0 - 1.0) * std::exp(-t11[k]))));
        return worst;
    };
    const double ratio = error(0.5) / error(0.25);
    out.require(ratio >= 8.0, "RK4 step-halving ratio >= 8");
    const double secs = seconds_since(t0);
    out.require(secs < 60.0, "runtime < 60 s");
    out.note("max param err " + num(100 * worst_rel, 3) + "%, rms/peak " + num(r.rms_residual / peak, 3) +
             ", drift " + num(drift, 3) + ", RK4 ratio " + num(ratio, 4) + ", " + num(secs, 3) + " s");
    return out;
}

// ---------------------------------------------------------------- 5
Outcome optimizer() {
    Outcome out;
    NelderMeadConfig cfg;
    cfg.max_evaluations = 2000;
    cfg.tol_x = 1e-10;
    const auto r = nelder_mead(
        [](std::span<const double> x) { return 100.0 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1.0 - x[0], 2); },
        {-1.2, 1.0}, nullptr, cfg);
    out.require(r.f <= 1e-6, "f <= 1e-6");
    out.require(r.evaluations <= 2000, "within 2000 evaluations");
    out.note("f = " + num(r.f, 3) + " after " + std::to_string(r.evaluations) + " evaluations");
    return out;
}

// ---------------------------------------------------------------- 6
Outcome classifier_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    Forest f;
    f.columns = {"a", "b", "c"};
    f.importance = {0, 0, 0};
    f.trees.push_back({{{0, 0.5, 1, 4, 4, 6},
                        {2, 2.0, 2, 3, 3, 3},
                        {-1, 0, -1, -1, 3, 1},
                        {-1, 0, -1, -1, 0, 2},
                        {-1, 0, -1, -1, 1, 3}}});
    f.trees.push_back({{{1, -1.0, 1, 2, 3, 1}, {-1, 0, -1, -1, 2, 0}, {-1, 0, -1, -1, 1, 1}}});
    auto walk = [](const Tree& tree, const std::vector<double>& x) {
        int node = 0;
        while (tree.nodes[node].feature >= 0)
            node = x[tree.nodes[node].feature] <= tree.nodes[node].threshold ? tree.nodes[node].left
                                                                              : tree.nodes[node].right;
        const auto& leaf = tree.nodes[node];
        return static_cast<double>(leaf.rumor) / static_cast<double>(leaf.rumor + leaf.news);
    };
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int probe = 0; probe < 200; ++probe) {
        std::vector<double> x{u(rng), u(rng), u(rng)};
        if (probe < 3) x[probe] = std::vector<double>{0.5, -1.0, 2.0}[probe];
        const double expected = (walk(f.trees[0], x) + walk(f.trees[1], x)) / 2.0;
        const auto pred = predict_forest(f, x);
        if (pred.p_rumor != expected || pred.label != (expected > 0.5 ? Label::rumor : Label::news)) {
            out.require(false, "2-tree forest matches manual walks");
            break;
        }
    }

    PipelineConfig config;
    config.seed = 6;
    config.features = {false, true, false, false};
    const auto events = generate_synthetic_corpus(6, 200);
    std::vector<std::string> ids;
    for (const auto& e : events) ids.push_back(e.event_id);
    const Dataset data = build_dataset(events, ids, 48.0, config, FeatureContext::from_config(config), nullptr);
    ModelSpec spec;
    spec.forest.seed = 6;
    const double acc = cross_validate(data, make_learner(spec), 10, 6).mean_accuracy;
    Dataset shuffled = data;
    std::mt19937_64 shuffle_rng(66);
    std::shuffle(shuffled.y.begin(), shuffled.y.end(), shuffle_rng);
    const double null_acc = cross_validate(shuffled, make_learner(spec), 10, 6).mean_accuracy;
    const double secs = seconds_since(t0);
    out.require(acc >= 0.9, "CV accuracy >= 0.9");
    out.require(std::abs(null_acc - 0.5) <= 0.1, "shuffled-label accuracy 0.5 +- 0.1");
    out.require(secs < 120.0, "runtime < 2 min");
    out.note("200 events x " + std::to_string(data.dim()) + " columns: CV " + num(acc) + ", shuffled " +
             num(null_acc) + ", " + num(secs, 3) + " s");
    return out;
}

// ---------------------------------------------------------------- 7
Outcome end_to_end_trend() {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    PipelineConfig config;
    config.seed = 7;
    config.cutoffs = {1, 6, 12, 24, 48};
    config.ablation = true;
    const auto report = evaluate_over_time(config, generate_synthetic_corpus(7, 60));
    std::vector<double> all, plain;
    for (const auto& row : report.cutoffs) {
        all.push_back(row.series.at(0).accuracy);
        plain.push_back(row.series.at(1).accuracy);
    }
    for (std::size_t i = 1; i < all.size(); ++i)
        out.require(all[i] >= all[i - 1] - 0.05, "non-decreasing within 0.05 at " + num(config.cutoffs[i]) + "h");
    out.require(all.back() >= 0.85, "accuracy >= 0.85 at 48h");
    out.require(all.front() - plain.front() >= 0.03, "CreditScore gain >= 0.03 at 1h");
    const double secs = seconds_since(t0);
    out.require(secs < 600.0, "runtime < 10 min");
    std::string trend = "all:";
    for (double a : all) trend += " " + num(a, 3);
    trend += ", without-credit:";
    for (double a : plain) trend += " " + num(a, 3);
    out.note(trend + ", " + num(secs, 3) + " s");
    return out;
}

// ---------------------------------------------------------------- 8
std::string csv_bytes(const CsvTable& t) {
    std::ostringstream s;
    write_csv(s, t);
    return s.str();
}

Outcome leakage_probe() {
    Outcome out;
    PipelineConfig config;
    config.seed = 8;
    config.folds = 5;
    config.model.forest.n_trees = 100;
    config.credit.epochs = 5;
    const auto events = generate_synthetic_corpus(8, 30);
    const auto split = split_events(events, config.pretrain_fraction, config.seed);
    int probes = 0;
    for (double hours : {1.0, 6.0, 24.0}) {
        config.cutoffs = {hours};
        std::vector<Event> poisoned;
        for (const auto& e : events) {
            const bool classify = std::find(split.classify.begin(), split.classify.end(), e.event_id) !=
                                  split.classify.end();
            if (!classify) {
                poisoned.push_back(e);
                continue;
            }
            Tweet poison = e.tweets.back();
            poison.id = "poison";
            poison.text = "hoax fake debunked rumor not true";
            poison.user.followers = 5'000'000;
            poison.user.verified = true;
            poison.urls = {"example.com"};
            std::vector<Tweet> tweets = e.tweets;
            tweets.push_back(poison);
            // First offset after the cutoff that leaves the window in place.
            bool placed = false;
            for (int minutes : {1, 17, 43, 90, 150}) {
                tweets.back().created_at = e.window.t_0 + std::chrono::seconds(static_cast<long>(hours * 3600)) +
                                           std::chrono::minutes(minutes);
                auto sorted = tweets;
                std::stable_sort(sorted.begin(), sorted.end(),
                                 [](const Tweet& a, const Tweet& b) { return a.created_at < b.created_at; });
                Event probe = make_event(e.event_id, e.label, sorted, config.intervals);
                if (probe.window.t_0 == e.window.t_0) {
                    poisoned.push_back(std::move(probe));
                    placed = true;
                    break;
                }
            }
            out.require(placed, "poison placed without moving the window");
            if (!placed) return out;
            ++probes;
        }
        const auto ctx = FeatureContext::from_config(config);
        const auto credit = train_credit_model(events, split, config);
        const auto credit_poisoned = train_credit_model(poisoned, split, config);
        out.require(credit.params == credit_poisoned.params, "credibility model untouched");
        const Dataset clean = build_dataset(events, split.classify, hours, config, ctx, &credit);
        const Dataset dirty = build_dataset(poisoned, split.classify, hours, config, ctx, &credit_poisoned);
        out.require(csv_bytes(dataset_table(clean)) == csv_bytes(dataset_table(dirty)),
                    "feature vectors identical at " + num(hours) + "h");
        auto predictions = [&](const std::vector<Event>& corpus) {
            const auto r = run_pipeline(config, corpus);
            std::vector<std::string> ids;
            std::vector<std::optional<Label>> truth;
            std::vector<Prediction> preds;
            for (const auto& p : r.predictions) {
                ids.push_back(p.event_id);
                truth.push_back(p.truth);
                preds.push_back(p.prediction);
            }
            return csv_bytes(predictions_table(ids, truth, preds));
        };
        out.require(predictions(events) == predictions(poisoned), "predictions identical at " + num(hours) + "h");
    }
    out.note(std::to_string(probes) + " poisoned events across cutoffs 1, 6, 24h");
    return out;
}

// ---------------------------------------------------------------- 9
int shell(const std::string& command, const fs::path& log) {
    const int status = std::system((command + " >>" + log.string() + " 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome cli_determinism() {
    Outcome out;
    const fs::path root = fs::temp_directory_path() / "rumor_acceptance_cli";
    fs::remove_all(root);
    const std::string cli = RUMOR_CLI;
    const std::vector<std::string> steps{
        "synth --seed 9 --events 12",
        "train-credit --corpus corpus.jsonl --seed 9 --epochs 2 --tweets-per-event 20",
        "features --corpus corpus.jsonl --split split.csv --hours 12",
        "score-credit --corpus corpus.jsonl --split split.csv --model-file credit_model.rmdl --hours 12",
        "fit-epi --corpus corpus.jsonl --split split.csv --model sis --hours 12 --seed 9",
        "fit-epi --corpus corpus.jsonl --split split.csv --model seiz --hours 12 --seed 9",
        "fit-epi --corpus corpus.jsonl --split split.csv --model spikem --hours 12 --seed 9",
        "build-dsts --features features.csv --credit credit.csv --epi epi_sis.csv --epi epi_seiz.csv "
        "--epi epi_spikem.csv --hours 12",
        "train --dsts dsts.csv --seed 9 --trees 40",
        "predict --dsts dsts.csv --model-file model.rmdl",
        "importance --model-file model.rmdl",
        "train --dsts dsts.csv --model svm --out svm.rmdl",
        "predict --dsts dsts.csv --model-file svm.rmdl --out svm_preds.csv",
        "evaluate --config eval.cfg --corpus corpus.jsonl --without-credit",
        "run --config eval.cfg --corpus corpus.jsonl --hours 24 --out-dir run",
        "report --input report.json --out-dir rendered",
    };
    for (const char* side : {"a", "b"}) {
        const fs::path dir = root / side;
        fs::create_directories(dir);
        std::ofstream(dir / "eval.cfg") << "# small evaluation\nseed=9\ncutoffs=1,48\ntrees=40\nfolds=3\n"
                                           "epochs=2\ntweets-per-event=20\n";
        for (const auto& step : steps) {
            const int code = shell("cd " + dir.string() + " && " + cli + " " + step, root / "log.txt");
            if (code != 0) {
                out.require(false, "'" + step.substr(0, step.find(' ')) + "' exit " + std::to_string(code));
                return out;
            }
        }
    }
    std::size_t compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
        if (!entry.is_regular_file()) continue;
        const auto rel = fs::relative(entry.path(), root / "a");
        const fs::path twin = root / "b" / rel;
        out.require(fs::exists(twin) && slurp(entry.path()) == slurp(twin), rel.string() + " byte-identical");
        ++compared;
    }
    out.note(std::to_string(steps.size()) + " invocations per run, " + std::to_string(compared) + " files compared");
    if (out.pass) fs::remove_all(root);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "gradient check", gradient_check},
        {2, "formula goldens", formula_goldens},
        {3, "DSTS structure", dsts_structure},
        {4, "epidemic self-consistency", epidemic_consistency},
        {5, "Nelder-Mead on Rosenbrock", optimizer},
        {6, "classifier oracle equivalence", classifier_oracle},
        {7, "end-to-end trend", end_to_end_trend},
        {8, "leakage probe", leakage_probe},
        {9, "CLI determinism", cli_determinism},
    };
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        failed += !o.pass;
        std::printf("criterion %d: %s  %s  (%s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
