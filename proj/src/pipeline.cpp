#include "rumor/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <set>

#include <json.hpp>

#include "rumor/container.hpp"
#include "rumor/errors.hpp"
#include "rumor/tables.hpp"

namespace rumor {

std::string_view to_string(EpiMode mode) { return mode == EpiMode::prefix ? "prefix" : "expanding"; }

EpiMode parse_epi_mode(std::string_view text) {
    if (text == "prefix") return EpiMode::prefix;
    if (text == "expanding") return EpiMode::expanding;
    throw UsageError("unknown epidemic mode '" + std::string(text) + "' (prefix|expanding)");
}

PipelineConfig::PipelineConfig() {
    epi.starts = 2;
    epi.max_evaluations = 400;
    epi.restarts = 1;
}

bool PipelineConfig::effective_normalize() const { return normalize.value_or(model.kind == ModelKind::svm); }

void PipelineConfig::validate() const {
    if (intervals < 1) throw UsageError("--intervals must be positive");
    for (double h : cutoffs)
        if (!(h > 0.0 && h <= 48.0)) throw UsageError("cutoff hours must lie in (0, 48]");
    if (!(pretrain_fraction > 0.0 && pretrain_fraction < 1.0) && features.credit)
        throw UsageError("pretrain fraction must lie in (0, 1) when CreditScore is enabled");
    if (folds < 2) throw UsageError("need at least 2 folds");
    if (credit_tweets_per_event < 0) throw UsageError("credit tweets per event must be >= 0");
    credit.validate();
}

std::string config_json(const PipelineConfig& c) {
    nlohmann::ordered_json j;
    j["intervals"] = c.intervals;
    j["cutoffs"] = c.cutoffs;
    j["seed"] = c.seed;
    j["features"] = {{"credit", c.features.credit},
                     {"crowd", c.features.crowd},
                     {"epi", c.features.epi},
                     {"spikem", c.features.spikem}};
    j["model"] = c.model.kind == ModelKind::forest ? "rf" : "svm";
    j["forest"] = {{"n_trees", c.model.forest.n_trees},
                   {"max_depth", c.model.forest.max_depth},
                   {"min_samples_leaf", c.model.forest.min_samples_leaf},
                   {"features_per_split", c.model.forest.features_per_split}};
    j["svm"] = {{"c", c.model.svm.c}, {"gamma", c.model.svm.gamma}, {"tolerance", c.model.svm.tolerance}};
    j["normalize"] = c.effective_normalize();
    j["folds"] = c.folds;
    j["ablation"] = c.ablation;
    j["pretrain_fraction"] = c.pretrain_fraction;
    j["credit_tweets_per_event"] = c.credit_tweets_per_event;
    const auto& h = c.credit;
    j["credit"] = {{"embedding", h.embedding}, {"window", h.window},         {"filters", h.filters},
                   {"pool", h.pool},           {"hidden", h.hidden},         {"max_length", h.max_length},
                   {"dropout", h.dropout},     {"learning_rate", h.learning_rate},
                   {"epochs", h.epochs},       {"batch_size", h.batch_size}, {"min_count", h.min_count},
                   {"max_vocabulary", h.max_vocabulary}};
    j["epi_mode"] = to_string(c.epi_mode);
    const auto& e = c.epi;
    j["epi"] = {{"starts", e.starts},
                {"max_evaluations", e.max_evaluations},
                {"restarts", e.restarts},
                {"tol_x", e.tol_x},
                {"max_rate", e.max_rate},
                {"rate_step_product", e.rate_step_product},
                {"max_step_hours", e.max_step_hours},
                {"seiz_skeptic_seed", e.seiz_skeptic_seed}};
    j["corpus"] = c.corpus_path;
    j["lexicon_dir"] = c.lexicon_dir;
    j["domains"] = c.domains_path;
    j["catalog_version"] = kFeatureCatalogVersion;
    return j.dump();
}

std::string config_hash(const PipelineConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : config_json(config)) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

FeatureContext FeatureContext::from_config(const PipelineConfig& config) {
    FeatureContext ctx{config.lexicon_dir.empty() ? Lexicons::builtin() : Lexicons::load_dir(config.lexicon_dir),
                       config.domains_path.empty() ? DomainMetadata::builtin()
                                                   : DomainMetadata::load(config.domains_path)};
    return ctx;
}

EpiFitResult EpiFitCache::fit(const VolumeSeries& series, EpiModel model, const EpiFitConfig& config) {
    std::string key(to_string(model));
    for (double v : {series.interval_hours, series.population, static_cast<double>(config.seed),
                     static_cast<double>(config.starts), static_cast<double>(config.max_evaluations),
                     static_cast<double>(config.restarts)})
        key += "|" + format_number(v);
    for (double c : series.counts) key += "," + format_number(c);
    {
        std::lock_guard lock(mutex_);
        if (auto it = results_.find(key); it != results_.end()) return it->second;
    }
    EpiFitResult r = fit_model(series, model, config);
    std::lock_guard lock(mutex_);
    return results_.emplace(key, std::move(r)).first->second;
}

std::vector<EpiFitResult> epi_interval_fits(const Event& event, int intervals, double hours, EpiModel model,
                                            const EpiFitConfig& config, EpiMode mode, EpiFitCache* cache) {
    const Event cut = truncate_at_cutoff(event, hours);
    const VolumeSeries full = volume_series(cut, intervals);
    const int active = active_intervals(hours, intervals);
    auto fit_prefix = [&](int length) {
        VolumeSeries s;
        s.interval_hours = full.interval_hours;
        s.counts.assign(full.counts.begin(), full.counts.begin() + length);
        for (double c : s.counts) s.population += c;
        return cache ? cache->fit(s, model, config) : fit_model(s, model, config);
    };
    std::vector<EpiFitResult> fits;
    if (mode == EpiMode::prefix) {
        fits.assign(static_cast<std::size_t>(active), fit_prefix(active));
    } else {
        for (int t = 0; t < active; ++t) fits.push_back(fit_prefix(t + 1));
    }
    return fits;
}

Matrix epi_feature_matrix(const Event& event, int intervals, double hours, EpiModel model,
                          const EpiFitConfig& config, EpiMode mode, EpiFitCache* cache) {
    const auto fits = epi_interval_fits(event, intervals, hours, model, config, mode, cache);
    Matrix out(intervals, static_cast<int>(epi_feature_names(model).size()));
    for (std::size_t t = 0; t < fits.size(); ++t) {
        const auto values = fits[t].feature_values();
        for (std::size_t c = 0; c < values.size(); ++c) out(static_cast<int>(t), static_cast<int>(c)) = values[c];
    }
    return out;
}

std::vector<std::string> enabled_feature_names(const FeatureToggles& toggles) {
    std::vector<std::string> names;
    for (const auto& d : feature_catalog()) {
        const bool on = d.category == FeatureCategory::crowd             ? toggles.crowd
                        : d.category == FeatureCategory::epidemiological ? toggles.epi
                        : d.category == FeatureCategory::spikem          ? toggles.spikem
                        : d.category == FeatureCategory::credit          ? toggles.credit
                                                                         : true;
        if (on) names.emplace_back(d.name);
    }
    return names;
}

IntervalFeatureMatrix build_feature_matrix(const Event& event, double hours, const PipelineConfig& config,
                                           const FeatureContext& context, const CredibilityModel* credit_model,
                                           EpiFitCache* cache) {
    const auto& tg = config.features;
    if (tg.credit && !credit_model) throw UsageError("CreditScore enabled without a credibility model");
    const int n = config.intervals;
    const int active = active_intervals(hours, n);
    const Event cut = truncate_at_cutoff(event, hours);
    const auto buckets = bucket_intervals(cut, n);

    IntervalFeatureMatrix m;
    m.event_id = event.event_id;
    m.label = event.label;
    m.feature_names = enabled_feature_names(tg);
    m.cutoff_hours = hours;
    m.values = Matrix(n, static_cast<int>(m.feature_names.size()));
    m.empty.assign(static_cast<std::size_t>(n), true);

    const std::size_t lexical = tg.crowd ? kLexicalFeatureCount : kSurfaceFeatureCount;
    for (int t = 0; t < active; ++t) {
        const IntervalFeatures f = extract_interval_features(buckets[t], context.lexicons, context.domains);
        m.empty[t] = f.empty;
        for (std::size_t c = 0; c < lexical; ++c) m.values(t, static_cast<int>(c)) = f.values[c];
    }
    int col = static_cast<int>(lexical);
    EpiFitConfig epi = config.epi;
    epi.seed = config.seed;
    auto append = [&](const Matrix& block) {
        for (int t = 0; t < active; ++t)
            for (int c = 0; c < block.cols; ++c) m.values(t, col + c) = block(t, c);
        col += block.cols;
    };
    if (tg.epi) {
        append(epi_feature_matrix(event, n, hours, EpiModel::sis, epi, config.epi_mode, cache));
        append(epi_feature_matrix(event, n, hours, EpiModel::seiz, epi, config.epi_mode, cache));
    }
    if (tg.spikem) append(epi_feature_matrix(event, n, hours, EpiModel::spikem, epi, config.epi_mode, cache));
    if (tg.credit) {
        const auto credit = credit_score(*credit_model, buckets);
        Matrix block(n, 1);
        for (int t = 0; t < n; ++t) block(t, 0) = credit.score[t];
        append(block);
    }
    return m;
}

EventSplit split_events(std::span<const Event> events, double pretrain_fraction, std::uint64_t seed) {
    std::set<std::string> pretrain;
    for (Label label : {Label::rumor, Label::news}) {
        std::vector<std::string> ids;
        for (const auto& e : events)
            if (e.label == label) ids.push_back(e.event_id);
        std::sort(ids.begin(), ids.end());
        std::seed_seq seq{seed, static_cast<std::uint64_t>(label == Label::rumor ? 11 : 12)};
        std::mt19937_64 rng(seq);
        for (std::size_t k = ids.size(); k > 1; --k)
            std::swap(ids[k - 1], ids[std::uniform_int_distribution<std::size_t>(0, k - 1)(rng)]);
        const auto take = static_cast<std::size_t>(std::lround(pretrain_fraction * static_cast<double>(ids.size())));
        pretrain.insert(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(std::min(take, ids.size())));
    }
    EventSplit split;
    for (const auto& e : events) {
        if (!e.label) continue;
        (pretrain.count(e.event_id) ? split.pretrain : split.classify).push_back(e.event_id);
    }
    return split;
}

void check_disjoint(const EventSplit& split) {
    const std::set<std::string> pre(split.pretrain.begin(), split.pretrain.end());
    for (const auto& id : split.classify)
        if (pre.count(id)) throw DataError("event '" + id + "' is in both the pretraining and classification sets");
}

CredibilityModel train_credit_model(std::span<const Event> events, const EventSplit& split,
                                    const PipelineConfig& config) {
    check_disjoint(split);
    const std::set<std::string> chosen(split.pretrain.begin(), split.pretrain.end());
    std::vector<LabeledText> data;
    for (std::size_t e = 0; e < events.size(); ++e) {
        const Event& ev = events[e];
        if (!chosen.count(ev.event_id) || !ev.label) continue;
        std::vector<const Tweet*> tweets;
        for (const auto& t : ev.tweets)
            if (ev.window.contains(t.created_at)) tweets.push_back(&t);
        const auto cap = static_cast<std::size_t>(config.credit_tweets_per_event);
        if (cap > 0 && tweets.size() > cap) {
            std::seed_seq seq{config.seed, static_cast<std::uint64_t>(e), std::uint64_t{0xc4ed}};
            std::mt19937_64 rng(seq);
            for (std::size_t k = 0; k < cap; ++k)
                std::swap(tweets[k], tweets[std::uniform_int_distribution<std::size_t>(k, tweets.size() - 1)(rng)]);
            tweets.resize(cap);
        }
        for (const Tweet* t : tweets) data.push_back({t->text, *ev.label});
    }
    CredibilityHyper hyper = config.credit;
    hyper.seed = config.seed;
    return train_credibility(data, hyper);
}

Dataset build_dataset(std::span<const Event> events, std::span<const std::string> ids, double hours,
                      const PipelineConfig& config, const FeatureContext& context,
                      const CredibilityModel* credit_model, EpiFitCache* cache) {
    std::map<std::string, const Event*> by_id;
    for (const auto& e : events) by_id.emplace(e.event_id, &e);
    std::vector<const Event*> chosen;
    for (const auto& id : ids) {
        const auto it = by_id.find(id);
        if (it == by_id.end()) throw DataError("unknown event '" + id + "'");
        if (!it->second->label) throw DataError("event '" + id + "' has no label");
        chosen.push_back(it->second);
    }
    const int active = active_intervals(hours, config.intervals);
    const double interval_hours = 48.0 / config.intervals;
    const DstsOptions options{config.effective_normalize(), active};
    std::vector<std::vector<double>> rows(chosen.size());
    std::vector<std::exception_ptr> errors(chosen.size());
    const auto n = static_cast<std::ptrdiff_t>(chosen.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            const auto m = build_feature_matrix(*chosen[i], hours, config, context, credit_model, cache);
            rows[i] = build_dsts_vector(m.values, interval_hours, options);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    Dataset d;
    d.columns = dsts_column_names(enabled_feature_names(config.features), config.intervals);
    for (std::size_t i = 0; i < chosen.size(); ++i) d.add(chosen[i]->event_id, rows[i], *chosen[i]->label);
    return d;
}

namespace {

ModelSpec seeded_model(const PipelineConfig& config) {
    ModelSpec spec = config.model;
    spec.forest.seed = config.seed;
    return spec;
}

std::optional<CredibilityModel> maybe_credit_model(std::span<const Event> events, const EventSplit& split,
                                                   const PipelineConfig& config) {
    if (!config.features.credit) return std::nullopt;
    return train_credit_model(events, split, config);
}

EventSplit make_split(std::span<const Event> events, const PipelineConfig& config) {
    EventSplit split;
    if (config.features.credit) {
        split = split_events(events, config.pretrain_fraction, config.seed);
    } else {
        for (const auto& e : events)
            if (e.label) split.classify.push_back(e.event_id);
    }
    check_disjoint(split);
    return split;
}

SeriesResult evaluate_series(const std::string& name, const Dataset& data, const PipelineConfig& config) {
    const ModelSpec spec = seeded_model(config);
    const CvResult cv = cross_validate(data, make_learner(spec), config.folds, config.seed);
    SeriesResult s{name, cv.mean_accuracy, cv.fold_accuracy, {}};
    if (spec.kind == ModelKind::forest) s.importance = feature_importance(train_forest(data, spec.forest));
    return s;
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, std::span<const Event> events) {
    config.validate();
    if (config.cutoffs.empty()) throw UsageError("no cutoff configured");
    PipelineResult result;
    result.split = make_split(events, config);
    result.hours = config.cutoffs.back();
    const auto context = FeatureContext::from_config(config);
    const auto credit = maybe_credit_model(events, result.split, config);
    EpiFitCache cache;
    const Dataset data = build_dataset(events, result.split.classify, result.hours, config, context,
                                       credit ? &*credit : nullptr, &cache);
    result.cv = cross_validate(data, make_learner(seeded_model(config)), config.folds, config.seed);
    for (std::size_t i = 0; i < data.rows(); ++i)
        result.predictions.push_back({data.ids[i], data.y[i], result.cv.out_of_fold[i], result.cv.fold_of[i]});
    return result;
}

EvaluationReport evaluate_over_time(const PipelineConfig& config, std::span<const Event> events) {
    config.validate();
    EvaluationReport report;
    report.seed = config.seed;
    report.config = config_json(config);
    report.config_hash = config_hash(config);
    const EventSplit split = make_split(events, config);
    report.pretrain_events = split.pretrain;
    report.classify_events = split.classify;

    const auto context = FeatureContext::from_config(config);
    const auto credit = maybe_credit_model(events, split, config);
    EpiFitCache cache;
    PipelineConfig without = config;
    without.features.credit = false;
    for (double hours : config.cutoffs) {
        CutoffResult row;
        row.hours = hours;
        const Dataset all =
            build_dataset(events, split.classify, hours, config, context, credit ? &*credit : nullptr, &cache);
        row.series.push_back(evaluate_series("all", all, config));
        if (config.ablation && config.features.credit) {
            const Dataset plain = build_dataset(events, split.classify, hours, without, context, nullptr, &cache);
            row.series.push_back(evaluate_series("without-credit", plain, without));
        }
        report.cutoffs.push_back(std::move(row));
    }
    return report;
}

}  // namespace rumor
