#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rumor/credibility.hpp"
#include "rumor/crossval.hpp"
#include "rumor/dataset.hpp"
#include "rumor/dsts.hpp"
#include "rumor/epifit.hpp"
#include "rumor/lexfeatures.hpp"
#include "rumor/lexicons.hpp"

namespace rumor {

struct FeatureToggles {
    bool credit = true;
    bool crowd = true;
    bool epi = true;     // SIS and SEIZ parameters
    bool spikem = true;

    bool operator==(const FeatureToggles&) const = default;
};

// How epidemic parameters become per-interval values.
//   prefix:    one fit on the counts observed before the cutoff, copied to every
//              active interval;
//   expanding: interval t carries the fit on counts 0..t.
enum class EpiMode { prefix, expanding };

std::string_view to_string(EpiMode mode);
EpiMode parse_epi_mode(std::string_view text);  // throws UsageError

struct PipelineConfig {
    std::string corpus_path;
    std::string lexicon_dir;   // empty = builtin lists
    std::string domains_path;  // empty = builtin snapshot
    int intervals = 48;
    std::vector<double> cutoffs{1, 6, 12, 18, 24, 30, 36, 42, 48};
    std::uint64_t seed = 0;
    FeatureToggles features;
    ModelSpec model;
    std::optional<bool> normalize;  // default: false for the forest, true for the SVM
    std::string out_dir = ".";
    int folds = 10;
    bool ablation = false;  // also evaluate with CreditScore removed

    double pretrain_fraction = 1.0 / 3.0;
    int credit_tweets_per_event = 60;  // training tweets sampled per pretraining event; 0 = all
    CredibilityHyper credit;

    EpiMode epi_mode = EpiMode::prefix;
    EpiFitConfig epi;

    PipelineConfig();
    bool effective_normalize() const;
    void validate() const;  // throws UsageError
};

// Canonical JSON of every field that influences results, and its FNV-1a hash.
std::string config_json(const PipelineConfig& config);
std::string config_hash(const PipelineConfig& config);

struct FeatureContext {
    Lexicons lexicons;
    DomainMetadata domains;

    static FeatureContext from_config(const PipelineConfig& config);
};

// Thread-safe memo of epidemic fits keyed by (model, counts, population).
class EpiFitCache {
public:
    EpiFitResult fit(const VolumeSeries& series, EpiModel model, const EpiFitConfig& config);

private:
    std::mutex mutex_;
    std::map<std::string, EpiFitResult> results_;
};

// Fits behind epi_feature_matrix, one per active interval. In prefix mode
// every entry is the same fit of the whole observed prefix; in expanding mode
// entry t uses intervals 0..t.
std::vector<EpiFitResult> epi_interval_fits(const Event& event, int intervals, double hours, EpiModel model,
                                            const EpiFitConfig& config, EpiMode mode, EpiFitCache* cache = nullptr);

// Per-interval epidemic features of an event truncated at `hours`: one
// column per parameter of `model`; rows at or after the cutoff are zero.
Matrix epi_feature_matrix(const Event& event, int intervals, double hours, EpiModel model,
                          const EpiFitConfig& config, EpiMode mode, EpiFitCache* cache = nullptr);

// Feature names in catalog order for the enabled toggles.
std::vector<std::string> enabled_feature_names(const FeatureToggles& toggles);

// Raw N x D matrix for one event at one cutoff. `credit_model` is required
// when toggles.credit is set.
IntervalFeatureMatrix build_feature_matrix(const Event& event, double hours, const PipelineConfig& config,
                                           const FeatureContext& context, const CredibilityModel* credit_model,
                                           EpiFitCache* cache = nullptr);

struct EventSplit {
    std::vector<std::string> pretrain;  // credibility-model events
    std::vector<std::string> classify;  // events the classifier sees
};

// Stratified, seed-determined: each class is ordered by id, shuffled and
// cut at round(fraction * size). Unlabelled events are left out.
EventSplit split_events(std::span<const Event> events, double pretrain_fraction, std::uint64_t seed);

// Throws DataError when an event appears on both sides.
void check_disjoint(const EventSplit& split);

// Trains the credibility network on the pretraining events (sampling up to
// credit_tweets_per_event in-window tweets from each).
CredibilityModel train_credit_model(std::span<const Event> events, const EventSplit& split,
                                    const PipelineConfig& config);

// DSTS dataset over `events` at one cutoff. Rows follow the order of `ids`.
Dataset build_dataset(std::span<const Event> events, std::span<const std::string> ids, double hours,
                      const PipelineConfig& config, const FeatureContext& context,
                      const CredibilityModel* credit_model, EpiFitCache* cache = nullptr);

struct EventPrediction {
    std::string event_id;
    std::optional<Label> truth;
    Prediction prediction;
    int fold = -1;
};

struct PipelineResult {
    EventSplit split;
    double hours = 48.0;
    CvResult cv;
    std::vector<EventPrediction> predictions;
};

// Cascade for one cutoff (the last configured one): split, pretrain the
// credibility model, build DSTS vectors and collect out-of-fold predictions.
PipelineResult run_pipeline(const PipelineConfig& config, std::span<const Event> events);

struct SeriesResult {
    std::string name;  // "all" or "without-credit"
    double accuracy = 0.0;
    std::vector<double> fold_accuracy;
    std::vector<ImportanceEntry> importance;  // forest trained on every classification event
};

struct CutoffResult {
    double hours = 0.0;
    std::vector<SeriesResult> series;
};

struct EvaluationReport {
    std::vector<CutoffResult> cutoffs;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string config;  // canonical JSON
    std::vector<std::string> pretrain_events;
    std::vector<std::string> classify_events;
};

EvaluationReport evaluate_over_time(const PipelineConfig& config, std::span<const Event> events);

}  // namespace rumor
