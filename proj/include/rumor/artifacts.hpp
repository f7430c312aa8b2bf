#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rumor/dataset.hpp"
#include "rumor/pipeline.hpp"
#include "rumor/tables.hpp"

namespace rumor {

// CSV artifacts exchanged between the command-line stages.
//
//   features.csv  event_id,label,interval,<35 lexical features>,empty   (all N rows)
//   credit.csv    event_id,interval,credit_score,tweet_count            (active rows)
//   epi.csv       event_id,interval,<model parameters>,rms,converged,evaluations (active rows)
//   dsts.csv      event_id,label,<DSTS columns>
//   preds.csv     event_id,label,predicted,p_rumor
//
// Events are emitted in input order; unlabeled events carry an empty label.

CsvTable features_table(std::span<const Event> events, double hours, int intervals, const FeatureContext& context);
CsvTable credit_table(std::span<const Event> events, double hours, int intervals, const CredibilityModel& model);
CsvTable epi_table(std::span<const Event> events, double hours, int intervals, EpiModel model,
                   const EpiFitConfig& config, EpiMode mode);

// Which model an epi.csv table holds, judged from its parameter columns.
EpiModel epi_table_model(const CsvTable& table);  // throws DataError

struct AssembleOptions {
    double hours = 48.0;
    int intervals = 48;
    bool normalize = false;
    bool crowd = true;
};

// Joins the per-stage tables into DSTS vectors; the column layout matches
// build_dataset for the corresponding feature toggles. Intervals missing from
// the credit or epi tables are zero. Unlabeled events are kept only when
// `truth` is given (their Dataset label is a placeholder).
Dataset assemble_dsts(const CsvTable& features, const CsvTable* credit, std::span<const CsvTable> epi,
                      const AssembleOptions& options, std::vector<std::optional<Label>>* truth = nullptr);

CsvTable dataset_table(const Dataset& data, std::span<const std::optional<Label>> truth = {});
// Throws DataError for unlabeled rows unless `truth` is given.
Dataset dataset_from_table(const CsvTable& table, std::vector<std::optional<Label>>* truth = nullptr);

CsvTable predictions_table(std::span<const std::string> ids, std::span<const std::optional<Label>> truth,
                           std::span<const Prediction> predictions);
CsvTable ranking_table(std::span<const ImportanceEntry> importance);
CsvTable split_table(const EventSplit& split);

}  // namespace rumor
