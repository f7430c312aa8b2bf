#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rumor/pipeline.hpp"
#include "rumor/tables.hpp"

namespace rumor {

enum class ReportFormat { csv, svg };

ReportFormat parse_report_format(std::string_view text);  // throws UsageError

// Series names in order of first appearance across cutoffs.
std::vector<std::string> series_names(const EvaluationReport& report);

// One row per cutoff: hours, then one accuracy column per series.
CsvTable accuracy_table(const EvaluationReport& report);
// Long form: hours, series, fold, accuracy.
CsvTable fold_table(const EvaluationReport& report);
// Long form: hours, series, rank, feature, importance.
CsvTable importance_table(const EvaluationReport& report);

// Accuracy against hours, one polyline and legend entry per series.
std::string render_svg(const EvaluationReport& report);

std::string report_to_json(const EvaluationReport& report);
EvaluationReport report_from_json(std::string_view text);  // throws DataError

// Writes <stem>.csv (plus <stem>_folds.csv and <stem>_importance.csv) or
// <stem>.svg into `dir`. Returns the primary file written.
std::filesystem::path emit_report(const EvaluationReport& report, ReportFormat format,
                                  const std::filesystem::path& dir, const std::string& stem = "report");

void write_text_file(const std::filesystem::path& path, std::string_view content);  // throws DataError

}  // namespace rumor
