#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rumor/corpus.hpp"

namespace rumor {

// Dense row-major matrix: one row per interval, one column per feature.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c, double fill = 0.0);

    double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    bool operator==(const Matrix&) const = default;
};

struct IntervalFeatureMatrix {
    std::string event_id;
    std::optional<Label> label;
    std::vector<std::string> feature_names;  // catalog order
    Matrix values;                           // N x D
    std::vector<bool> empty;                 // per interval: no tweets, or after the cutoff
    double cutoff_hours = 48.0;
};

// Intervals that start before the cutoff: ceil(hours * N / 48), at least 1.
int active_intervals(double cutoff_hours, int intervals);

// Column-wise z-score over the first `active` rows (population sigma); a
// constant column becomes zeros, rows from `active` on are zero-filled.
// active < 0 means all rows.
Matrix zscore_normalize(const Matrix& f, int active = -1);

// Row t = (F[t+1] - F[t]) / interval_hours for t + 1 < active, zeros elsewhere.
Matrix slope_blocks(const Matrix& f, double interval_hours, int active = -1);

struct DstsOptions {
    bool normalize = true;
    int active = -1;  // rows observed before the cutoff; -1 = all
};

// [F rows 0..N-1, S rows 0..N-1] flattened row-major, length 2 * D * N. The
// F block is normalized unless options.normalize is false; S is computed from
// the F block that is emitted.
std::vector<double> build_dsts_vector(const Matrix& f, double interval_hours, const DstsOptions& options = {});

// f_<name>_t<t> for every (t, name), then s_<name>_t<t>, matching the layout.
std::vector<std::string> dsts_column_names(std::span<const std::string> feature_names, int intervals);

// Base feature of a DSTS column name ("f_CreditScore_t3" -> "CreditScore").
std::string_view dsts_base_feature(std::string_view column);

}  // namespace rumor
