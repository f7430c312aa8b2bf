#include "rumor/dsts.hpp"

#include <algorithm>
#include <cmath>

#include "rumor/errors.hpp"

namespace rumor {

Matrix::Matrix(int r, int c, double fill) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {
    if (r < 0 || c < 0) throw UsageError("matrix dimensions must be non-negative");
}

int active_intervals(double cutoff_hours, int intervals) {
    if (intervals < 1) throw UsageError("interval count must be positive");
    if (!(cutoff_hours > 0.0 && cutoff_hours <= 48.0)) throw UsageError("cutoff must lie in (0, 48] hours");
    const double exact = cutoff_hours * intervals / 48.0;
    const int a = static_cast<int>(std::ceil(exact - 1e-9));
    return std::clamp(a, 1, intervals);
}

namespace {

int resolve_active(const Matrix& f, int active) {
    if (active < 0) return f.rows;
    if (active > f.rows) throw UsageError("active rows exceed the matrix");
    return active;
}

}  // namespace

Matrix zscore_normalize(const Matrix& f, int active) {
    const int a = resolve_active(f, active);
    Matrix out(f.rows, f.cols);
    if (a == 0) return out;
    for (int c = 0; c < f.cols; ++c) {
        double lo = f(0, c), hi = f(0, c), mean = 0.0;
        for (int r = 0; r < a; ++r) {
            lo = std::min(lo, f(r, c));
            hi = std::max(hi, f(r, c));
            mean += f(r, c);
        }
        if (lo == hi) continue;
        mean /= a;
        double var = 0.0;
        for (int r = 0; r < a; ++r) var += (f(r, c) - mean) * (f(r, c) - mean);
        const double sigma = std::sqrt(var / a);
        if (!(sigma > 0.0)) continue;
        for (int r = 0; r < a; ++r) out(r, c) = (f(r, c) - mean) / sigma;
    }
    return out;
}

Matrix slope_blocks(const Matrix& f, double interval_hours, int active) {
    if (!(interval_hours > 0.0)) throw UsageError("interval length must be positive");
    const int a = resolve_active(f, active);
    Matrix out(f.rows, f.cols);
    for (int r = 0; r + 1 < a; ++r)
        for (int c = 0; c < f.cols; ++c) out(r, c) = (f(r + 1, c) - f(r, c)) / interval_hours;
    return out;
}

std::vector<double> build_dsts_vector(const Matrix& f, double interval_hours, const DstsOptions& options) {
    const int a = resolve_active(f, options.active);
    for (double v : f.data)
        if (!std::isfinite(v)) throw DataError("feature matrix contains a non-finite value");
    Matrix block = options.normalize ? zscore_normalize(f, a) : f;
    if (!options.normalize)
        for (int r = a; r < f.rows; ++r)
            for (int c = 0; c < f.cols; ++c) block(r, c) = 0.0;
    const Matrix slopes = slope_blocks(block, interval_hours, a);
    std::vector<double> v;
    v.reserve(block.data.size() * 2);
    v.insert(v.end(), block.data.begin(), block.data.end());
    v.insert(v.end(), slopes.data.begin(), slopes.data.end());
    return v;
}

std::vector<std::string> dsts_column_names(std::span<const std::string> feature_names, int intervals) {
    std::vector<std::string> names;
    names.reserve(feature_names.size() * static_cast<std::size_t>(intervals) * 2);
    for (const char* prefix : {"f_", "s_"})
        for (int t = 0; t < intervals; ++t)
            for (const auto& name : feature_names) names.push_back(prefix + name + "_t" + std::to_string(t));
    return names;
}

std::string_view dsts_base_feature(std::string_view column) {
    if (column.size() > 2 && (column.starts_with("f_") || column.starts_with("s_"))) column.remove_prefix(2);
    const auto cut = column.rfind("_t");
    if (cut != std::string_view::npos && cut + 2 < column.size() &&
        std::all_of(column.begin() + static_cast<std::ptrdiff_t>(cut + 2), column.end(),
                    [](char ch) { return ch >= '0' && ch <= '9'; }))
        column = column.substr(0, cut);
    return column;
}

}  // namespace rumor
