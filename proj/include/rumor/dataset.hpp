#pragma once

#include <span>
#include <string>
#include <vector>

#include "rumor/corpus.hpp"

namespace rumor {

// Event-level design matrix: one row per event, columns named after the DSTS
// layout.
struct Dataset {
    std::vector<std::string> ids;
    std::vector<std::string> columns;
    std::vector<double> x;  // row-major, rows() x dim()
    std::vector<Label> y;

    std::size_t rows() const { return ids.size(); }
    std::size_t dim() const { return columns.size(); }
    std::span<const double> row(std::size_t i) const { return {x.data() + i * dim(), dim()}; }

    void add(std::string id, std::span<const double> values, Label label);  // throws UsageError on width mismatch
    Dataset subset(std::span<const std::size_t> rows) const;
    std::size_t count(Label label) const;
};

}  // namespace rumor
