#include "rumor/dataset.hpp"

#include <algorithm>

#include "rumor/errors.hpp"

namespace rumor {

void Dataset::add(std::string id, std::span<const double> values, Label label) {
    if (values.size() != dim())
        throw UsageError("row '" + id + "' has " + std::to_string(values.size()) + " values, expected " +
                         std::to_string(dim()));
    ids.push_back(std::move(id));
    x.insert(x.end(), values.begin(), values.end());
    y.push_back(label);
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.columns = columns;
    out.ids.reserve(rows.size());
    out.x.reserve(rows.size() * dim());
    for (std::size_t r : rows) out.add(ids.at(r), row(r), y.at(r));
    return out;
}

std::size_t Dataset::count(Label label) const { return static_cast<std::size_t>(std::count(y.begin(), y.end(), label)); }

}  // namespace rumor
