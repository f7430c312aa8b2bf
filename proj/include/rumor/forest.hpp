#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "rumor/dataset.hpp"

namespace rumor {

struct ForestConfig {
    int n_trees = 350;
    int max_depth = 0;  // 0 = grow until pure or min_samples_leaf stops it
    int min_samples_leaf = 2;
    int features_per_split = 0;  // 0 = ceil(sqrt(dim))
    std::uint64_t seed = 0;

    bool operator==(const ForestConfig&) const = default;
};

// A leaf has feature == -1. Internal nodes send x[feature] <= threshold left;
// thresholds are the largest training value on the left side.
// Counts are bootstrap-weighted training samples that reached the node.
struct TreeNode {
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int rumor = 0;
    int news = 0;

    bool leaf() const { return feature < 0; }
    bool operator==(const TreeNode&) const = default;
};

struct Tree {
    std::vector<TreeNode> nodes;  // root at 0

    // Leaf reached by x.
    const TreeNode& walk(std::span<const double> x) const;
    bool operator==(const Tree&) const = default;
};

struct Forest {
    ForestConfig config;
    std::vector<std::string> columns;
    std::vector<Tree> trees;
    std::vector<double> importance;  // mean decrease in Gini impurity per column, sums to 1

    std::size_t dim() const { return columns.size(); }
    bool operator==(const Forest&) const = default;
};

struct Prediction {
    Label label = Label::news;
    double p_rumor = 0.0;
};

// Bootstrap + CART with Gini impurity, trees in parallel. Throws UsageError
// unless both classes are present.
Forest train_forest(const Dataset& data, const ForestConfig& config = {});

namespace reference {
Forest train_forest(const Dataset& data, const ForestConfig& config = {});
}

// Mean leaf rumor fraction over trees; ties go to news. Throws UsageError on
// a dimension mismatch.
Prediction predict_forest(const Forest& forest, std::span<const double> x);

struct ImportanceEntry {
    std::string feature;
    double importance = 0.0;
};

// Column importances summed per base feature (see dsts_base_feature), sorted
// by decreasing importance, then name.
std::vector<ImportanceEntry> feature_importance(const Forest& forest);

void save_forest(std::ostream& out, const Forest& forest);
Forest load_forest(std::istream& in);  // throws DataError

}  // namespace rumor
