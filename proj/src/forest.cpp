#include "rumor/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>

#include "rumor/container.hpp"
#include "rumor/dsts.hpp"
#include "rumor/errors.hpp"

namespace rumor {

const TreeNode& Tree::walk(std::span<const double> x) const {
    std::size_t at = 0;
    for (;;) {
        const TreeNode& node = nodes.at(at);
        if (node.leaf()) return node;
        at = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left
                                                                                                   : node.right);
    }
}

namespace {

double gini(double rumor, double news) {
    const double n = rumor + news;
    if (n <= 0.0) return 0.0;
    const double p = rumor / n, q = news / n;
    return 1.0 - p * p - q * q;
}

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double child_impurity = 0.0;  // weighted sum of the children's Gini
};

class TreeBuilder {
public:
    TreeBuilder(const Dataset& data, const ForestConfig& cfg, int per_split, std::mt19937_64& rng,
                std::vector<double>& decrease)
        : data_(data), cfg_(cfg), per_split_(per_split), rng_(rng), decrease_(decrease),
          features_(data.dim()) {
        std::iota(features_.begin(), features_.end(), 0);
    }

    Tree build(std::vector<int> sample) {
        total_ = static_cast<double>(sample.size());
        grow(sample, 0);
        return std::move(tree_);
    }

private:
    int grow(std::vector<int>& sample, int depth) {
        const int id = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        int rumor = 0;
        for (int i : sample) rumor += data_.y[static_cast<std::size_t>(i)] == Label::rumor;
        const int news = static_cast<int>(sample.size()) - rumor;
        tree_.nodes[id].rumor = rumor;
        tree_.nodes[id].news = news;

        const bool pure = rumor == 0 || news == 0;
        const bool deep = cfg_.max_depth > 0 && depth >= cfg_.max_depth;
        const auto n = static_cast<int>(sample.size());
        if (pure || deep || n < 2 * cfg_.min_samples_leaf) return id;

        const double parent = gini(rumor, news);
        const Split best = find_split(sample, rumor, news);
        if (best.feature < 0 || !(best.child_impurity < parent * n - 1e-12)) return id;

        std::vector<int> left, right;
        for (int i : sample)
            (data_.row(static_cast<std::size_t>(i))[best.feature] <= best.threshold ? left : right).push_back(i);
        decrease_[best.feature] += (parent * n - best.child_impurity) / total_;
        sample.clear();
        sample.shrink_to_fit();

        tree_.nodes[id].feature = best.feature;
        tree_.nodes[id].threshold = best.threshold;
        const int l = grow(left, depth + 1);
        tree_.nodes[id].left = l;
        const int r = grow(right, depth + 1);
        tree_.nodes[id].right = r;
        return id;
    }

    Split find_split(const std::vector<int>& sample, int rumor_total, int news_total) {
        // Candidates come from a lazy Fisher-Yates draw; features that are constant
        // within the node do not count toward the per-split quota.
        const int dim = static_cast<int>(features_.size());
        Split best;
        double best_score = std::numeric_limits<double>::infinity();
        std::vector<std::pair<double, bool>> column(sample.size());
        const int n = static_cast<int>(sample.size());
        const int min_leaf = std::max(1, cfg_.min_samples_leaf);
        int visited = 0;
        for (int k = 0; k < dim && visited < per_split_; ++k) {
            const int pick = std::uniform_int_distribution<int>(k, dim - 1)(rng_);
            std::swap(features_[k], features_[pick]);
            const int f = features_[k];
            for (int s = 0; s < n; ++s) {
                const auto i = static_cast<std::size_t>(sample[s]);
                column[s] = {data_.row(i)[f], data_.y[i] == Label::rumor};
            }
            std::sort(column.begin(), column.end());
            if (column.front().first == column.back().first) continue;
            ++visited;
            int left_rumor = 0;
            for (int s = 0; s + 1 < n; ++s) {
                left_rumor += column[s].second;
                const int left_n = s + 1, right_n = n - left_n;
                if (column[s].first == column[s + 1].first) continue;
                if (left_n < min_leaf || right_n < min_leaf) continue;
                const int right_rumor = rumor_total - left_rumor;
                const int right_news = news_total - (left_n - left_rumor);
                const double score = left_n * gini(left_rumor, left_n - left_rumor) +
                                     right_n * gini(right_rumor, right_news);
                if (score < best_score - 1e-12) {
                    best_score = score;
                    best = {f, column[s].first, score};
                }
            }
        }
        return best;
    }

    const Dataset& data_;
    const ForestConfig& cfg_;
    int per_split_;
    std::mt19937_64& rng_;
    std::vector<double>& decrease_;
    std::vector<int> features_;
    Tree tree_;
    double total_ = 1.0;
};

void validate(const Dataset& data, const ForestConfig& cfg) {
    if (cfg.n_trees < 1) throw UsageError("forest needs at least one tree");
    if (cfg.min_samples_leaf < 1) throw UsageError("min_samples_leaf must be >= 1");
    if (cfg.max_depth < 0 || cfg.features_per_split < 0) throw UsageError("forest limits must be non-negative");
    if (data.dim() == 0) throw UsageError("dataset has no columns");
    if (data.count(Label::rumor) == 0 || data.count(Label::news) == 0)
        throw UsageError("forest training needs both classes");
}

Forest train(const Dataset& data, const ForestConfig& cfg, bool parallel) {
    validate(data, cfg);
    const int dim = static_cast<int>(data.dim());
    const int per_split = std::min(dim, cfg.features_per_split > 0
                                           ? cfg.features_per_split
                                           : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(dim)))));
    Forest forest;
    forest.config = cfg;
    forest.columns = data.columns;
    forest.trees.resize(static_cast<std::size_t>(cfg.n_trees));
    std::vector<std::vector<double>> decrease(static_cast<std::size_t>(cfg.n_trees),
                                              std::vector<double>(static_cast<std::size_t>(dim), 0.0));
    const int n = static_cast<int>(data.rows());

    auto grow_tree = [&](int t) {
        std::seed_seq seq{cfg.seed + static_cast<std::uint64_t>(t), std::uint64_t{0xf0e57}};
        std::mt19937_64 rng(seq);
        std::vector<int> sample(static_cast<std::size_t>(n));
        std::uniform_int_distribution<int> draw(0, n - 1);
        for (auto& s : sample) s = draw(rng);
        TreeBuilder builder(data, cfg, per_split, rng, decrease[static_cast<std::size_t>(t)]);
        forest.trees[static_cast<std::size_t>(t)] = builder.build(std::move(sample));
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int t = 0; t < cfg.n_trees; ++t) grow_tree(t);
    } else {
        for (int t = 0; t < cfg.n_trees; ++t) grow_tree(t);
    }

    // Per-tree normalisation, then the mean over trees that split at all.
    forest.importance.assign(static_cast<std::size_t>(dim), 0.0);
    int splitting = 0;
    for (const auto& d : decrease) {
        const double sum = std::accumulate(d.begin(), d.end(), 0.0);
        if (!(sum > 0.0)) continue;
        ++splitting;
        for (int c = 0; c < dim; ++c) forest.importance[c] += d[c] / sum;
    }
    if (splitting == 0) {
        std::fill(forest.importance.begin(), forest.importance.end(), 1.0 / dim);
    } else {
        const double sum = std::accumulate(forest.importance.begin(), forest.importance.end(), 0.0);
        for (auto& v : forest.importance) v /= sum;
    }
    return forest;
}

constexpr const char* kForestKind = "random-forest";

}  // namespace

Forest train_forest(const Dataset& data, const ForestConfig& config) { return train(data, config, true); }

Forest reference::train_forest(const Dataset& data, const ForestConfig& config) { return train(data, config, false); }

Prediction predict_forest(const Forest& forest, std::span<const double> x) {
    if (x.size() != forest.dim())
        throw UsageError("vector has " + std::to_string(x.size()) + " values, forest expects " +
                         std::to_string(forest.dim()));
    if (forest.trees.empty()) throw UsageError("forest has no trees");
    double sum = 0.0;
    for (const auto& tree : forest.trees) {
        const TreeNode& leaf = tree.walk(x);
        const int n = leaf.rumor + leaf.news;
        sum += n > 0 ? static_cast<double>(leaf.rumor) / n : 0.0;
    }
    Prediction p;
    p.p_rumor = sum / static_cast<double>(forest.trees.size());
    p.label = p.p_rumor > 0.5 ? Label::rumor : Label::news;
    return p;
}

std::vector<ImportanceEntry> feature_importance(const Forest& forest) {
    std::map<std::string, double> grouped;
    for (std::size_t c = 0; c < forest.columns.size(); ++c)
        grouped[std::string(dsts_base_feature(forest.columns[c]))] +=
            c < forest.importance.size() ? forest.importance[c] : 0.0;
    std::vector<ImportanceEntry> out;
    for (auto& [name, value] : grouped) out.push_back({name, value});
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.importance > b.importance; });
    return out;
}

void save_forest(std::ostream& out, const Forest& forest) {
    Container c;
    c.header["kind"] = kForestKind;
    c.header["schema_version"] = 1;
    c.header["config"] = {{"n_trees", forest.config.n_trees},
                          {"max_depth", forest.config.max_depth},
                          {"min_samples_leaf", forest.config.min_samples_leaf},
                          {"features_per_split", forest.config.features_per_split},
                          {"seed", forest.config.seed}};
    c.header["columns"] = forest.columns;
    std::vector<std::int32_t> offsets{0}, feature, left, right, rumor, news;
    std::vector<double> threshold;
    for (const auto& tree : forest.trees) {
        for (const auto& node : tree.nodes) {
            feature.push_back(node.feature);
            left.push_back(node.left);
            right.push_back(node.right);
            rumor.push_back(node.rumor);
            news.push_back(node.news);
            threshold.push_back(node.threshold);
        }
        offsets.push_back(static_cast<std::int32_t>(feature.size()));
    }
    const auto nodes = static_cast<std::int64_t>(feature.size());
    c.tensors.push_back(make_i32("tree_offsets", {static_cast<std::int64_t>(offsets.size())}, offsets));
    c.tensors.push_back(make_i32("feature", {nodes}, feature));
    c.tensors.push_back(make_f64("threshold", {nodes}, threshold));
    c.tensors.push_back(make_i32("left", {nodes}, left));
    c.tensors.push_back(make_i32("right", {nodes}, right));
    c.tensors.push_back(make_i32("rumor", {nodes}, rumor));
    c.tensors.push_back(make_i32("news", {nodes}, news));
    c.tensors.push_back(make_f64("importance", {static_cast<std::int64_t>(forest.importance.size())}, forest.importance));
    write_container(out, c);
}

Forest load_forest(std::istream& in) {
    const Container c = read_container(in);
    Forest f;
    try {
        if (c.header.at("kind").get<std::string>() != kForestKind) throw DataError("not a random forest model file");
        if (c.header.at("schema_version").get<int>() != 1) throw DataError("unsupported forest model version");
        const auto& j = c.header.at("config");
        f.config.n_trees = j.at("n_trees");
        f.config.max_depth = j.at("max_depth");
        f.config.min_samples_leaf = j.at("min_samples_leaf");
        f.config.features_per_split = j.at("features_per_split");
        f.config.seed = j.at("seed");
        f.columns = c.header.at("columns").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("forest header: ") + e.what());
    }
    const auto& offsets = c.tensor("tree_offsets").ints;
    const auto& feature = c.tensor("feature").ints;
    const auto& threshold = c.tensor("threshold").values;
    const auto& left = c.tensor("left").ints;
    const auto& right = c.tensor("right").ints;
    const auto& rumor = c.tensor("rumor").ints;
    const auto& news = c.tensor("news").ints;
    const std::size_t total = feature.size();
    if (threshold.size() != total || left.size() != total || right.size() != total || rumor.size() != total ||
        news.size() != total || offsets.empty() || offsets.front() != 0 ||
        static_cast<std::size_t>(offsets.back()) != total)
        throw DataError("forest node arrays are inconsistent");
    for (std::size_t t = 0; t + 1 < offsets.size(); ++t) {
        const int lo = offsets[t], hi = offsets[t + 1];
        if (hi <= lo) throw DataError("forest contains an empty tree");
        Tree tree;
        for (int k = lo; k < hi; ++k) {
            TreeNode node{feature[k], threshold[k], left[k], right[k], rumor[k], news[k]};
            const int size = hi - lo;
            if (!node.leaf() && (node.feature >= static_cast<int>(f.columns.size()) || node.left <= k - lo ||
                                 node.right <= k - lo || node.left >= size || node.right >= size))
                throw DataError("forest node links are out of range");
            tree.nodes.push_back(node);
        }
        f.trees.push_back(std::move(tree));
    }
    f.importance = c.tensor("importance").values;
    if (f.importance.size() != f.columns.size()) throw DataError("forest importance vector has the wrong length");
    return f;
}

}  // namespace rumor
