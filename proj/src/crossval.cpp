#include "rumor/crossval.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "rumor/errors.hpp"

namespace rumor {

std::vector<int> assign_folds(const Dataset& data, int folds, std::uint64_t seed) {
    if (folds < 2) throw UsageError("cross-validation needs at least 2 folds");
    std::vector<int> fold_of(data.rows(), -1);
    int next = 0;
    for (Label label : {Label::rumor, Label::news}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < data.rows(); ++i)
            if (data.y[i] == label) members.push_back(i);
        if (members.size() < static_cast<std::size_t>(folds))
            throw DataError("class '" + std::string(to_string(label)) + "' has " + std::to_string(members.size()) +
                            " events, fewer than the " + std::to_string(folds) + " folds");
        std::stable_sort(members.begin(), members.end(),
                         [&](std::size_t a, std::size_t b) { return data.ids[a] < data.ids[b]; });
        std::seed_seq seq{seed, static_cast<std::uint64_t>(label == Label::rumor ? 1 : 2)};
        std::mt19937_64 rng(seq);
        for (std::size_t k = members.size(); k > 1; --k) {
            const auto pick = std::uniform_int_distribution<std::size_t>(0, k - 1)(rng);
            std::swap(members[k - 1], members[pick]);
        }
        for (std::size_t i : members) {
            fold_of[i] = next;
            next = (next + 1) % folds;
        }
    }
    return fold_of;
}

CvResult cross_validate(const Dataset& data, const Learner& learner, int folds, std::uint64_t seed) {
    CvResult result;
    result.fold_of = assign_folds(data, folds, seed);
    result.out_of_fold.resize(data.rows());
    for (int f = 0; f < folds; ++f) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < data.rows(); ++i) (result.fold_of[i] == f ? test : train).push_back(i);
        const Dataset test_set = data.subset(test);
        const auto predictions = learner(data.subset(train), test_set);
        if (predictions.size() != test.size()) throw UsageError("learner returned the wrong number of predictions");
        int correct = 0;
        for (std::size_t k = 0; k < test.size(); ++k) {
            result.out_of_fold[test[k]] = predictions[k];
            correct += predictions[k].label == test_set.y[k];
        }
        result.fold_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(test.size()));
    }
    result.mean_accuracy =
        std::accumulate(result.fold_accuracy.begin(), result.fold_accuracy.end(), 0.0) / static_cast<double>(folds);
    return result;
}

Learner make_learner(const ModelSpec& spec) {
    if (spec.kind == ModelKind::forest) {
        return [cfg = spec.forest](const Dataset& train, const Dataset& test) {
            const Forest forest = train_forest(train, cfg);
            std::vector<Prediction> out;
            for (std::size_t i = 0; i < test.rows(); ++i) out.push_back(predict_forest(forest, test.row(i)));
            return out;
        };
    }
    return [cfg = spec.svm](const Dataset& train, const Dataset& test) {
        const SvmModel model = train_svm_rbf(train, cfg);
        std::vector<Prediction> out;
        for (std::size_t i = 0; i < test.rows(); ++i) out.push_back(predict_svm(model, test.row(i)));
        return out;
    };
}

}  // namespace rumor
