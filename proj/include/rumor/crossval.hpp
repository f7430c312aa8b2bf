#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rumor/dataset.hpp"
#include "rumor/forest.hpp"
#include "rumor/svm.hpp"

namespace rumor {

// Stratified assignment: each class is ordered by id, shuffled with `seed`
// and dealt round-robin, the second class continuing where the first
// stopped. Depends only on (seed, ids, labels). Throws DataError when a
// class has fewer than `folds` rows.
std::vector<int> assign_folds(const Dataset& data, int folds, std::uint64_t seed);

struct CvResult {
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
    std::vector<int> fold_of;            // per row
    std::vector<Prediction> out_of_fold;  // per row
};

using Learner = std::function<std::vector<Prediction>(const Dataset& train, const Dataset& test)>;

CvResult cross_validate(const Dataset& data, const Learner& learner, int folds = 10, std::uint64_t seed = 0);

enum class ModelKind { forest, svm };

struct ModelSpec {
    ModelKind kind = ModelKind::forest;
    ForestConfig forest;
    SvmConfig svm;
};

Learner make_learner(const ModelSpec& spec);

}  // namespace rumor
