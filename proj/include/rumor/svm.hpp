#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "rumor/dataset.hpp"
#include "rumor/forest.hpp"

namespace rumor {

struct SvmConfig {
    double c = 3.0;
    double gamma = 0.2;
    double tolerance = 1e-3;  // KKT violation bound
    int max_iterations = 100000;

    bool operator==(const SvmConfig&) const = default;
};

// Decision f(x) = sum_i coef_i K(sv_i, x) + bias with coef_i = alpha_i y_i,
// y = +1 for rumor. K is the RBF kernel exp(-gamma |a - b|^2).
struct SvmModel {
    SvmConfig config;
    std::vector<std::string> columns;
    std::vector<double> support;  // row-major support vectors
    std::vector<double> coef;
    double bias = 0.0;
    bool converged = false;
    int iterations = 0;

    std::size_t dim() const { return columns.size(); }
    double decision(std::span<const double> x) const;
};

// SMO with maximal-violating-pair selection. On hitting max_iterations the
// best-so-far model is returned with converged = false.
SvmModel train_svm_rbf(const Dataset& data, const SvmConfig& config = {});

// label = rumor when f(x) > 0; p_rumor is a logistic squash of f(x).
Prediction predict_svm(const SvmModel& model, std::span<const double> x);

void save_svm(std::ostream& out, const SvmModel& model);
SvmModel load_svm(std::istream& in);

}  // namespace rumor
