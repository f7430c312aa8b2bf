#include "rumor/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rumor/container.hpp"
#include "rumor/errors.hpp"

namespace rumor {

namespace {

double rbf(std::span<const double> a, std::span<const double> b, double gamma) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    return std::exp(-gamma * d2);
}

constexpr const char* kSvmKind = "svm-rbf";

}  // namespace

double SvmModel::decision(std::span<const double> x) const {
    if (x.size() != dim())
        throw UsageError("vector has " + std::to_string(x.size()) + " values, SVM expects " + std::to_string(dim()));
    double f = bias;
    for (std::size_t s = 0; s < coef.size(); ++s)
        f += coef[s] * rbf(std::span<const double>(support.data() + s * dim(), dim()), x, config.gamma);
    return f;
}

SvmModel train_svm_rbf(const Dataset& data, const SvmConfig& cfg) {
    if (!(cfg.c > 0.0) || !(cfg.gamma > 0.0) || !(cfg.tolerance > 0.0) || cfg.max_iterations < 1)
        throw UsageError("SVM needs C > 0, gamma > 0, tolerance > 0 and a positive iteration limit");
    if (data.count(Label::rumor) == 0 || data.count(Label::news) == 0)
        throw UsageError("SVM training needs both classes");
    const std::size_t n = data.rows();
    const double C = cfg.c;
    std::vector<double> y(n), alpha(n, 0.0), grad(n, -1.0);
    for (std::size_t i = 0; i < n; ++i) y[i] = data.y[i] == Label::rumor ? 1.0 : -1.0;
    std::vector<double> K(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) K[i * n + j] = K[j * n + i] = rbf(data.row(i), data.row(j), cfg.gamma);
    auto Q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * K[i * n + j]; };
    auto upper = [&](std::size_t t) { return alpha[t] >= C; };
    auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

    SvmModel model;
    model.config = cfg;
    model.columns = data.columns;
    int iter = 0;
    for (; iter < cfg.max_iterations; ++iter) {
        double gmax = -std::numeric_limits<double>::infinity(), gmin = std::numeric_limits<double>::infinity();
        std::size_t i = n, j = n;
        for (std::size_t t = 0; t < n; ++t) {
            const double v = -y[t] * grad[t];
            const bool in_up = y[t] > 0 ? !upper(t) : !lower(t);
            const bool in_low = y[t] > 0 ? !lower(t) : !upper(t);
            if (in_up && v > gmax) gmax = v, i = t;
            if (in_low && v < gmin) gmin = v, j = t;
        }
        if (i == n || j == n || gmax - gmin < cfg.tolerance) {
            model.converged = true;
            break;
        }
        const double old_i = alpha[i], old_j = alpha[j];
        if (y[i] != y[j]) {
            double quad = K[i * n + i] + K[j * n + j] + 2.0 * Q(i, j);
            if (quad <= 0.0) quad = 1e-12;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) alpha[j] = 0.0, alpha[i] = diff;
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0, alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > C) alpha[i] = C, alpha[j] = C - diff;
            } else if (alpha[j] > C) {
                alpha[j] = C, alpha[i] = C + diff;
            }
        } else {
            double quad = K[i * n + i] + K[j * n + j] - 2.0 * Q(i, j);
            if (quad <= 0.0) quad = 1e-12;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) alpha[i] = C, alpha[j] = sum - C;
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0, alpha[i] = sum;
            }
            if (sum > C) {
                if (alpha[j] > C) alpha[j] = C, alpha[i] = sum - C;
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0, alpha[j] = sum;
            }
        }
        const double di = alpha[i] - old_i, dj = alpha[j] - old_j;
        for (std::size_t t = 0; t < n; ++t) grad[t] += Q(t, i) * di + Q(t, j) * dj;
    }
    model.iterations = iter;

    double ub = std::numeric_limits<double>::infinity(), lb = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    int free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * grad[t];
        if (upper(t)) {
            if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else if (lower(t)) {
            if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
        } else {
            ++free_count;
            free_sum += yg;
        }
    }
    const double rho = free_count > 0 ? free_sum / free_count : (ub + lb) / 2.0;
    model.bias = std::isfinite(rho) ? -rho : 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] <= 0.0) continue;
        model.coef.push_back(alpha[t] * y[t]);
        const auto r = data.row(t);
        model.support.insert(model.support.end(), r.begin(), r.end());
    }
    return model;
}

Prediction predict_svm(const SvmModel& model, std::span<const double> x) {
    const double f = model.decision(x);
    return {f > 0.0 ? Label::rumor : Label::news, 1.0 / (1.0 + std::exp(-f))};
}

void save_svm(std::ostream& out, const SvmModel& model) {
    Container c;
    c.header["kind"] = kSvmKind;
    c.header["schema_version"] = 1;
    c.header["config"] = {{"c", model.config.c},
                          {"gamma", model.config.gamma},
                          {"tolerance", model.config.tolerance},
                          {"max_iterations", model.config.max_iterations}};
    c.header["columns"] = model.columns;
    c.header["bias"] = model.bias;
    c.header["converged"] = model.converged;
    c.header["iterations"] = model.iterations;
    const auto count = static_cast<std::int64_t>(model.coef.size());
    c.tensors.push_back(make_f64("support", {count, static_cast<std::int64_t>(model.dim())}, model.support));
    c.tensors.push_back(make_f64("coef", {count}, model.coef));
    write_container(out, c);
}

SvmModel load_svm(std::istream& in) {
    const Container c = read_container(in);
    SvmModel m;
    try {
        if (c.header.at("kind").get<std::string>() != kSvmKind) throw DataError("not an SVM model file");
        if (c.header.at("schema_version").get<int>() != 1) throw DataError("unsupported SVM model version");
        const auto& j = c.header.at("config");
        m.config.c = j.at("c");
        m.config.gamma = j.at("gamma");
        m.config.tolerance = j.at("tolerance");
        m.config.max_iterations = j.at("max_iterations");
        m.columns = c.header.at("columns").get<std::vector<std::string>>();
        m.bias = c.header.at("bias");
        m.converged = c.header.at("converged");
        m.iterations = c.header.at("iterations");
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("SVM header: ") + e.what());
    }
    m.support = c.tensor("support").values;
    m.coef = c.tensor("coef").values;
    if (m.support.size() != m.coef.size() * m.dim()) throw DataError("SVM support vectors have the wrong size");
    return m;
}

}  // namespace rumor
