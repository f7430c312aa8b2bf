#include "rumor/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace rumor {

void Bounds::project(std::span<double> x) const {
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (i < lower.size()) x[i] = std::max(x[i], lower[i]);
        if (i < upper.size()) x[i] = std::min(x[i], upper[i]);
    }
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vertex {
    std::vector<double> x;
    double f;
};

}  // namespace

NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0, const Bounds* bounds,
                             const NelderMeadConfig& config) {
    const std::size_t n = x0.size();
    if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");
    if (bounds) bounds->project(x0);

    NelderMeadResult result;
    auto evaluate = [&](std::vector<double>& x) {
        if (bounds) bounds->project(x);
        ++result.evaluations;
        const double f = objective(x);
        return std::isfinite(f) ? f : kInf;
    };

    std::vector<Vertex> simplex;
    simplex.reserve(n + 1);
    simplex.push_back({x0, evaluate(x0)});
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x = x0;
        double step = i < config.initial_step.size() ? config.initial_step[i]
                                                     : (x0[i] != 0.0 ? 0.05 * std::abs(x0[i]) : 0.00025);
        if (bounds && i < bounds->upper.size() && x[i] + step > bounds->upper[i]) step = -step;
        x[i] += step;
        const double f = evaluate(x);
        simplex.push_back({std::move(x), f});
    }

    auto order = [&] {
        std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    };
    order();
    if (!std::isfinite(simplex.front().f)) {
        result.x = simplex.front().x;
        result.f = kInf;
        return result;
    }

    auto diameter = [&] {
        double d = 0.0;
        const auto& best = simplex.front().x;
        for (std::size_t v = 1; v <= n; ++v)
            for (std::size_t i = 0; i < n; ++i) d = std::max(d, std::abs(simplex[v].x[i] - best[i]));
        return d;
    };

    std::vector<double> centroid(n);
    auto along = [&](double t, const std::vector<double>& to) {
        // centroid + t * (to - centroid)
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + t * (to[i] - centroid[i]);
        return x;
    };

    while (true) {
        if (diameter() < config.tol_x) {
            result.converged = true;
            break;
        }
        if (result.evaluations >= config.max_evaluations) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v].x[i];
        for (auto& c : centroid) c /= static_cast<double>(n);

        Vertex& worst = simplex.back();
        const double f_best = simplex.front().f;
        const double f_second = simplex[n - 1].f;

        std::vector<double> xr = along(-config.reflection, worst.x);
        const double fr = evaluate(xr);

        if (fr < f_best) {
            std::vector<double> xe = along(config.expansion, xr);
            const double fe = evaluate(xe);
            if (fe < fr)
                worst = {std::move(xe), fe};
            else
                worst = {std::move(xr), fr};
        } else if (fr < f_second) {
            worst = {std::move(xr), fr};
        } else {
            bool accepted = false;
            if (fr < worst.f) {
                std::vector<double> xc = along(config.contraction, xr);
                const double fc = evaluate(xc);
                if (fc <= fr) {
                    worst = {std::move(xc), fc};
                    accepted = true;
                }
            } else {
                std::vector<double> xcc = along(config.contraction, worst.x);
                const double fcc = evaluate(xcc);
                if (fcc < worst.f) {
                    worst = {std::move(xcc), fcc};
                    accepted = true;
                }
            }
            if (!accepted) {
                const std::vector<double> best = simplex.front().x;
                for (std::size_t v = 1; v <= n; ++v) {
                    for (std::size_t i = 0; i < n; ++i)
                        simplex[v].x[i] = best[i] + config.shrink * (simplex[v].x[i] - best[i]);
                    simplex[v].f = evaluate(simplex[v].x);
                }
            }
        }
        order();
    }

    result.x = simplex.front().x;
    result.f = simplex.front().f;
    return result;
}

}  // namespace rumor
