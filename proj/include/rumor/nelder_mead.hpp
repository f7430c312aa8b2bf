#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rumor {

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    void project(std::span<double> x) const;
};

struct NelderMeadConfig {
    // Per-coordinate initial simplex offsets; empty -> 5% of |x0_i| (0.00025 at zero).
    std::vector<double> initial_step;
    double tol_x = 1e-8;  // stop when every vertex is within tol_x (max-norm) of the best
    int max_evaluations = 2000;
    double reflection = 1.0;
    double expansion = 2.0;
    double contraction = 0.5;
    double shrink = 0.5;
};

struct NelderMeadResult {
    std::vector<double> x;
    double f = 0.0;
    int evaluations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

// Simplex search with reflection/expansion/contraction/shrink. Trial points are
// projected into `bounds` when given; non-finite objective values rank as +inf.
// If no initial vertex has a finite value the result is returned unconverged.
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0, const Bounds* bounds,
                             const NelderMeadConfig& config);

}  // namespace rumor
