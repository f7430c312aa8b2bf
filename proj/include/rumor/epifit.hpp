#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rumor/corpus.hpp"

namespace rumor {

struct VolumeSeries {
    std::vector<double> counts;  // tweets per interval
    double interval_hours = 1.0;
    double population = 0.0;  // susceptible population proxy
};

// Per-interval counts of the in-window tweets; population = their total.
VolumeSeries volume_series(const Event& event, int intervals);

// Rates are per hour.
struct SisParams {
    double beta = 0.0;   // infection
    double alpha = 0.0;  // recovery
};

struct SeizParams {
    double beta = 0.0;     // S-I contact
    double b = 0.0;        // S-Z contact
    double rho = 0.0;      // E-I contact
    double epsilon = 0.0;  // E -> I self adoption
    double p = 0.0;        // S -> I on contact with I
    double l = 0.0;        // S -> Z on contact with Z

    // ((1-p) beta + (1-l) b) / (rho + epsilon); 0 when rho + epsilon == 0.
    double r_si() const;
};

struct SeizState {
    double s = 0.0, e = 0.0, i = 0.0, z = 0.0;
    double total() const { return s + e + i + z; }
};

// Interval indices for the shock and both periodic gates.
struct SpikeMParams {
    double beta = 0.0;        // cascade strength
    int shock_index = 0;      // n_b
    double shock_size = 0.0;  // S_b
    double epsilon = 0.0;     // background rate per interval
    double pa = 0.0, pp = 24.0, ps = 0.0;
    double qa = 0.0, qp = 24.0, qs = 0.0;
};

// RK4 from times[0] (state i0) through every later time point, with equal
// substeps no longer than max_step. Returns I at each time. Throws
// NumericalError on a non-finite state, UsageError on bad inputs.
std::vector<double> simulate_sis(const SisParams& params, double population, double i0,
                                 std::span<const double> times, double max_step);

std::vector<SeizState> simulate_seiz(const SeizParams& params, double population, const SeizState& initial,
                                     std::span<const double> times, double max_step);

// New infections per interval: zero before n_b, then
//   dB(n+1) = gate(n+1) * [ sum_{t=n_b}^{n} (dB(t) + S(t)) * beta * (n+1-t)^-1.5 + epsilon ]
// with S(n_b) = S_b and two multiplicative sinusoidal gates.
std::vector<double> simulate_spikem(const SpikeMParams& params, int intervals);
double spikem_gate(const SpikeMParams& params, int n);

enum class EpiModel { sis, seiz, spikem };

std::string_view to_string(EpiModel model);
EpiModel parse_epi_model(std::string_view text);  // throws UsageError

// Feature columns for each model, in catalog order.
std::span<const std::string_view> epi_feature_names(EpiModel model);

struct EpiFitConfig {
    int starts = 8;
    std::uint64_t seed = 0;
    int max_evaluations = 5000;  // per simplex run
    int restarts = 10;           // re-launch from the best vertex while it keeps improving
    double tol_x = 1e-7;
    double max_rate = 50.0;           // per hour
    double min_period = 2.0;          // intervals
    double max_period = 48.0;         // intervals
    double rate_step_product = 1.0;   // RK4 substep h * fastest rate
    double max_step_hours = 0.5;
    double seiz_skeptic_seed = 1.0;  // Z(0) as a multiple of I(0)
};

struct EpiFitResult {
    EpiModel model = EpiModel::sis;
    std::variant<SisParams, SeizParams, SpikeMParams> params;
    double rms_residual = 0.0;
    bool converged = false;
    int evaluations = 0;

    // Values for epi_feature_names(model).
    std::vector<double> feature_values() const;
};

// SIS/SEIZ are fitted to the cumulative count (I(0) = first interval's count),
// SpikeM to per-interval counts with an outer search over the shock interval.
// Degenerate series (all zero, or fewer than 4 non-empty intervals for
// SEIZ/SpikeM) give converged = false and zeroed parameters. Starts run in
// parallel when OpenMP is available.
EpiFitResult fit_model(const VolumeSeries& series, EpiModel model, const EpiFitConfig& config = {});

namespace reference {
// Same result as rumor::fit_model, starts evaluated one after another.
EpiFitResult fit_model(const VolumeSeries& series, EpiModel model, const EpiFitConfig& config = {});
}  // namespace reference

}  // namespace rumor
