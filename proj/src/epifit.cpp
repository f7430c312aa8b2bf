#include "rumor/epifit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "rumor/errors.hpp"
#include "rumor/nelder_mead.hpp"

namespace rumor {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <std::size_t K, typename Rhs>
void rk4_step(std::array<double, K>& y, double h, const Rhs& rhs) {
    std::array<double, K> k1, k2, k3, k4, tmp;
    rhs(y, k1);
    for (std::size_t i = 0; i < K; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < K; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < K; ++i) tmp[i] = y[i] + h * k3[i];
    rhs(tmp, k4);
    for (std::size_t i = 0; i < K; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

// Integrates through every time point, calling emit(y) at each (including times[0]).
template <std::size_t K, typename Rhs, typename Emit>
void integrate(std::array<double, K> y, std::span<const double> times, double max_step, const Rhs& rhs,
               const Emit& emit) {
    if (!(max_step > 0.0)) throw UsageError("max_step must be positive");
    if (times.empty()) return;
    emit(y);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double span = times[k] - times[k - 1];
        if (span < 0.0) throw UsageError("time grid must be non-decreasing");
        const int steps = std::max(1, static_cast<int>(std::ceil(span / max_step - 1e-12)));
        const double h = span / steps;
        for (int s = 0; s < steps && span > 0.0; ++s) rk4_step(y, h, rhs);
        for (double v : y)
            if (!std::isfinite(v)) throw NumericalError("epidemic simulation produced a non-finite state");
        emit(y);
    }
}

void check_population(double population) {
    if (!(population > 0.0) || !std::isfinite(population)) throw UsageError("population must be positive");
}

constexpr std::array<std::string_view, 2> kSisNames{"BetaSIS", "AlphaSIS"};
constexpr std::array<std::string_view, 7> kSeizNames{"BetaSEIZ", "bSEIZ",   "lSEIZ", "pSEIZ",
                                                     "EpsilonSEIZ", "RhoSEIZ", "RSI"};
constexpr std::array<std::string_view, 6> kSpikeNames{"Ps", "Pa", "Pp", "Qs", "Qa", "Qp"};

}  // namespace

double SeizParams::r_si() const {
    const double denom = rho + epsilon;
    if (denom <= 0.0) return 0.0;
    return ((1.0 - p) * beta + (1.0 - l) * b) / denom;
}

VolumeSeries volume_series(const Event& event, int intervals) {
    VolumeSeries s;
    const auto buckets = bucket_intervals(event, intervals);
    s.counts.reserve(buckets.size());
    for (const auto& b : buckets) s.counts.push_back(static_cast<double>(b.tweets.size()));
    s.interval_hours = 48.0 / intervals;
    for (double c : s.counts) s.population += c;
    return s;
}

std::vector<double> simulate_sis(const SisParams& params, double population, double i0,
                                 std::span<const double> times, double max_step) {
    check_population(population);
    if (!(i0 > 0.0 && i0 <= population)) throw UsageError("SIS needs 0 < I0 <= population");
    const double beta = params.beta, alpha = params.alpha, n = population;
    std::vector<double> out;
    out.reserve(times.size());
    integrate<2>({n - i0, i0}, times, max_step,
                 [&](const std::array<double, 2>& y, std::array<double, 2>& dy) {
                     const double flow = beta * y[0] * y[1] / n - alpha * y[1];
                     dy[0] = -flow;
                     dy[1] = flow;
                 },
                 [&](const std::array<double, 2>& y) { out.push_back(y[1]); });
    return out;
}

std::vector<SeizState> simulate_seiz(const SeizParams& params, double population, const SeizState& initial,
                                     std::span<const double> times, double max_step) {
    check_population(population);
    if (initial.s < 0 || initial.e < 0 || initial.i < 0 || initial.z < 0)
        throw UsageError("SEIZ compartments must be non-negative");
    const SeizParams q = params;
    const double n = population;
    std::vector<SeizState> out;
    out.reserve(times.size());
    integrate<4>({initial.s, initial.e, initial.i, initial.z}, times, max_step,
                 [&](const std::array<double, 4>& y, std::array<double, 4>& dy) {
                     const double s = y[0], e = y[1], i = y[2], z = y[3];
                     const double si = q.beta * s * i / n;
                     const double sz = q.b * s * z / n;
                     const double ei = q.rho * e * i / n;
                     const double ee = q.epsilon * e;
                     dy[0] = -si - sz;
                     dy[1] = (1.0 - q.p) * si + (1.0 - q.l) * sz - ei - ee;
                     dy[2] = q.p * si + ei + ee;
                     dy[3] = q.l * sz;
                 },
                 [&](const std::array<double, 4>& y) { out.push_back({y[0], y[1], y[2], y[3]}); });
    return out;
}

double spikem_gate(const SpikeMParams& p, int n) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double pg = p.pp > 0.0 ? 1.0 - 0.5 * p.pa * (std::sin(two_pi * (n + p.ps) / p.pp) + 1.0) : 1.0;
    const double qg = p.qp > 0.0 ? 1.0 - 0.5 * p.qa * (std::sin(two_pi * (n + p.qs) / p.qp) + 1.0) : 1.0;
    return pg * qg;
}

std::vector<double> simulate_spikem(const SpikeMParams& p, int intervals) {
    if (intervals < 1) throw UsageError("SpikeM needs at least one interval");
    if (p.shock_index < 0 || p.shock_index >= intervals) throw UsageError("shock index outside the grid");
    std::vector<double> db(static_cast<std::size_t>(intervals), 0.0);
    std::vector<double> decay(static_cast<std::size_t>(intervals) + 1, 0.0);
    for (int k = 1; k <= intervals; ++k) decay[k] = std::pow(static_cast<double>(k), -1.5);
    const int nb = p.shock_index;
    for (int m = nb; m < intervals; ++m) {  // m = n + 1
        double cascade = 0.0;
        for (int t = nb; t < m; ++t) {
            const double source = db[t] + (t == nb ? p.shock_size : 0.0);
            cascade += source * p.beta * decay[m - t];
        }
        db[m] = std::max(0.0, spikem_gate(p, m) * (cascade + p.epsilon));
    }
    return db;
}

std::string_view to_string(EpiModel model) {
    switch (model) {
        case EpiModel::sis: return "sis";
        case EpiModel::seiz: return "seiz";
        case EpiModel::spikem: return "spikem";
    }
    return "unknown";
}

EpiModel parse_epi_model(std::string_view text) {
    if (text == "sis") return EpiModel::sis;
    if (text == "seiz") return EpiModel::seiz;
    if (text == "spikem") return EpiModel::spikem;
    throw UsageError("unknown epidemic model '" + std::string(text) + "'");
}

std::span<const std::string_view> epi_feature_names(EpiModel model) {
    switch (model) {
        case EpiModel::sis: return kSisNames;
        case EpiModel::seiz: return kSeizNames;
        case EpiModel::spikem: return kSpikeNames;
    }
    return {};
}

std::vector<double> EpiFitResult::feature_values() const {
    switch (model) {
        case EpiModel::sis: {
            const auto& p = std::get<SisParams>(params);
            return {p.beta, p.alpha};
        }
        case EpiModel::seiz: {
            const auto& p = std::get<SeizParams>(params);
            return {p.beta, p.b, p.l, p.p, p.epsilon, p.rho, p.r_si()};
        }
        case EpiModel::spikem: {
            const auto& p = std::get<SpikeMParams>(params);
            return {p.ps, p.pa, p.pp, p.qs, p.qa, p.qp};
        }
    }
    return {};
}

// ---------------------------------------------------------------------------
// Fitting

namespace {

struct Problem {
    Bounds bounds;
    std::vector<double> step;
    std::vector<std::vector<double>> starts;
    Objective objective;
};

struct StartOutcome {
    std::vector<double> x;
    double f = kInf;
    int evaluations = 0;
    bool converged = false;
};

StartOutcome run_start(const Problem& problem, const std::vector<double>& x0, const EpiFitConfig& cfg) {
    NelderMeadConfig nm;
    nm.tol_x = cfg.tol_x;
    nm.max_evaluations = cfg.max_evaluations;
    nm.initial_step = problem.step;
    StartOutcome out;
    NelderMeadResult r = nelder_mead(problem.objective, x0, &problem.bounds, nm);
    out.evaluations = r.evaluations;
    for (int k = 0; k < cfg.restarts && std::isfinite(r.f); ++k) {
        NelderMeadResult again = nelder_mead(problem.objective, r.x, &problem.bounds, nm);
        out.evaluations += again.evaluations;
        const bool improved = again.f < r.f - 1e-12 * std::max(1.0, std::abs(r.f));
        if (again.f <= r.f) r = std::move(again);
        if (!improved) break;
    }
    out.x = std::move(r.x);
    out.f = r.f;
    out.converged = r.converged;
    return out;
}

std::vector<StartOutcome> run_starts(const Problem& problem, const EpiFitConfig& cfg, bool parallel) {
    std::vector<StartOutcome> outcomes(problem.starts.size());
    const auto n = static_cast<std::ptrdiff_t>(problem.starts.size());
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t s = 0; s < n; ++s) outcomes[s] = run_start(problem, problem.starts[s], cfg);
    } else {
        for (std::ptrdiff_t s = 0; s < n; ++s) outcomes[s] = run_start(problem, problem.starts[s], cfg);
    }
    return outcomes;
}

// Lowest objective, earliest start on ties.
const StartOutcome& best_of(const std::vector<StartOutcome>& outcomes) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < outcomes.size(); ++s)
        if (outcomes[s].f < outcomes[best].f) best = s;
    return outcomes[best];
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

std::mt19937_64 start_rng(const EpiFitConfig& cfg, int start, std::uint64_t salt) {
    std::seed_seq seq{static_cast<std::uint64_t>(cfg.seed), static_cast<std::uint64_t>(start), salt};
    return std::mt19937_64(seq);
}

double rms(std::span<const double> residuals) {
    double acc = 0.0;
    for (double r : residuals) acc += r * r;
    return residuals.empty() ? 0.0 : std::sqrt(acc / static_cast<double>(residuals.size()));
}

std::vector<double> cumulative(std::span<const double> counts) {
    std::vector<double> cum(counts.size());
    double run = 0.0;
    for (std::size_t k = 0; k < counts.size(); ++k) cum[k] = (run += counts[k]);
    return cum;
}

std::vector<double> grid_times(std::size_t n, double interval_hours) {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = static_cast<double>(k) * interval_hours;
    return t;
}

double step_for(double fastest_rate, const EpiFitConfig& cfg) {
    return fastest_rate > 0.0 ? std::min(cfg.max_step_hours, cfg.rate_step_product / fastest_rate)
                              : cfg.max_step_hours;
}

EpiFitResult degenerate(EpiModel model, std::span<const double> observed) {
    EpiFitResult r;
    r.model = model;
    switch (model) {
        case EpiModel::sis: r.params = SisParams{}; break;
        case EpiModel::seiz: r.params = SeizParams{}; break;
        case EpiModel::spikem: {
            SpikeMParams p;
            p.pp = 0.0;
            p.qp = 0.0;
            r.params = p;
            break;
        }
    }
    r.rms_residual = rms(observed);
    r.converged = false;
    return r;
}

struct SeizSetup {
    double population;
    SeizState initial;
};

SeizSetup seiz_setup(const VolumeSeries& series, const std::vector<double>& cum, const EpiFitConfig& cfg) {
    const double total = cum.empty() ? 0.0 : cum.back();
    const double population = series.population > 0.0 ? series.population : std::max(total, 1.0);
    SeizState init;
    init.i = std::min(std::max(cum.front(), 1.0), population);
    init.z = std::min(cfg.seiz_skeptic_seed * init.i, population - init.i);
    init.s = population - init.i - init.z;
    return {population, init};
}

EpiFitResult fit_sis(const VolumeSeries& series, const EpiFitConfig& cfg, bool parallel) {
    const auto cum = cumulative(series.counts);
    if (cum.empty() || cum.back() <= 0.0) return degenerate(EpiModel::sis, cum);
    const double total = cum.back();
    const double population = series.population > 0.0 ? series.population : total;
    const double i0 = std::min(std::max(cum.front(), 1.0), population);
    const auto times = grid_times(cum.size(), series.interval_hours);

    Problem problem;
    problem.bounds = {{0.0, 0.0}, {cfg.max_rate, cfg.max_rate}};
    problem.step = {0.1, 0.05};
    problem.objective = [&](std::span<const double> x) {
        try {
            const auto path = simulate_sis({x[0], x[1]}, population, i0, times, step_for(std::max(x[0], x[1]), cfg));
            double acc = 0.0;
            for (std::size_t k = 0; k < path.size(); ++k) acc += (path[k] - cum[k]) * (path[k] - cum[k]);
            return std::sqrt(acc / static_cast<double>(path.size()));
        } catch (const NumericalError&) {
            return kInf;
        }
    };
    problem.starts.push_back({0.5, 0.05});
    for (int s = 1; s < cfg.starts; ++s) {
        auto rng = start_rng(cfg, s, 1);
        problem.starts.push_back({log_uniform(rng, 0.01, 3.0), log_uniform(rng, 0.001, 1.0)});
    }

    const auto outcomes = run_starts(problem, cfg, parallel);
    const StartOutcome& best = best_of(outcomes);
    EpiFitResult r;
    r.model = EpiModel::sis;
    r.params = SisParams{best.x[0], best.x[1]};
    r.rms_residual = best.f;
    r.converged = best.converged && std::isfinite(best.f);
    for (const auto& o : outcomes) r.evaluations += o.evaluations;
    return r;
}

EpiFitResult fit_seiz(const VolumeSeries& series, const EpiFitConfig& cfg, bool parallel) {
    const auto cum = cumulative(series.counts);
    const auto nonzero = std::count_if(series.counts.begin(), series.counts.end(), [](double c) { return c > 0; });
    if (nonzero < 4) return degenerate(EpiModel::seiz, cum);
    const SeizSetup setup = seiz_setup(series, cum, cfg);
    const auto times = grid_times(cum.size(), series.interval_hours);

    Problem problem;
    const double r = cfg.max_rate;
    problem.bounds = {{0, 0, 0, 0, 0, 0}, {r, r, r, r, 1.0, 1.0}};
    problem.objective = [&](std::span<const double> x) {
        const SeizParams q{x[0], x[1], x[2], x[3], x[4], x[5]};
        try {
            const double fastest = std::max({q.beta, q.b, q.rho, q.epsilon});
            const auto path = simulate_seiz(q, setup.population, setup.initial, times, step_for(fastest, cfg));
            double acc = 0.0;
            for (std::size_t k = 0; k < path.size(); ++k) acc += (path[k].i - cum[k]) * (path[k].i - cum[k]);
            return std::sqrt(acc / static_cast<double>(path.size()));
        } catch (const NumericalError&) {
            return kInf;
        }
    };
    problem.step = {0.1, 0.1, 0.1, 0.05, 0.2, 0.2};
    problem.starts.push_back({0.5, 0.5, 0.5, 0.1, 0.5, 0.5});
    for (int s = 1; s < cfg.starts; ++s) {
        auto rng = start_rng(cfg, s, 2);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double beta = log_uniform(rng, 0.01, 3.0), b = log_uniform(rng, 0.01, 3.0);
        const double rho = log_uniform(rng, 0.01, 3.0), eps = log_uniform(rng, 0.001, 1.0);
        problem.starts.push_back({beta, b, rho, eps, unit(rng), unit(rng)});
    }

    const auto outcomes = run_starts(problem, cfg, parallel);
    const StartOutcome& best = best_of(outcomes);
    EpiFitResult out;
    out.model = EpiModel::seiz;
    out.params = SeizParams{best.x[0], best.x[1], best.x[2], best.x[3], best.x[4], best.x[5]};
    out.rms_residual = best.f;
    out.converged = best.converged && std::isfinite(best.f);
    for (const auto& o : outcomes) out.evaluations += o.evaluations;
    return out;
}

EpiFitResult fit_spikem(const VolumeSeries& series, const EpiFitConfig& cfg, bool parallel) {
    const auto& counts = series.counts;
    const auto nonzero = std::count_if(counts.begin(), counts.end(), [](double c) { return c > 0; });
    if (nonzero < 4) return degenerate(EpiModel::spikem, counts);
    const int n = static_cast<int>(counts.size());
    const int first = static_cast<int>(std::find_if(counts.begin(), counts.end(), [](double c) { return c > 0; }) -
                                       counts.begin());
    const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
    const double peak = *std::max_element(counts.begin(), counts.end());

    EpiFitResult out;
    out.model = EpiModel::spikem;
    out.rms_residual = kInf;
    bool any = false;
    // The shock precedes the first observed volume by at most two intervals.
    for (int nb = std::max(0, first - 2); nb <= first; ++nb) {
        Problem problem;
        problem.bounds = {{0.0, 0.0, 0.0, 0.0, cfg.min_period, 0.0, 0.0, cfg.min_period, 0.0},
                          {cfg.max_rate, 2.0 * total, peak, 1.0, cfg.max_period, cfg.max_period, 1.0, cfg.max_period,
                           cfg.max_period}};
        problem.objective = [&, nb](std::span<const double> x) {
            SpikeMParams p;
            p.beta = x[0];
            p.shock_index = nb;
            p.shock_size = x[1];
            p.epsilon = x[2];
            p.pa = x[3], p.pp = x[4], p.ps = x[5];
            p.qa = x[6], p.qp = x[7], p.qs = x[8];
            const auto db = simulate_spikem(p, n);
            double acc = 0.0;
            for (int k = 0; k < n; ++k) acc += (db[k] - counts[k]) * (db[k] - counts[k]);
            const double v = std::sqrt(acc / n);
            return std::isfinite(v) ? v : kInf;
        };
        problem.step = {0.1, 0.25 * peak + 1.0, 0.1 * peak + 0.1, 0.2, 4.0, 2.0, 0.2, 4.0, 2.0};
        problem.starts.push_back({0.3, std::max(1.0, peak), 0.1 * peak, 0.1, 24.0, 0.0, 0.1, 12.0, 0.0});
        for (int s = 1; s < cfg.starts; ++s) {
            auto rng = start_rng(cfg, s, 3 + static_cast<std::uint64_t>(nb));
            std::uniform_real_distribution<double> unit(0.0, 1.0);
            std::uniform_real_distribution<double> period(cfg.min_period, cfg.max_period);
            const double pp = period(rng), qp = period(rng);
            problem.starts.push_back({log_uniform(rng, 0.01, 2.0), unit(rng) * 2.0 * peak, unit(rng) * 0.5 * peak,
                                      unit(rng), pp, unit(rng) * pp, unit(rng), qp, unit(rng) * qp});
        }
        const auto outcomes = run_starts(problem, cfg, parallel);
        const StartOutcome& best = best_of(outcomes);
        for (const auto& o : outcomes) out.evaluations += o.evaluations;
        if (!any || best.f < out.rms_residual) {
            any = true;
            SpikeMParams p;
            p.beta = best.x[0];
            p.shock_index = nb;
            p.shock_size = best.x[1];
            p.epsilon = best.x[2];
            p.pa = best.x[3], p.pp = best.x[4], p.ps = best.x[5];
            p.qa = best.x[6], p.qp = best.x[7], p.qs = best.x[8];
            out.params = p;
            out.rms_residual = best.f;
            out.converged = best.converged && std::isfinite(best.f);
        }
    }
    return out;
}

EpiFitResult dispatch(const VolumeSeries& series, EpiModel model, const EpiFitConfig& cfg, bool parallel) {
    if (cfg.starts < 1) throw UsageError("fit needs at least one start");
    if (!(series.interval_hours > 0.0)) throw UsageError("interval length must be positive");
    for (double c : series.counts)
        if (!(c >= 0.0) || !std::isfinite(c)) throw DataError("volume counts must be finite and non-negative");
    switch (model) {
        case EpiModel::sis: return fit_sis(series, cfg, parallel);
        case EpiModel::seiz: return fit_seiz(series, cfg, parallel);
        case EpiModel::spikem: return fit_spikem(series, cfg, parallel);
    }
    throw UsageError("unknown epidemic model");
}

}  // namespace

EpiFitResult fit_model(const VolumeSeries& series, EpiModel model, const EpiFitConfig& config) {
    return dispatch(series, model, config, true);
}

EpiFitResult reference::fit_model(const VolumeSeries& series, EpiModel model, const EpiFitConfig& config) {
    return dispatch(series, model, config, false);
}

}  // namespace rumor
