#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fracount/rates.hpp"
#include "fracount/rng.hpp"
#include "fracount/sampling.hpp"
#include "fracount/subordinators.hpp"

namespace fracount {

// Realization of a counting process: strictly increasing jump times with
// nonzero integer sizes (signed for Skellam variants).
struct CountingPath {
    std::vector<double> jump_times;
    std::vector<long> jump_sizes;
    double horizon = 0.0;
};

// Right-continuous value at t, with a small tolerance so grid-aligned
// probe times are not lost to rounding.
inline long evaluate(const CountingPath& path, double t) {
    const double eps = 1e-9 * (1.0 + std::fabs(t));
    if (!(t >= 0.0) || t > path.horizon + eps)
        throw std::domain_error("evaluate: time outside [0, horizon]");
    long v = 0;
    for (std::size_t i = 0; i < path.jump_times.size(); ++i) {
        if (path.jump_times[i] > t + eps) break;
        v += path.jump_sizes[i];
    }
    return v;
}

struct ProcessSpec {
    enum class Kind { npp, ngcp, skellam };

    Kind kind = Kind::npp;
    std::vector<RateFunction> rates;        // npp: size 1; ngcp: size k; skellam: plus side
    std::vector<RateFunction> minus_rates;  // skellam only
    std::optional<SubordinatorSpec> time_change;
    bool shared_clock = true;               // skellam: one clock for both signs

    void validate() const {
        if (rates.empty())
            throw std::domain_error("ProcessSpec: at least one rate function required");
        if (kind == Kind::npp && rates.size() != 1)
            throw std::domain_error("ProcessSpec: npp takes exactly one rate");
        if (kind == Kind::skellam && minus_rates.empty())
            throw std::domain_error("ProcessSpec: skellam needs minus-side rates");
        if (kind != Kind::skellam && !minus_rates.empty())
            throw std::domain_error("ProcessSpec: minus rates only valid for skellam");
        if (time_change) time_change->validate();
    }
};

// NPP simulation. Time-change inversion (unit-rate arrivals through the
// inverse cumulative) for Constant and PowerLaw rates, Lewis-Shedler
// thinning for PiecewiseConstant.
inline CountingPath simulate_npp(const RateFunction& rate, double horizon,
                                 RngStream& rng) {
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::domain_error("simulate_npp: horizon must be finite and > 0");
    CountingPath path;
    path.horizon = horizon;
    if (std::holds_alternative<PiecewiseConstantRate>(rate.spec())) {
        const double bound = rate.upper_bound(0.0, horizon);
        if (bound <= 0.0) return path;
        double t = 0.0;
        for (;;) {
            t += exponential(bound, rng);
            if (t > horizon) break;
            if (rng.uniform() * bound < rate.intensity_at(t)) {
                path.jump_times.push_back(t);
                path.jump_sizes.push_back(1);
            }
        }
        return path;
    }
    const double total = rate.cumulative(horizon);
    if (total <= 0.0) return path;
    double g = 0.0;
    for (;;) {
        g += exponential(1.0, rng);
        if (g > total) break;
        path.jump_times.push_back(rate.inverse_cumulative(g));
        path.jump_sizes.push_back(1);
    }
    return path;
}

// NGCP as a weighted sum of k independent NPPs: component j runs on the
// derived stream parent.child(j) and contributes jumps of size j. Ties
// across components (a probability-zero event) break by ascending j.
inline CountingPath simulate_ngcp(const std::vector<RateFunction>& rates,
                                  double horizon, const RngStream& parent) {
    if (rates.empty())
        throw std::domain_error("simulate_ngcp: at least one rate required");
    std::vector<std::pair<double, long>> jumps;
    for (std::size_t j = 1; j <= rates.size(); ++j) {
        RngStream rng = parent.child(j);
        CountingPath comp = simulate_npp(rates[j - 1], horizon, rng);
        for (double t : comp.jump_times)
            jumps.emplace_back(t, static_cast<long>(j));
    }
    std::sort(jumps.begin(), jumps.end());
    CountingPath path;
    path.horizon = horizon;
    path.jump_times.reserve(jumps.size());
    path.jump_sizes.reserve(jumps.size());
    for (const auto& [t, j] : jumps) {
        path.jump_times.push_back(t);
        path.jump_sizes.push_back(j);
    }
    return path;
}

// Independent oracle construction of the NGCP: thin a dominating
// homogeneous process at rate B >= sum_j lambda_j and resolve the jump
// size by the conditional mark probabilities lambda_j(t) / sum.
inline CountingPath simulate_ngcp_marked(const std::vector<RateFunction>& rates,
                                         double horizon, RngStream& rng) {
    if (rates.empty())
        throw std::domain_error("simulate_ngcp_marked: at least one rate required");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::domain_error("simulate_ngcp_marked: horizon must be finite and > 0");
    double bound = 0.0;
    for (const auto& r : rates) bound += r.upper_bound(0.0, horizon);
    CountingPath path;
    path.horizon = horizon;
    if (bound <= 0.0) return path;
    double t = 0.0;
    for (;;) {
        t += exponential(bound, rng);
        if (t > horizon) break;
        double u = rng.uniform() * bound;
        double acc = 0.0;
        for (std::size_t j = 1; j <= rates.size(); ++j) {
            acc += rates[j - 1].intensity_at(t);
            if (u < acc) {
                path.jump_times.push_back(t);
                path.jump_sizes.push_back(static_cast<long>(j));
                break;
            }
        }
    }
    return path;
}

// One simulated trajectory of a ProcessSpec, carrying the inner clock
// sample so compensators can be evaluated along the same trajectory.
struct Trajectory {
    CountingPath path;
    double grid_step = 0.0;                 // outer grid, 0 when no clock
    std::vector<double> clock_values;       // inner(t) on the outer grid
    std::vector<double> minus_clock_values; // skellam with independent clocks

    bool has_clock() const { return !clock_values.empty(); }

    double clock_at(double t) const { return clock_lookup(clock_values, t); }

    double minus_clock_at(double t) const {
        return clock_lookup(minus_clock_values.empty() ? clock_values
                                                       : minus_clock_values,
                            t);
    }

private:
    double clock_lookup(const std::vector<double>& values, double t) const {
        if (values.empty()) return t;
        auto idx = static_cast<std::size_t>(std::floor(t / grid_step + 1e-9));
        if (idx >= values.size()) idx = values.size() - 1;
        return values[idx];
    }
};

namespace detail {

// Inner clock evaluated on the uniform outer grid {0, h, 2h, ...}.
// Slot layout: child(0) primary clock randomness, child(1) the outer
// tempered component of a composed clock.
inline std::vector<double> sample_clock(const SubordinatorSpec& spec,
                                        const std::vector<double>& grid,
                                        const RngStream& parent) {
    RngStream primary = parent.child(0);
    switch (spec.kind) {
        case SubordinatorKind::inverse_stable:
        case SubordinatorKind::inverse_mixed:
            return inverse_values(spec, grid, primary);
        case SubordinatorKind::stable: {
            MonotonePath p = stable_path(spec.alpha, grid.back(),
                                         grid[1] - grid[0], primary);
            return p.values;
        }
        case SubordinatorKind::tempered: {
            MonotonePath p = tempered_path(spec.beta, spec.theta, grid.back(),
                                           grid[1] - grid[0], primary);
            return p.values;
        }
        case SubordinatorKind::tempered_of_inverse_stable: {
            SubordinatorSpec inner;
            inner.kind = SubordinatorKind::inverse_stable;
            inner.alpha = spec.alpha;
            inner.grid_step = spec.grid_step;
            std::vector<double> y = inverse_values(inner, grid, primary);
            RngStream outer = parent.child(1);
            return subordinate_at(spec.beta, spec.theta, y, outer);
        }
        case SubordinatorKind::identity:
            return {};
    }
    return {};
}

// Maps base jumps at operational times onto the outer grid: a jump at
// tau lands on the first grid time with clock >= tau. Jumps colliding on
// one grid point merge; zero-sum merges vanish.
inline void map_through_clock(const CountingPath& base,
                              const std::vector<double>& grid,
                              const std::vector<double>& clock,
                              std::vector<std::pair<double, long>>& out) {
    for (std::size_t i = 0; i < base.jump_times.size(); ++i) {
        auto it = std::lower_bound(clock.begin(), clock.end(), base.jump_times[i]);
        if (it == clock.end()) continue;  // beyond the clock's reach
        out.emplace_back(grid[static_cast<std::size_t>(it - clock.begin())],
                         base.jump_sizes[i]);
    }
}

// Equivalent-in-law construction for clocked processes: given the clock on
// the grid, each component's cell increments are independent Poisson with
// mean Lambda_j(clock[i]) - Lambda_j(clock[i-1]). Avoids materializing
// the base path, whose jump count is unbounded under stable clocks.
inline void clocked_cell_counts(const std::vector<RateFunction>& rates,
                                const std::vector<double>& grid,
                                const std::vector<double>& clock,
                                const RngStream& parent, long sign,
                                std::vector<std::pair<double, long>>& out) {
    for (std::size_t j = 1; j <= rates.size(); ++j) {
        RngStream rng = parent.child(j);
        double prev = rates[j - 1].cumulative(clock[0]);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const double cur = rates[j - 1].cumulative(clock[i]);
            const long n = poisson(std::max(0.0, cur - prev), rng);
            if (n > 0)
                out.emplace_back(grid[i], sign * static_cast<long>(j) * n);
            prev = cur;
        }
    }
}

inline CountingPath merge_mapped(std::vector<std::pair<double, long>> jumps,
                                 double horizon) {
    std::sort(jumps.begin(), jumps.end());
    CountingPath path;
    path.horizon = horizon;
    for (const auto& [t, s] : jumps) {
        if (!path.jump_times.empty() && path.jump_times.back() == t) {
            path.jump_sizes.back() += s;
            if (path.jump_sizes.back() == 0) {
                path.jump_times.pop_back();
                path.jump_sizes.pop_back();
            }
        } else {
            path.jump_times.push_back(t);
            path.jump_sizes.push_back(s);
        }
    }
    return path;
}

inline CountingPath negate(CountingPath p) {
    for (auto& s : p.jump_sizes) s = -s;
    return p;
}

}  // namespace detail

// Trajectory-level orchestrator. Stream layout off the per-trajectory
// parent: child(0)/child(1) clock, child(2)/child(3) minus-side clock,
// child(4) base process (plus side), child(5) skellam minus side. The
// layout is independent of whether a clock is present, so an identity
// (or absent) time change reproduces the base process bit-exactly.
inline Trajectory simulate_trajectory(const ProcessSpec& spec, double horizon,
                                      const RngStream& parent) {
    spec.validate();
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::domain_error("simulate_trajectory: horizon must be finite and > 0");

    Trajectory traj;
    const bool has_clock =
        spec.time_change && spec.time_change->kind != SubordinatorKind::identity;

    std::vector<double> grid;
    if (has_clock) {
        const double h = spec.time_change->grid_step;
        const auto n = static_cast<std::size_t>(std::ceil(horizon / h - 1e-9));
        grid.reserve(n + 1);
        for (std::size_t i = 0; i <= n; ++i)
            grid.push_back(static_cast<double>(i) * h);
        traj.grid_step = h;
        traj.clock_values = detail::sample_clock(*spec.time_change, grid, parent);
    }

    if (spec.kind == ProcessSpec::Kind::skellam) {
        std::vector<double> minus_clock = traj.clock_values;
        if (has_clock && !spec.shared_clock) {
            // independent clocks per sign, drawn from a disjoint slot pair
            SubordinatorSpec mc = *spec.time_change;
            RngStream minus_parent = parent.child(2);
            minus_clock = detail::sample_clock(mc, grid, minus_parent);
            traj.minus_clock_values = minus_clock;
        }
        std::vector<std::pair<double, long>> jumps;
        if (has_clock) {
            detail::clocked_cell_counts(spec.rates, grid, traj.clock_values,
                                        parent.child(4), 1, jumps);
            detail::clocked_cell_counts(spec.minus_rates, grid, minus_clock,
                                        parent.child(5), -1, jumps);
        } else {
            CountingPath plus = simulate_ngcp(spec.rates, horizon, parent.child(4));
            CountingPath minus = detail::negate(
                simulate_ngcp(spec.minus_rates, horizon, parent.child(5)));
            for (std::size_t i = 0; i < plus.jump_times.size(); ++i)
                jumps.emplace_back(plus.jump_times[i], plus.jump_sizes[i]);
            for (std::size_t i = 0; i < minus.jump_times.size(); ++i)
                jumps.emplace_back(minus.jump_times[i], minus.jump_sizes[i]);
        }
        traj.path = detail::merge_mapped(std::move(jumps), horizon);
        return traj;
    }

    if (!has_clock) {
        traj.path = simulate_ngcp(spec.rates, horizon, parent.child(4));
        return traj;
    }
    std::vector<std::pair<double, long>> jumps;
    detail::clocked_cell_counts(spec.rates, grid, traj.clock_values,
                                parent.child(4), 1, jumps);
    traj.path = detail::merge_mapped(std::move(jumps), horizon);
    return traj;
}

}  // namespace fracount
