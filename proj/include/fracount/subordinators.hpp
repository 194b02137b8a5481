#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracount/rng.hpp"
#include "fracount/sampling.hpp"

namespace fracount {

// Sampled nondecreasing trajectory on a strictly increasing time grid,
// times[0] = 0, values[0] = 0.
struct MonotonePath {
    std::vector<double> times;
    std::vector<double> values;

    void validate() const {
        if (times.size() != values.size() || times.empty())
            throw std::logic_error("MonotonePath: times/values size mismatch");
        if (times[0] != 0.0 || values[0] != 0.0)
            throw std::logic_error("MonotonePath: must start at (0,0)");
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (!(times[i] > times[i - 1]))
                throw std::logic_error("MonotonePath: times must strictly increase");
            if (values[i] < values[i - 1])
                throw std::logic_error("MonotonePath: values must be nondecreasing");
        }
    }
};

enum class SubordinatorKind {
    stable,
    tempered,
    mixed,
    inverse_stable,
    inverse_mixed,
    tempered_of_inverse_stable,
    identity,
};

struct SubordinatorSpec {
    SubordinatorKind kind = SubordinatorKind::identity;
    double alpha = 0.5;      // stable / inverse_stable / tempered_of_inverse_stable
    double beta = 0.5;       // tempered kinds
    double theta = 1.0;      // tempered kinds
    double alpha1 = 0.4;     // mixed kinds
    double alpha2 = 0.8;
    double c1 = 0.5;
    double c2 = 0.5;
    double grid_step = 1e-3;

    void validate() const {
        auto in01 = [](double x) { return x > 0.0 && x < 1.0; };
        if (!(grid_step > 0.0) || !std::isfinite(grid_step))
            throw std::domain_error("SubordinatorSpec: grid_step must be finite and > 0");
        switch (kind) {
            case SubordinatorKind::identity:
                break;
            case SubordinatorKind::stable:
            case SubordinatorKind::inverse_stable:
                if (!in01(alpha))
                    throw std::domain_error("SubordinatorSpec: alpha must lie in (0,1)");
                break;
            case SubordinatorKind::tempered:
                if (!in01(beta))
                    throw std::domain_error("SubordinatorSpec: beta must lie in (0,1)");
                if (!(theta > 0.0))
                    throw std::domain_error("SubordinatorSpec: theta must be > 0");
                break;
            case SubordinatorKind::tempered_of_inverse_stable:
                if (!in01(beta))
                    throw std::domain_error("SubordinatorSpec: beta must lie in (0,1)");
                if (!(theta > 0.0))
                    throw std::domain_error("SubordinatorSpec: theta must be > 0");
                if (!in01(alpha))
                    throw std::domain_error("SubordinatorSpec: alpha must lie in (0,1)");
                break;
            case SubordinatorKind::mixed:
            case SubordinatorKind::inverse_mixed:
                if (!in01(alpha1) || !in01(alpha2) || !(alpha1 < alpha2))
                    throw std::domain_error("SubordinatorSpec: need 0 < alpha1 < alpha2 < 1");
                if (!(c1 >= 0.0) || !(c2 >= 0.0) || std::fabs(c1 + c2 - 1.0) > 1e-12)
                    throw std::domain_error("SubordinatorSpec: weights must be >= 0 with c1 + c2 = 1");
                break;
        }
    }
};

// Signals that a driver path ends below the requested level; the path
// builder reacts by geometric extension.
struct InsufficientPathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline MonotonePath stable_path(double alpha, double horizon, double step,
                                RngStream& rng) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("stable_path: alpha must lie in (0,1)");
    if (!(step > 0.0) || !(horizon > 0.0) || step > horizon)
        throw std::domain_error("stable_path: need 0 < step <= horizon");
    const double scale = std::pow(step, 1.0 / alpha);
    MonotonePath p;
    p.times.push_back(0.0);
    p.values.push_back(0.0);
    std::size_t n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    for (std::size_t i = 1; i <= n; ++i) {
        p.times.push_back(static_cast<double>(i) * step);
        p.values.push_back(p.values.back() + scale * one_sided_stable(alpha, rng));
    }
    return p;
}

namespace detail {

// Sub-split a grid step so each piece keeps dt * theta^beta <= 1
// (acceptance >= e^-1 per piece).
inline double tempered_increment_split(double beta, double theta, double dt,
                                       RngStream& rng) {
    const double budget = 1.0 / std::pow(theta, beta);
    if (dt <= budget) return tempered_stable_increment(beta, theta, dt, rng);
    const std::size_t pieces =
        static_cast<std::size_t>(std::ceil(dt / budget - 1e-12));
    const double sub = dt / static_cast<double>(pieces);
    double acc = 0.0;
    for (std::size_t i = 0; i < pieces; ++i)
        acc += tempered_stable_increment(beta, theta, sub, rng);
    return acc;
}

}  // namespace detail

inline MonotonePath tempered_path(double beta, double theta, double horizon,
                                  double step, RngStream& rng) {
    if (!(step > 0.0) || !(horizon > 0.0) || step > horizon)
        throw std::domain_error("tempered_path: need 0 < step <= horizon");
    MonotonePath p;
    p.times.push_back(0.0);
    p.values.push_back(0.0);
    std::size_t n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    for (std::size_t i = 1; i <= n; ++i) {
        p.times.push_back(static_cast<double>(i) * step);
        p.values.push_back(p.values.back() +
                           detail::tempered_increment_split(beta, theta, step, rng));
    }
    return p;
}

// L(t) = D_{a1}(c1 t) + D_{a2}(c2 t) with independent stable components,
// realized increment-wise on a shared grid. The per-step increment of
// D_a(c t) over step dt is (c dt)^{1/a} S. For c2 = 0 the draw sequence
// is identical to stable_path(alpha1, ...) on the same stream.
inline MonotonePath mixed_path(double alpha1, double alpha2, double c1,
                               double c2, double horizon, double step,
                               RngStream& rng) {
    if (!(alpha1 > 0.0 && alpha1 < 1.0 && alpha2 > 0.0 && alpha2 < 1.0 &&
          alpha1 < alpha2))
        throw std::domain_error("mixed_path: need 0 < alpha1 < alpha2 < 1");
    if (!(c1 >= 0.0) || !(c2 >= 0.0) || std::fabs(c1 + c2 - 1.0) > 1e-12)
        throw std::domain_error("mixed_path: weights must be >= 0 with c1 + c2 = 1");
    if (!(step > 0.0) || !(horizon > 0.0) || step > horizon)
        throw std::domain_error("mixed_path: need 0 < step <= horizon");
    const double scale1 = c1 > 0.0 ? std::pow(c1 * step, 1.0 / alpha1) : 0.0;
    const double scale2 = c2 > 0.0 ? std::pow(c2 * step, 1.0 / alpha2) : 0.0;
    MonotonePath p;
    p.times.push_back(0.0);
    p.values.push_back(0.0);
    std::size_t n = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    for (std::size_t i = 1; i <= n; ++i) {
        double incr = 0.0;
        if (c1 > 0.0) incr += scale1 * one_sided_stable(alpha1, rng);
        if (c2 > 0.0) incr += scale2 * one_sided_stable(alpha2, rng);
        p.times.push_back(static_cast<double>(i) * step);
        p.values.push_back(p.values.back() + incr);
    }
    return p;
}

// First-passage time of a sampled path across level t, left-endpoint
// convention: returns the grid time just before the first value > t.
// Bias is at most one grid step and never overshoots the infimum.
inline double first_passage(const MonotonePath& path, double t) {
    if (!(t >= 0.0))
        throw std::domain_error("first_passage: level must be >= 0");
    auto it = std::upper_bound(path.values.begin(), path.values.end(), t);
    if (it == path.values.end())
        throw InsufficientPathError("first_passage: path never exceeds requested level");
    const std::size_t i = static_cast<std::size_t>(it - path.values.begin());
    return i == 0 ? 0.0 : path.times[i - 1];
}

namespace detail {

inline MonotonePath build_driver(const SubordinatorSpec& spec, double horizon,
                                 RngStream& rng) {
    switch (spec.kind) {
        case SubordinatorKind::inverse_stable:
            return stable_path(spec.alpha, horizon, spec.grid_step, rng);
        case SubordinatorKind::inverse_mixed:
            return mixed_path(spec.alpha1, spec.alpha2, spec.c1, spec.c2,
                              horizon, spec.grid_step, rng);
        default:
            throw std::logic_error("build_driver: not an inverse kind");
    }
}

inline void extend_driver(const SubordinatorSpec& spec, MonotonePath& path,
                          double new_horizon, RngStream& rng) {
    const double step = spec.grid_step;
    std::size_t i = path.times.size();
    const double scale1 =
        spec.kind == SubordinatorKind::inverse_stable
            ? std::pow(step, 1.0 / spec.alpha)
            : (spec.c1 > 0.0 ? std::pow(spec.c1 * step, 1.0 / spec.alpha1) : 0.0);
    const double scale2 =
        spec.kind == SubordinatorKind::inverse_mixed && spec.c2 > 0.0
            ? std::pow(spec.c2 * step, 1.0 / spec.alpha2)
            : 0.0;
    while (path.times.back() < new_horizon) {
        double incr = 0.0;
        if (spec.kind == SubordinatorKind::inverse_stable) {
            incr = scale1 * one_sided_stable(spec.alpha, rng);
        } else {
            if (spec.c1 > 0.0) incr += scale1 * one_sided_stable(spec.alpha1, rng);
            if (spec.c2 > 0.0) incr += scale2 * one_sided_stable(spec.alpha2, rng);
        }
        path.times.push_back(static_cast<double>(i) * step);
        path.values.push_back(path.values.back() + incr);
        ++i;
    }
}

}  // namespace detail

// One sampled trajectory of the inverse subordinator Y evaluated at the
// query times. Builds the driver until it exceeds max(query_times),
// doubling the horizon as needed, then applies first_passage per query.
inline std::vector<double> inverse_values(const SubordinatorSpec& spec,
                                          const std::vector<double>& query_times,
                                          RngStream& rng) {
    spec.validate();
    double prev = 0.0;
    for (double q : query_times) {
        if (!(q >= prev))
            throw std::invalid_argument("inverse_values: query times must be nondecreasing and >= 0");
        prev = q;
    }
    if (spec.kind == SubordinatorKind::identity) return query_times;
    if (spec.kind != SubordinatorKind::inverse_stable &&
        spec.kind != SubordinatorKind::inverse_mixed)
        throw std::domain_error("inverse_values: spec must be an inverse or identity kind");
    std::vector<double> out;
    out.reserve(query_times.size());
    if (query_times.empty()) return out;

    const double level = query_times.back();
    double horizon = std::max(spec.grid_step * 8.0, spec.grid_step);
    MonotonePath driver = detail::build_driver(spec, horizon, rng);
    while (driver.values.back() <= level) {
        horizon *= 2.0;
        detail::extend_driver(spec, driver, horizon, rng);
    }
    // queries are sorted; sweep the driver once
    std::size_t i = 0;  // first index with values[i] > current query
    for (double q : query_times) {
        while (driver.values[i] <= q) ++i;
        out.push_back(i == 0 ? 0.0 : driver.times[i - 1]);
    }
    return out;
}

// Samples D_{beta,theta} at the given nondecreasing inner values by
// drawing independent tempered increments over consecutive gaps.
inline std::vector<double> subordinate_at(double beta, double theta,
                                          const std::vector<double>& inner_values,
                                          RngStream& rng) {
    std::vector<double> out;
    out.reserve(inner_values.size());
    double prev_inner = 0.0, acc = 0.0;
    bool first = true;
    for (double x : inner_values) {
        if (!first && x < prev_inner)
            throw std::invalid_argument("subordinate_at: inner values must be nondecreasing");
        if (first && !(x >= 0.0))
            throw std::invalid_argument("subordinate_at: inner values must be >= 0");
        const double gap = first ? x : x - prev_inner;
        if (gap > 0.0) acc += detail::tempered_increment_split(beta, theta, gap, rng);
        out.push_back(acc);
        prev_inner = x;
        first = false;
    }
    return out;
}

}  // namespace fracount
