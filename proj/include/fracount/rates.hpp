#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

namespace fracount {

// Deterministic intensity lambda(t) >= 0 with closed-form cumulative
// Lambda(t) = int_0^t lambda(u) du and closed-form (or breakpoint-scan)
// inverse. Three analytic variants; no quadrature anywhere.

struct ConstantRate {
    double lambda = 0.0;
};

// Parameterized through the cumulative: Lambda(t) = c * t^p, so
// lambda(t) = c * p * t^(p-1).
struct PowerLawRate {
    double c = 0.0;
    double p = 1.0;
};

struct PiecewiseConstantRate {
    std::vector<double> breakpoints;  // strictly increasing, > 0
    std::vector<double> levels;       // size = breakpoints.size() + 1
};

class RateFunction {
public:
    using Variant = std::variant<ConstantRate, PowerLawRate, PiecewiseConstantRate>;

    static RateFunction constant(double lambda) {
        if (!(lambda >= 0.0) || !std::isfinite(lambda))
            throw std::domain_error("RateFunction: constant lambda must be finite and >= 0");
        return RateFunction(ConstantRate{lambda});
    }

    static RateFunction power_law(double c, double p) {
        if (!(c >= 0.0) || !std::isfinite(c))
            throw std::domain_error("RateFunction: power-law c must be finite and >= 0");
        if (!(p > 0.0) || !std::isfinite(p))
            throw std::domain_error("RateFunction: power-law p must be finite and > 0");
        return RateFunction(PowerLawRate{c, p});
    }

    static RateFunction piecewise(std::vector<double> breakpoints,
                                  std::vector<double> levels) {
        if (levels.size() != breakpoints.size() + 1)
            throw std::domain_error("RateFunction: need one more level than breakpoints");
        double prev = 0.0;
        for (double b : breakpoints) {
            if (!(b > prev) || !std::isfinite(b))
                throw std::domain_error("RateFunction: breakpoints must be strictly increasing and positive");
            prev = b;
        }
        for (double l : levels)
            if (!(l >= 0.0) || !std::isfinite(l))
                throw std::domain_error("RateFunction: levels must be finite and >= 0");
        return RateFunction(PiecewiseConstantRate{std::move(breakpoints), std::move(levels)});
    }

    const Variant& spec() const { return v_; }

    // lambda(t); cadlag at piecewise breakpoints (right limit).
    double intensity_at(double t) const {
        check_time(t);
        return std::visit(
            [t](const auto& r) { return intensity_impl(r, t); }, v_);
    }

    double cumulative(double t) const {
        check_time(t);
        return std::visit(
            [t](const auto& r) { return cumulative_impl(r, t); }, v_);
    }

    double cumulative_between(double s, double t) const {
        check_time(s);
        if (t < s)
            throw std::invalid_argument("RateFunction: interval end before start");
        return cumulative(t) - cumulative(s);
    }

    // inf{u : Lambda(u) >= y}. Throws when y exceeds sup Lambda.
    double inverse_cumulative(double y) const {
        if (!(y >= 0.0) || !std::isfinite(y))
            throw std::domain_error("RateFunction: inverse_cumulative needs finite y >= 0");
        if (y == 0.0) return 0.0;
        return std::visit(
            [y](const auto& r) { return inverse_impl(r, y); }, v_);
    }

    // Finite B with lambda(u) <= B on [s, t]; exact supremum.
    double upper_bound(double s, double t) const {
        check_time(s);
        if (t < s)
            throw std::invalid_argument("RateFunction: interval end before start");
        return std::visit(
            [s, t](const auto& r) { return bound_impl(r, s, t); }, v_);
    }

private:
    explicit RateFunction(Variant v) : v_(std::move(v)) {}

    static void check_time(double t) {
        if (!(t >= 0.0) || !std::isfinite(t))
            throw std::domain_error("RateFunction: time must be finite and >= 0");
    }

    static double intensity_impl(const ConstantRate& r, double) { return r.lambda; }
    static double intensity_impl(const PowerLawRate& r, double t) {
        if (r.p == 1.0) return r.c;
        return r.c * r.p * std::pow(t, r.p - 1.0);
    }
    static double intensity_impl(const PiecewiseConstantRate& r, double t) {
        auto it = std::upper_bound(r.breakpoints.begin(), r.breakpoints.end(), t);
        return r.levels[static_cast<std::size_t>(it - r.breakpoints.begin())];
    }

    static double cumulative_impl(const ConstantRate& r, double t) {
        return r.lambda * t;
    }
    static double cumulative_impl(const PowerLawRate& r, double t) {
        return r.c * std::pow(t, r.p);
    }
    static double cumulative_impl(const PiecewiseConstantRate& r, double t) {
        double acc = 0.0, prev = 0.0;
        for (std::size_t i = 0; i < r.breakpoints.size(); ++i) {
            if (t <= r.breakpoints[i]) return acc + r.levels[i] * (t - prev);
            acc += r.levels[i] * (r.breakpoints[i] - prev);
            prev = r.breakpoints[i];
        }
        return acc + r.levels.back() * (t - prev);
    }

    static double inverse_impl(const ConstantRate& r, double y) {
        if (r.lambda <= 0.0)
            throw std::runtime_error("RateFunction: level y unreachable, intensity is zero");
        return y / r.lambda;
    }
    static double inverse_impl(const PowerLawRate& r, double y) {
        if (r.c <= 0.0)
            throw std::runtime_error("RateFunction: level y unreachable, intensity is zero");
        return std::pow(y / r.c, 1.0 / r.p);
    }
    static double inverse_impl(const PiecewiseConstantRate& r, double y) {
        double acc = 0.0, prev = 0.0;
        for (std::size_t i = 0; i < r.breakpoints.size(); ++i) {
            const double seg = r.levels[i] * (r.breakpoints[i] - prev);
            if (y <= acc + seg) {
                if (r.levels[i] == 0.0) return r.breakpoints[i];
                return prev + (y - acc) / r.levels[i];
            }
            acc += seg;
            prev = r.breakpoints[i];
        }
        if (r.levels.back() <= 0.0)
            throw std::runtime_error("RateFunction: level y unreachable, intensity vanishes");
        return prev + (y - acc) / r.levels.back();
    }

    static double bound_impl(const ConstantRate& r, double, double) {
        return r.lambda;
    }
    static double bound_impl(const PowerLawRate& r, double s, double t) {
        // lambda monotone: increasing for p > 1, decreasing for p < 1
        if (r.p >= 1.0) return intensity_impl(r, t);
        if (s == 0.0)
            throw std::runtime_error("RateFunction: power-law intensity unbounded at 0 for p < 1");
        return intensity_impl(r, s);
    }
    static double bound_impl(const PiecewiseConstantRate& r, double s, double t) {
        double m = intensity_impl(r, s);
        for (std::size_t i = 0; i < r.breakpoints.size(); ++i)
            if (r.breakpoints[i] > s && r.breakpoints[i] <= t)
                m = std::max(m, r.levels[i + 1]);
        return std::max(m, intensity_impl(r, t));
    }

    Variant v_;
};

}  // namespace fracount
