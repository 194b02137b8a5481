#pragma once

#include <cmath>
#include <stdexcept>

#include "fracount/rng.hpp"

namespace fracount {

// Elementary variate generators. Every generator consumes a caller-owned
// RngStream so that sequences are reproducible from (seed, stream_index)
// alone, independent of platform library internals.

inline double exponential(double rate, RngStream& rng) {
    if (!(rate > 0.0) || !std::isfinite(rate))
        throw std::domain_error("exponential: rate must be finite and > 0");
    return -std::log(rng.uniform_pos()) / rate;
}

namespace detail {

// Hormann's transformed rejection with squeeze (PTRS), for mean >= 10.
inline long poisson_ptrs(double mu, RngStream& rng) {
    const double b = 0.931 + 2.53 * std::sqrt(mu);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mu = std::log(mu);
    for (;;) {
        double u = rng.uniform() - 0.5;
        double v = rng.uniform_pos();
        double us = 0.5 - std::fabs(u);
        long k = static_cast<long>(std::floor((2.0 * a / us + b) * u + mu + 0.43));
        if (us >= 0.07 && v <= v_r) return k;
        if (k < 0 || (us < 0.013 && v > us)) continue;
        if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
            -mu + k * log_mu - std::lgamma(static_cast<double>(k) + 1.0))
            return k;
    }
}

// Inversion by uniform products, for small means.
inline long poisson_inversion(double mu, RngStream& rng) {
    const double limit = std::exp(-mu);
    double prod = rng.uniform_pos();
    long k = 0;
    while (prod > limit) {
        prod *= rng.uniform_pos();
        ++k;
    }
    return k;
}

inline double sinc(double x) {
    if (std::fabs(x) < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
    }
    return std::sin(x) / x;
}

}  // namespace detail

inline long poisson(double mean, RngStream& rng) {
    if (!(mean >= 0.0) || !std::isfinite(mean))
        throw std::domain_error("poisson: mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean < 10.0) return detail::poisson_inversion(mean, rng);
    return detail::poisson_ptrs(mean, rng);
}

// One-sided alpha-stable variate S with E[exp(-s S)] = exp(-s^alpha),
// 0 < alpha < 1, via the Kanter/Zolotarev two-uniform representation:
//   S = sin(a x) sin((1-a) x)^{(1-a)/a} / (sin(x)^{1/a} W^{(1-a)/a}),
// x uniform on (0, pi), W unit exponential.
inline double one_sided_stable(double alpha, RngStream& rng) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("one_sided_stable: alpha must lie in (0,1)");
    const double x = M_PI * rng.uniform_pos();
    double w;
    do {
        w = exponential(1.0, rng);
    } while (w == 0.0);
    const double ia = 1.0 - alpha;
    // sinc form keeps the ratio stable near x = 0 and x = pi
    const double A = std::pow(ia * detail::sinc(ia * x), ia) *
                     std::pow(alpha * detail::sinc(alpha * x), alpha) /
                     detail::sinc(x);
    return std::pow(A / std::pow(w, ia), 1.0 / alpha);
}

// Increment D_{beta,theta}(dt) of the tempered stable subordinator, by
// rejection: propose dt^{1/beta} S with S ~ one_sided_stable(beta), accept
// with probability exp(-theta * proposal). The acceptance rate is
// exp(-dt * theta^beta); callers must keep dt * theta^beta <= ~13.8.
inline double tempered_stable_increment(double beta, double theta, double dt,
                                        RngStream& rng) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("tempered_stable_increment: beta must lie in (0,1)");
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw std::domain_error("tempered_stable_increment: theta must be finite and > 0");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::domain_error("tempered_stable_increment: dt must be finite and > 0");
    const double exponent = dt * std::pow(theta, beta);
    if (exponent > -std::log(1e-6))
        throw std::runtime_error(
            "tempered_stable_increment: acceptance below 1e-6; split into smaller dt");
    const double scale = std::pow(dt, 1.0 / beta);
    for (;;) {
        const double proposal = scale * one_sided_stable(beta, rng);
        if (rng.uniform() <= std::exp(-theta * proposal)) return proposal;
    }
}

}  // namespace fracount
