#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracount/processes.hpp"
#include "fracount/rates.hpp"
#include "fracount/subordinators.hpp"

namespace fracount {

// ---------------------------------------------------------------------------
// Scalar statistics helpers
// ---------------------------------------------------------------------------

namespace stats {

inline double normal_sf(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

inline double two_sided_p(double z) {
    return std::min(1.0, 2.0 * normal_sf(std::fabs(z)));
}

// Acklam's rational approximation of the standard normal quantile.
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("normal_quantile: p must lie in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double q, r;
    if (p < plow) {
        q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) return -normal_quantile(1.0 - p);
    q = p - 0.5;
    r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Regularized lower incomplete gamma P(a, x); series and continued
// fraction branches.
inline double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0)
        throw std::domain_error("gamma_p: need x >= 0 and a > 0");
    if (x == 0.0) return 0.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    // Lentz continued fraction for Q(a, x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

inline double chi_square_sf(double stat, double df) {
    return 1.0 - gamma_p(df / 2.0, stat / 2.0);
}

inline double mean(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) /
           static_cast<double>(xs.size());
}

// Standard error of the sample mean by batch means; robust to
// heavy-tailed summands from stable clocks.
inline double batch_means_se(const std::vector<double>& xs,
                             std::size_t n_batches = 100) {
    if (xs.size() < n_batches)
        throw std::invalid_argument("batch_means_se: fewer samples than batches");
    const std::size_t m = xs.size() / n_batches;
    const std::size_t used = m * n_batches;
    std::vector<double> bm(n_batches, 0.0);
    for (std::size_t b = 0; b < n_batches; ++b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < m; ++i) acc += xs[b * m + i];
        bm[b] = acc / static_cast<double>(m);
    }
    (void)used;
    const double mu = mean(bm);
    double ss = 0.0;
    for (double v : bm) ss += (v - mu) * (v - mu);
    const double var_bm = ss / static_cast<double>(n_batches - 1);
    return std::sqrt(var_bm / static_cast<double>(n_batches));
}

}  // namespace stats

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct CheckReport {
    std::string name;
    double statistic = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    double z_score = 0.0;
    std::size_t n_samples = 0;
    bool pass = false;
    std::string notes;

    // extra columns for CSV output; NaN means "not applicable"
    double u_or_v = std::numeric_limits<double>::quiet_NaN();
    double time_s = std::numeric_limits<double>::quiet_NaN();
    double time_t = std::numeric_limits<double>::quiet_NaN();
    double adjusted_threshold = std::numeric_limits<double>::quiet_NaN();
    double p_value = std::numeric_limits<double>::quiet_NaN();
    double allowance = 0.0;    // band widening (grid bias); absolute units
    bool holm_exempt = false;  // chi-square checks decide at their raw level
};

// Report comparing the sample mean of `summands` against `target`.
// `allowance` widens the band additively; z is reported on the raw scale.
inline CheckReport make_mean_report(std::string name,
                                    const std::vector<double>& summands,
                                    double target, double z_threshold = 4.0,
                                    double allowance = 0.0) {
    CheckReport r;
    r.name = std::move(name);
    r.n_samples = summands.size();
    r.statistic = stats::mean(summands);
    r.std_error = summands.size() >= 100 ? stats::batch_means_se(summands) : 0.0;
    r.target = target;
    r.allowance = allowance;
    r.adjusted_threshold = z_threshold;
    const double dev = std::fabs(r.statistic - target);
    if (r.std_error > 0.0) {
        r.z_score = (r.statistic - target) / r.std_error;
        const double excess = std::max(0.0, dev - allowance);
        r.p_value = stats::two_sided_p(excess / r.std_error);
        r.pass = excess <= z_threshold * r.std_error;
    } else {
        r.z_score = 0.0;
        r.p_value = dev <= allowance ? 1.0 : 0.0;
        r.pass = dev <= allowance;
    }
    return r;
}

// Holm step-down over one scenario's reports: controls family-wise error
// at `alpha`. Reports without a p-value are left untouched.
inline void holm_adjust(std::vector<CheckReport>& reports, double alpha) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < reports.size(); ++i)
        if (std::isfinite(reports[i].p_value) && reports[i].std_error > 0.0 &&
            !reports[i].holm_exempt)
            idx.push_back(i);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return reports[a].p_value < reports[b].p_value;
    });
    const std::size_t m = idx.size();
    bool rejecting = true;
    for (std::size_t rank = 0; rank < m; ++rank) {
        CheckReport& r = reports[idx[rank]];
        const double level = alpha / static_cast<double>(m - rank);
        r.adjusted_threshold = stats::normal_quantile(1.0 - level / 2.0);
        if (rejecting && r.p_value <= level) {
            r.pass = false;
        } else {
            rejecting = false;  // step-down stops rejecting at the first pass
            r.pass = true;
        }
    }
}

// ---------------------------------------------------------------------------
// Closed-form oracles
// ---------------------------------------------------------------------------

// E and Var of the inverse stable subordinator Y_alpha(t):
//   t^a / Gamma(a+1)  and  (2/Gamma(2a+1) - 1/Gamma^2(a+1)) t^(2a).
inline std::pair<double, double> oracle_inverse_stable_moments(double alpha,
                                                               double t) {
    if (!(alpha > 0.0 && alpha <= 1.0))
        throw std::domain_error("oracle_inverse_stable_moments: alpha must lie in (0,1]");
    if (!(t >= 0.0))
        throw std::domain_error("oracle_inverse_stable_moments: t must be >= 0");
    if (alpha == 1.0) return {t, 0.0};
    if (t == 0.0) return {0.0, 0.0};
    const double g1 = std::tgamma(alpha + 1.0);
    const double g2 = std::tgamma(2.0 * alpha + 1.0);
    const double mean = std::pow(t, alpha) / g1;
    const double var = (2.0 / g2 - 1.0 / (g1 * g1)) * std::pow(t, 2.0 * alpha);
    return {mean, var};
}

// E and Var of the tempered stable subordinator D_{beta,theta}(t):
//   beta theta^(beta-1) t  and  beta (1-beta) theta^(beta-2) t.
inline std::pair<double, double> oracle_tss_moments(double beta, double theta,
                                                    double t) {
    if (!(beta > 0.0 && beta < 1.0) || !(theta > 0.0))
        throw std::domain_error("oracle_tss_moments: need beta in (0,1), theta > 0");
    if (!(t >= 0.0))
        throw std::domain_error("oracle_tss_moments: t must be >= 0");
    return {beta * std::pow(theta, beta - 1.0) * t,
            beta * (1.0 - beta) * std::pow(theta, beta - 2.0) * t};
}

// MGF of the NGCP at u: exp(sum_j Lambda_j(t) (e^{uj} - 1)).
inline double oracle_ngcp_mgf(double u, const std::vector<RateFunction>& rates,
                              double t) {
    double e = 0.0;
    for (std::size_t j = 1; j <= rates.size(); ++j)
        e += rates[j - 1].cumulative(t) *
             (std::exp(u * static_cast<double>(j)) - 1.0);
    return std::exp(e);
}

// Laplace transform E[e^{-s X(t)}] for the direct subordinator kinds.
// The tempered kind uses the Bernstein form e^{-t((s+theta)^b - theta^b)}.
inline double oracle_subordinator_laplace(const SubordinatorSpec& spec,
                                          double s, double t) {
    if (!(s >= 0.0) || !(t >= 0.0))
        throw std::domain_error("oracle_subordinator_laplace: need s, t >= 0");
    switch (spec.kind) {
        case SubordinatorKind::stable:
            return std::exp(-t * std::pow(s, spec.alpha));
        case SubordinatorKind::mixed:
            return std::exp(-t * (spec.c1 * std::pow(s, spec.alpha1) +
                                  spec.c2 * std::pow(s, spec.alpha2)));
        case SubordinatorKind::tempered:
            return std::exp(-t * (std::pow(s + spec.theta, spec.beta) -
                                  std::pow(spec.theta, spec.beta)));
        case SubordinatorKind::identity:
            return std::exp(-s * t);
        default:
            throw std::invalid_argument(
                "oracle_subordinator_laplace: inverse kinds have no elementary transform");
    }
}

// ---------------------------------------------------------------------------
// Probes and martingale checks
// ---------------------------------------------------------------------------

enum class TestFunction { one, value_at_s, indicator_above_median_at_s };

struct MartingaleProbe {
    std::vector<double> u_values;
    std::vector<std::pair<double, double>> time_pairs;  // (s, t), s < t
    std::vector<TestFunction> test_functions = {TestFunction::one};

    void validate(double horizon) const {
        for (double u : u_values)
            if (!std::isfinite(u))
                throw std::domain_error("MartingaleProbe: u values must be finite");
        for (const auto& [s, t] : time_pairs) {
            if (!(s >= 0.0 && s < t && t <= horizon + 1e-12))
                throw std::domain_error("MartingaleProbe: need 0 <= s < t <= horizon");
        }
    }

    std::vector<double> probe_times() const {
        std::vector<double> ts;
        for (const auto& [s, t] : time_pairs) {
            ts.push_back(s);
            ts.push_back(t);
        }
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        return ts;
    }
};

// Exponential martingale check: for each (u, t), sample mean of
// exp(u * value(t) - exponent(u, t)) against target 1. `value` and
// `exponent` are evaluated per path via the supplied callbacks, which
// must share the path's own clock trajectory.
inline std::vector<CheckReport> check_exponential_martingale(
    std::size_t n_paths,
    const std::function<double(std::size_t path, double t)>& value_at,
    const std::function<double(std::size_t path, double u, double t)>& exponent,
    const MartingaleProbe& probe, double z_threshold = 4.0) {
    if (n_paths < 1000)
        throw std::invalid_argument("check_exponential_martingale: need >= 1000 paths");
    std::vector<double> times;
    for (const auto& [s, t] : probe.time_pairs) times.push_back(t);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    std::vector<CheckReport> out;
    std::vector<double> summands(n_paths);
    for (double u : probe.u_values) {
        for (double t : times) {
            for (std::size_t p = 0; p < n_paths; ++p) {
                const double x = u * value_at(p, t) - exponent(p, u, t);
                summands[p] = std::exp(x);
                if (!std::isfinite(summands[p]))
                    throw std::runtime_error(
                        "check_exponential_martingale: non-finite statistic; reduce |u|");
            }
            CheckReport r = make_mean_report("exponential_martingale", summands,
                                             1.0, z_threshold);
            if (u == 0.0) {
                // exp(0) per path: exact unit statistic
                r.std_error = 0.0;
                r.z_score = 0.0;
                r.p_value = 1.0;
                r.pass = r.statistic == 1.0;
            }
            r.u_or_v = u;
            r.time_t = t;
            out.push_back(std::move(r));
        }
    }
    return out;
}

// Compensated martingale check via orthogonality: for each (s, t) and
// test function g, sample mean of (X(t) - X(s)) g(F_s) against 0, where
// X is the caller-supplied compensated process.
inline std::vector<CheckReport> check_compensated_martingale(
    std::size_t n_paths,
    const std::function<double(std::size_t path, double t)>& compensated_at,
    const std::function<double(std::size_t path, double t)>& value_at,
    const MartingaleProbe& probe, double z_threshold = 4.0) {
    if (n_paths < 1000)
        throw std::invalid_argument("check_compensated_martingale: need >= 1000 paths");
    std::vector<CheckReport> out;
    std::vector<double> summands(n_paths);
    for (const auto& [s, t] : probe.time_pairs) {
        for (TestFunction g : probe.test_functions) {
            double median = 0.0;
            if (g == TestFunction::indicator_above_median_at_s) {
                std::vector<double> vs(n_paths);
                for (std::size_t p = 0; p < n_paths; ++p) vs[p] = value_at(p, s);
                std::nth_element(vs.begin(), vs.begin() + n_paths / 2, vs.end());
                median = vs[n_paths / 2];
                if (*std::min_element(vs.begin(), vs.end()) ==
                    *std::max_element(vs.begin(), vs.end()))
                    throw std::runtime_error(
                        "check_compensated_martingale: degenerate test function (zero variance at s)");
            }
            const char* gname = g == TestFunction::one ? "one"
                                : g == TestFunction::value_at_s ? "value_at_s"
                                : "indicator";
            for (std::size_t p = 0; p < n_paths; ++p) {
                const double dx = compensated_at(p, t) - compensated_at(p, s);
                double gv = 1.0;
                if (g == TestFunction::value_at_s) gv = value_at(p, s);
                else if (g == TestFunction::indicator_above_median_at_s)
                    gv = value_at(p, s) > median ? 1.0 : 0.0;
                summands[p] = dx * gv;
            }
            CheckReport r = make_mean_report(
                std::string("compensated_martingale_g=") + gname, summands, 0.0,
                z_threshold);
            r.time_s = s;
            r.time_t = t;
            out.push_back(std::move(r));
        }
    }
    return out;
}

// Mean / variance of a sample against closed-form oracles. Allowances
// widen both bands (grid bias of inverse-subordinator trajectories).
inline std::vector<CheckReport> check_moments(const std::vector<double>& samples,
                                              double oracle_mean,
                                              double oracle_var,
                                              double z_threshold = 4.0,
                                              double mean_allowance = 0.0,
                                              double var_allowance = 0.0) {
    if (samples.size() < 1000)
        throw std::invalid_argument("check_moments: need >= 1000 samples");
    if (!std::isfinite(oracle_mean) || !std::isfinite(oracle_var))
        throw std::domain_error("check_moments: oracle moments must be finite");
    std::vector<CheckReport> out;
    out.push_back(make_mean_report("moment_mean", samples, oracle_mean,
                                   z_threshold, mean_allowance));
    const double m = stats::mean(samples);
    std::vector<double> sq(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        sq[i] = (samples[i] - m) * (samples[i] - m);
    out.push_back(make_mean_report("moment_variance", sq, oracle_var,
                                   z_threshold, var_allowance));
    return out;
}

// Two-sample chi-square over pooled integer bins (expected count >= 5
// per cell under the pooled distribution).
inline CheckReport check_distribution_equality(const std::vector<long>& a,
                                               const std::vector<long>& b,
                                               double significance = 0.01) {
    if (a.size() < 10000 || b.size() < 10000)
        throw std::invalid_argument("check_distribution_equality: need >= 1e4 samples per side");
    std::map<long, std::pair<double, double>> counts;
    for (long v : a) counts[v].first += 1.0;
    for (long v : b) counts[v].second += 1.0;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    // pool adjacent values until each cell's pooled expectation reaches 5
    std::vector<std::pair<double, double>> cells;
    double ca = 0.0, cb = 0.0;
    const double min_expected = 5.0;
    for (const auto& [v, c] : counts) {
        (void)v;
        ca += c.first;
        cb += c.second;
        const double pooled = (ca + cb) / (na + nb);
        if (std::min(na, nb) * pooled >= min_expected) {
            cells.emplace_back(ca, cb);
            ca = cb = 0.0;
        }
    }
    if (ca + cb > 0.0) {
        if (cells.empty()) throw std::runtime_error(
            "check_distribution_equality: all mass in one bin");
        cells.back().first += ca;
        cells.back().second += cb;
    }
    if (cells.size() < 2)
        throw std::runtime_error("check_distribution_equality: all mass in one bin");
    double chi2 = 0.0;
    for (const auto& [oa, ob] : cells) {
        const double p = (oa + ob) / (na + nb);
        const double ea = na * p, eb = nb * p;
        chi2 += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    }
    const double df = static_cast<double>(cells.size() - 1);
    CheckReport r;
    r.name = "distribution_equality";
    r.statistic = chi2;
    r.target = df;
    r.std_error = std::sqrt(2.0 * df);
    r.z_score = (chi2 - df) / r.std_error;
    r.n_samples = a.size() + b.size();
    r.p_value = stats::chi_square_sf(chi2, df);
    r.pass = r.p_value >= significance;
    r.holm_exempt = true;
    r.notes = "chi-square, df=" + std::to_string(static_cast<long>(df));
    return r;
}

// Goodness of fit of integer samples against Poisson(mean), with tail
// pooling to expected >= 5.
inline CheckReport check_poisson_fit(const std::vector<long>& samples,
                                     double mean, double significance = 0.01) {
    if (samples.size() < 1000)
        throw std::invalid_argument("check_poisson_fit: need >= 1000 samples");
    const double n = static_cast<double>(samples.size());
    long max_v = 0;
    for (long v : samples) max_v = std::max(max_v, v);
    std::vector<double> observed(static_cast<std::size_t>(max_v) + 1, 0.0);
    for (long v : samples) observed[static_cast<std::size_t>(v)] += 1.0;
    std::vector<double> pmf(observed.size());
    double p = std::exp(-mean);
    double tail = 1.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        pmf[k] = p;
        tail -= p;
        p *= mean / static_cast<double>(k + 1);
    }
    // pool from the right until every cell (incl. the tail cell) expects >= 5
    std::vector<std::pair<double, double>> cells;  // (observed, probability)
    double pool_obs = 0.0, pool_p = std::max(tail, 0.0);
    for (std::size_t k = pmf.size(); k-- > 0;) {
        pool_obs += observed[k];
        pool_p += pmf[k];
        if (n * pool_p >= 5.0 && (k == 0 || n * pmf[k - 1] >= 5.0)) {
            cells.emplace_back(pool_obs, pool_p);
            pool_obs = 0.0;
            pool_p = 0.0;
        }
    }
    if (pool_p > 0.0 || pool_obs > 0.0) {
        if (cells.empty())
            throw std::runtime_error("check_poisson_fit: all mass in one bin");
        cells.back().first += pool_obs;
        cells.back().second += pool_p;
    }
    if (cells.size() < 2)
        throw std::runtime_error("check_poisson_fit: all mass in one bin");
    double chi2 = 0.0;
    for (const auto& [obs, prob] : cells) {
        const double e = n * prob;
        chi2 += (obs - e) * (obs - e) / e;
    }
    const double df = static_cast<double>(cells.size() - 1);
    CheckReport r;
    r.name = "poisson_fit";
    r.statistic = chi2;
    r.target = df;
    r.std_error = std::sqrt(2.0 * df);
    r.z_score = (chi2 - df) / r.std_error;
    r.n_samples = samples.size();
    r.p_value = stats::chi_square_sf(chi2, df);
    r.pass = r.p_value >= significance;
    r.holm_exempt = true;
    r.notes = "chi-square vs Poisson(" + std::to_string(mean) + ")";
    return r;
}

// pgf check for the space-fractional variant (moments do not exist):
// E[v^{N(D_beta(t))}] = exp(-t lambda^beta (1-v)^beta) for constant rate.
inline std::vector<CheckReport> check_pgf_space_fractional(
    std::size_t n_paths,
    const std::function<long(std::size_t path, double t)>& value_at,
    double lambda_const, double beta, const std::vector<double>& v_values,
    double t, double z_threshold = 4.0) {
    std::vector<CheckReport> out;
    std::vector<double> summands(n_paths);
    for (double v : v_values) {
        if (!(v > 0.0 && v <= 1.0))
            throw std::domain_error("check_pgf_space_fractional: v must lie in (0,1]");
        const double target =
            lambda_const == 0.0 || v == 1.0
                ? 1.0
                : std::exp(-t * std::pow(lambda_const, beta) *
                           std::pow(1.0 - v, beta));
        for (std::size_t p = 0; p < n_paths; ++p)
            summands[p] = std::pow(v, static_cast<double>(value_at(p, t)));
        CheckReport r =
            make_mean_report("pgf_space_fractional", summands, target, z_threshold);
        if (v == 1.0) {
            r.std_error = 0.0;
            r.z_score = 0.0;
            r.p_value = 1.0;
            r.pass = r.statistic == 1.0;
        }
        r.u_or_v = v;
        r.time_t = t;
        out.push_back(std::move(r));
    }
    return out;
}

// Extrapolated grid-bias allowance from a step-halving pair of estimates:
// for a step-linear bias, bias(h/2) = est(h) - est(h/2); a 1.5 safety
// factor covers departure from exact linearity.
inline double grid_bias_allowance(double estimate_h, double estimate_half_h) {
    return 1.5 * std::fabs(estimate_h - estimate_half_h);
}

}  // namespace fracount
