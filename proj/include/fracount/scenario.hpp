#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fracount/config.hpp"
#include "fracount/processes.hpp"
#include "fracount/util.hpp"
#include "fracount/verify.hpp"

namespace fracount {

// Raised when a scenario's checks are incompatible with its process
// (e.g. moment targets under a clock without finite moments).
struct ScenarioError : ConfigError {
    using ConfigError::ConfigError;
};

struct RunResult {
    std::vector<CheckReport> reports;
    bool all_pass = true;
};

namespace detail {

inline double weighted_cumulative(const std::vector<RateFunction>& rates,
                                  double x) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= rates.size(); ++j)
        acc += static_cast<double>(j) * rates[j - 1].cumulative(x);
    return acc;
}

inline double exp_exponent(const std::vector<RateFunction>& rates, double u,
                           double x, double sign) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= rates.size(); ++j)
        acc += (std::exp(sign * u * static_cast<double>(j)) - 1.0) *
               rates[j - 1].cumulative(x);
    return acc;
}

// E[clock(t)] for the clock kinds with finite first moments.
inline double mean_clock(const std::optional<SubordinatorSpec>& tc, double t) {
    if (!tc || tc->kind == SubordinatorKind::identity) return t;
    switch (tc->kind) {
        case SubordinatorKind::inverse_stable:
            return oracle_inverse_stable_moments(tc->alpha, t).first;
        case SubordinatorKind::tempered:
            return oracle_tss_moments(tc->beta, tc->theta, t).first;
        case SubordinatorKind::tempered_of_inverse_stable:
            return oracle_tss_moments(tc->beta, tc->theta, 1.0).first *
                   oracle_inverse_stable_moments(tc->alpha, t).first;
        case SubordinatorKind::stable:
            throw ScenarioError(
                "mean_count: the stable clock has no finite moments; use a pgf check");
        default:
            throw ScenarioError(
                "mean_count: no closed-form clock mean for this kind");
    }
}

// Per-unit-weighted-rate bias bound of E[clock(t)]: the left-endpoint
// first-passage estimate undershoots by at most one driver grid step.
inline double clock_mean_allowance(const std::optional<SubordinatorSpec>& tc) {
    if (!tc || tc->kind == SubordinatorKind::identity) return 0.0;
    switch (tc->kind) {
        case SubordinatorKind::inverse_stable:
        case SubordinatorKind::inverse_mixed:
            return tc->grid_step;
        case SubordinatorKind::tempered_of_inverse_stable:
            return oracle_tss_moments(tc->beta, tc->theta, 1.0).first * tc->grid_step;
        case SubordinatorKind::tempered:
        case SubordinatorKind::stable:
            // grid values are exact marginals; only probe rounding remains
            return 0.0;
        default:
            return 0.0;
    }
}

inline double weighted_rate_sum_constant(const std::vector<RateFunction>& rates) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= rates.size(); ++j) {
        const auto* c = std::get_if<ConstantRate>(&rates[j - 1].spec());
        if (!c)
            throw ScenarioError(
                "mean_count: closed-form targets under a random clock need constant rates");
        acc += static_cast<double>(j) * c->lambda;
    }
    return acc;
}

}  // namespace detail

// Executes one scenario: simulate n_paths trajectories in parallel,
// evaluate the configured checks, Holm-adjust the z-type family.
// Statistic reduction is per-path-indexed and serial, so the result is
// independent of the worker count.
inline RunResult run_scenario(const Scenario& sc, unsigned threads,
                              std::vector<std::string>* path_dump = nullptr) {
    sc.validate();

    const bool need_marked = std::any_of(
        sc.checks.begin(), sc.checks.end(), [](const CheckSpecConfig& c) {
            return c.type == CheckSpecConfig::Type::ngcp_cross_validation;
        });
    if (need_marked) {
        if (sc.process.kind == ProcessSpec::Kind::skellam || sc.process.time_change)
            throw ScenarioError(
                "ngcp_cross_validation: only valid for plain npp/ngcp processes");
    }

    // probe-time table shared by all checks
    std::vector<double> times;
    for (const auto& [s, t] : sc.probes.time_pairs) {
        times.push_back(s);
        times.push_back(t);
    }
    std::vector<double> marked_times;
    for (const auto& c : sc.checks) {
        switch (c.type) {
            case CheckSpecConfig::Type::mean_count:
                times.insert(times.end(), c.times.begin(), c.times.end());
                break;
            case CheckSpecConfig::Type::poisson_fit:
                times.push_back(c.s);
                times.push_back(c.t);
                break;
            case CheckSpecConfig::Type::increment_correlation:
                times.insert(times.end(), {c.s1, c.t1, c.s2, c.t2});
                break;
            case CheckSpecConfig::Type::ngcp_cross_validation:
                times.insert(times.end(), c.times.begin(), c.times.end());
                marked_times.insert(marked_times.end(), c.times.begin(),
                                    c.times.end());
                break;
            case CheckSpecConfig::Type::pgf_space_fractional:
                times.push_back(c.t);
                break;
            default:
                break;
        }
    }
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::sort(marked_times.begin(), marked_times.end());
    marked_times.erase(std::unique(marked_times.begin(), marked_times.end()),
                       marked_times.end());
    for (double t : times)
        if (!(t >= 0.0 && t <= sc.horizon + 1e-12))
            throw ScenarioError("checks: probe time outside [0, horizon]");
    if (times.empty())
        throw ScenarioError("checks: no probe times configured");

    const std::size_t nt = times.size();
    const std::size_t nm = marked_times.size();
    // record row: value | clock+ | clock- | marked value
    const std::size_t width = 3 * nt + nm;
    std::vector<double> records(sc.n_paths * width);
    if (path_dump) path_dump->assign(sc.n_paths, {});

    parallel_for(sc.n_paths, threads, [&](std::size_t p) {
        RngStream parent(sc.seed, p);
        Trajectory traj = simulate_trajectory(sc.process, sc.horizon, parent);
        double* row = records.data() + p * width;
        for (std::size_t i = 0; i < nt; ++i) {
            row[i] = static_cast<double>(evaluate(traj.path, times[i]));
            row[nt + i] = traj.clock_at(times[i]);
            row[2 * nt + i] = traj.minus_clock_at(times[i]);
        }
        if (nm > 0) {
            RngStream mrng = parent.child(6);
            CountingPath marked =
                simulate_ngcp_marked(sc.process.rates, sc.horizon, mrng);
            for (std::size_t i = 0; i < nm; ++i)
                row[3 * nt + i] =
                    static_cast<double>(evaluate(marked, marked_times[i]));
        }
        if (path_dump) {
            std::ostringstream os;
            for (std::size_t i = 0; i < traj.path.jump_times.size(); ++i)
                os << p << ',' << csv_number(traj.path.jump_times[i]) << ','
                   << traj.path.jump_sizes[i] << '\n';
            (*path_dump)[p] = os.str();
        }
    });

    auto time_index = [&](double t) {
        auto it = std::lower_bound(times.begin(), times.end(), t - 1e-12);
        return static_cast<std::size_t>(it - times.begin());
    };
    auto value_at = [&](std::size_t p, double t) {
        return records[p * width + time_index(t)];
    };
    auto clock_plus = [&](std::size_t p, double t) {
        return records[p * width + nt + time_index(t)];
    };
    auto clock_minus = [&](std::size_t p, double t) {
        return records[p * width + 2 * nt + time_index(t)];
    };

    const bool skellam = sc.process.kind == ProcessSpec::Kind::skellam;

    auto exponent_at = [&](std::size_t p, double u, double t) {
        double e = detail::exp_exponent(sc.process.rates, u, clock_plus(p, t), 1.0);
        if (skellam)
            e += detail::exp_exponent(sc.process.minus_rates, u,
                                      clock_minus(p, t), -1.0);
        return e;
    };
    auto compensated_at = [&](std::size_t p, double t) {
        double comp = detail::weighted_cumulative(sc.process.rates, clock_plus(p, t));
        if (skellam)
            comp -= detail::weighted_cumulative(sc.process.minus_rates,
                                                clock_minus(p, t));
        return value_at(p, t) - comp;
    };

    RunResult result;
    for (const auto& c : sc.checks) {
        std::vector<CheckReport> reports;
        switch (c.type) {
            case CheckSpecConfig::Type::exponential_martingale:
                if (sc.probes.u_values.empty() || sc.probes.time_pairs.empty())
                    throw ScenarioError(
                        "exponential_martingale: probes need u_values and time_pairs");
                reports = check_exponential_martingale(sc.n_paths, value_at,
                                                       exponent_at, sc.probes);
                break;
            case CheckSpecConfig::Type::compensated_martingale:
                if (sc.probes.time_pairs.empty())
                    throw ScenarioError(
                        "compensated_martingale: probes need time_pairs");
                reports = check_compensated_martingale(sc.n_paths, compensated_at,
                                                       value_at, sc.probes);
                break;
            case CheckSpecConfig::Type::mean_count: {
                const bool random_clock =
                    sc.process.time_change &&
                    sc.process.time_change->kind != SubordinatorKind::identity;
                for (double t : c.times) {
                    double target, allowance = 0.0;
                    if (!random_clock) {
                        target = detail::weighted_cumulative(sc.process.rates, t);
                        if (skellam)
                            target -= detail::weighted_cumulative(
                                sc.process.minus_rates, t);
                    } else {
                        const double mc = detail::mean_clock(sc.process.time_change, t);
                        double w = detail::weighted_rate_sum_constant(sc.process.rates);
                        double wa = w;
                        if (skellam) {
                            const double wm = detail::weighted_rate_sum_constant(
                                sc.process.minus_rates);
                            w -= wm;
                            wa += wm;  // bias bounds add across signs
                        }
                        target = w * mc;
                        allowance =
                            wa * detail::clock_mean_allowance(sc.process.time_change);
                    }
                    std::vector<double> vals(sc.n_paths);
                    for (std::size_t p = 0; p < sc.n_paths; ++p)
                        vals[p] = value_at(p, t);
                    CheckReport r = make_mean_report("mean_count", vals, target,
                                                     4.0, allowance);
                    r.time_t = t;
                    if (allowance > 0.0) r.notes = "grid-bias allowance applied";
                    reports.push_back(std::move(r));
                }
                break;
            }
            case CheckSpecConfig::Type::poisson_fit: {
                if (sc.process.kind != ProcessSpec::Kind::npp ||
                    sc.process.time_change)
                    throw ScenarioError(
                        "poisson_fit: only valid for a plain npp process");
                std::vector<long> incr(sc.n_paths);
                for (std::size_t p = 0; p < sc.n_paths; ++p)
                    incr[p] = static_cast<long>(value_at(p, c.t) - value_at(p, c.s));
                CheckReport r = check_poisson_fit(
                    incr, sc.process.rates[0].cumulative_between(c.s, c.t),
                    sc.significance);
                r.time_s = c.s;
                r.time_t = c.t;
                reports.push_back(std::move(r));
                break;
            }
            case CheckSpecConfig::Type::increment_correlation: {
                std::vector<double> a(sc.n_paths), b(sc.n_paths);
                for (std::size_t p = 0; p < sc.n_paths; ++p) {
                    a[p] = value_at(p, c.t1) - value_at(p, c.s1);
                    b[p] = value_at(p, c.t2) - value_at(p, c.s2);
                }
                const double ma = stats::mean(a), mb = stats::mean(b);
                double va = 0.0, vb = 0.0;
                for (std::size_t p = 0; p < sc.n_paths; ++p) {
                    va += (a[p] - ma) * (a[p] - ma);
                    vb += (b[p] - mb) * (b[p] - mb);
                }
                va /= static_cast<double>(sc.n_paths - 1);
                vb /= static_cast<double>(sc.n_paths - 1);
                if (va <= 0.0 || vb <= 0.0)
                    throw ScenarioError(
                        "increment_correlation: degenerate increments");
                std::vector<double> prod(sc.n_paths);
                const double sd = std::sqrt(va * vb);
                for (std::size_t p = 0; p < sc.n_paths; ++p)
                    prod[p] = (a[p] - ma) * (b[p] - mb) / sd;
                CheckReport r =
                    make_mean_report("increment_correlation", prod, 0.0);
                r.time_s = c.t1;
                r.time_t = c.t2;
                reports.push_back(std::move(r));
                break;
            }
            case CheckSpecConfig::Type::ngcp_cross_validation: {
                for (double t : c.times) {
                    const std::size_t mi = static_cast<std::size_t>(
                        std::lower_bound(marked_times.begin(), marked_times.end(),
                                         t - 1e-12) -
                        marked_times.begin());
                    std::vector<long> va(sc.n_paths), vb(sc.n_paths);
                    for (std::size_t p = 0; p < sc.n_paths; ++p) {
                        va[p] = static_cast<long>(value_at(p, t));
                        vb[p] = static_cast<long>(records[p * width + 3 * nt + mi]);
                    }
                    CheckReport r =
                        check_distribution_equality(va, vb, sc.significance);
                    r.name = "ngcp_cross_validation";
                    r.time_t = t;
                    reports.push_back(std::move(r));
                }
                break;
            }
            case CheckSpecConfig::Type::pgf_space_fractional: {
                if (sc.process.kind != ProcessSpec::Kind::npp ||
                    !sc.process.time_change ||
                    sc.process.time_change->kind != SubordinatorKind::stable)
                    throw ScenarioError(
                        "pgf_space_fractional: needs an npp with a stable clock");
                const auto* cr =
                    std::get_if<ConstantRate>(&sc.process.rates[0].spec());
                if (!cr)
                    throw ScenarioError(
                        "pgf_space_fractional: closed-form target needs a constant rate");
                auto ivalue = [&](std::size_t p, double t) {
                    return static_cast<long>(value_at(p, t));
                };
                reports = check_pgf_space_fractional(
                    sc.n_paths, ivalue, cr->lambda,
                    sc.process.time_change->alpha, c.v_values, c.t);
                break;
            }
        }
        for (auto& r : reports) result.reports.push_back(std::move(r));
    }

    holm_adjust(result.reports, sc.significance);
    for (const auto& r : result.reports) result.all_pass &= r.pass;
    return result;
}

inline std::string report_csv(const Scenario& sc, const RunResult& result) {
    std::ostringstream os;
    os << "scenario,check_name,u_or_v,s,t,statistic,std_error,target,z,"
          "adjusted_threshold,pass,n_paths,notes\n";
    for (const auto& r : result.reports) {
        std::string notes = r.notes;
        std::replace(notes.begin(), notes.end(), ',', ';');
        os << sc.name << ',' << r.name << ',' << csv_number(r.u_or_v) << ','
           << csv_number(r.time_s) << ',' << csv_number(r.time_t) << ','
           << csv_number(r.statistic) << ',' << csv_number(r.std_error) << ','
           << csv_number(r.target) << ',' << csv_number(r.z_score) << ','
           << csv_number(r.adjusted_threshold) << ','
           << (r.pass ? "true" : "false") << ',' << r.n_samples << ',' << notes
           << '\n';
    }
    return os.str();
}

inline void write_outputs(const Scenario& sc, const RunResult& result,
                          const std::string& output_dir,
                          const std::vector<std::string>* path_dump = nullptr) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(output_dir) / sc.name;
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "report.csv", std::ios::binary);
        f << report_csv(sc, result);
    }
    if (path_dump) {
        std::ofstream f(dir / "paths.csv", std::ios::binary);
        f << "path_id,jump_time,jump_size\n";
        for (const auto& s : *path_dump) f << s;
    }
}

}  // namespace fracount
