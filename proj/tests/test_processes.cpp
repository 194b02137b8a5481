#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fracount/processes.hpp"
#include "fracount/util.hpp"
#include "fracount/verify.hpp"

using fracount::CountingPath;
using fracount::ProcessSpec;
using fracount::RateFunction;
using fracount::RngStream;
using fracount::SubordinatorKind;
using fracount::SubordinatorSpec;
namespace stats = fracount::stats;

TEST_CASE("evaluate is right-continuous") {
    CountingPath p;
    p.horizon = 1.0;
    p.jump_times = {0.5, 0.7};
    p.jump_sizes = {1, 2};
    CHECK(fracount::evaluate(p, 0.0) == 0);
    CHECK(fracount::evaluate(p, 0.499) == 0);
    CHECK(fracount::evaluate(p, 0.5) == 1);
    CHECK(fracount::evaluate(p, 0.7) == 3);
    CHECK_THROWS_AS(fracount::evaluate(p, 1.5), std::domain_error);
    CHECK_THROWS_AS(fracount::evaluate(p, -0.1), std::domain_error);
}

TEST_CASE("npp with zero rate is empty") {
    RngStream rng(30);
    auto p = fracount::simulate_npp(RateFunction::constant(0.0), 1.0, rng);
    CHECK(p.jump_times.empty());
}

TEST_CASE("npp power law mean and empty probability") {
    const std::size_t n = 100000;
    const auto rate = RateFunction::power_law(1.0, 2.0);
    std::vector<double> counts(n), empty(n);
    fracount::parallel_for(n, 4, [&](std::size_t i) {
        RngStream r(31, i);
        auto p = fracount::simulate_npp(rate, 1.0, r);
        const long v = fracount::evaluate(p, 1.0);
        counts[i] = static_cast<double>(v);
        empty[i] = v == 0 ? 1.0 : 0.0;
        for (double t : p.jump_times) {
            if (!(t > 0.0 && t <= 1.0)) FAIL("jump outside (0, horizon]");
        }
    });
    CHECK(std::fabs(stats::mean(counts) - 1.0) <= 4.0 * std::sqrt(1.0 / n));
    const double p0 = stats::mean(empty);
    const double tgt = std::exp(-1.0);
    CHECK(std::fabs(p0 - tgt) <= 4.0 * std::sqrt(tgt * (1.0 - tgt) / n));
}

TEST_CASE("npp piecewise thinning agrees with the poisson law") {
    const auto rate = RateFunction::piecewise({0.5}, {2.0, 1.0});
    const std::size_t n = 20000;
    std::vector<long> counts(n);
    fracount::parallel_for(n, 4, [&](std::size_t i) {
        RngStream r(32, i);
        counts[i] = fracount::evaluate(fracount::simulate_npp(rate, 1.0, r), 1.0);
    });
    auto rep = fracount::check_poisson_fit(counts, rate.cumulative(1.0), 0.01);
    INFO(rep.notes << " p=" << rep.p_value);
    CHECK(rep.pass);
}

TEST_CASE("ngcp with one component reduces to npp") {
    const std::vector<RateFunction> rates = {RateFunction::power_law(1.0, 2.0)};
    RngStream parent(33, 5);
    auto sum = fracount::simulate_ngcp(rates, 1.0, parent);
    RngStream comp = parent.child(1);
    auto npp = fracount::simulate_npp(rates[0], 1.0, comp);
    CHECK(sum.jump_times == npp.jump_times);
    CHECK(sum.jump_sizes == npp.jump_sizes);
}

TEST_CASE("ngcp mean and mgf") {
    const std::vector<RateFunction> rates = {RateFunction::constant(0.5),
                                             RateFunction::constant(0.3),
                                             RateFunction::constant(0.2)};
    const std::size_t n = 100000;
    std::vector<double> vals(n), mgf(n);
    const double u = 0.3;
    fracount::parallel_for(n, 4, [&](std::size_t i) {
        RngStream r(34, i);
        auto p = fracount::simulate_ngcp(rates, 1.0, r);
        const long v = fracount::evaluate(p, 1.0);
        vals[i] = static_cast<double>(v);
        mgf[i] = std::exp(u * static_cast<double>(v));
        for (long s : p.jump_sizes)
            if (s < 1 || s > 3) FAIL("jump size outside {1,2,3}");
    });
    CHECK(fracount::make_mean_report("ngcp_mean", vals, 1.7).pass);
    const double target = fracount::oracle_ngcp_mgf(u, rates, 1.0);
    auto rep = fracount::make_mean_report("ngcp_mgf", mgf, target);
    INFO("stat=" << rep.statistic << " target=" << target);
    CHECK(rep.pass);
}

TEST_CASE("weighted and marked constructions share one law") {
    const std::vector<RateFunction> rates = {RateFunction::constant(0.5),
                                             RateFunction::constant(0.3),
                                             RateFunction::constant(0.2)};
    const std::size_t n = 20000;
    std::vector<long> a(n), b(n);
    fracount::parallel_for(n, 4, [&](std::size_t i) {
        RngStream r(35, i);
        a[i] = fracount::evaluate(fracount::simulate_ngcp(rates, 1.0, r), 1.0);
        RngStream m = r.child(6);
        auto marked = fracount::simulate_ngcp_marked(rates, 1.0, m);
        b[i] = fracount::evaluate(marked, 1.0);
        for (long s : marked.jump_sizes)
            if (s < 1 || s > 3) FAIL("mark outside {1,2,3}");
    });
    auto rep = fracount::check_distribution_equality(a, b, 0.01);
    INFO(rep.notes << " p=" << rep.p_value);
    CHECK(rep.pass);
}

TEST_CASE("identity clock reproduces the base bit-exactly") {
    ProcessSpec base;
    base.kind = ProcessSpec::Kind::ngcp;
    base.rates = {RateFunction::constant(0.6), RateFunction::power_law(0.5, 2.0)};
    ProcessSpec clocked = base;
    SubordinatorSpec id;
    id.kind = SubordinatorKind::identity;
    clocked.time_change = id;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        RngStream p1(40, seed), p2(40, seed);
        auto t1 = fracount::simulate_trajectory(base, 1.0, p1);
        auto t2 = fracount::simulate_trajectory(clocked, 1.0, p2);
        REQUIRE(t1.path.jump_times == t2.path.jump_times);
        REQUIRE(t1.path.jump_sizes == t2.path.jump_sizes);
    }
}

TEST_CASE("identity clock skellam reduction") {
    ProcessSpec base;
    base.kind = ProcessSpec::Kind::skellam;
    base.rates = {RateFunction::constant(1.0)};
    base.minus_rates = {RateFunction::constant(0.7)};
    ProcessSpec clocked = base;
    SubordinatorSpec id;
    id.kind = SubordinatorKind::identity;
    clocked.time_change = id;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        RngStream p1(41, seed), p2(41, seed);
        auto t1 = fracount::simulate_trajectory(base, 1.0, p1);
        auto t2 = fracount::simulate_trajectory(clocked, 1.0, p2);
        REQUIRE(t1.path.jump_times == t2.path.jump_times);
        REQUIRE(t1.path.jump_sizes == t2.path.jump_sizes);
    }
}

TEST_CASE("symmetric skellam has zero mean") {
    ProcessSpec spec;
    spec.kind = ProcessSpec::Kind::skellam;
    spec.rates = {RateFunction::constant(1.0)};
    spec.minus_rates = {RateFunction::constant(1.0)};
    const std::size_t n = 100000;
    std::vector<double> vals(n);
    fracount::parallel_for(n, 4, [&](std::size_t i) {
        RngStream r(42, i);
        auto t = fracount::simulate_trajectory(spec, 1.0, r);
        vals[i] = static_cast<double>(fracount::evaluate(t.path, 1.0));
    });
    CHECK(std::fabs(stats::mean(vals)) <= 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("clocked trajectory carries a nondecreasing clock") {
    ProcessSpec spec;
    spec.kind = ProcessSpec::Kind::npp;
    spec.rates = {RateFunction::constant(1.0)};
    SubordinatorSpec tc;
    tc.kind = SubordinatorKind::inverse_stable;
    tc.alpha = 0.7;
    tc.grid_step = 0.01;
    spec.time_change = tc;
    RngStream parent(43, 0);
    auto t = fracount::simulate_trajectory(spec, 1.0, parent);
    REQUIRE(t.has_clock());
    CHECK(t.clock_at(0.0) == 0.0);
    double prev = 0.0;
    for (double x : {0.1, 0.25, 0.5, 0.75, 1.0}) {
        CHECK(t.clock_at(x) >= prev);
        prev = t.clock_at(x);
    }
    // mapped jumps live on the outer grid
    for (double jt : t.path.jump_times) {
        CHECK(jt <= 1.0 + 1e-12);
        CHECK(std::fabs(jt / tc.grid_step - std::round(jt / tc.grid_step)) <
              1e-9);
    }
}

TEST_CASE("clocked count mean follows the tower rule") {
    ProcessSpec spec;
    spec.kind = ProcessSpec::Kind::npp;
    spec.rates = {RateFunction::constant(1.0)};
    SubordinatorSpec tc;
    tc.kind = SubordinatorKind::inverse_stable;
    tc.alpha = 0.5;
    tc.grid_step = 2e-3;
    spec.time_change = tc;
    const std::size_t n = 20000;
    std::vector<double> vals(n);
    fracount::parallel_for(n, 4, [&](std::size_t i) {
        RngStream r(44, i);
        auto t = fracount::simulate_trajectory(spec, 1.0, r);
        vals[i] = static_cast<double>(fracount::evaluate(t.path, 1.0));
    });
    const double target =
        fracount::oracle_inverse_stable_moments(0.5, 1.0).first;
    auto rep = fracount::make_mean_report("ntfpp_mean", vals, target, 4.0,
                                          tc.grid_step);
    INFO("stat=" << rep.statistic << " target=" << target);
    CHECK(rep.pass);
}

TEST_CASE("process spec validation") {
    ProcessSpec p;
    p.kind = ProcessSpec::Kind::npp;
    CHECK_THROWS_AS(p.validate(), std::domain_error);
    p.rates = {RateFunction::constant(1.0), RateFunction::constant(1.0)};
    CHECK_THROWS_AS(p.validate(), std::domain_error);
    p.rates.pop_back();
    CHECK_NOTHROW(p.validate());
    p.minus_rates = {RateFunction::constant(1.0)};
    CHECK_THROWS_AS(p.validate(), std::domain_error);
    p.kind = ProcessSpec::Kind::skellam;
    CHECK_NOTHROW(p.validate());
    RngStream rng(45);
    CHECK_THROWS_AS(fracount::simulate_trajectory(p, -1.0, rng),
                    std::domain_error);
}
