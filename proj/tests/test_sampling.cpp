#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "fracount/sampling.hpp"
#include "fracount/verify.hpp"

using fracount::RngStream;
namespace stats = fracount::stats;

namespace {

double sample_mean_se(const std::vector<double>& xs, double& se) {
    se = stats::batch_means_se(xs);
    return stats::mean(xs);
}

double box_muller(RngStream& rng) {
    return std::sqrt(-2.0 * std::log(rng.uniform_pos())) *
           std::cos(2.0 * M_PI * rng.uniform());
}

}  // namespace

TEST_CASE("rng streams are deterministic and splittable") {
    RngStream a(123, 7), b(123, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
    // children derive from identity, not consumption state
    RngStream c(123, 7);
    c.next_u64();
    RngStream child1 = RngStream(123, 7).child(3);
    RngStream child2 = c.child(3);
    for (int i = 0; i < 100; ++i) CHECK(child1.next_u64() == child2.next_u64());
    // distinct slots decorrelate
    RngStream d = RngStream(123, 7).child(4);
    RngStream e = RngStream(123, 7).child(5);
    CHECK(d.next_u64() != e.next_u64());
}

TEST_CASE("poisson sampler") {
    RngStream rng(1);
    CHECK(fracount::poisson(0.0, rng) == 0);
    CHECK_THROWS_AS(fracount::poisson(-1.0, rng), std::domain_error);

    const std::size_t n = 100000;
    for (double mu : {4.0, 50.0}) {
        std::vector<double> xs(n);
        for (auto& x : xs) x = static_cast<double>(fracount::poisson(mu, rng));
        const double m = stats::mean(xs);
        CHECK(std::fabs(m - mu) <= 4.0 * std::sqrt(mu / n));
        double ss = 0.0;
        for (double x : xs) ss += (x - m) * (x - m);
        const double var = ss / static_cast<double>(n - 1);
        // Var of the Poisson variance estimator ~ (mu + 2 mu^2) / n
        CHECK(std::fabs(var - mu) <=
              4.0 * std::sqrt((mu + 2.0 * mu * mu) / n));
    }
}

TEST_CASE("exponential sampler") {
    RngStream rng(2);
    CHECK_THROWS_AS(fracount::exponential(0.0, rng), std::domain_error);
    const std::size_t n = 100000;
    for (double rate : {1.0, 2.0}) {
        std::vector<double> xs(n);
        for (auto& x : xs) x = fracount::exponential(rate, rng);
        const double m = stats::mean(xs);
        CHECK(std::fabs(m - 1.0 / rate) <= 4.0 / (rate * std::sqrt(n)));
    }
}

TEST_CASE("one sided stable laplace transform") {
    const std::size_t n = 100000;
    struct Probe {
        double alpha, s;
    };
    for (Probe p : {Probe{0.5, 1.0}, Probe{0.7, 0.5}, Probe{0.9, 4.0}}) {
        RngStream rng(3);
        std::vector<double> xs(n);
        for (auto& x : xs) {
            const double v = fracount::one_sided_stable(p.alpha, rng);
            REQUIRE(v > 0.0);
            x = std::exp(-p.s * v);
        }
        double se;
        const double m = sample_mean_se(xs, se);
        const double target = std::exp(-std::pow(p.s, p.alpha));
        INFO("alpha=" << p.alpha << " s=" << p.s);
        CHECK(std::fabs(m - target) <= 4.0 * se);
    }
    RngStream rng(3);
    CHECK_THROWS_AS(fracount::one_sided_stable(1.0, rng), std::domain_error);
    CHECK_THROWS_AS(fracount::one_sided_stable(0.0, rng), std::domain_error);
}

TEST_CASE("stable alpha=0.5 matches the 1/(2 Z^2) law") {
    const std::size_t n = 20000;
    RngStream rng(4);
    auto bin = [](double x) {
        return std::min<long>(48, static_cast<long>(std::floor(x / 0.25)));
    };
    std::vector<long> a(n), b(n);
    for (auto& v : a) v = bin(fracount::one_sided_stable(0.5, rng));
    for (auto& v : b) {
        const double z = box_muller(rng);
        v = bin(1.0 / (2.0 * z * z));
    }
    auto r = fracount::check_distribution_equality(a, b, 0.01);
    INFO(r.notes << " p=" << r.p_value);
    CHECK(r.pass);
}

TEST_CASE("tempered stable increment moments and transform") {
    const double beta = 0.5, theta = 1.0, dt = 0.01;
    const std::size_t n = 100000;
    RngStream rng(5);
    std::vector<double> xs(n), lap(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = fracount::tempered_stable_increment(beta, theta, dt, rng);
        REQUIRE(xs[i] > 0.0);
        lap[i] = std::exp(-2.0 * xs[i]);
    }
    auto [om, ov] = fracount::oracle_tss_moments(beta, theta, dt);
    auto reports = fracount::check_moments(xs, om, ov);
    for (const auto& r : reports) {
        INFO(r.name << " stat=" << r.statistic << " target=" << r.target);
        CHECK(r.pass);
    }
    // E[e^{-s D(dt)}] = e^{-dt ((s+theta)^b - theta^b)} at s = 2
    double se;
    const double m = sample_mean_se(lap, se);
    const double target =
        std::exp(-dt * (std::pow(2.0 + theta, beta) - std::pow(theta, beta)));
    CHECK(std::fabs(m - target) <= 4.0 * se);
}

TEST_CASE("tempered stable rejects hopeless acceptance rates") {
    RngStream rng(6);
    // dt * theta^beta = 20: acceptance e^-20 is below the 1e-6 floor
    CHECK_THROWS_AS(fracount::tempered_stable_increment(0.5, 100.0, 2.0, rng),
                    std::runtime_error);
    CHECK_THROWS_AS(fracount::tempered_stable_increment(1.2, 1.0, 0.1, rng),
                    std::domain_error);
    CHECK_THROWS_AS(fracount::tempered_stable_increment(0.5, -1.0, 0.1, rng),
                    std::domain_error);
    CHECK_THROWS_AS(fracount::tempered_stable_increment(0.5, 1.0, 0.0, rng),
                    std::domain_error);
}
