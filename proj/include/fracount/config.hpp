#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracount/processes.hpp"
#include "fracount/rates.hpp"
#include "fracount/subordinators.hpp"
#include "fracount/verify.hpp"

namespace fracount {

// Raised on any config parse/validation problem; the message names the
// offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CheckSpecConfig {
    enum class Type {
        exponential_martingale,
        compensated_martingale,
        mean_count,
        poisson_fit,
        increment_correlation,
        ngcp_cross_validation,
        pgf_space_fractional,
    };
    Type type;
    std::vector<double> times;     // mean_count / ngcp_cross_validation
    double s = 0.0, t = 0.0;       // poisson_fit / pgf (t only)
    std::vector<double> v_values;  // pgf
    // increment_correlation: two disjoint intervals
    double s1 = 0.0, t1 = 0.0, s2 = 0.0, t2 = 0.0;
};

struct Scenario {
    std::string name;
    std::uint64_t seed = 1;
    std::size_t n_paths = 10000;
    double horizon = 1.0;
    ProcessSpec process;
    MartingaleProbe probes;
    std::vector<CheckSpecConfig> checks;
    std::string output_dir = "out";
    bool dump_paths = false;
    double significance = 0.01;

    void validate() const {
        if (name.empty()) throw ConfigError("scenario.name: must be non-empty");
        if (n_paths < 100) throw ConfigError("scenario.n_paths: must be >= 100");
        if (!(horizon > 0.0)) throw ConfigError("scenario.horizon: must be > 0");
        if (!(significance > 0.0 && significance < 1.0))
            throw ConfigError("scenario.significance: must lie in (0,1)");
        try {
            process.validate();
            probes.validate(horizon);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("scenario.process/probes: ") + e.what());
        }
        if (checks.empty()) throw ConfigError("scenario.checks: at least one check required");
    }
};

namespace cfg {

using nlohmann::json;

inline double require_number(const json& j, const std::string& path,
                             const std::string& field) {
    if (!j.contains(field) || !j[field].is_number())
        throw ConfigError(path + "." + field + ": missing or not a number");
    return j[field].get<double>();
}

inline RateFunction parse_rate(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ConfigError(path + ".type: missing rate type");
    const std::string type = j["type"].get<std::string>();
    try {
        if (type == "constant")
            return RateFunction::constant(require_number(j, path, "lambda"));
        if (type == "power")
            return RateFunction::power_law(require_number(j, path, "c"),
                                           require_number(j, path, "p"));
        if (type == "piecewise") {
            if (!j.contains("breakpoints") || !j["breakpoints"].is_array())
                throw ConfigError(path + ".breakpoints: missing or not an array");
            if (!j.contains("levels") || !j["levels"].is_array())
                throw ConfigError(path + ".levels: missing or not an array");
            return RateFunction::piecewise(j["breakpoints"].get<std::vector<double>>(),
                                           j["levels"].get<std::vector<double>>());
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    throw ConfigError(path + ".type: unknown rate type '" + type + "'");
}

inline SubordinatorSpec parse_subordinator(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ConfigError(path + ".kind: missing subordinator kind");
    const std::string kind = j["kind"].get<std::string>();
    SubordinatorSpec s;
    if (kind == "stable") {
        s.kind = SubordinatorKind::stable;
        s.alpha = require_number(j, path, "alpha");
    } else if (kind == "inverse_stable") {
        s.kind = SubordinatorKind::inverse_stable;
        s.alpha = require_number(j, path, "alpha");
    } else if (kind == "tempered") {
        s.kind = SubordinatorKind::tempered;
        s.beta = require_number(j, path, "beta");
        s.theta = require_number(j, path, "theta");
    } else if (kind == "tempered_of_inverse_stable") {
        s.kind = SubordinatorKind::tempered_of_inverse_stable;
        s.beta = require_number(j, path, "beta");
        s.theta = require_number(j, path, "theta");
        s.alpha = require_number(j, path, "alpha");
    } else if (kind == "mixed" || kind == "inverse_mixed") {
        s.kind = kind == "mixed" ? SubordinatorKind::mixed
                                 : SubordinatorKind::inverse_mixed;
        s.alpha1 = require_number(j, path, "alpha1");
        s.alpha2 = require_number(j, path, "alpha2");
        s.c1 = require_number(j, path, "c1");
        s.c2 = require_number(j, path, "c2");
    } else if (kind == "identity") {
        s.kind = SubordinatorKind::identity;
    } else {
        throw ConfigError(path + ".kind: unknown subordinator kind '" + kind + "'");
    }
    if (j.contains("grid_step")) s.grid_step = require_number(j, path, "grid_step");
    try {
        s.validate();
    } catch (const std::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return s;
}

inline ProcessSpec parse_process(const json& j, const std::string& path,
                                 bool allow_skellam = true) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ConfigError(path + ".kind: missing process kind");
    const std::string kind = j["kind"].get<std::string>();
    ProcessSpec p;
    if (kind == "npp") {
        p.kind = ProcessSpec::Kind::npp;
        if (!j.contains("rate"))
            throw ConfigError(path + ".rate: missing");
        p.rates.push_back(parse_rate(j["rate"], path + ".rate"));
    } else if (kind == "ngcp") {
        p.kind = ProcessSpec::Kind::ngcp;
        if (!j.contains("rates") || !j["rates"].is_array() || j["rates"].empty())
            throw ConfigError(path + ".rates: missing or empty array");
        for (std::size_t i = 0; i < j["rates"].size(); ++i)
            p.rates.push_back(parse_rate(j["rates"][i],
                                         path + ".rates[" + std::to_string(i) + "]"));
    } else if (kind == "skellam") {
        if (!allow_skellam)
            throw ConfigError(path + ".kind: skellam components must not be skellam");
        p.kind = ProcessSpec::Kind::skellam;
        if (!j.contains("plus") || !j.contains("minus"))
            throw ConfigError(path + ": skellam needs 'plus' and 'minus'");
        ProcessSpec plus = parse_process(j["plus"], path + ".plus", false);
        ProcessSpec minus = parse_process(j["minus"], path + ".minus", false);
        if (plus.time_change || minus.time_change)
            throw ConfigError(path + ": skellam components cannot carry their own time_change");
        p.rates = std::move(plus.rates);
        p.minus_rates = std::move(minus.rates);
        if (j.contains("shared_clock")) {
            if (!j["shared_clock"].is_boolean())
                throw ConfigError(path + ".shared_clock: not a boolean");
            p.shared_clock = j["shared_clock"].get<bool>();
        }
    } else {
        throw ConfigError(path + ".kind: unknown process kind '" + kind + "'");
    }
    if (j.contains("time_change"))
        p.time_change = parse_subordinator(j["time_change"], path + ".time_change");
    return p;
}

inline MartingaleProbe parse_probes(const json& j, const std::string& path) {
    MartingaleProbe probe;
    probe.test_functions.clear();
    if (j.contains("u_values")) {
        if (!j["u_values"].is_array())
            throw ConfigError(path + ".u_values: not an array");
        probe.u_values = j["u_values"].get<std::vector<double>>();
    }
    if (j.contains("time_pairs")) {
        if (!j["time_pairs"].is_array())
            throw ConfigError(path + ".time_pairs: not an array");
        for (const auto& pr : j["time_pairs"]) {
            if (!pr.is_array() || pr.size() != 2)
                throw ConfigError(path + ".time_pairs: each entry must be [s, t]");
            probe.time_pairs.emplace_back(pr[0].get<double>(), pr[1].get<double>());
        }
    }
    if (j.contains("test_functions")) {
        if (!j["test_functions"].is_array())
            throw ConfigError(path + ".test_functions: not an array");
        for (const auto& g : j["test_functions"]) {
            const std::string name = g.get<std::string>();
            if (name == "one")
                probe.test_functions.push_back(TestFunction::one);
            else if (name == "value_at_s")
                probe.test_functions.push_back(TestFunction::value_at_s);
            else if (name == "indicator_above_median_at_s")
                probe.test_functions.push_back(TestFunction::indicator_above_median_at_s);
            else
                throw ConfigError(path + ".test_functions: unknown '" + name + "'");
        }
    }
    if (probe.test_functions.empty())
        probe.test_functions.push_back(TestFunction::one);
    return probe;
}

inline CheckSpecConfig parse_check(const json& j, const std::string& path) {
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
        throw ConfigError(path + ".type: missing check type");
    const std::string type = j["type"].get<std::string>();
    CheckSpecConfig c;
    auto times_field = [&](const char* field) {
        if (!j.contains(field) || !j[field].is_array() || j[field].empty())
            throw ConfigError(path + "." + field + ": missing or empty array");
        return j[field].get<std::vector<double>>();
    };
    if (type == "exponential_martingale") {
        c.type = CheckSpecConfig::Type::exponential_martingale;
    } else if (type == "compensated_martingale") {
        c.type = CheckSpecConfig::Type::compensated_martingale;
    } else if (type == "mean_count") {
        c.type = CheckSpecConfig::Type::mean_count;
        c.times = times_field("times");
    } else if (type == "poisson_fit") {
        c.type = CheckSpecConfig::Type::poisson_fit;
        c.s = require_number(j, path, "s");
        c.t = require_number(j, path, "t");
        if (!(c.s >= 0.0 && c.s < c.t))
            throw ConfigError(path + ": poisson_fit needs 0 <= s < t");
    } else if (type == "increment_correlation") {
        c.type = CheckSpecConfig::Type::increment_correlation;
        if (!j.contains("intervals") || !j["intervals"].is_array() ||
            j["intervals"].size() != 2)
            throw ConfigError(path + ".intervals: need exactly two [s, t] intervals");
        auto iv = j["intervals"];
        c.s1 = iv[0][0].get<double>();
        c.t1 = iv[0][1].get<double>();
        c.s2 = iv[1][0].get<double>();
        c.t2 = iv[1][1].get<double>();
        if (!(c.s1 < c.t1 && c.t1 <= c.s2 && c.s2 < c.t2))
            throw ConfigError(path + ".intervals: intervals must be ordered and disjoint");
    } else if (type == "ngcp_cross_validation") {
        c.type = CheckSpecConfig::Type::ngcp_cross_validation;
        c.times = times_field("times");
    } else if (type == "pgf_space_fractional") {
        c.type = CheckSpecConfig::Type::pgf_space_fractional;
        c.v_values = times_field("v_values");
        c.t = require_number(j, path, "t");
    } else {
        throw ConfigError(path + ".type: unknown check type '" + type + "'");
    }
    return c;
}

inline Scenario parse_scenario(const json& j) {
    if (!j.is_object()) throw ConfigError("scenario: top level must be an object");
    Scenario s;
    if (!j.contains("name") || !j["name"].is_string())
        throw ConfigError("scenario.name: missing or not a string");
    s.name = j["name"].get<std::string>();
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned())
            throw ConfigError("scenario.seed: not an unsigned integer");
        s.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("n_paths")) {
        if (!j["n_paths"].is_number_unsigned())
            throw ConfigError("scenario.n_paths: not an unsigned integer");
        s.n_paths = j["n_paths"].get<std::size_t>();
    }
    if (j.contains("horizon")) s.horizon = require_number(j, "scenario", "horizon");
    if (!j.contains("process"))
        throw ConfigError("scenario.process: missing");
    s.process = parse_process(j["process"], "scenario.process");
    if (j.contains("probes")) s.probes = parse_probes(j["probes"], "scenario.probes");
    if (!j.contains("checks") || !j["checks"].is_array())
        throw ConfigError("scenario.checks: missing or not an array");
    for (std::size_t i = 0; i < j["checks"].size(); ++i)
        s.checks.push_back(parse_check(j["checks"][i],
                                       "scenario.checks[" + std::to_string(i) + "]"));
    if (j.contains("output_dir")) s.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("dump_paths")) {
        if (!j["dump_paths"].is_boolean())
            throw ConfigError("scenario.dump_paths: not a boolean");
        s.dump_paths = j["dump_paths"].get<bool>();
    }
    if (j.contains("significance"))
        s.significance = require_number(j, "scenario", "significance");
    s.validate();
    return s;
}

inline Scenario parse_scenario_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    return parse_scenario(j);
}

}  // namespace cfg
}  // namespace fracount
