#pragma once

#include <string>
#include <vector>

namespace fracount {

struct BundledScenario {
    const char* name;
    const char* description;
    const char* config;
};

// Catalog of ready-to-run scenarios, one per characterization family.
// `fracount run --config <name>` falls back to these when no file with
// that name exists.
inline const std::vector<BundledScenario>& bundled_scenarios() {
    static const std::vector<BundledScenario> catalog = {
        {"npp_watanabe",
         "NPP with power-law rate: exponential and compensated martingale, "
         "Poisson increment fit, disjoint-increment independence",
         R"({
  "name": "npp_watanabe",
  "seed": 20260826,
  "n_paths": 20000,
  "horizon": 1.0,
  "process": {"kind": "npp", "rate": {"type": "power", "c": 1.0, "p": 2.0}},
  "probes": {
    "u_values": [-1.0, 0.0, 0.5, 1.0],
    "time_pairs": [[0.5, 1.0]],
    "test_functions": ["one", "value_at_s"]
  },
  "checks": [
    {"type": "exponential_martingale"},
    {"type": "compensated_martingale"},
    {"type": "poisson_fit", "s": 0.5, "t": 1.0},
    {"type": "increment_correlation", "intervals": [[0.0, 0.5], [0.5, 1.0]]},
    {"type": "mean_count", "times": [0.5, 1.0]}
  ]
})"},
        {"ngcp_equivalence",
         "NGCP (k=3): exponential and compensated martingale forms of the "
         "weighted-sum representation",
         R"({
  "name": "ngcp_equivalence",
  "seed": 20260826,
  "n_paths": 20000,
  "horizon": 1.0,
  "process": {"kind": "ngcp", "rates": [
    {"type": "constant", "lambda": 0.5},
    {"type": "constant", "lambda": 0.3},
    {"type": "constant", "lambda": 0.2}
  ]},
  "probes": {
    "u_values": [-1.0, 0.0, 0.5],
    "time_pairs": [[0.5, 1.0]],
    "test_functions": ["one", "value_at_s"]
  },
  "checks": [
    {"type": "exponential_martingale"},
    {"type": "compensated_martingale"},
    {"type": "mean_count", "times": [0.5, 1.0]}
  ]
})"},
        {"ngcp_weighted_vs_marked",
         "NGCP (k=3): weighted-sum construction vs thinned-and-marked "
         "construction, two-sample chi-square",
         R"({
  "name": "ngcp_weighted_vs_marked",
  "seed": 20260826,
  "n_paths": 20000,
  "horizon": 1.0,
  "process": {"kind": "ngcp", "rates": [
    {"type": "constant", "lambda": 0.5},
    {"type": "constant", "lambda": 0.3},
    {"type": "constant", "lambda": 0.2}
  ]},
  "checks": [
    {"type": "ngcp_cross_validation", "times": [0.5, 1.0]}
  ]
})"},
        {"ntfpp_moments",
         "NTFPP (inverse-stable clock, alpha=0.7): compensated martingale "
         "along the sampled clock and clock-mean count targets",
         R"({
  "name": "ntfpp_moments",
  "seed": 20260826,
  "n_paths": 20000,
  "horizon": 1.0,
  "process": {
    "kind": "npp",
    "rate": {"type": "constant", "lambda": 1.0},
    "time_change": {"kind": "inverse_stable", "alpha": 0.7, "grid_step": 0.001}
  },
  "probes": {
    "u_values": [0.5, -0.5],
    "time_pairs": [[0.25, 0.5], [0.5, 1.0]],
    "test_functions": ["one", "value_at_s", "indicator_above_median_at_s"]
  },
  "checks": [
    {"type": "exponential_martingale"},
    {"type": "compensated_martingale"},
    {"type": "mean_count", "times": [0.5, 1.0]}
  ]
})"},
        {"ngfcp_martingale",
         "NGFCP (k=2 over an inverse-stable clock): compensated martingale "
         "orthogonality in the enlarged filtration",
         R"({
  "name": "ngfcp_martingale",
  "seed": 20260826,
  "n_paths": 20000,
  "horizon": 1.0,
  "process": {
    "kind": "ngcp",
    "rates": [
      {"type": "constant", "lambda": 0.4},
      {"type": "constant", "lambda": 0.3}
    ],
    "time_change": {"kind": "inverse_stable", "alpha": 0.7, "grid_step": 0.001}
  },
  "probes": {
    "u_values": [0.5, -0.5],
    "time_pairs": [[0.25, 0.5], [0.5, 1.0]],
    "test_functions": ["one", "value_at_s", "indicator_above_median_at_s"]
  },
  "checks": [
    {"type": "exponential_martingale"},
    {"type": "compensated_martingale"}
  ]
})"},
        {"ntgstfcp_martingale",
         "NPP over a tempered-stable-of-inverse-stable clock: martingale "
         "checks and composed clock-mean targets",
         R"({
  "name": "ntgstfcp_martingale",
  "seed": 20260826,
  "n_paths": 20000,
  "horizon": 1.0,
  "process": {
    "kind": "npp",
    "rate": {"type": "constant", "lambda": 1.0},
    "time_change": {"kind": "tempered_of_inverse_stable",
                    "beta": 0.6, "theta": 2.0, "alpha": 0.8,
                    "grid_step": 0.001}
  },
  "probes": {
    "u_values": [0.5, -0.5],
    "time_pairs": [[0.25, 0.5], [0.5, 1.0]],
    "test_functions": ["one", "value_at_s"]
  },
  "checks": [
    {"type": "exponential_martingale"},
    {"type": "compensated_martingale"},
    {"type": "mean_count", "times": [1.0]}
  ]
})"},
        {"skellam_mgf",
         "NGSP (generalized Skellam, k=2 each sign): unit-mean exponential "
         "statistic and signed compensator",
         R"({
  "name": "skellam_mgf",
  "seed": 20260826,
  "n_paths": 20000,
  "horizon": 1.0,
  "process": {
    "kind": "skellam",
    "plus": {"kind": "ngcp", "rates": [
      {"type": "constant", "lambda": 0.5},
      {"type": "constant", "lambda": 0.25}
    ]},
    "minus": {"kind": "ngcp", "rates": [
      {"type": "constant", "lambda": 0.3},
      {"type": "constant", "lambda": 0.2}
    ]}
  },
  "probes": {
    "u_values": [0.4, -0.4],
    "time_pairs": [[0.5, 1.0]],
    "test_functions": ["one", "value_at_s"]
  },
  "checks": [
    {"type": "exponential_martingale"},
    {"type": "compensated_martingale"},
    {"type": "mean_count", "times": [1.0]}
  ]
})"},
        {"nfsp_symmetry",
         "Fractional Skellam with symmetric rates on a shared inverse-stable "
         "clock: zero-mean count and martingale property",
         R"({
  "name": "nfsp_symmetry",
  "seed": 20260826,
  "n_paths": 20000,
  "horizon": 1.0,
  "process": {
    "kind": "skellam",
    "plus": {"kind": "npp", "rate": {"type": "constant", "lambda": 1.0}},
    "minus": {"kind": "npp", "rate": {"type": "constant", "lambda": 1.0}},
    "shared_clock": true,
    "time_change": {"kind": "inverse_stable", "alpha": 0.7, "grid_step": 0.001}
  },
  "probes": {
    "u_values": [0.4, -0.4],
    "time_pairs": [[0.5, 1.0]],
    "test_functions": ["one"]
  },
  "checks": [
    {"type": "exponential_martingale"},
    {"type": "compensated_martingale"},
    {"type": "mean_count", "times": [1.0]}
  ]
})"},
        {"nsfpp_pgf",
         "Space-fractional Poisson (stable clock, alpha=0.5): pgf against "
         "exp(-t lambda^a (1-v)^a); moments do not exist",
         R"({
  "name": "nsfpp_pgf",
  "seed": 20260826,
  "n_paths": 20000,
  "horizon": 1.0,
  "process": {
    "kind": "npp",
    "rate": {"type": "constant", "lambda": 1.0},
    "time_change": {"kind": "stable", "alpha": 0.5, "grid_step": 0.01}
  },
  "checks": [
    {"type": "pgf_space_fractional", "v_values": [0.3, 0.5, 0.8, 1.0], "t": 1.0}
  ]
})"},
    };
    return catalog;
}

inline const BundledScenario* find_bundled(const std::string& name) {
    std::string stem = name;
    const std::string suffix = ".json";
    if (stem.size() > suffix.size() &&
        stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0)
        stem.resize(stem.size() - suffix.size());
    for (const auto& s : bundled_scenarios())
        if (stem == s.name) return &s;
    return nullptr;
}

}  // namespace fracount
