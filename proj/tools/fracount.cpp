#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "fracount/scenario.hpp"
#include "fracount/scenarios.hpp"

namespace {

std::string load_config_text(const std::string& config_arg) {
    std::ifstream f(config_arg, std::ios::binary);
    if (f) {
        std::ostringstream os;
        os << f.rdbuf();
        return os.str();
    }
    if (const fracount::BundledScenario* b = fracount::find_bundled(config_arg))
        return b->config;
    throw fracount::ConfigError("config: '" + config_arg +
                                "' is neither a readable file nor a bundled scenario");
}

int cmd_run(const std::string& config_arg, unsigned threads,
            const std::string& seed_override, const std::string& out_override) {
    fracount::Scenario sc;
    try {
        sc = fracount::cfg::parse_scenario_text(load_config_text(config_arg));
        if (!seed_override.empty())
            sc.seed = std::stoull(seed_override);
        if (!out_override.empty())
            sc.output_dir = out_override;
        else if (const char* env = std::getenv("FRACOUNT_OUT"); env && *env)
            sc.output_dir = env;
    } catch (const fracount::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    fracount::RunResult result;
    std::vector<std::string> dump;
    try {
        result = fracount::run_scenario(sc, threads,
                                        sc.dump_paths ? &dump : nullptr);
        fracount::write_outputs(sc, result, sc.output_dir,
                                sc.dump_paths ? &dump : nullptr);
    } catch (const fracount::ScenarioError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "simulation error: " << e.what() << "\n";
        return 3;
    }

    for (const auto& r : result.reports) {
        std::printf("%s  %-32s", r.pass ? "PASS" : "FAIL", r.name.c_str());
        if (std::isfinite(r.u_or_v)) std::printf(" u/v=%g", r.u_or_v);
        if (std::isfinite(r.time_s)) std::printf(" s=%g", r.time_s);
        if (std::isfinite(r.time_t)) std::printf(" t=%g", r.time_t);
        std::printf("  stat=%.6g target=%.6g", r.statistic, r.target);
        if (r.std_error > 0.0) std::printf(" z=%.3g", r.z_score);
        std::printf("\n");
    }
    std::printf("%s: %zu checks, %s\n", sc.name.c_str(), result.reports.size(),
                result.all_pass ? "all passed" : "FAILURES present");
    return result.all_pass ? 0 : 1;
}

int cmd_list() {
    for (const auto& s : fracount::bundled_scenarios())
        std::printf("%-26s %s\n", s.name, s.description);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracount: counting-process simulation and property checks"};
    app.require_subcommand(1);

    std::string config_arg, seed_override, out_override;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());

    CLI::App* run = app.add_subcommand("run", "Run one scenario config");
    run->add_option("--config", config_arg,
                    "Scenario JSON file or bundled scenario name")
        ->required();
    run->add_option("--threads", threads, "Worker count");
    run->add_option("--seed", seed_override, "Override the scenario seed");
    run->add_option("--out", out_override, "Override the output directory");

    CLI::App* list = app.add_subcommand("list", "List bundled scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (list->parsed()) return cmd_list();
    return cmd_run(config_arg, threads, seed_override, out_override);
}
