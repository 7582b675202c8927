// Copyright 2026 The ghznet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "ghznet/scenario.hpp"

using namespace ghznet;

namespace {

std::size_t default_threads() {
    if (const char *env = std::getenv("GHZNET_THREADS")) {
        try {
            std::size_t n = std::stoul(env);
            if (n > 0) return n;
        } catch (const std::exception &) {
        }
        std::cerr << "ignoring invalid GHZNET_THREADS=" << env << "\n";
    }
    return 1;
}

int finish(const Report &report, const std::string &out_path, std::chrono::steady_clock::time_point start) {
    if (out_path.empty()) {
        std::cout << format_report(report);
    } else {
        emit_report(report, out_path);
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "wall_clock_seconds " << format_real(secs) << "\n";
    if (!report.error.empty()) std::cerr << "error: " << report.error << "\n";
    return report.exit_code();
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Entanglement-assisted network coding and graph-state recovery simulator", "ghznet"};
    app.set_version_flag("--version", std::string(library_version()));
    app.require_subcommand(1);

    std::string scenario_path, out_path;
    std::optional<std::uint64_t> seed;
    std::size_t threads = default_threads();

    auto *run = app.add_subcommand("run", "Run a scenario file and write its report");
    run->add_option("scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_path, "Report path (default: stdout)");
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--threads", threads, "Worker threads (default: $GHZNET_THREADS or 1)")
        ->check(CLI::PositiveNumber);

    std::uint64_t table_seed = 1;
    std::size_t trials = 10;
    auto *table = app.add_subcommand("verify-table1", "Check every outcome/correction row on random inputs");
    table->add_option("--seed", table_seed, "Seed for the random inputs");
    table->add_option("--trials", trials, "Random inputs per row")->check(CLI::PositiveNumber);

    std::size_t n = 3;
    std::string chirality = "cw";
    std::uint64_t enum_seed = 1;
    auto *enumerate = app.add_subcommand("enumerate", "Enumerate every outcome branch of one protocol round");
    enumerate->add_option("--n", n, "Terminal count")->required()->check(CLI::IsMember({3, 4}));
    enumerate->add_option("--chirality", chirality, "cw or ccw")->check(CLI::IsMember({"cw", "ccw"}));
    enumerate->add_option("--seed", enum_seed, "Seed for the random inputs");
    enumerate->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    enumerate->add_option("--out", out_path, "Report path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    auto start = std::chrono::steady_clock::now();
    try {
        if (*run) {
            Scenario s = load_scenario(scenario_path);
            return finish(run_scenario(s, {seed, threads}), out_path, start);
        }
        if (*table) {
            return finish(verify_correction_table(table_seed, trials), "", start);
        }
        Scenario s;
        s.name = "enumerate";
        s.kind = ScenarioKind::kButterfly;
        s.n = n;
        s.seed = enum_seed;
        s.chirality = parse_chirality(chirality);
        return finish(run_scenario(s, {std::nullopt, threads}), out_path, start);
    } catch (const ScenarioError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
