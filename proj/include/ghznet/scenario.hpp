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

#ifndef GHZNET_SCENARIO_HPP
#define GHZNET_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ghznet/butterfly.hpp"
#include "ghznet/coding.hpp"
#include "ghznet/recovery.hpp"

namespace ghznet {

std::string_view library_version();

/// Fixed-point text for reals in reports: twelve digits after the point.
std::string format_real(double v);

enum ExitCode : int {
    kExitPass = 0,
    kExitVerdictFailure = 1,
    kExitUsage = 2,
    kExitInternal = 3,
};

/// Malformed or inconsistent scenario input.
class ScenarioError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class ScenarioKind { kButterfly, kRecovery, kBound, kBaseline };
std::string_view scenario_kind_name(ScenarioKind k);

enum class EnumerationMode { kSample, kExhaustive };

struct Scenario {
    std::string name;
    ScenarioKind kind = ScenarioKind::kButterfly;
    std::uint64_t seed = 0;

    // butterfly, baseline
    std::size_t n = 3;
    Chirality chirality = Chirality::kClockwise;
    /// Empty means draw n random inputs from the seed.
    std::vector<InputAmplitudes> inputs;
    EnumerationMode mode = EnumerationMode::kExhaustive;
    std::size_t samples = 64;
    bool dump_transcripts = false;

    // recovery
    std::string topology_path;
    std::optional<NetworkTopology> topology;
    NodeSet failures;
    DetectorModel detector;
    InputAmplitudes phi{Complex{0.70710678118654752, 0}, Complex{0.70710678118654752, 0}};
    FlankScope flank_scope = FlankScope::kAnyNeighbor;

    // bound
    std::size_t d = 3;
    std::vector<double> fidelities;

    /// Expected recovery outcome or bound result; when set, the run's verdict compares to it.
    std::string expect;
};

/// One `[name]` section of `key = value` lines; `#` starts a comment. Relative topology paths
/// resolve against `base_dir`.
Scenario parse_scenario(std::istream &in, const std::string &base_dir = ".");
Scenario load_scenario(const std::string &path);

struct Verdict {
    std::string name;
    bool pass = false;
};

struct Report {
    std::vector<std::pair<std::string, std::string>> scenario;
    std::vector<std::string> results;
    std::vector<Verdict> verdicts;
    /// Set when the run aborted with a module error.
    std::string error;

    bool all_pass() const;
    int exit_code() const;
};

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::size_t threads = 1;
};

Report run_scenario(const Scenario &scenario, const RunOptions &options = {});

/// Checks every row of the Bell/X outcome correction table on `trials` random inputs.
Report verify_correction_table(std::uint64_t seed, std::size_t trials = 10);

std::string format_report(const Report &report);
void emit_report(const Report &report, const std::string &path);

}  // namespace ghznet

#endif
