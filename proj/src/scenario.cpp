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

#include "ghznet/scenario.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "ghznet/analysis.hpp"

#ifndef GHZNET_VERSION
#define GHZNET_VERSION "0.0.0"
#endif

namespace ghznet {

std::string_view library_version() {
    return GHZNET_VERSION;
}

std::string format_real(double v) {
    if (v == 0.0) v = 0.0;  // no "-0.000..."
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    return buf;
}

std::string_view scenario_kind_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::kButterfly:
            return "butterfly";
        case ScenarioKind::kRecovery:
            return "recovery";
        case ScenarioKind::kBound:
            return "bound";
        case ScenarioKind::kBaseline:
            return "baseline";
    }
    return "?";
}

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string &s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

template <typename T>
T parse_number(const std::string &key, const std::string &text) {
    T v{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ScenarioError("key '" + key + "': cannot parse '" + text + "'");
    }
    return v;
}

const std::map<std::string, std::set<std::string>> &allowed_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"butterfly", {"n", "chirality", "inputs", "mode", "samples", "dump_transcripts"}},
        {"recovery",
         {"topology", "failures", "false_negative_rate", "false_positive_rate", "phi", "flank_scope", "expect"}},
        {"bound", {"d", "fidelities", "expect"}},
        {"baseline", {"n", "chirality"}},
    };
    return keys;
}

InputAmplitudes parse_amplitudes(const std::string &key, const std::string &text) {
    auto w = split_ws(text);
    if (w.size() != 4) {
        throw ScenarioError("key '" + key + "': expected 'alpha_re alpha_im beta_re beta_im', got '" + text + "'");
    }
    Complex a{parse_number<double>(key, w[0]), parse_number<double>(key, w[1])};
    Complex b{parse_number<double>(key, w[2]), parse_number<double>(key, w[3])};
    double norm = std::sqrt(std::norm(a) + std::norm(b));
    if (!(norm > 0.0)) {
        throw ScenarioError("key '" + key + "': amplitudes vanish");
    }
    return {a / norm, b / norm};
}

bool parse_bool(const std::string &key, const std::string &text) {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw ScenarioError("key '" + key + "': expected true or false, got '" + text + "'");
}

}  // namespace

Scenario parse_scenario(std::istream &in, const std::string &base_dir) {
    std::vector<std::pair<std::string, std::string>> entries;
    std::map<std::string, std::size_t> key_line;
    std::optional<std::string> section;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string &what) {
        throw ScenarioError("line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line)) {
        line_no++;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[') {
            if (t.back() != ']' || t.size() < 3) fail("malformed section header");
            if (section) fail("only one scenario section per file");
            section = trim(std::string_view(t).substr(1, t.size() - 2));
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        if (!section) fail("key before the scenario section header");
        std::string key = trim(std::string_view(t).substr(0, eq));
        std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key.empty()) fail("empty key");
        if (key_line.contains(key)) fail("duplicate key '" + key + "'");
        key_line[key] = line_no;
        entries.emplace_back(key, value);
    }
    if (!section) {
        throw ScenarioError("no scenario section found");
    }

    Scenario s;
    s.name = *section;
    std::map<std::string, std::string> kv(entries.begin(), entries.end());
    if (!kv.contains("kind")) throw ScenarioError("missing required key 'kind'");
    if (!kv.contains("seed")) throw ScenarioError("missing required key 'seed'");
    const std::string kind = kv["kind"];
    auto allowed = allowed_keys().find(kind);
    if (allowed == allowed_keys().end()) {
        throw ScenarioError("line " + std::to_string(key_line["kind"]) + ": unknown kind '" + kind + "'");
    }
    std::vector<std::string> offending;
    for (const auto &[key, value] : entries) {
        if (key == "kind" || key == "seed") continue;
        bool known = std::any_of(allowed_keys().begin(), allowed_keys().end(),
                                 [&](const auto &p) { return p.second.contains(key); });
        if (!known) {
            throw ScenarioError("line " + std::to_string(key_line[key]) + ": unknown key '" + key + "'");
        }
        if (!allowed->second.contains(key)) offending.push_back(key);
    }
    if (!offending.empty()) {
        std::string list;
        for (const auto &k : offending) list += (list.empty() ? "" : ", ") + k;
        throw ScenarioError("keys not valid for kind '" + kind + "': " + list);
    }

    s.kind = kind == "butterfly"  ? ScenarioKind::kButterfly
             : kind == "recovery" ? ScenarioKind::kRecovery
             : kind == "bound"    ? ScenarioKind::kBound
                                  : ScenarioKind::kBaseline;
    s.seed = parse_number<std::uint64_t>("seed", kv["seed"]);
    if (kv.contains("n")) s.n = parse_number<std::size_t>("n", kv["n"]);
    if (kv.contains("chirality")) {
        try {
            s.chirality = parse_chirality(kv["chirality"]);
        } catch (const std::invalid_argument &e) {
            throw ScenarioError("key 'chirality': " + std::string(e.what()));
        }
    }
    if (kv.contains("mode")) {
        if (kv["mode"] == "exhaustive") {
            s.mode = EnumerationMode::kExhaustive;
        } else if (kv["mode"] == "sample") {
            s.mode = EnumerationMode::kSample;
        } else {
            throw ScenarioError("key 'mode': expected sample or exhaustive");
        }
    }
    if (kv.contains("samples")) s.samples = parse_number<std::size_t>("samples", kv["samples"]);
    if (kv.contains("dump_transcripts")) s.dump_transcripts = parse_bool("dump_transcripts", kv["dump_transcripts"]);
    if (kv.contains("inputs")) {
        std::string text = kv["inputs"];
        std::size_t start = 0;
        while (start <= text.size()) {
            auto semi = text.find(';', start);
            std::string part = trim(std::string_view(text).substr(start, semi - start));
            s.inputs.push_back(parse_amplitudes("inputs", part));
            if (semi == std::string::npos) break;
            start = semi + 1;
        }
    }
    if (s.kind == ScenarioKind::kButterfly || s.kind == ScenarioKind::kBaseline) {
        if (s.n < 3) throw ScenarioError("key 'n': at least 3 terminals are required");
        if (!s.inputs.empty() && s.inputs.size() != s.n) {
            throw ScenarioError("key 'inputs': expected " + std::to_string(s.n) + " entries");
        }
        if (s.kind == ScenarioKind::kButterfly && s.mode == EnumerationMode::kExhaustive && s.n > 4) {
            throw ScenarioError("key 'n': exhaustive enumeration supports n <= 4; use mode = sample");
        }
        if (s.kind == ScenarioKind::kBaseline && s.n > 4) {
            throw ScenarioError("key 'n': baseline comparison supports n <= 4");
        }
        if (s.n > 7) throw ScenarioError("key 'n': at most 7 terminals fit the simulator");
    }

    if (kv.contains("topology")) {
        std::filesystem::path p(kv["topology"]);
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        s.topology_path = kv["topology"];
        try {
            s.topology = NetworkTopology::load(p.string());
        } catch (const std::invalid_argument &e) {
            throw ScenarioError("key 'topology': " + std::string(e.what()));
        }
    }
    if (kv.contains("failures")) {
        for (const auto &w : split_ws(kv["failures"])) s.failures.insert(parse_number<NodeId>("failures", w));
    }
    if (kv.contains("false_negative_rate")) {
        s.detector.false_negative_rate = parse_number<double>("false_negative_rate", kv["false_negative_rate"]);
    }
    if (kv.contains("false_positive_rate")) {
        s.detector.false_positive_rate = parse_number<double>("false_positive_rate", kv["false_positive_rate"]);
    }
    if (kv.contains("phi")) s.phi = parse_amplitudes("phi", kv["phi"]);
    if (kv.contains("flank_scope")) {
        if (kv["flank_scope"] == "any_neighbor") {
            s.flank_scope = FlankScope::kAnyNeighbor;
        } else if (kv["flank_scope"] == "block_interior") {
            s.flank_scope = FlankScope::kBlockInterior;
        } else {
            throw ScenarioError("key 'flank_scope': expected any_neighbor or block_interior");
        }
    }
    if (kv.contains("expect")) s.expect = kv["expect"];
    if (s.kind == ScenarioKind::kRecovery) {
        if (!s.topology) throw ScenarioError("missing required key 'topology'");
        try {
            s.detector.validate();
        } catch (const std::invalid_argument &e) {
            throw ScenarioError(e.what());
        }
        for (NodeId f : s.failures) {
            if (!s.topology->has_node(f)) {
                throw ScenarioError("key 'failures': node " + std::to_string(f) + " is not in the topology");
            }
        }
        static const std::set<std::string> outcomes{"unchanged", "recovered", "partial", "unrecoverable"};
        if (!s.expect.empty() && !outcomes.contains(s.expect)) {
            throw ScenarioError("key 'expect': unknown recovery outcome '" + s.expect + "'");
        }
    }

    if (kv.contains("d")) s.d = parse_number<std::size_t>("d", kv["d"]);
    if (kv.contains("fidelities")) {
        for (const auto &w : split_ws(kv["fidelities"])) s.fidelities.push_back(parse_number<double>("fidelities", w));
    }
    if (s.kind == ScenarioKind::kBound) {
        if (s.d == 0) throw ScenarioError("key 'd': must be positive");
        if (s.fidelities.empty()) {
            if (s.d < 3 || s.d > 4) {
                throw ScenarioError("key 'd': without 'fidelities' the protocol is simulated and d must be 3 or 4");
            }
        } else if (s.fidelities.size() != s.d) {
            throw ScenarioError("key 'fidelities': expected " + std::to_string(s.d) + " values");
        }
        if (!s.expect.empty() && s.expect != "satisfied" && s.expect != "violated") {
            throw ScenarioError("key 'expect': expected satisfied or violated");
        }
    }
    return s;
}

Scenario load_scenario(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError("cannot open scenario file " + path);
    }
    auto dir = std::filesystem::path(path).parent_path();
    return parse_scenario(in, dir.empty() ? "." : dir.string());
}

bool Report::all_pass() const {
    return error.empty() && std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict &v) { return v.pass; });
}

int Report::exit_code() const {
    if (!error.empty()) return kExitInternal;
    return all_pass() ? kExitPass : kExitVerdictFailure;
}

namespace {

std::string amplitudes_text(const InputAmplitudes &a) {
    return format_real(a.alpha.real()) + " " + format_real(a.alpha.imag()) + " " + format_real(a.beta.real()) + " " +
           format_real(a.beta.imag());
}

std::string join_nodes(const NodeSet &s) {
    std::string out;
    for (NodeId v : s) out += (out.empty() ? "" : " ") + std::to_string(v);
    return out.empty() ? "-" : out;
}

void echo_scenario(const Scenario &s, std::uint64_t seed, Report &r) {
    auto &e = r.scenario;
    e.emplace_back("name", s.name);
    e.emplace_back("kind", std::string(scenario_kind_name(s.kind)));
    e.emplace_back("seed", std::to_string(seed));
    switch (s.kind) {
        case ScenarioKind::kButterfly:
            e.emplace_back("n", std::to_string(s.n));
            e.emplace_back("chirality", std::string(chirality_name(s.chirality)));
            e.emplace_back("mode", s.mode == EnumerationMode::kExhaustive ? "exhaustive" : "sample");
            if (s.mode == EnumerationMode::kSample) e.emplace_back("samples", std::to_string(s.samples));
            break;
        case ScenarioKind::kRecovery:
            e.emplace_back("topology", s.topology_path);
            e.emplace_back("failures", join_nodes(s.failures));
            e.emplace_back("false_negative_rate", format_real(s.detector.false_negative_rate));
            e.emplace_back("false_positive_rate", format_real(s.detector.false_positive_rate));
            e.emplace_back("phi", amplitudes_text(s.phi));
            e.emplace_back("flank_scope", s.flank_scope == FlankScope::kAnyNeighbor ? "any_neighbor" : "block_interior");
            break;
        case ScenarioKind::kBound:
            e.emplace_back("d", std::to_string(s.d));
            break;
        case ScenarioKind::kBaseline:
            e.emplace_back("n", std::to_string(s.n));
            e.emplace_back("chirality", std::string(chirality_name(s.chirality)));
            break;
    }
    if (!s.expect.empty()) e.emplace_back("expect", s.expect);
}

void run_butterfly(const Scenario &s, std::uint64_t seed, const RunOptions &opt, Report &r) {
    RandomSource rng(seed);
    std::vector<InputAmplitudes> inputs = s.inputs.empty() ? random_inputs(s.n, rng) : s.inputs;
    ButterflyInstance inst = build_instance(s.n, inputs);
    RoutingConfig routing(s.n, s.chirality);
    for (std::size_t j = 0; j < s.n; j++) {
        r.results.push_back("input " + std::to_string(j + 1) + " " + amplitudes_text(inputs[j]));
    }
    for (TerminalId t = 1; t <= s.n; t++) {
        r.results.push_back("route terminal " + std::to_string(t) + " receives_from " +
                            std::to_string(routing.held_copy(t)));
    }

    std::uint64_t branches = 0, possible = 0;
    double total_prob = 0.0;
    std::vector<double> min_fid(s.n, 1.0);
    std::size_t channels = 0;
    std::set<std::size_t> payloads;
    bool channel_ok = true;
    // Probability-weighted pre-correction density matrices, for the no-signaling check.
    std::vector<std::array<Complex, 4>> avg(s.n, std::array<Complex, 4>{});
    std::vector<std::string> dumps;
    auto visit = [&](const ProtocolTranscript &tr) {
        branches++;
        if (!tr.possible()) return;
        possible++;
        double w = s.mode == EnumerationMode::kExhaustive ? tr.probability : 1.0;
        total_prob += tr.probability;
        for (std::size_t t = 0; t < s.n; t++) min_fid[t] = std::min(min_fid[t], tr.final_fidelities[t]);
        channels = tr.messages.size();
        channel_ok = channel_ok && channels == s.n + 1;
        for (const auto &m : tr.messages) payloads.insert(m.payload_bits());
        for (std::size_t t = 0; t < s.n; t++) {
            const auto &q = tr.received[t];
            for (std::size_t i = 0; i < 2; i++)
                for (std::size_t j = 0; j < 2; j++) avg[t][i * 2 + j] += w * q[i] * std::conj(q[j]);
        }
        if (s.dump_transcripts) dumps.push_back(format_transcript(tr));
    };
    if (s.mode == EnumerationMode::kExhaustive) {
        EnumerationOptions eo;
        eo.threads = opt.threads;
        for_each_branch(inst, routing, visit, eo);
    } else {
        for (std::size_t k = 0; k < s.samples; k++) visit(run_round(inst, routing, rng));
    }

    r.results.push_back("branches " + std::to_string(branches));
    r.results.push_back("possible_branches " + std::to_string(possible));
    if (s.mode == EnumerationMode::kExhaustive) r.results.push_back("total_probability " + format_real(total_prob));
    r.results.push_back("channels " + std::to_string(channels));
    for (std::size_t b : payloads) r.results.push_back("payload_bits " + std::to_string(b));
    double worst = 1.0;
    for (std::size_t t = 0; t < s.n; t++) {
        r.results.push_back("min_fidelity " + std::to_string(t + 1) + " " + format_real(min_fid[t]));
        worst = std::min(worst, min_fid[t]);
    }
    r.verdicts.push_back({"perfect_transmission", worst >= 1.0 - kProtocolTol});
    r.verdicts.push_back({"channel_count", channel_ok && channels == s.n + 1});
    if (s.mode == EnumerationMode::kExhaustive) {
        r.verdicts.push_back({"probability_sum", std::abs(total_prob - 1.0) <= kProtocolTol});
        double dev = 0.0;
        for (const auto &m : avg) {
            dev = std::max({dev, std::abs(m[0] - 0.5), std::abs(m[1]), std::abs(m[2]), std::abs(m[3] - 0.5)});
        }
        r.results.push_back("no_signaling_deviation " + format_real(dev));
        r.verdicts.push_back({"no_signaling", dev <= kProtocolTol});
    }
    for (auto &d : dumps) {
        std::istringstream lines(d);
        std::string l;
        while (std::getline(lines, l)) r.results.push_back(l);
    }
}

void run_recovery(const Scenario &s, std::uint64_t seed, Report &r) {
    RandomSource rng(seed);
    CriticalityRule rule{s.flank_scope};
    GraphStateNetwork net = prepare_graph_network(*s.topology, s.phi);
    for (const auto &w : net.warnings) r.results.push_back("warning " + w);
    r.results.push_back("nodes " + std::to_string(s.topology->nodes().size()));
    r.results.push_back("edges " + std::to_string(s.topology->edges().size()));
    r.results.push_back("blocks " + std::to_string(s.topology->blocks().size()));
    bool prep_ok = all_stabilizers_hold(net);
    r.verdicts.push_back({"prepared_stabilizers", prep_ok});
    r.results.push_back(std::string("criticality ") +
                        (criticality_check(*s.topology, s.failures, rule) == Criticality::kCritical ? "critical"
                                                                                                      : "recoverable"));

    RecoveryResult res = recover(std::move(net), s.failures, s.detector, rng, rule);
    const auto &rep = res.report;
    r.results.push_back("detected " + join_nodes(rep.detected));
    r.results.push_back("undetected " + join_nodes(rep.undetected));
    std::string crit;
    for (auto b : rep.critical_blocks) crit += (crit.empty() ? "" : " ") + std::to_string(b);
    r.results.push_back("critical_blocks " + (crit.empty() ? std::string("-") : crit));
    for (auto [v, b] : rep.substituted) {
        r.results.push_back("substituted " + std::to_string(v) + " block " + std::to_string(b));
    }
    r.results.push_back("unrepaired " + join_nodes(rep.unrepaired));
    r.results.push_back(std::string("data_loss ") + (rep.data_loss ? "yes" : "no"));
    for (auto [v, st] : res.network.status) {
        r.results.push_back("status " + std::to_string(v) + " " + std::string(node_status_name(st)));
    }
    for (const auto &c : rep.stabilizers) {
        r.results.push_back("stabilizer " + std::to_string(c.node) + " " + format_real(c.expectation));
    }
    std::string outcome(recovery_outcome_name(rep.outcome));
    r.results.push_back("outcome " + outcome);

    r.verdicts.push_back({"broadcast_consistent", rep.broadcast_consistent});
    r.verdicts.push_back({"final_stabilizers", rep.stabilizers_hold});
    r.verdicts.push_back({"untouched_blocks", rep.untouched_blocks_hold});
    bool outcome_ok = s.expect.empty()
                          ? (rep.outcome == RecoveryOutcome::kRecovered || rep.outcome == RecoveryOutcome::kUnchanged)
                          : outcome == s.expect;
    r.verdicts.push_back({"outcome", outcome_ok});
}

void push_bound(const std::string &label, const BoundReport &b, Report &r) {
    for (std::size_t i = 0; i < b.fidelities.size(); i++) {
        r.results.push_back(label + "_fidelity " + std::to_string(i + 1) + " " + format_real(b.fidelities[i]));
    }
    r.results.push_back(label + "_sum " + format_real(b.sum));
    r.results.push_back(label + "_satisfied " + (b.satisfied ? std::string("yes") : std::string("no")));
}

void run_bound(const Scenario &s, const RunOptions &opt, Report &r) {
    r.results.push_back("threshold " + format_real(bound_threshold(s.d)));
    if (!s.fidelities.empty()) {
        BoundReport b = check_bound(s.fidelities, s.d);
        push_bound("given", b, r);
        if (!s.expect.empty()) {
            r.verdicts.push_back({"expectation", b.satisfied == (s.expect == "satisfied")});
        } else {
            r.verdicts.push_back({"bound_satisfied", b.satisfied});
        }
        return;
    }
    EnumerationOptions eo;
    eo.threads = opt.threads;
    BoundReport base = baseline_no_entanglement(s.d);
    BoundReport ent = entangled_protocol_bound(s.d, Chirality::kClockwise, eo);
    push_bound("baseline", base, r);
    push_bound("entangled", ent, r);
    r.verdicts.push_back({"baseline_satisfies_bound", base.satisfied});
    r.verdicts.push_back({"entangled_violates_bound", !ent.satisfied});
}

void run_baseline(const Scenario &s, const RunOptions &opt, Report &r) {
    EnumerationOptions eo;
    eo.threads = opt.threads;
    BoundReport base = baseline_no_entanglement(s.n, s.chirality);
    BoundReport ent = entangled_protocol_bound(s.n, s.chirality, eo);
    r.results.push_back("threshold " + format_real(base.threshold));
    push_bound("baseline", base, r);
    push_bound("entangled", ent, r);
    r.verdicts.push_back({"baseline_satisfies_bound", base.satisfied});
    r.verdicts.push_back({"entangled_violates_bound", !ent.satisfied});
}

}  // namespace

Report run_scenario(const Scenario &scenario, const RunOptions &options) {
    Report r;
    std::uint64_t seed = options.seed.value_or(scenario.seed);
    echo_scenario(scenario, seed, r);
    try {
        switch (scenario.kind) {
            case ScenarioKind::kButterfly:
                run_butterfly(scenario, seed, options, r);
                break;
            case ScenarioKind::kRecovery:
                run_recovery(scenario, seed, r);
                break;
            case ScenarioKind::kBound:
                run_bound(scenario, options, r);
                break;
            case ScenarioKind::kBaseline:
                run_baseline(scenario, options, r);
                break;
        }
    } catch (const std::exception &e) {
        r.error = e.what();
    }
    return r;
}

Report verify_correction_table(std::uint64_t seed, std::size_t trials) {
    struct Row {
        BellOutcome a;
        bool swapped;
        double sign;
        Pauli u[2];
    };
    const Row rows[] = {
        {{0, 0}, false, 1.0, {Pauli::I, Pauli::Z}},
        {{0, 1}, false, -1.0, {Pauli::Z, Pauli::I}},
        {{1, 0}, true, 1.0, {Pauli::X, Pauli::XZ}},
        {{1, 1}, true, -1.0, {Pauli::XZ, Pauli::X}},
    };
    Report r;
    r.scenario.emplace_back("name", "correction_table");
    r.scenario.emplace_back("seed", std::to_string(seed));
    r.scenario.emplace_back("trials", std::to_string(trials));
    RandomSource rng(seed);
    auto inputs = random_inputs(trials, rng);
    for (const Row &row : rows) {
        for (Bit b : {Bit{0}, Bit{1}}) {
            double worst_residual = 1.0, worst_restore = 1.0;
            bool frame_ok = outcome_to_frame(row.a, b).as_pauli() == row.u[b];
            for (const auto &in : inputs) {
                StateVector psi = prepare_arbitrary(in.alpha, in.beta);
                Projection p = project_bell(tensor(psi, prepare_ghz(3)), 0, 1, row.a);
                // alpha sits on |00> unless the row swaps it onto |11>; the signed beta takes the other end.
                std::vector<Complex> expect(4);
                expect[row.swapped ? 3 : 0] = in.alpha;
                expect[row.swapped ? 0 : 3] = row.sign * in.beta;
                worst_residual =
                    std::min(worst_residual, overlap_fidelity(p.state, StateVector::from_amplitudes(expect)));
                Projection x = project_x(p.state, 0, b);
                StateVector fixed = x.state;
                if (row.u[b] == Pauli::XZ) {
                    fixed = apply_pauli(apply_pauli(std::move(fixed), Pauli::Z, 0), Pauli::X, 0);
                } else {
                    fixed = apply_pauli(std::move(fixed), row.u[b], 0);
                }
                worst_restore = std::min(worst_restore, overlap_fidelity(fixed, psi));
            }
            std::string label = std::to_string(row.a.flip) + std::to_string(row.a.sign) + "_" + std::to_string(b);
            r.results.push_back("row " + label + " correction " + outcome_to_frame(row.a, b).name() +
                                " residual_fidelity " + format_real(worst_residual) + " restored_fidelity " +
                                format_real(worst_restore));
            r.verdicts.push_back({"row_" + label, frame_ok && worst_residual >= 1.0 - kProtocolTol &&
                                                      worst_restore >= 1.0 - kProtocolTol});
        }
    }
    return r;
}

std::string format_report(const Report &report) {
    std::ostringstream out;
    out << "GHZNET REPORT version " << library_version() << "\n";
    out << "SCENARIO\n";
    for (const auto &[k, v] : report.scenario) out << k << " " << v << "\n";
    out << "RESULTS\n";
    for (const auto &l : report.results) out << l << "\n";
    if (!report.error.empty()) out << "error " << report.error << "\n";
    out << "VERDICTS\n";
    for (const auto &v : report.verdicts) out << "VERDICT " << v.name << (v.pass ? " PASS" : " FAIL") << "\n";
    if (!report.error.empty()) out << "VERDICT run FAIL\n";
    out << "END\n";
    return out.str();
}

void emit_report(const Report &report, const std::string &path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open report file " + path);
    }
    out << format_report(report);
    if (!out.flush()) {
        throw std::runtime_error("failed writing report file " + path);
    }
}

}  // namespace ghznet
