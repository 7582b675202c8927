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

#include "ghznet/butterfly.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <thread>

namespace ghznet {

namespace {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12f", v);
    return buf;
}

/// Supplies measurement outcomes, either forced from a branch index or sampled.
class OutcomeFeed {
   public:
    static OutcomeFeed forced(std::uint64_t index, std::size_t bits) {
        OutcomeFeed f;
        f.index_ = index;
        f.remaining_ = bits;
        return f;
    }
    static OutcomeFeed sampled(RandomSource &rng) {
        OutcomeFeed f;
        f.rng_ = &rng;
        return f;
    }

    std::pair<BellOutcome, StateVector> bell(const StateVector &s, std::size_t q1, std::size_t q2) {
        static constexpr std::array<BellOutcome, 4> kAll{
            BellOutcome{0, 0}, BellOutcome{0, 1}, BellOutcome{1, 0}, BellOutcome{1, 1}};
        if (rng_ == nullptr) {
            BellOutcome o{next_bit(), next_bit()};
            return {o, take(project_bell(s, q1, q2, o))};
        }
        std::array<Projection, 4> p;
        for (std::size_t k = 0; k < 4; k++) {
            p[k] = project_bell(s, q1, q2, kAll[k]);
        }
        std::size_t k = pick(p);
        return {kAll[k], take(std::move(p[k]))};
    }

    std::pair<Bit, StateVector> x(const StateVector &s, std::size_t q) {
        if (rng_ == nullptr) {
            Bit o = next_bit();
            return {o, take(project_x(s, q, o))};
        }
        std::array<Projection, 2> p{project_x(s, q, 0), project_x(s, q, 1)};
        std::size_t k = pick(p);
        return {static_cast<Bit>(k), take(std::move(p[k]))};
    }

    double probability() const {
        return probability_;
    }
    std::uint64_t consumed_index() const {
        return consumed_;
    }

   private:
    Bit next_bit() {
        if (remaining_ == 0) {
            throw std::logic_error("branch index has too few outcome bits");
        }
        remaining_--;
        return static_cast<Bit>((index_ >> remaining_) & 1);
    }

    StateVector take(Projection p) {
        probability_ *= p.probability;
        return std::move(p.state);
    }

    template <std::size_t N>
    std::size_t pick(const std::array<Projection, N> &p) {
        double total = 0;
        for (const auto &b : p) {
            total += b.probability;
        }
        if (total <= 0.0) {
            throw std::logic_error("measurement branches carry no probability");
        }
        double u = rng_->uniform() * total;
        std::size_t chosen = N;
        for (std::size_t k = 0; k < N; k++) {
            if (!p[k].possible()) {
                continue;
            }
            chosen = k;
            if (u < p[k].probability) {
                break;
            }
            u -= p[k].probability;
        }
        consumed_ = (consumed_ << (N == 4 ? 2 : 1)) | chosen;
        return chosen;
    }

    RandomSource *rng_ = nullptr;
    std::uint64_t index_ = 0;
    std::size_t remaining_ = 0;
    std::uint64_t consumed_ = 0;
    double probability_ = 1.0;
};

/// A register of qubits with their physical labels.
struct LabeledRegister {
    StateVector state;
    std::vector<QubitLabel> labels;

    std::size_t position(const QubitLabel &label) const {
        auto it = std::find(labels.begin(), labels.end(), label);
        if (it == labels.end()) {
            throw std::logic_error("qubit " + label.name() + " not present in register");
        }
        return static_cast<std::size_t>(it - labels.begin());
    }

    std::string names() const {
        std::string out;
        for (const auto &l : labels) {
            out += out.empty() ? "" : ",";
            out += l.name();
        }
        return out.empty() ? "-" : out;
    }
};

std::vector<QubitLabel> copy_labels(std::size_t n, TerminalId copy) {
    std::vector<QubitLabel> labels{{copy, 0}};
    for (TerminalId t = 1; t <= n; t++) {
        labels.push_back({t, copy});
    }
    return labels;
}

/// Runs the measurement schedule (all Bell measurements in terminal order, then the X
/// measurements terminal by terminal) over registers addressed by label. `register_of(label)`
/// returns the register holding that qubit.
template <typename RegisterOf>
std::vector<OutcomeRecord> measure_schedule(std::size_t n, const RoutingConfig &routing, OutcomeFeed &feed,
                                            RegisterOf register_of, std::vector<std::string> &log) {
    std::vector<OutcomeRecord> records(n);
    for (TerminalId t = 1; t <= n; t++) {
        QubitLabel in{t, 0}, leg{t, t};
        LabeledRegister &reg = register_of(leg);
        std::size_t q1 = reg.position(in), q2 = reg.position(leg);
        auto [outcome, next] = feed.bell(reg.state, q1, q2);
        reg.state = std::move(next);
        std::erase(reg.labels, in);
        std::erase(reg.labels, leg);
        records[t - 1].terminal = t;
        records[t - 1].a = outcome;
        log.push_back("bell terminal " + std::to_string(t) + " removes " + in.name() + "@" + std::to_string(q1) + " " +
                      leg.name() + "@" + std::to_string(q2) + " -> " + reg.names());
    }
    for (TerminalId t = 1; t <= n; t++) {
        for (TerminalId c : routing.measured_copies(t)) {
            QubitLabel leg{t, c};
            LabeledRegister &reg = register_of(leg);
            std::size_t q = reg.position(leg);
            auto [outcome, next] = feed.x(reg.state, q);
            reg.state = std::move(next);
            std::erase(reg.labels, leg);
            records[t - 1].b.push_back(outcome);
            log.push_back("xmeas terminal " + std::to_string(t) + " removes " + leg.name() + "@" + std::to_string(q) +
                          " -> " + reg.names());
        }
    }
    return records;
}

void finish_classical(ProtocolTranscript &tr, const RoutingConfig &routing, const MessageTamper *tamper) {
    tr.messages = encode_all_channels(tr.outcomes);
    if (tamper != nullptr && *tamper) {
        (*tamper)(tr.messages);
    }
    tr.own_frames.resize(tr.n);
    tr.corrections.resize(tr.n);
    for (TerminalId t = 1; t <= tr.n; t++) {
        const OutcomeRecord &own = tr.outcomes[t - 1];
        tr.own_frames[t - 1] = outcome_to_frame(own.a, own.b_parity());
        tr.corrections[t - 1] = correction_for_terminal(t, own, tr.messages, routing);
    }
}

void check_instance(const ButterflyInstance &instance, const RoutingConfig &routing) {
    if (instance.n != routing.n()) {
        throw std::invalid_argument("routing is for a different terminal count than the instance");
    }
    if (instance.ghz_copies.size() != instance.n || instance.inputs.size() != instance.n) {
        throw std::invalid_argument("instance does not hold n inputs and n copies");
    }
    for (const auto &copy : instance.ghz_copies) {
        if (copy.num_qubits() != instance.n) {
            throw std::invalid_argument("every GHZ copy must have one leg per terminal");
        }
    }
}

ProtocolTranscript blank_transcript(const ButterflyInstance &instance, const RoutingConfig &routing) {
    ProtocolTranscript tr;
    tr.n = instance.n;
    tr.chirality = routing.chirality();
    tr.inputs = instance.input_amplitudes;
    return tr;
}

ProtocolTranscript run_factored(const ButterflyInstance &instance, const RoutingConfig &routing, OutcomeFeed feed) {
    check_instance(instance, routing);
    std::size_t n = instance.n;
    std::vector<LabeledRegister> copies;
    for (TerminalId c = 1; c <= n; c++) {
        copies.push_back({tensor(instance.inputs[c - 1], instance.ghz_copies[c - 1]), copy_labels(n, c)});
    }
    ProtocolTranscript tr = blank_transcript(instance, routing);
    tr.outcomes = measure_schedule(
        n, routing, feed, [&](const QubitLabel &l) -> LabeledRegister & { return copies[l.copy - 1]; },
        tr.relabel_log);
    tr.probability = feed.probability();
    tr.branch_index = feed.consumed_index();
    finish_classical(tr, routing, nullptr);
    for (TerminalId t = 1; t <= n; t++) {
        TerminalId h = routing.held_copy(t);
        StateVector held = copies[h - 1].state;
        tr.received.push_back(held);
        StateVector out = apply_frame(apply_frame(held, tr.own_frames[t - 1], 0), tr.corrections[t - 1], 0);
        tr.final_fidelities.push_back(tr.possible() ? overlap_fidelity(out, instance.inputs[h - 1]) : 0.0);
        tr.final_states.push_back(std::move(out));
    }
    return tr;
}

/// Per-copy outcome table: for each local pattern (flip, sign, then X bits of the measuring
/// terminals in ascending order), the probability and the surviving register.
struct CopyTable {
    std::vector<std::pair<TerminalId, std::size_t>> measurers;
    std::vector<Projection> patterns;
    std::size_t held_position = 0;
};

CopyTable build_copy_table(const StateVector &input_register, std::size_t input_position, const StateVector &ghz,
                           TerminalId copy, const RoutingConfig &routing) {
    std::size_t n = routing.n();
    std::size_t ext = input_register.num_qubits();
    CopyTable table;
    table.measurers = routing.x_measurers_of(copy);
    std::size_t bits = 2 + table.measurers.size();
    StateVector joint = tensor(input_register, ghz);
    for (std::uint64_t pattern = 0; pattern < (std::uint64_t{1} << bits); pattern++) {
        auto bit = [&](std::size_t k) { return static_cast<Bit>((pattern >> (bits - 1 - k)) & 1); };
        std::vector<QubitLabel> labels(ext, QubitLabel{0, 0});
        labels[input_position] = {copy, 0};
        for (TerminalId t = 1; t <= n; t++) {
            labels.push_back({t, copy});
        }
        LabeledRegister reg{joint, labels};
        double prob = 1.0;
        auto apply = [&](Projection p) {
            prob *= p.probability;
            reg.state = std::move(p.state);
        };
        QubitLabel in{copy, 0}, leg{copy, copy};
        apply(project_bell(reg.state, reg.position(in), reg.position(leg), BellOutcome{bit(0), bit(1)}));
        std::erase(reg.labels, in);
        std::erase(reg.labels, leg);
        for (std::size_t k = 0; k < table.measurers.size(); k++) {
            QubitLabel x_leg{table.measurers[k].first, copy};
            apply(project_x(reg.state, reg.position(x_leg), bit(2 + k)));
            std::erase(reg.labels, x_leg);
        }
        table.held_position = reg.position({routing.receiver_of(copy), copy});
        table.patterns.push_back({prob, std::move(reg.state)});
    }
    return table;
}

/// Decomposes a joint branch index into per-terminal records and per-copy local patterns.
struct BranchLayout {
    std::size_t n;
    std::size_t total_bits;
    std::vector<std::size_t> x_offset;  // first X bit of terminal t (1-based index)

    explicit BranchLayout(const RoutingConfig &routing) : n(routing.n()), total_bits(0), x_offset(routing.n() + 1) {
        std::size_t offset = 2 * n;
        for (TerminalId t = 1; t <= n; t++) {
            x_offset[t] = offset;
            offset += routing.measured_copies(t).size();
        }
        total_bits = offset;
    }

    Bit bit(std::uint64_t index, std::size_t k) const {
        return static_cast<Bit>((index >> (total_bits - 1 - k)) & 1);
    }

    std::vector<OutcomeRecord> records(std::uint64_t index, const RoutingConfig &routing) const {
        std::vector<OutcomeRecord> out(n);
        for (TerminalId t = 1; t <= n; t++) {
            OutcomeRecord &r = out[t - 1];
            r.terminal = t;
            r.a = {bit(index, 2 * (t - 1)), bit(index, 2 * (t - 1) + 1)};
            std::size_t width = routing.measured_copies(t).size();
            for (std::size_t k = 0; k < width; k++) {
                r.b.push_back(bit(index, x_offset[t] + k));
            }
        }
        return out;
    }

    std::uint64_t local_pattern(const std::vector<OutcomeRecord> &records, TerminalId copy,
                                const CopyTable &table) const {
        const OutcomeRecord &sender = records[copy - 1];
        std::uint64_t p = (std::uint64_t{sender.a.flip} << 1) | sender.a.sign;
        for (auto [m, slot] : table.measurers) {
            p = (p << 1) | records[m - 1].b[slot];
        }
        return p;
    }
};

std::vector<CopyTable> build_tables(const ButterflyInstance &instance, const RoutingConfig &routing) {
    std::vector<CopyTable> tables;
    for (TerminalId c = 1; c <= instance.n; c++) {
        tables.push_back(build_copy_table(instance.inputs[c - 1], 0, instance.ghz_copies[c - 1], c, routing));
    }
    return tables;
}

ProtocolTranscript assemble_branch(const ButterflyInstance &instance, const RoutingConfig &routing,
                                   const BranchLayout &layout, const std::vector<CopyTable> &tables,
                                   const std::vector<std::string> &log, const MessageTamper *tamper,
                                   std::uint64_t index) {
    ProtocolTranscript tr = blank_transcript(instance, routing);
    tr.branch_index = index;
    tr.outcomes = layout.records(index, routing);
    tr.relabel_log = log;
    std::vector<std::uint64_t> patterns(instance.n);
    for (TerminalId c = 1; c <= instance.n; c++) {
        patterns[c - 1] = layout.local_pattern(tr.outcomes, c, tables[c - 1]);
        tr.probability *= tables[c - 1].patterns[patterns[c - 1]].probability;
    }
    finish_classical(tr, routing, tamper);
    for (TerminalId t = 1; t <= instance.n; t++) {
        TerminalId h = routing.held_copy(t);
        const StateVector &held = tables[h - 1].patterns[patterns[h - 1]].state;
        tr.received.push_back(held);
        StateVector out = apply_frame(apply_frame(held, tr.own_frames[t - 1], 0), tr.corrections[t - 1], 0);
        tr.final_fidelities.push_back(tr.possible() ? overlap_fidelity(out, instance.inputs[h - 1]) : 0.0);
        tr.final_states.push_back(std::move(out));
    }
    return tr;
}

std::uint64_t checked_branch_count(std::size_t n, const EnumerationOptions &options) {
    std::size_t bits = outcome_bit_count(n);
    if (bits >= 63 || (std::uint64_t{1} << bits) > options.max_branches) {
        std::uint64_t requested = bits >= 63 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits);
        throw EnumerationBudgetExceeded(requested, options.max_branches);
    }
    return std::uint64_t{1} << bits;
}

}  // namespace

std::string QubitLabel::name() const {
    if (terminal == 0) {
        return "ext";
    }
    if (copy == 0) {
        return "in" + std::to_string(terminal);
    }
    return std::to_string(terminal) + "." + std::to_string(copy);
}

std::vector<InputAmplitudes> random_inputs(std::size_t count, RandomSource &rng) {
    std::vector<InputAmplitudes> out;
    for (std::size_t i = 0; i < count; i++) {
        // Uniform on the Bloch sphere.
        double cos_theta = 2.0 * rng.uniform() - 1.0;
        double phi = 2.0 * std::numbers::pi * rng.uniform();
        double c = std::sqrt((1.0 + cos_theta) / 2.0);
        double s = std::sqrt((1.0 - cos_theta) / 2.0);
        out.push_back({Complex{c, 0.0}, std::polar(s, phi)});
    }
    return out;
}

std::vector<QubitLabel> ButterflyInstance::composite_layout() const {
    std::vector<QubitLabel> layout;
    for (TerminalId t = 1; t <= n; t++) {
        for (TerminalId c = 0; c <= n; c++) {
            layout.push_back({t, c});
        }
    }
    return layout;
}

ButterflyInstance build_instance(std::size_t n, std::span<const InputAmplitudes> inputs) {
    if (n < 3) {
        throw std::invalid_argument("butterfly network needs at least 3 terminals, got " + std::to_string(n));
    }
    if (inputs.size() != n) {
        throw std::invalid_argument("expected " + std::to_string(n) + " inputs, got " + std::to_string(inputs.size()));
    }
    ButterflyInstance inst;
    inst.n = n;
    for (const auto &in : inputs) {
        StateVector s = prepare_arbitrary(in.alpha, in.beta);
        inst.input_amplitudes.push_back({s[0], s[1]});
        inst.inputs.push_back(std::move(s));
        inst.ghz_copies.push_back(prepare_ghz(n));
    }
    return inst;
}

std::size_t outcome_bit_count(std::size_t n) {
    return 2 * n + n * (n - 2);
}

ProtocolTranscript run_round(const ButterflyInstance &instance, const RoutingConfig &routing, RandomSource &rng) {
    return run_factored(instance, routing, OutcomeFeed::sampled(rng));
}

ProtocolTranscript run_branch(const ButterflyInstance &instance, const RoutingConfig &routing,
                              std::uint64_t branch_index) {
    ProtocolTranscript tr =
        run_factored(instance, routing, OutcomeFeed::forced(branch_index, outcome_bit_count(instance.n)));
    tr.branch_index = branch_index;
    return tr;
}

ProtocolTranscript run_composite_branch(const ButterflyInstance &instance, const RoutingConfig &routing,
                                        std::uint64_t branch_index) {
    check_instance(instance, routing);
    std::size_t n = instance.n;
    if (instance.total_qubits() > kMaxQubits) {
        throw std::length_error("composite register of " + std::to_string(instance.total_qubits()) +
                                " qubits exceeds the cap; use the factored run");
    }
    // Copy-major product, then permuted into the terminal-major physical layout.
    StateVector product;
    for (TerminalId c = 1; c <= n; c++) {
        product = tensor(product, tensor(instance.inputs[c - 1], instance.ghz_copies[c - 1]));
    }
    std::vector<std::size_t> order;
    for (const auto &label : instance.composite_layout()) {
        order.push_back((label.copy == 0 ? label.terminal - 1 : label.copy - 1) * (n + 1) +
                        (label.copy == 0 ? 0 : label.terminal));
    }
    LabeledRegister reg{product.permuted(order), instance.composite_layout()};

    OutcomeFeed feed = OutcomeFeed::forced(branch_index, outcome_bit_count(n));
    ProtocolTranscript tr = blank_transcript(instance, routing);
    tr.branch_index = branch_index;
    tr.outcomes =
        measure_schedule(n, routing, feed, [&](const QubitLabel &) -> LabeledRegister & { return reg; }, tr.relabel_log);
    tr.probability = feed.probability();
    finish_classical(tr, routing, nullptr);
    for (TerminalId t = 1; t <= n; t++) {
        std::size_t q = reg.position({t, routing.held_copy(t)});
        reg.state = apply_frame(apply_frame(std::move(reg.state), tr.own_frames[t - 1], q), tr.corrections[t - 1], q);
    }
    for (TerminalId t = 1; t <= n; t++) {
        TerminalId h = routing.held_copy(t);
        std::array<std::size_t, 1> kept{reg.position({t, h})};
        tr.final_fidelities.push_back(tr.possible() ? fidelity_with_pure(reg.state, kept, instance.inputs[h - 1])
                                                    : 0.0);
    }
    return tr;
}

EnumerationBudgetExceeded::EnumerationBudgetExceeded(std::uint64_t requested, std::uint64_t budget)
    : std::runtime_error("partial enumeration: " + std::to_string(requested) + " branches requested, budget is " +
                         std::to_string(budget)),
      requested_(requested),
      budget_(budget) {
}

void for_each_branch(const ButterflyInstance &instance, const RoutingConfig &routing,
                     const std::function<void(const ProtocolTranscript &)> &visit,
                     const EnumerationOptions &options) {
    check_instance(instance, routing);
    std::uint64_t count = checked_branch_count(instance.n, options);
    BranchLayout layout(routing);
    std::vector<CopyTable> tables = build_tables(instance, routing);
    std::vector<std::string> log = run_branch(instance, routing, 0).relabel_log;
    const MessageTamper *tamper = options.tamper ? &options.tamper : nullptr;

    std::size_t threads = std::max<std::size_t>(1, options.threads);
    constexpr std::uint64_t kChunk = 4096;
    std::vector<ProtocolTranscript> chunk;
    for (std::uint64_t start = 0; start < count; start += kChunk) {
        std::uint64_t len = std::min(kChunk, count - start);
        chunk.assign(len, ProtocolTranscript{});
        auto work = [&](std::size_t worker) {
            for (std::uint64_t k = worker; k < len; k += threads) {
                chunk[k] = assemble_branch(instance, routing, layout, tables, log, tamper, start + k);
            }
        };
        if (threads == 1) {
            work(0);
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t w = 0; w < threads; w++) {
                pool.emplace_back(work, w);
            }
        }
        for (const auto &tr : chunk) {
            visit(tr);
        }
    }
}

std::vector<ProtocolTranscript> enumerate_branches(const ButterflyInstance &instance, const RoutingConfig &routing,
                                                   const EnumerationOptions &options) {
    std::vector<ProtocolTranscript> out;
    for_each_branch(instance, routing, [&](const ProtocolTranscript &tr) { out.push_back(tr); }, options);
    return out;
}

std::vector<ChannelCost> classical_cost(const ProtocolTranscript &transcript) {
    std::vector<ChannelCost> out;
    for (const auto &m : transcript.messages) {
        out.push_back({m.channel.name(), m.payload_bits()});
    }
    return out;
}

std::vector<PathBranch> transmit_through(const ButterflyInstance &instance, const RoutingConfig &routing,
                                         TerminalId receiver, const StateVector &external, std::size_t qubit,
                                         const EnumerationOptions &options) {
    check_instance(instance, routing);
    if (qubit >= external.num_qubits()) {
        throw std::out_of_range("channel qubit outside the external register");
    }
    std::uint64_t count = checked_branch_count(instance.n, options);
    TerminalId routed = routing.held_copy(receiver);
    BranchLayout layout(routing);
    std::vector<CopyTable> tables = build_tables(instance, routing);
    tables[routed - 1] = build_copy_table(external, qubit, instance.ghz_copies[routed - 1], routed, routing);
    const CopyTable &path = tables[routed - 1];

    std::vector<PathBranch> out;
    out.reserve(count);
    for (std::uint64_t index = 0; index < count; index++) {
        std::vector<OutcomeRecord> records = layout.records(index, routing);
        double prob = 1.0;
        std::uint64_t path_pattern = 0;
        for (TerminalId c = 1; c <= instance.n; c++) {
            std::uint64_t p = layout.local_pattern(records, c, tables[c - 1]);
            prob *= tables[c - 1].patterns[p].probability;
            if (c == routed) {
                path_pattern = p;
            }
        }
        if (!(prob > 0.0)) {
            continue;
        }
        std::vector<ParityMessage> messages = encode_all_channels(records);
        if (options.tamper) {
            options.tamper(messages);
        }
        const OutcomeRecord &own = records[receiver - 1];
        PauliFrame own_frame = outcome_to_frame(own.a, own.b_parity());
        PauliFrame residual = correction_for_terminal(receiver, own, messages, routing);
        StateVector s = path.patterns[path_pattern].state;
        s = apply_frame(apply_frame(std::move(s), own_frame, path.held_position), residual, path.held_position);
        out.push_back({prob, s.moved(path.held_position, qubit)});
    }
    return out;
}

std::string format_transcript(const ProtocolTranscript &tr) {
    std::ostringstream out;
    out << "TRANSCRIPT n=" << tr.n << " chirality=" << chirality_name(tr.chirality) << " branch=" << tr.branch_index
        << " probability=" << format_real(tr.probability) << "\n";
    out << "INPUTS\n";
    for (std::size_t j = 0; j < tr.inputs.size(); j++) {
        const auto &in = tr.inputs[j];
        out << (j + 1) << ' ' << format_real(in.alpha.real()) << ' ' << format_real(in.alpha.imag()) << ' '
            << format_real(in.beta.real()) << ' ' << format_real(in.beta.imag()) << "\n";
    }
    out << "OUTCOMES\n";
    for (const auto &r : tr.outcomes) {
        out << r.terminal << ' ' << int(r.a.flip) << ' ' << int(r.a.sign);
        for (Bit v : r.b) {
            out << ' ' << int(v);
        }
        out << "\n";
    }
    out << "MESSAGES\n";
    for (const auto &m : tr.messages) {
        out << m.serialize() << "\n";
    }
    out << "CORRECTIONS\n";
    for (std::size_t t = 0; t < tr.corrections.size(); t++) {
        out << (t + 1) << ' ' << tr.own_frames[t].name() << ' ' << tr.corrections[t].name() << "\n";
    }
    out << "FIDELITIES\n";
    for (std::size_t t = 0; t < tr.final_fidelities.size(); t++) {
        out << (t + 1) << ' ' << format_real(tr.final_fidelities[t]) << "\n";
    }
    out << "RELABEL\n";
    for (const auto &line : tr.relabel_log) {
        out << line << "\n";
    }
    out << "END\n";
    return out.str();
}

}  // namespace ghznet
