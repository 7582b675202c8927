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

#include <cmath>

#include "gtest/gtest.h"
#include "oracle.hpp"

using namespace ghznet;

namespace {

std::vector<InputAmplitudes> fixed_inputs(std::size_t n) {
    RandomSource rng(1000 + n);
    return random_inputs(n, rng);
}

/// Dense reference for one GHZ copy at n = 3: the held leg's density matrix after projecting
/// the Bell pair (input, leg `copy`) and the X-measured leg, with no qubit removal.
oracle::Mat reference_held_state(const InputAmplitudes &in, TerminalId copy, TerminalId x_terminal,
                                 TerminalId receiver, BellOutcome a, Bit b) {
    const std::size_t n = 4;  // input + three legs; leg of terminal t at position t
    oracle::Vec v = oracle::kron(oracle::Vec{in.alpha, in.beta}, oracle::ghz(3));
    double s = 1.0 / std::sqrt(std::norm(in.alpha) + std::norm(in.beta));
    for (auto &x : v) x *= s;
    v = oracle::apply(oracle::two_qubit_projector(oracle::bell(a.flip, a.sign), 0, copy, n), v);
    oracle::Vec xb{oracle::kS, b ? -oracle::kS : oracle::kS};
    v = oracle::apply(oracle::one_qubit_projector(xb, x_terminal, n), v);
    double p = oracle::norm2(v);
    for (auto &x : v) x /= std::sqrt(p);
    oracle::Mat rho = oracle::outer(v);
    // Trace out everything except the receiver's leg, highest position first.
    std::size_t remaining = n;
    for (std::size_t q = n; q-- > 0;) {
        if (q == receiver) continue;
        rho = oracle::trace_out(rho, q, remaining--);
    }
    return rho;
}

oracle::Mat frame_matrix(PauliFrame f) {
    // Z first, then X.
    oracle::Mat m = oracle::eye2();
    if (f.z) m = oracle::mul(oracle::pz(), m);
    if (f.x) m = oracle::mul(oracle::px(), m);
    return m;
}

oracle::Mat conjugate(const oracle::Mat &u, const oracle::Mat &rho) {
    oracle::Mat ud(2);
    for (int i = 0; i < 2; i++)
        for (int j = 0; j < 2; j++) ud(i, j) = std::conj(u(j, i));
    return oracle::mul(oracle::mul(u, rho), ud);
}

}  // namespace

TEST(build_instance, register_sizes) {
    EXPECT_EQ(build_instance(3, fixed_inputs(3)).total_qubits(), 12u);
    EXPECT_EQ(build_instance(4, fixed_inputs(4)).total_qubits(), 20u);
    EXPECT_EQ(build_instance(5, fixed_inputs(5)).total_qubits(), 30u);
    EXPECT_THROW(build_instance(2, fixed_inputs(2)), std::invalid_argument);
    EXPECT_THROW(build_instance(3, fixed_inputs(4)), std::invalid_argument);
    std::vector<InputAmplitudes> bad{{0, 0}, {1, 0}, {1, 0}};
    EXPECT_THROW(build_instance(3, bad), std::invalid_argument);
    EXPECT_EQ(build_instance(3, fixed_inputs(3)).composite_layout().size(), 12u);
}

TEST(run_branch, matches_dense_oracle_for_all_512_branches) {
    for (auto ch : {Chirality::kClockwise, Chirality::kCounterclockwise}) {
        auto inputs = fixed_inputs(3);
        ButterflyInstance inst = build_instance(3, inputs);
        RoutingConfig routing(3, ch);
        for (std::uint64_t branch = 0; branch < 512; branch++) {
            ProtocolTranscript tr = run_branch(inst, routing, branch);
            ASSERT_NEAR(tr.probability, 1.0 / 512, kExactTol);
            for (TerminalId t = 1; t <= 3; t++) {
                TerminalId copy = routing.held_copy(t);
                auto [x_terminal, slot] = routing.x_measurers_of(copy).front();
                oracle::Mat rho = reference_held_state(inputs[copy - 1], copy, x_terminal, t,
                                                       tr.outcomes[copy - 1].a, tr.outcomes[x_terminal - 1].b[slot]);
                oracle::Mat u = oracle::mul(frame_matrix(tr.corrections[t - 1]), frame_matrix(tr.own_frames[t - 1]));
                oracle::Mat out = conjugate(u, rho);
                oracle::Vec target{inst.inputs[copy - 1][0], inst.inputs[copy - 1][1]};
                double f = oracle::dot(target, oracle::apply(out, target)).real();
                ASSERT_NEAR(f, 1.0, kProtocolTol) << "branch " << branch << " terminal " << t;
                ASSERT_NEAR(tr.final_fidelities[t - 1], 1.0, kProtocolTol);
            }
        }
    }
}

TEST(enumerate, cached_tables_agree_with_direct_runs) {
    auto inputs = fixed_inputs(3);
    ButterflyInstance inst = build_instance(3, inputs);
    RoutingConfig routing(3, Chirality::kClockwise);
    auto all = enumerate_branches(inst, routing);
    ASSERT_EQ(all.size(), 512u);
    for (std::uint64_t b = 0; b < all.size(); b++) {
        ProtocolTranscript direct = run_branch(inst, routing, b);
        ASSERT_EQ(format_transcript(direct), format_transcript(all[b]));
    }
}

TEST(enumerate, composite_register_agrees_with_factored) {
    ButterflyInstance inst = build_instance(3, fixed_inputs(3));
    RoutingConfig routing(3, Chirality::kCounterclockwise);
    for (std::uint64_t b = 0; b < 512; b += 7) {
        ProtocolTranscript f = run_branch(inst, routing, b);
        ProtocolTranscript c = run_composite_branch(inst, routing, b);
        EXPECT_NEAR(c.probability, f.probability, kExactTol);
        EXPECT_EQ(c.outcomes, f.outcomes);
        EXPECT_EQ(c.corrections, f.corrections);
        for (std::size_t t = 0; t < 3; t++) {
            EXPECT_NEAR(c.final_fidelities[t], f.final_fidelities[t], kProtocolTol);
        }
    }
    EXPECT_THROW(run_composite_branch(build_instance(5, fixed_inputs(5)), RoutingConfig(5, Chirality::kClockwise), 0),
                 std::length_error);
}

TEST(enumerate, perfect_transmission_n3_and_n4) {
    for (std::size_t n : {3u, 4u}) {
        for (auto ch : {Chirality::kClockwise, Chirality::kCounterclockwise}) {
            ButterflyInstance inst = build_instance(n, fixed_inputs(n));
            RoutingConfig routing(n, ch);
            std::uint64_t count = 0;
            double worst = 1.0, total_p = 0.0;
            for_each_branch(inst, routing, [&](const ProtocolTranscript &tr) {
                count++;
                total_p += tr.probability;
                EXPECT_NEAR(tr.probability, std::ldexp(1.0, -int(n * n)), kExactTol);
                for (double f : tr.final_fidelities) worst = std::min(worst, f);
            });
            EXPECT_EQ(count, std::uint64_t{1} << (n * n));
            EXPECT_NEAR(total_p, 1.0, kExactTol);
            EXPECT_NEAR(worst, 1.0, kProtocolTol);
        }
    }
}

TEST(enumerate, tampered_message_breaks_some_branch) {
    ButterflyInstance inst = build_instance(3, fixed_inputs(3));
    RoutingConfig routing(3, Chirality::kClockwise);
    EnumerationOptions opts;
    opts.tamper = [](std::vector<ParityMessage> &m) { m[0].a.flip ^= 1; };
    double worst = 1.0;
    for_each_branch(
        inst, routing,
        [&](const ProtocolTranscript &tr) {
            for (double f : tr.final_fidelities) worst = std::min(worst, f);
        },
        opts);
    EXPECT_LT(worst, 1.0 - 1e-6);
}

TEST(enumerate, budget) {
    ButterflyInstance inst = build_instance(5, fixed_inputs(5));
    RoutingConfig routing(5, Chirality::kClockwise);
    try {
        enumerate_branches(inst, routing);
        FAIL() << "expected the enumeration budget to be exceeded";
    } catch (const EnumerationBudgetExceeded &e) {
        EXPECT_EQ(e.requested(), std::uint64_t{1} << 25);
        EXPECT_EQ(e.budget(), std::uint64_t{1} << 16);
    }
}

TEST(enumerate, threads_do_not_change_results) {
    ButterflyInstance inst = build_instance(3, fixed_inputs(3));
    RoutingConfig routing(3, Chirality::kClockwise);
    EnumerationOptions opts;
    opts.threads = 3;
    auto a = enumerate_branches(inst, routing);
    auto b = enumerate_branches(inst, routing, opts);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); k++) {
        ASSERT_EQ(format_transcript(a[k]), format_transcript(b[k]));
    }
}

TEST(run_round, routing_follows_chirality) {
    // Distinct inputs so the receiver identity is unambiguous.
    std::vector<InputAmplitudes> inputs{{1, 0}, {0.6, 0.8}, {Complex{0, 0.8}, 0.6}};
    ButterflyInstance inst = build_instance(3, inputs);
    RandomSource rng(4);
    ProtocolTranscript cw = run_round(inst, RoutingConfig(3, Chirality::kClockwise), rng);
    EXPECT_NEAR(overlap_fidelity(cw.final_states[0], inst.inputs[2]), 1.0, kProtocolTol);
    EXPECT_LT(overlap_fidelity(cw.final_states[0], inst.inputs[1]), 0.9);
    ProtocolTranscript ccw = run_round(inst, RoutingConfig(3, Chirality::kCounterclockwise), rng);
    EXPECT_NEAR(overlap_fidelity(ccw.final_states[0], inst.inputs[1]), 1.0, kProtocolTol);
    for (double f : ccw.final_fidelities) EXPECT_NEAR(f, 1.0, kProtocolTol);
}

TEST(run_round, all_zero_branch_needs_no_correction) {
    ButterflyInstance inst = build_instance(3, fixed_inputs(3));
    ProtocolTranscript tr = run_branch(inst, RoutingConfig(3, Chirality::kClockwise), 0);
    for (std::size_t t = 0; t < 3; t++) {
        EXPECT_EQ(tr.corrections[t], PauliFrame{});
        EXPECT_EQ(tr.own_frames[t], PauliFrame{});
        EXPECT_NEAR(tr.final_fidelities[t], 1.0, kProtocolTol);
    }
}

TEST(run_round, deterministic_per_seed) {
    ButterflyInstance inst = build_instance(4, fixed_inputs(4));
    RoutingConfig routing(4, Chirality::kClockwise);
    RandomSource a(77), b(77);
    ProtocolTranscript ta = run_round(inst, routing, a);
    ProtocolTranscript tb = run_round(inst, routing, b);
    EXPECT_EQ(format_transcript(ta), format_transcript(tb));
    // The sampled run reports which branch it took.
    EXPECT_EQ(format_transcript(run_branch(inst, routing, ta.branch_index)), format_transcript(ta));
}

TEST(classical_cost, channel_counts) {
    for (std::size_t n : {3u, 4u, 5u}) {
        ButterflyInstance inst = build_instance(n, fixed_inputs(n));
        RandomSource rng(n);
        auto cost = classical_cost(run_round(inst, RoutingConfig(n, Chirality::kClockwise), rng));
        EXPECT_EQ(cost.size(), n + 1);
        EXPECT_EQ(cost.front().channel, "E");
        for (const auto &c : cost) EXPECT_EQ(c.bits, n);
    }
}

TEST(no_signaling, received_state_is_maximally_mixed_before_correction) {
    for (std::size_t n : {3u, 4u}) {
        ButterflyInstance inst = build_instance(n, fixed_inputs(n));
        RoutingConfig routing(n, Chirality::kClockwise);
        std::vector<DensityMatrix> avg(n, DensityMatrix{2, std::vector<Complex>(4)});
        for_each_branch(inst, routing, [&](const ProtocolTranscript &tr) {
            for (std::size_t t = 0; t < n; t++) {
                std::array<std::size_t, 1> q{0};
                DensityMatrix r = reduced_density_matrix(tr.received[t], q);
                for (std::size_t k = 0; k < 4; k++) avg[t].entries[k] += tr.probability * r.entries[k];
            }
        });
        DensityMatrix half{2, {0.5, 0, 0, 0.5}};
        for (std::size_t t = 0; t < n; t++) {
            EXPECT_LT(max_abs_difference(avg[t], half), kProtocolTol);
        }
    }
}

TEST(generalization, single_x_measurement_is_not_enough_beyond_three_terminals) {
    // With one X-measured leg per copy at n = 4, the third leg stays entangled with the held
    // qubit and the delivered state is only a mixture.
    StateVector in = prepare_arbitrary(0.6, Complex{0, 0.8});
    StateVector joint = tensor(in, prepare_ghz(4));
    Projection bell = project_bell(joint, 0, 1, {0, 0});
    Projection x = project_x(bell.state, 0, 0);
    std::array<std::size_t, 1> held{0};
    double f = fidelity_with_pure(x.state, held, in);
    EXPECT_NEAR(f, 0.36 * 0.36 + 0.64 * 0.64, kExactTol);
    // Measuring the spectator leg as well restores the state.
    Projection both = project_x(x.state, 1, 0);
    EXPECT_NEAR(overlap_fidelity(both.state, in), 1.0, kExactTol);
}

TEST(transmit_through, identity_on_reference_pair) {
    ButterflyInstance inst = build_instance(3, fixed_inputs(3));
    RoutingConfig routing(3, Chirality::kClockwise);
    StateVector pair = prepare_ghz(2);
    auto branches = transmit_through(inst, routing, 2, pair, 1);
    EXPECT_EQ(branches.size(), 512u);
    double total = 0, fid = 0;
    for (const auto &b : branches) {
        total += b.probability;
        fid += b.probability * overlap_fidelity(b.state, pair);
    }
    EXPECT_NEAR(total, 1.0, kExactTol);
    EXPECT_NEAR(fid, 1.0, kProtocolTol);
}

TEST(format_transcript, sections) {
    ButterflyInstance inst = build_instance(3, fixed_inputs(3));
    std::string text = format_transcript(run_branch(inst, RoutingConfig(3, Chirality::kClockwise), 5));
    for (const char *section : {"INPUTS\n", "OUTCOMES\n", "MESSAGES\n", "CORRECTIONS\n", "FIDELITIES\n"}) {
        EXPECT_NE(text.find(section), std::string::npos) << section;
    }
    EXPECT_NE(text.find("1 1.000000000000\n"), std::string::npos);
    EXPECT_NE(text.find("\nE3 "), std::string::npos);
}
