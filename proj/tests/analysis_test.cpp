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

#include "ghznet/analysis.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"

using namespace ghznet;

namespace {

// <Phi+| rho |Phi+> for a two-qubit density matrix.
double overlap_with_phi_plus(const oracle::Mat &rho) {
    oracle::Vec phi = oracle::bell(0, 0);
    oracle::C acc{};
    for (std::size_t i = 0; i < 4; i++)
        for (std::size_t j = 0; j < 4; j++) acc += std::conj(phi[i]) * rho(i, j) * phi[j];
    return acc.real();
}

// Kraus-sum output of a channel on qubit 1 of |Phi+><Phi+|.
double kraus_fidelity(const std::vector<oracle::Mat> &kraus) {
    oracle::Mat rho = oracle::outer(oracle::bell(0, 0));
    oracle::Mat out(4);
    for (const auto &k : kraus) {
        oracle::Mat big = oracle::kron(oracle::eye2(), k);
        oracle::Mat kd(4);
        for (std::size_t i = 0; i < 4; i++)
            for (std::size_t j = 0; j < 4; j++) kd(i, j) = std::conj(big(j, i));
        oracle::Mat term = oracle::mul(oracle::mul(big, rho), kd);
        for (std::size_t i = 0; i < 16; i++) out.e[i] += term.e[i];
    }
    return overlap_with_phi_plus(out);
}

}  // namespace

TEST(fidelity, identity_is_one) {
    EXPECT_NEAR(entanglement_fidelity(identity_channel()), 1.0, kExactTol);
}

TEST(fidelity, measure_and_resend_matches_kraus_oracle) {
    double oracle_f = kraus_fidelity({oracle::mat2(1, 0, 0, 0), oracle::mat2(0, 0, 0, 1)});
    EXPECT_NEAR(oracle_f, 0.5, kExactTol);
    EXPECT_NEAR(entanglement_fidelity(measure_and_resend_channel()), oracle_f, kExactTol);
}

TEST(fidelity, replacement_matches_partial_trace_oracle) {
    oracle::Mat rho = oracle::outer(oracle::bell(0, 0));
    oracle::Mat reduced = oracle::trace_out(rho, 1, 2);
    oracle::Mat mixed = oracle::mat2(0.5, 0, 0, 0.5);
    double oracle_f = overlap_with_phi_plus(oracle::kron(reduced, mixed));
    EXPECT_NEAR(oracle_f, 0.25, kExactTol);
    EXPECT_NEAR(entanglement_fidelity(replacement_channel()), oracle_f, kExactTol);
}

TEST(fidelity, pauli_flip_channel_has_zero_fidelity) {
    ChannelSimulator flip = [](const StateVector &s, std::size_t q) {
        return std::vector<ChannelBranch>{{1.0, apply_pauli(s, Pauli::X, q)}};
    };
    EXPECT_NEAR(entanglement_fidelity(flip), 0.0, kExactTol);
    EXPECT_NEAR(kraus_fidelity({oracle::px()}), 0.0, kExactTol);
}

TEST(fidelity, mixtures_are_affine) {
    std::vector<ChannelSimulator> channels{identity_channel(), measure_and_resend_channel(), replacement_channel()};
    for (double p : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
        for (auto &a : channels) {
            for (auto &b : channels) {
                double expect = p * entanglement_fidelity(a) + (1 - p) * entanglement_fidelity(b);
                EXPECT_NEAR(entanglement_fidelity(mix_channels(p, a, b)), expect, kExactTol);
            }
        }
    }
    EXPECT_THROW(mix_channels(1.5, identity_channel(), identity_channel()), std::invalid_argument);
}

TEST(fidelity, relayed_measure_and_resend_stays_half) {
    auto hop = measure_and_resend_channel();
    EXPECT_NEAR(entanglement_fidelity(compose_channels(hop, hop)), 0.5, kExactTol);
    EXPECT_NEAR(entanglement_fidelity(compose_channels(hop, replacement_channel())), 0.25, kExactTol);
}

TEST(fidelity, rejects_malformed_channels) {
    ChannelSimulator shrink = [](const StateVector &s, std::size_t q) {
        return std::vector<ChannelBranch>{{1.0, project_z(s, q, 0).state}};
    };
    EXPECT_THROW(entanglement_fidelity(shrink), std::invalid_argument);
    ChannelSimulator leaky = [](const StateVector &s, std::size_t) {
        return std::vector<ChannelBranch>{{0.5, s}};
    };
    EXPECT_THROW(entanglement_fidelity(leaky), std::logic_error);
}

TEST(protocol, three_terminal_paths_are_perfect) {
    for (Chirality c : {Chirality::kClockwise, Chirality::kCounterclockwise}) {
        RoutingConfig routing(3, c);
        RandomSource rng(5);
        auto inst = build_instance(3, random_inputs(3, rng));
        for (TerminalId t = 1; t <= 3; t++) {
            EXPECT_NEAR(entanglement_fidelity(protocol_channel(inst, routing, t)), 1.0, kProtocolTol);
        }
    }
}

TEST(protocol, four_terminal_path_is_perfect) {
    RoutingConfig routing(4, Chirality::kClockwise);
    RandomSource rng(6);
    auto inst = build_instance(4, random_inputs(4, rng));
    EXPECT_NEAR(entanglement_fidelity(protocol_channel(inst, routing, 2)), 1.0, kProtocolTol);
}

TEST(protocol, product_resource_breaks_the_path) {
    RoutingConfig routing(3, Chirality::kClockwise);
    auto inst = build_instance(3, std::vector<InputAmplitudes>(3));
    TerminalId receiver = 1;
    inst.ghz_copies[routing.held_copy(receiver) - 1] = StateVector::basis(3, 0);
    double f = entanglement_fidelity(protocol_channel(inst, routing, receiver));
    EXPECT_LT(f, 1.0 - 1e-3);
    EXPECT_GE(f, 0.0);
    // Other paths use intact copies.
    EXPECT_NEAR(entanglement_fidelity(protocol_channel(inst, routing, 2)), 1.0, kProtocolTol);
}

TEST(bound, threshold_values) {
    EXPECT_NEAR(bound_threshold(3), 2.1384, kExactTol);
    EXPECT_NEAR(bound_threshold(4), 2.28096, kExactTol);
    for (std::size_t d = 1; d < 2000; d++) {
        EXPECT_LT(bound_threshold(d), bound_threshold(d + 1));
        EXPECT_LT(bound_threshold(d), 2.8512);
    }
    EXPECT_NEAR(bound_threshold(1000000), 2.8512, 1e-5);
    EXPECT_THROW(bound_threshold(0), std::invalid_argument);
}

TEST(bound, examples) {
    std::vector<double> perfect{1, 1, 1}, half{0.5, 0.5, 0.5};
    auto r = check_bound(perfect, 3);
    EXPECT_DOUBLE_EQ(r.sum, 3.0);
    EXPECT_FALSE(r.satisfied);
    EXPECT_TRUE(check_bound(half, 3).satisfied);
    std::vector<double> bad{0.5, 1.2, 0.5};
    EXPECT_THROW(check_bound(bad, 3), std::invalid_argument);
    EXPECT_THROW(check_bound(half, 4), std::invalid_argument);
}

TEST(bound, entangled_sum_exceeds_threshold_for_every_d) {
    for (std::size_t d = 2; d <= 64; d++) {
        std::vector<double> ones(d, 1.0);
        EXPECT_FALSE(check_bound(ones, d).satisfied);
    }
}

TEST(bound, baseline_satisfies_and_protocol_violates) {
    auto b3 = baseline_no_entanglement(3);
    for (double f : b3.fidelities) EXPECT_NEAR(f, 0.5, kExactTol);
    EXPECT_NEAR(b3.sum, 1.5, kExactTol);
    EXPECT_TRUE(b3.satisfied);
    auto b4 = baseline_no_entanglement(4, Chirality::kCounterclockwise);
    EXPECT_NEAR(b4.sum, 2.0, kExactTol);
    EXPECT_TRUE(b4.satisfied);
    auto e3 = entangled_protocol_bound(3);
    EXPECT_NEAR(e3.sum, 3.0, kProtocolTol);
    EXPECT_FALSE(e3.satisfied);
    EXPECT_THROW(baseline_no_entanglement(2), std::invalid_argument);
}
