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

#include "ghznet/coding.hpp"

#include <random>

#include "gtest/gtest.h"
#include "oracle.hpp"

using namespace ghznet;

namespace {

const PauliFrame kI{0, 0}, kX{1, 0}, kZ{0, 1}, kXZ{1, 1};

oracle::Mat frame_matrix(PauliFrame f) {
    oracle::Mat m = oracle::eye2();
    if (f.x) m = oracle::mul(m, oracle::px());
    if (f.z) m = oracle::mul(m, oracle::pz());
    return m;
}

/// True when a = c b for some unit-modulus c.
bool equal_up_to_phase(const oracle::Mat &a, const oracle::Mat &b) {
    oracle::C overlap{};
    double na = 0, nb = 0;
    for (std::size_t i = 0; i < a.e.size(); i++) {
        overlap += std::conj(a.e[i]) * b.e[i];
        na += std::norm(a.e[i]);
        nb += std::norm(b.e[i]);
    }
    return std::abs(std::abs(overlap) - std::sqrt(na * nb)) < 1e-12;
}

OutcomeRecord rec(TerminalId t, Bit f, Bit s, std::vector<Bit> b) {
    return {t, {f, s}, std::move(b)};
}

std::vector<OutcomeRecord> records_from_bits(std::size_t n, std::uint64_t bits, std::size_t width) {
    std::vector<OutcomeRecord> out;
    for (TerminalId t = 1; t <= n; t++) {
        OutcomeRecord r;
        r.terminal = t;
        r.a.flip = bits & 1;
        bits >>= 1;
        r.a.sign = bits & 1;
        bits >>= 1;
        for (std::size_t k = 0; k < width; k++) {
            r.b.push_back(bits & 1);
            bits >>= 1;
        }
        out.push_back(r);
    }
    return out;
}

}  // namespace

TEST(outcome_to_frame, table_rows) {
    EXPECT_EQ(outcome_to_frame({0, 0}, 0), kI);
    EXPECT_EQ(outcome_to_frame({0, 0}, 1), kZ);
    EXPECT_EQ(outcome_to_frame({0, 1}, 0), kZ);
    EXPECT_EQ(outcome_to_frame({0, 1}, 1), kI);
    EXPECT_EQ(outcome_to_frame({1, 0}, 0), kX);
    EXPECT_EQ(outcome_to_frame({1, 0}, 1), kXZ);
    EXPECT_EQ(outcome_to_frame({1, 1}, 0), kXZ);
    EXPECT_EQ(outcome_to_frame({1, 1}, 1), kX);
    EXPECT_EQ(kXZ.name(), "XZ");
    EXPECT_EQ(kXZ.as_pauli(), Pauli::XZ);
}

TEST(compose_frames, group_properties) {
    std::vector<PauliFrame> all{kI, kX, kZ, kXZ};
    EXPECT_EQ(compose_frames(kX, kZ), kXZ);
    for (auto f : all) {
        EXPECT_EQ(compose_frames(f, f), kI);
        EXPECT_EQ(compose_frames(f, kI), f);
        for (auto g : all) {
            EXPECT_EQ(compose_frames(f, g), compose_frames(g, f));
            for (auto h : all) {
                EXPECT_EQ(compose_frames(compose_frames(f, g), h), compose_frames(f, compose_frames(g, h)));
            }
        }
    }
}

TEST(compose_frames, matches_matrix_products) {
    std::vector<PauliFrame> all{kI, kX, kZ, kXZ};
    int checked = 0;
    for (auto f : all) {
        for (auto g : all) {
            // Paulis are self-inverse up to sign, so U(g)^-1 = +-U(g).
            oracle::Mat lhs = oracle::mul(frame_matrix(f), frame_matrix(g));
            EXPECT_TRUE(equal_up_to_phase(lhs, frame_matrix(compose_frames(f, g))))
                << f.name() << " * " << g.name();
            checked++;
        }
    }
    EXPECT_EQ(checked, 16);
}

TEST(encode, examples) {
    std::vector<OutcomeRecord> zeros{rec(1, 0, 0, {0}), rec(2, 0, 0, {0}), rec(3, 0, 0, {0})};
    ParityMessage e = encode_full_parity(zeros);
    EXPECT_EQ(e.serialize(), "E 0 0 0");

    std::vector<OutcomeRecord> rs{rec(1, 0, 1, {1}), rec(2, 1, 1, {0}), rec(3, 1, 0, {1})};
    EXPECT_EQ(encode_full_parity(rs).serialize(), "E 0 0 0");

    // E_2 keeps terminals 1 and 3: (0,1|1) xor (1,0|1) = (1,1|0).
    ParityMessage e2 = encode_parity_without(rs, 2);
    EXPECT_EQ(e2.serialize(), "E2 1 1 0");
    EXPECT_EQ(pair_label_for_excluded(2), 3u);
    EXPECT_EQ(excluded_for_pair_label(3), 2u);
    for (TerminalId j = 1; j <= 3; j++) {
        EXPECT_EQ(excluded_for_pair_label(pair_label_for_excluded(j)), j);
    }
    // Pair labels: E1 = X1+X2, E2 = X2+X3, E3 = X1+X3.
    EXPECT_EQ(excluded_for_pair_label(1), 3u);
    EXPECT_EQ(excluded_for_pair_label(2), 1u);

    EXPECT_EQ(encode_parity_without(zeros, 1).serialize(), "E1 0 0 0");
}

TEST(encode, errors) {
    std::vector<OutcomeRecord> dup{rec(1, 0, 0, {0}), rec(1, 1, 0, {0})};
    EXPECT_THROW(encode_full_parity(dup), std::invalid_argument);
    std::vector<OutcomeRecord> one{rec(1, 0, 0, {0})};
    EXPECT_THROW(encode_full_parity(one), std::invalid_argument);
    std::vector<OutcomeRecord> ok{rec(1, 0, 0, {0}), rec(2, 1, 0, {0})};
    EXPECT_THROW(encode_parity_without(ok, 5), std::invalid_argument);
    std::vector<ParityMessage> partial{encode_full_parity(ok)};
    EXPECT_THROW(reconstruct_record(partial, 1), std::invalid_argument);
}

TEST(encode, single_bit_flip_is_local) {
    std::mt19937_64 gen(17);
    for (int trial = 0; trial < 50; trial++) {
        auto rs = records_from_bits(4, gen(), 2);
        ParityMessage base = encode_full_parity(rs);
        std::size_t t = gen() % 4, which = gen() % 4;
        auto flipped = rs;
        if (which == 0) flipped[t].a.flip ^= 1;
        if (which == 1) flipped[t].a.sign ^= 1;
        if (which >= 2) flipped[t].b[which - 2] ^= 1;
        ParityMessage m = encode_full_parity(flipped);
        EXPECT_EQ(m.a.flip != base.a.flip, which == 0);
        EXPECT_EQ(m.a.sign != base.a.sign, which == 1);
        EXPECT_EQ(m.b[0] != base.b[0], which == 2);
        EXPECT_EQ(m.b[1] != base.b[1], which == 3);
    }
}

TEST(encode, parity_completeness_exhaustive) {
    // E xor E_j = X_j for every assignment of 3 bits per terminal, n = 3, 4, 5.
    for (std::size_t n : {3u, 4u, 5u}) {
        for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (3 * n)); bits++) {
            auto rs = records_from_bits(n, bits, 1);
            auto msgs = encode_all_channels(rs);
            ASSERT_EQ(msgs.size(), n + 1);
            for (TerminalId j = 1; j <= n; j++) {
                ASSERT_EQ(reconstruct_record(msgs, j), rs[j - 1]);
            }
        }
    }
}

TEST(parity_message, parse_inverts_serialize) {
    std::mt19937_64 gen(23);
    for (int trial = 0; trial < 200; trial++) {
        ParityMessage m;
        m.channel = ChannelId{gen() % 7};
        m.a = {Bit(gen() & 1), Bit(gen() & 1)};
        m.b.resize(1 + gen() % 4);
        for (auto &v : m.b) v = gen() & 1;
        EXPECT_EQ(ParityMessage::parse(m.serialize()), m);
    }
    EXPECT_THROW(ParityMessage::parse("E 0 1"), std::invalid_argument);
    EXPECT_THROW(ParityMessage::parse("F 0 1 1"), std::invalid_argument);
    EXPECT_THROW(ParityMessage::parse("E 0 2 1"), std::invalid_argument);
}

TEST(routing, three_terminals) {
    RoutingConfig cw(3, Chirality::kClockwise);
    EXPECT_EQ(cw.held_copy(1), 3u);
    EXPECT_EQ(cw.held_copy(2), 1u);
    EXPECT_EQ(cw.held_copy(3), 2u);
    EXPECT_EQ(cw.measured_copies(1), std::vector<TerminalId>{2});
    EXPECT_EQ(cw.measured_copies(2), std::vector<TerminalId>{3});
    EXPECT_EQ(cw.measured_copies(3), std::vector<TerminalId>{1});

    RoutingConfig ccw(3, Chirality::kCounterclockwise);
    EXPECT_EQ(ccw.held_copy(1), 2u);
    EXPECT_EQ(ccw.x_measurers_of(2), (std::vector<std::pair<TerminalId, std::size_t>>{{3, 0}}));
    for (TerminalId t = 1; t <= 3; t++) {
        // Flipping chirality inverts the receiver cycle.
        EXPECT_EQ(ccw.held_copy(cw.held_copy(t)), t);
    }
    EXPECT_THROW(RoutingConfig(2, Chirality::kClockwise), std::invalid_argument);
}

TEST(routing, larger_networks_are_consistent) {
    for (std::size_t n = 3; n <= 7; n++) {
        for (auto ch : {Chirality::kClockwise, Chirality::kCounterclockwise}) {
            RoutingConfig r(n, ch);
            EXPECT_NO_THROW(r.validate());
            for (TerminalId c = 1; c <= n; c++) {
                EXPECT_EQ(r.x_measurers_of(c).size(), n - 2);
                EXPECT_EQ(r.held_copy(r.receiver_of(c)), c);
            }
        }
    }
}

TEST(correction, examples) {
    RoutingConfig cw(3, Chirality::kClockwise);
    std::vector<OutcomeRecord> zeros{rec(1, 0, 0, {0}), rec(2, 0, 0, {0}), rec(3, 0, 0, {0})};
    auto msgs = encode_all_channels(zeros);
    EXPECT_EQ(correction_for_terminal(1, zeros[0], msgs, cw), kI);

    // Clockwise n=3 branch: terminal 1 receives copy 3, corrected by (X1a, X1b) + (X3a, X2b).
    std::mt19937_64 gen(5);
    for (std::uint64_t bits = 0; bits < 512; bits++) {
        auto rs = records_from_bits(3, bits, 1);
        auto m = encode_all_channels(rs);
        BellOutcome sum{Bit(rs[0].a.flip ^ rs[2].a.flip), Bit(rs[0].a.sign ^ rs[2].a.sign)};
        PauliFrame want = outcome_to_frame(sum, rs[0].b[0] ^ rs[1].b[0]);
        ASSERT_EQ(correction_for_terminal(1, rs[0], m, cw), want);
    }

    std::vector<ParityMessage> missing{msgs[0], msgs[1], msgs[2]};
    EXPECT_THROW(correction_for_terminal(1, zeros[0], missing, cw), std::invalid_argument);
    EXPECT_THROW(correction_for_terminal(2, zeros[0], msgs, cw), std::invalid_argument);
}

TEST(correction, reads_only_own_record_and_parity) {
    // Two worlds with the same messages and own record but different raw records elsewhere
    // must produce the same frame.
    RoutingConfig cw(4, Chirality::kClockwise);
    std::mt19937_64 gen(99);
    for (int trial = 0; trial < 100; trial++) {
        auto rs = records_from_bits(4, gen(), 2);
        auto msgs = encode_all_channels(rs);
        PauliFrame f = correction_for_terminal(2, rs[1], msgs, cw);
        auto corrupted = rs;
        for (std::size_t k = 0; k < corrupted.size(); k++) {
            if (k != 1) {
                corrupted[k].a.flip ^= 1;
                corrupted[k].b[0] ^= 1;
            }
        }
        // Only `rs[1]` and `msgs` flow into the function; the corrupted copies are never read.
        EXPECT_EQ(correction_for_terminal(2, corrupted[1], msgs, cw), f);
    }
}
