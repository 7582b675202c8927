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

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ghznet {

Pauli PauliFrame::as_pauli() const {
    if (x && z) {
        return Pauli::XZ;
    }
    if (x) {
        return Pauli::X;
    }
    return z ? Pauli::Z : Pauli::I;
}

std::string PauliFrame::name() const {
    switch (as_pauli()) {
        case Pauli::I:
            return "I";
        case Pauli::X:
            return "X";
        case Pauli::Z:
            return "Z";
        case Pauli::XZ:
            return "XZ";
    }
    return "?";
}

PauliFrame outcome_to_frame(BellOutcome a, Bit b) {
    return {static_cast<Bit>(a.flip & 1), static_cast<Bit>((a.sign ^ b) & 1)};
}

PauliFrame compose_frames(PauliFrame f, PauliFrame g) {
    return {static_cast<Bit>(f.x ^ g.x), static_cast<Bit>(f.z ^ g.z)};
}

StateVector apply_frame(StateVector state, PauliFrame frame, std::size_t qubit) {
    return apply_pauli(std::move(state), frame.as_pauli(), qubit);
}

Bit OutcomeRecord::b_parity() const {
    Bit p = 0;
    for (Bit v : b) {
        p ^= v;
    }
    return p;
}

std::string ChannelId::name() const {
    return excluded == 0 ? std::string("E") : "E" + std::to_string(excluded);
}

ChannelId ChannelId::parse(std::string_view text) {
    if (text.empty() || text[0] != 'E') {
        throw std::invalid_argument("bad channel id '" + std::string(text) + "'");
    }
    if (text.size() == 1) {
        return {};
    }
    std::size_t j = 0;
    auto [ptr, ec] = std::from_chars(text.data() + 1, text.data() + text.size(), j);
    if (ec != std::errc{} || ptr != text.data() + text.size() || j == 0) {
        throw std::invalid_argument("bad channel id '" + std::string(text) + "'");
    }
    return {j};
}

std::string ParityMessage::serialize() const {
    std::string out = channel.name();
    out += ' ';
    out += static_cast<char>('0' + a.flip);
    out += ' ';
    out += static_cast<char>('0' + a.sign);
    for (Bit v : b) {
        out += ' ';
        out += static_cast<char>('0' + v);
    }
    return out;
}

ParityMessage ParityMessage::parse(std::string_view line) {
    std::istringstream in{std::string(line)};
    std::string id;
    in >> id;
    ParityMessage m;
    m.channel = ChannelId::parse(id);
    std::vector<Bit> bits;
    std::string tok;
    while (in >> tok) {
        if (tok != "0" && tok != "1") {
            throw std::invalid_argument("parity message bit must be 0 or 1, got '" + tok + "'");
        }
        bits.push_back(static_cast<Bit>(tok[0] - '0'));
    }
    if (bits.size() < 3) {
        throw std::invalid_argument("parity message needs at least 3 bits: '" + std::string(line) + "'");
    }
    m.a = {bits[0], bits[1]};
    m.b.assign(bits.begin() + 2, bits.end());
    return m;
}

namespace {

void check_records(std::span<const OutcomeRecord> records) {
    if (records.size() < 2) {
        throw std::invalid_argument("parity encoding needs at least 2 records");
    }
    std::set<TerminalId> seen;
    for (const auto &r : records) {
        if (!seen.insert(r.terminal).second) {
            throw std::invalid_argument("duplicate terminal id " + std::to_string(r.terminal) + " in records");
        }
        if (r.b.size() != records.front().b.size()) {
            throw std::invalid_argument("records carry different X-lane widths");
        }
    }
}

ParityMessage xor_records(std::span<const OutcomeRecord> records, ChannelId channel) {
    ParityMessage m;
    m.channel = channel;
    m.b.assign(records.front().b.size(), 0);
    for (const auto &r : records) {
        if (r.terminal == channel.excluded) {
            continue;
        }
        m.a.flip ^= r.a.flip;
        m.a.sign ^= r.a.sign;
        for (std::size_t k = 0; k < m.b.size(); k++) {
            m.b[k] ^= r.b[k];
        }
    }
    return m;
}

const ParityMessage &find_channel(std::span<const ParityMessage> messages, ChannelId id) {
    auto it = std::find_if(messages.begin(), messages.end(), [&](const ParityMessage &m) { return m.channel == id; });
    if (it == messages.end()) {
        throw std::invalid_argument("missing channel message " + id.name());
    }
    return *it;
}

}  // namespace

ParityMessage encode_full_parity(std::span<const OutcomeRecord> records) {
    check_records(records);
    return xor_records(records, ChannelId{0});
}

ParityMessage encode_parity_without(std::span<const OutcomeRecord> records, TerminalId excluded) {
    check_records(records);
    bool present = std::any_of(records.begin(), records.end(), [&](const auto &r) { return r.terminal == excluded; });
    if (!present || excluded == 0) {
        throw std::invalid_argument("terminal " + std::to_string(excluded) + " is not among the records");
    }
    return xor_records(records, ChannelId{excluded});
}

std::vector<ParityMessage> encode_all_channels(std::span<const OutcomeRecord> records) {
    std::vector<ParityMessage> out;
    out.reserve(records.size() + 1);
    out.push_back(encode_full_parity(records));
    for (const auto &r : records) {
        out.push_back(encode_parity_without(records, r.terminal));
    }
    return out;
}

OutcomeRecord reconstruct_record(std::span<const ParityMessage> messages, TerminalId j) {
    const ParityMessage &total = find_channel(messages, ChannelId{0});
    const ParityMessage &without = find_channel(messages, ChannelId{j});
    if (total.b.size() != without.b.size()) {
        throw std::invalid_argument("channel messages carry different X-lane widths");
    }
    OutcomeRecord r;
    r.terminal = j;
    r.a = {static_cast<Bit>(total.a.flip ^ without.a.flip), static_cast<Bit>(total.a.sign ^ without.a.sign)};
    r.b.resize(total.b.size());
    for (std::size_t k = 0; k < r.b.size(); k++) {
        r.b[k] = total.b[k] ^ without.b[k];
    }
    return r;
}

std::size_t pair_label_for_excluded(TerminalId excluded) {
    if (excluded < 1 || excluded > 3) {
        throw std::out_of_range("pair labels exist only for the three-terminal network");
    }
    return excluded % 3 + 1;
}

TerminalId excluded_for_pair_label(std::size_t label) {
    if (label < 1 || label > 3) {
        throw std::out_of_range("pair labels exist only for the three-terminal network");
    }
    return (label + 1) % 3 + 1;
}

std::string_view chirality_name(Chirality c) {
    return c == Chirality::kClockwise ? "clockwise" : "counterclockwise";
}

Chirality parse_chirality(std::string_view text) {
    if (text == "clockwise" || text == "cw") {
        return Chirality::kClockwise;
    }
    if (text == "counterclockwise" || text == "ccw") {
        return Chirality::kCounterclockwise;
    }
    throw std::invalid_argument("unknown chirality '" + std::string(text) + "'");
}

RoutingConfig::RoutingConfig(std::size_t n, Chirality chirality)
    : n_(n), chirality_(chirality), held_(n + 1, 0), measured_(n + 1) {
    if (n < 3) {
        throw std::invalid_argument("butterfly routing needs at least 3 terminals, got " + std::to_string(n));
    }
    auto step = [n](TerminalId t, bool forward) -> TerminalId { return forward ? t % n + 1 : (t + n - 2) % n + 1; };
    bool cw = chirality == Chirality::kClockwise;
    for (TerminalId t = 1; t <= n; t++) {
        held_[t] = step(t, !cw);
        TerminalId c = step(t, cw);
        for (std::size_t k = 0; k + 1 < n; k++, c = step(c, cw)) {
            if (c != held_[t]) {
                measured_[t].push_back(c);
            }
        }
    }
    validate();
}

TerminalId RoutingConfig::held_copy(TerminalId t) const {
    if (t < 1 || t > n_) {
        throw std::out_of_range("terminal " + std::to_string(t) + " out of range");
    }
    return held_[t];
}

const std::vector<TerminalId> &RoutingConfig::measured_copies(TerminalId t) const {
    if (t < 1 || t > n_) {
        throw std::out_of_range("terminal " + std::to_string(t) + " out of range");
    }
    return measured_[t];
}

TerminalId RoutingConfig::receiver_of(TerminalId copy) const {
    for (TerminalId t = 1; t <= n_; t++) {
        if (held_[t] == copy) {
            return t;
        }
    }
    throw std::out_of_range("copy " + std::to_string(copy) + " has no receiver");
}

std::vector<std::pair<TerminalId, std::size_t>> RoutingConfig::x_measurers_of(TerminalId copy) const {
    std::vector<std::pair<TerminalId, std::size_t>> out;
    for (TerminalId t = 1; t <= n_; t++) {
        const auto &m = measured_[t];
        auto it = std::find(m.begin(), m.end(), copy);
        if (it != m.end()) {
            out.emplace_back(t, static_cast<std::size_t>(it - m.begin()));
        }
    }
    return out;
}

void RoutingConfig::validate() const {
    std::vector<int> held_count(n_ + 1, 0);
    for (TerminalId t = 1; t <= n_; t++) {
        if (held_[t] == t || held_[t] < 1 || held_[t] > n_) {
            throw std::logic_error("held assignment is not a derangement");
        }
        held_count[held_[t]]++;
        if (measured_[t].size() != n_ - 2) {
            throw std::logic_error("each terminal must X-measure n-2 legs");
        }
        for (TerminalId c : measured_[t]) {
            if (c == t || c == held_[t]) {
                throw std::logic_error("terminal measures its Bell or held leg in the X basis");
            }
        }
    }
    for (TerminalId c = 1; c <= n_; c++) {
        if (held_count[c] != 1) {
            throw std::logic_error("each copy must be held by exactly one terminal");
        }
    }
}

PauliFrame correction_for_terminal(
    TerminalId t, const OutcomeRecord &own, std::span<const ParityMessage> messages, const RoutingConfig &routing) {
    if (own.terminal != t) {
        throw std::invalid_argument("own record belongs to a different terminal");
    }
    TerminalId copy = routing.held_copy(t);
    OutcomeRecord sender = reconstruct_record(messages, copy);
    Bit x_parity = 0;
    for (auto [m, slot] : routing.x_measurers_of(copy)) {
        OutcomeRecord r = reconstruct_record(messages, m);
        if (slot >= r.b.size()) {
            throw std::invalid_argument("parity messages are narrower than the routing requires");
        }
        x_parity ^= r.b[slot];
    }
    PauliFrame needed = outcome_to_frame(sender.a, x_parity);
    PauliFrame own_frame = outcome_to_frame(own.a, own.b_parity());
    return compose_frames(own_frame, needed);
}

}  // namespace ghznet
