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

#ifndef GHZNET_CODING_HPP
#define GHZNET_CODING_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghznet/qsim.hpp"

namespace ghznet {

/// Terminals and GHZ copies are numbered from 1.
using TerminalId = std::size_t;

/// Pending Pauli correction X^x Z^z, composed by XOR.
struct PauliFrame {
    Bit x = 0;
    Bit z = 0;

    Pauli as_pauli() const;
    std::string name() const;

    friend bool operator==(const PauliFrame &, const PauliFrame &) = default;
};

/// Correction restoring the sender's state after a Bell outcome and the X-basis parity
/// collected on the same GHZ copy.
PauliFrame outcome_to_frame(BellOutcome a, Bit b);
PauliFrame compose_frames(PauliFrame f, PauliFrame g);
/// Applies the frame to one qubit: Z first, then X.
StateVector apply_frame(StateVector state, PauliFrame frame, std::size_t qubit);

/// Classical record of one terminal's measurements. `b` holds one bit per X-measured qubit,
/// in the order given by the routing; at n = 3 it has exactly one entry.
struct OutcomeRecord {
    TerminalId terminal = 0;
    BellOutcome a;
    std::vector<Bit> b;

    Bit b_parity() const;
    friend bool operator==(const OutcomeRecord &, const OutcomeRecord &) = default;
};

/// Channel 0 is E (all terminals); channel j >= 1 is E_j (all terminals except j).
struct ChannelId {
    std::size_t excluded = 0;

    bool is_total() const {
        return excluded == 0;
    }
    std::string name() const;
    static ChannelId parse(std::string_view text);

    friend auto operator<=>(const ChannelId &, const ChannelId &) = default;
};

struct ParityMessage {
    ChannelId channel;
    BellOutcome a;
    std::vector<Bit> b;

    std::size_t payload_bits() const {
        return 2 + b.size();
    }
    /// `<channel> a_flip a_sign b...` as ASCII bits, e.g. `E2 0 1 1`.
    std::string serialize() const;
    static ParityMessage parse(std::string_view line);

    friend bool operator==(const ParityMessage &, const ParityMessage &) = default;
};

ParityMessage encode_full_parity(std::span<const OutcomeRecord> records);
ParityMessage encode_parity_without(std::span<const OutcomeRecord> records, TerminalId excluded);
/// E followed by E_j for every terminal present, in record order.
std::vector<ParityMessage> encode_all_channels(std::span<const OutcomeRecord> records);

/// Recovers terminal j's record as E xor E_j.
OutcomeRecord reconstruct_record(std::span<const ParityMessage> messages, TerminalId j);

/// Channel label for the three-terminal network that names E_j by the pair it keeps
/// (E1 = X1+X2, E2 = X2+X3, E3 = X1+X3). Maps excluded-terminal numbering to that label.
std::size_t pair_label_for_excluded(TerminalId excluded);
TerminalId excluded_for_pair_label(std::size_t label);

enum class Chirality { kClockwise, kCounterclockwise };
std::string_view chirality_name(Chirality c);
Chirality parse_chirality(std::string_view text);

/// Who measures and who keeps which GHZ copy.
///
/// Terminal t Bell-measures its leg of copy t, keeps its leg of copy held(t) and X-measures
/// every other leg. Clockwise routing keeps copy t-1 (wrapping), so terminal 1 receives the
/// state of terminal n; counterclockwise keeps copy t+1.
class RoutingConfig {
   public:
    RoutingConfig(std::size_t n, Chirality chirality);

    std::size_t n() const {
        return n_;
    }
    Chirality chirality() const {
        return chirality_;
    }
    TerminalId held_copy(TerminalId t) const;
    /// Copies X-measured by terminal t, in measurement order.
    const std::vector<TerminalId> &measured_copies(TerminalId t) const;
    /// Terminal holding the surviving leg of `copy`.
    TerminalId receiver_of(TerminalId copy) const;
    /// Terminals that X-measure a leg of `copy`, with the slot each uses in its record.
    std::vector<std::pair<TerminalId, std::size_t>> x_measurers_of(TerminalId copy) const;
    /// Throws std::logic_error if held/measured assignments break the derangement invariants.
    void validate() const;

   private:
    std::size_t n_;
    Chirality chirality_;
    std::vector<TerminalId> held_;
    std::vector<std::vector<TerminalId>> measured_;
};

/// The frame terminal t applies after its own-outcome frame so that its held qubit carries the
/// routed sender's state. Only `own` and the parity messages are read.
PauliFrame correction_for_terminal(
    TerminalId t, const OutcomeRecord &own, std::span<const ParityMessage> messages, const RoutingConfig &routing);

}  // namespace ghznet

#endif
