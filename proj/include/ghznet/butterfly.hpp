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

#ifndef GHZNET_BUTTERFLY_HPP
#define GHZNET_BUTTERFLY_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ghznet/coding.hpp"
#include "ghznet/qsim.hpp"

namespace ghznet {

struct InputAmplitudes {
    Complex alpha{1.0, 0.0};
    Complex beta{0.0, 0.0};
};

/// Draws `count` random normalized single-qubit inputs.
std::vector<InputAmplitudes> random_inputs(std::size_t count, RandomSource &rng);

/// One physical qubit of the network: `copy == 0` is the terminal's own input qubit,
/// otherwise the terminal's leg of GHZ copy `copy`.
struct QubitLabel {
    TerminalId terminal = 0;
    TerminalId copy = 0;

    std::string name() const;
    friend bool operator==(const QubitLabel &, const QubitLabel &) = default;
};

/// n senders, each with an input qubit and one leg of each of n GHZ copies.
///
/// Copies never interact, so they are stored (and simulated) separately. `ghz_copies[c-1]`
/// is copy c with its leg for terminal t at register position t-1. Tests may overwrite a copy
/// to inject a faulty resource.
struct ButterflyInstance {
    std::size_t n = 0;
    std::vector<InputAmplitudes> input_amplitudes;
    std::vector<StateVector> inputs;
    std::vector<StateVector> ghz_copies;

    std::size_t total_qubits() const {
        return n * n + n;
    }
    /// Terminal-major layout of the composite register: input, then legs of copies 1..n.
    std::vector<QubitLabel> composite_layout() const;
};

ButterflyInstance build_instance(std::size_t n, std::span<const InputAmplitudes> inputs);

struct ProtocolTranscript {
    std::size_t n = 0;
    Chirality chirality = Chirality::kClockwise;
    std::uint64_t branch_index = 0;
    /// Product of the forced or sampled outcome probabilities.
    double probability = 1.0;
    std::vector<InputAmplitudes> inputs;
    std::vector<OutcomeRecord> outcomes;
    std::vector<ParityMessage> messages;
    /// Per terminal: frame from its own outcomes, then the parity-derived frame.
    std::vector<PauliFrame> own_frames;
    std::vector<PauliFrame> corrections;
    /// Per terminal: held qubit after all measurements, before any correction.
    std::vector<StateVector> received;
    std::vector<StateVector> final_states;
    std::vector<double> final_fidelities;
    std::vector<std::string> relabel_log;

    bool possible() const {
        return probability > 0.0;
    }
};

/// Bits consumed by one protocol round: 2 Bell bits per terminal plus one bit per X-measured
/// leg (n-2 per terminal), i.e. n^2.
std::size_t outcome_bit_count(std::size_t n);

/// Samples every measurement with `rng`.
ProtocolTranscript run_round(const ButterflyInstance &instance, const RoutingConfig &routing, RandomSource &rng);

/// Forces the outcomes encoded in `branch_index` (most significant bit first, in measurement
/// order: Bell outcomes of terminals 1..n as (flip, sign), then X outcomes terminal by
/// terminal in routing order) and records the branch probability.
ProtocolTranscript run_branch(const ButterflyInstance &instance, const RoutingConfig &routing,
                              std::uint64_t branch_index);

/// Same branch simulated on the single composite register of n^2 + n qubits; only feasible
/// while that register fits under the qubit cap.
ProtocolTranscript run_composite_branch(const ButterflyInstance &instance, const RoutingConfig &routing,
                                        std::uint64_t branch_index);

/// Optional tampering hook applied to the parity messages before decoding.
using MessageTamper = std::function<void(std::vector<ParityMessage> &)>;

class EnumerationBudgetExceeded : public std::runtime_error {
   public:
    EnumerationBudgetExceeded(std::uint64_t requested, std::uint64_t budget);

    std::uint64_t requested() const {
        return requested_;
    }
    std::uint64_t budget() const {
        return budget_;
    }

   private:
    std::uint64_t requested_;
    std::uint64_t budget_;
};

struct EnumerationOptions {
    std::uint64_t max_branches = std::uint64_t{1} << 16;
    std::size_t threads = 1;
    MessageTamper tamper;
};

/// Visits every branch in index order. Per-copy post-measurement states are computed once per
/// local outcome pattern; the classical layer runs per branch.
void for_each_branch(const ButterflyInstance &instance, const RoutingConfig &routing,
                     const std::function<void(const ProtocolTranscript &)> &visit,
                     const EnumerationOptions &options = {});

std::vector<ProtocolTranscript> enumerate_branches(const ButterflyInstance &instance, const RoutingConfig &routing,
                                                   const EnumerationOptions &options = {});

struct ChannelCost {
    std::string channel;
    std::size_t bits = 0;
};
std::vector<ChannelCost> classical_cost(const ProtocolTranscript &transcript);

/// One branch of a sender-to-receiver path driven by an external register.
struct PathBranch {
    double probability = 0.0;
    StateVector state;
};

/// Runs every protocol branch with the input of the copy routed to `receiver` taken from qubit
/// `qubit` of `external`. Each branch returns the external register with the delivered,
/// fully corrected qubit back at position `qubit`.
std::vector<PathBranch> transmit_through(const ButterflyInstance &instance, const RoutingConfig &routing,
                                         TerminalId receiver, const StateVector &external, std::size_t qubit,
                                         const EnumerationOptions &options = {});

/// Line-oriented transcript block (INPUTS / OUTCOMES / MESSAGES / CORRECTIONS / FIDELITIES).
std::string format_transcript(const ProtocolTranscript &transcript);

}  // namespace ghznet

#endif
