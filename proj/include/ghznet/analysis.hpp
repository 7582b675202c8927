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

#ifndef GHZNET_ANALYSIS_HPP
#define GHZNET_ANALYSIS_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ghznet/butterfly.hpp"
#include "ghznet/coding.hpp"
#include "ghznet/qsim.hpp"

namespace ghznet {

/// One outcome of a single-qubit channel: the whole register after the channel, with its weight.
struct ChannelBranch {
    double probability = 0.0;
    StateVector state;
};

/// Acts on qubit `qubit` of a register and returns every branch of the output ensemble. The
/// probabilities must sum to one and each state must keep the register's width.
using ChannelSimulator = std::function<std::vector<ChannelBranch>(const StateVector &, std::size_t qubit)>;

ChannelSimulator identity_channel();
/// Z-basis measurement followed by re-preparation of the observed basis state.
ChannelSimulator measure_and_resend_channel();
/// Discards the qubit and replaces it with the maximally mixed state.
ChannelSimulator replacement_channel();
/// `first`, then `second`.
ChannelSimulator compose_channels(ChannelSimulator first, ChannelSimulator second);
/// `a` with probability p, otherwise `b`.
ChannelSimulator mix_channels(double p, ChannelSimulator a, ChannelSimulator b);

/// Sends half of |Phi+> through the channel and returns the averaged overlap with |Phi+>.
double entanglement_fidelity(const ChannelSimulator &channel);

/// The sender-to-`receiver` path of the butterfly protocol, averaged over every branch.
ChannelSimulator protocol_channel(ButterflyInstance instance, RoutingConfig routing, TerminalId receiver,
                                  EnumerationOptions options = {});

struct BoundReport {
    std::size_t d = 0;
    std::vector<double> fidelities;
    double sum = 0.0;
    double threshold = 0.0;
    bool satisfied = false;
};

/// 2.8512 d / (d + 1).
double bound_threshold(std::size_t d);
/// Satisfied iff the fidelity sum is at most the threshold (with 1e-12 slack).
BoundReport check_bound(std::span<const double> fidelities, std::size_t d);

/// Per-terminal fidelities when every quantum hop of the routing is a measure-and-resend relay.
BoundReport baseline_no_entanglement(std::size_t n, Chirality chirality = Chirality::kClockwise);
/// Per-terminal fidelities of the entanglement-assisted protocol.
BoundReport entangled_protocol_bound(std::size_t n, Chirality chirality = Chirality::kClockwise,
                                     EnumerationOptions options = {});

}  // namespace ghznet

#endif
