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

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ghznet {

namespace {

constexpr double kBoundConstant = 2.8512;

StateVector reinsert_basis(const StateVector &rest, std::size_t qubit, Bit value) {
    StateVector s = tensor(rest, StateVector::basis(1, value));
    return s.moved(s.num_qubits() - 1, qubit);
}

}  // namespace

ChannelSimulator identity_channel() {
    return [](const StateVector &s, std::size_t) { return std::vector<ChannelBranch>{{1.0, s}}; };
}

ChannelSimulator measure_and_resend_channel() {
    return [](const StateVector &s, std::size_t q) {
        std::vector<ChannelBranch> out;
        for (Bit m : {Bit{0}, Bit{1}}) {
            Projection p = project_z(s, q, m);
            if (p.possible()) out.push_back({p.probability, reinsert_basis(p.state, q, m)});
        }
        return out;
    };
}

ChannelSimulator replacement_channel() {
    // Tracing the qubit out equals measuring it and forgetting the result.
    return [](const StateVector &s, std::size_t q) {
        std::vector<ChannelBranch> out;
        for (Bit m : {Bit{0}, Bit{1}}) {
            Projection p = project_z(s, q, m);
            if (!p.possible()) continue;
            for (Bit k : {Bit{0}, Bit{1}}) out.push_back({0.5 * p.probability, reinsert_basis(p.state, q, k)});
        }
        return out;
    };
}

ChannelSimulator compose_channels(ChannelSimulator first, ChannelSimulator second) {
    return [first = std::move(first), second = std::move(second)](const StateVector &s, std::size_t q) {
        std::vector<ChannelBranch> out;
        for (const auto &a : first(s, q)) {
            for (auto &b : second(a.state, q)) out.push_back({a.probability * b.probability, std::move(b.state)});
        }
        return out;
    };
}

ChannelSimulator mix_channels(double p, ChannelSimulator a, ChannelSimulator b) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("mixing weight must lie in [0, 1]");
    }
    return [p, a = std::move(a), b = std::move(b)](const StateVector &s, std::size_t q) {
        std::vector<ChannelBranch> out;
        for (auto &x : a(s, q)) out.push_back({p * x.probability, std::move(x.state)});
        for (auto &x : b(s, q)) out.push_back({(1.0 - p) * x.probability, std::move(x.state)});
        return out;
    };
}

double entanglement_fidelity(const ChannelSimulator &channel) {
    const StateVector phi_plus = prepare_ghz(2);
    double total = 0.0, fidelity = 0.0;
    for (const auto &b : channel(phi_plus, 1)) {
        if (b.state.num_qubits() != 2) {
            throw std::invalid_argument("channel changed the register width");
        }
        total += b.probability;
        fidelity += b.probability * overlap_fidelity(phi_plus, b.state);
    }
    if (std::abs(total - 1.0) > kExactTol) {
        throw std::logic_error("channel branch probabilities sum to " + std::to_string(total));
    }
    return fidelity;
}

ChannelSimulator protocol_channel(ButterflyInstance instance, RoutingConfig routing, TerminalId receiver,
                                  EnumerationOptions options) {
    routing.held_copy(receiver);
    return [instance = std::move(instance), routing, receiver, options = std::move(options)](const StateVector &s,
                                                                                               std::size_t q) {
        std::vector<ChannelBranch> out;
        for (auto &b : transmit_through(instance, routing, receiver, s, q, options)) {
            out.push_back({b.probability, std::move(b.state)});
        }
        return out;
    };
}

double bound_threshold(std::size_t d) {
    if (d == 0) {
        throw std::invalid_argument("bound needs at least one channel");
    }
    return kBoundConstant * static_cast<double>(d) / static_cast<double>(d + 1);
}

BoundReport check_bound(std::span<const double> fidelities, std::size_t d) {
    if (fidelities.size() != d) {
        throw std::invalid_argument("expected " + std::to_string(d) + " fidelities, got " +
                                    std::to_string(fidelities.size()));
    }
    for (double f : fidelities) {
        if (!(f >= -kExactTol && f <= 1.0 + kExactTol)) {
            throw std::invalid_argument("fidelity " + std::to_string(f) + " outside [0, 1]");
        }
    }
    BoundReport r;
    r.d = d;
    r.fidelities.assign(fidelities.begin(), fidelities.end());
    r.sum = std::accumulate(fidelities.begin(), fidelities.end(), 0.0);
    r.threshold = bound_threshold(d);
    r.satisfied = r.sum <= r.threshold + kExactTol;
    return r;
}

BoundReport baseline_no_entanglement(std::size_t n, Chirality chirality) {
    RoutingConfig routing(n, chirality);
    // Each sender reaches its receiver through the bottleneck: two relayed hops.
    auto hop = measure_and_resend_channel();
    std::vector<double> f;
    for (TerminalId t = 1; t <= n; t++) {
        routing.held_copy(t);
        f.push_back(entanglement_fidelity(compose_channels(hop, hop)));
    }
    return check_bound(f, n);
}

BoundReport entangled_protocol_bound(std::size_t n, Chirality chirality, EnumerationOptions options) {
    RoutingConfig routing(n, chirality);
    std::vector<InputAmplitudes> inputs(n);
    ButterflyInstance instance = build_instance(n, inputs);
    std::vector<double> f;
    for (TerminalId t = 1; t <= n; t++) {
        f.push_back(entanglement_fidelity(protocol_channel(instance, routing, t, options)));
    }
    return check_bound(f, n);
}

}  // namespace ghznet
