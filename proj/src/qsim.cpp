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

#include "ghznet/qsim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ghznet {

struct StateAccess {
    static StateVector make(std::size_t num_qubits, std::vector<Complex> amplitudes) {
        return StateVector(num_qubits, std::move(amplitudes));
    }
    static std::vector<Complex> &amps(StateVector &s) {
        return s.amplitudes_;
    }
};

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kVanishing = 1e-300;

void check_qubit(const StateVector &state, std::size_t qubit) {
    if (qubit >= state.num_qubits()) {
        throw std::out_of_range(
            "qubit index " + std::to_string(qubit) + " out of range for " + std::to_string(state.num_qubits()) +
            "-qubit register");
    }
}

void check_pair(const StateVector &state, std::size_t i, std::size_t j) {
    check_qubit(state, i);
    check_qubit(state, j);
    if (i == j) {
        throw std::invalid_argument("two-qubit operation needs distinct qubits, got " + std::to_string(i) + " twice");
    }
}

void check_size(std::size_t num_qubits) {
    if (num_qubits > kMaxQubits) {
        throw std::length_error(
            "register of " + std::to_string(num_qubits) + " qubits exceeds the " + std::to_string(kMaxQubits) +
            "-qubit cap");
    }
}

std::uint64_t mask_of(const StateVector &state, std::size_t qubit) {
    return std::uint64_t{1} << (state.num_qubits() - 1 - qubit);
}

/// Expands a reduced-register index into a full index with zeros at the removed bit positions.
/// `removed_shifts` must be sorted ascending.
std::uint64_t scatter(std::uint64_t reduced, std::span<const std::size_t> removed_shifts) {
    for (std::size_t s : removed_shifts) {
        std::uint64_t low = reduced & ((std::uint64_t{1} << s) - 1);
        reduced = ((reduced >> s) << (s + 1)) | low;
    }
    return reduced;
}

/// Contracts `qubits` against a fixed bra given as coefficients over their 2^k local labels,
/// returning the unnormalized remainder.
template <std::size_t K>
std::vector<Complex> contract(
    const StateVector &state, const std::array<std::size_t, K> &qubits, const std::array<Complex, (1u << K)> &bra) {
    std::array<std::size_t, K> shifts;
    for (std::size_t k = 0; k < K; k++) {
        shifts[k] = state.num_qubits() - 1 - qubits[k];
    }
    std::array<std::size_t, K> sorted = shifts;
    std::sort(sorted.begin(), sorted.end());

    std::size_t out_qubits = state.num_qubits() - K;
    std::vector<Complex> out(std::size_t{1} << out_qubits);
    const auto &amps = state.amplitudes();
    for (std::uint64_t r = 0; r < out.size(); r++) {
        std::uint64_t base = scatter(r, sorted);
        Complex acc{};
        for (std::uint64_t label = 0; label < (1u << K); label++) {
            if (bra[label] == Complex{}) {
                continue;
            }
            std::uint64_t full = base;
            for (std::size_t k = 0; k < K; k++) {
                // Label bit for qubits[0] is the most significant.
                if ((label >> (K - 1 - k)) & 1) {
                    full |= std::uint64_t{1} << shifts[k];
                }
            }
            acc += std::conj(bra[label]) * amps[full];
        }
        out[r] = acc;
    }
    return out;
}

Projection finish_projection(std::vector<Complex> remainder) {
    double p = 0;
    for (const auto &a : remainder) {
        p += std::norm(a);
    }
    std::size_t n = 0;
    while ((std::size_t{1} << n) < remainder.size()) {
        n++;
    }
    if (p <= kVanishing) {
        std::fill(remainder.begin(), remainder.end(), Complex{});
        return {0.0, StateAccess::make(n, std::move(remainder))};
    }
    double scale = 1.0 / std::sqrt(p);
    for (auto &a : remainder) {
        a *= scale;
    }
    return {p, StateAccess::make(n, std::move(remainder))};
}

std::array<Complex, 4> bell_bra(BellOutcome outcome) {
    std::array<Complex, 4> bra{};
    double s = outcome.sign ? -kInvSqrt2 : kInvSqrt2;
    bra[outcome.flip ? 1 : 0] = kInvSqrt2;  // |0,flip>
    bra[outcome.flip ? 2 : 3] = s;          // |1,!flip>
    return bra;
}

template <typename Outcome, std::size_t N, typename Project>
Measured<Outcome> sample(const std::array<Outcome, N> &outcomes, Project project, RandomSource &rng) {
    std::array<Projection, N> branches;
    double total = 0;
    for (std::size_t k = 0; k < N; k++) {
        branches[k] = project(outcomes[k]);
        total += branches[k].probability;
    }
    if (total <= kVanishing) {
        throw std::logic_error("measurement branches carry no probability; state is not normalized");
    }
    double u = rng.uniform() * total;
    std::size_t last_possible = 0;
    for (std::size_t k = 0; k < N; k++) {
        if (!branches[k].possible()) {
            continue;
        }
        last_possible = k;
        if (u < branches[k].probability) {
            return {outcomes[k], std::move(branches[k].state)};
        }
        u -= branches[k].probability;
    }
    return {outcomes[last_possible], std::move(branches[last_possible].state)};
}

}  // namespace

StateVector::StateVector() : num_qubits_(0), amplitudes_{Complex{1.0, 0.0}} {
}

StateVector::StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < amplitudes.size()) {
        n++;
    }
    if (amplitudes.empty() || (std::size_t{1} << n) != amplitudes.size()) {
        throw std::invalid_argument("amplitude count " + std::to_string(amplitudes.size()) + " is not a power of two");
    }
    check_size(n);
    double p = 0;
    for (const auto &a : amplitudes) {
        p += std::norm(a);
    }
    if (!(p > kVanishing) || !std::isfinite(p)) {
        throw std::invalid_argument("degenerate state: amplitudes vanish or are not finite");
    }
    double scale = 1.0 / std::sqrt(p);
    for (auto &a : amplitudes) {
        a *= scale;
    }
    return StateVector(n, std::move(amplitudes));
}

StateVector StateVector::basis(std::size_t num_qubits, std::uint64_t index) {
    check_size(num_qubits);
    std::vector<Complex> amps(std::size_t{1} << num_qubits);
    if (index >= amps.size()) {
        throw std::out_of_range("basis index out of range");
    }
    amps[index] = 1.0;
    return StateVector(num_qubits, std::move(amps));
}

double StateVector::norm_squared() const {
    double p = 0;
    for (const auto &a : amplitudes_) {
        p += std::norm(a);
    }
    return p;
}

StateVector StateVector::permuted(std::span<const std::size_t> order) const {
    if (order.size() != num_qubits_) {
        throw std::invalid_argument("permutation length does not match register size");
    }
    std::vector<bool> seen(num_qubits_, false);
    for (std::size_t q : order) {
        if (q >= num_qubits_ || seen[q]) {
            throw std::invalid_argument("qubit order is not a permutation");
        }
        seen[q] = true;
    }
    std::vector<Complex> out(amplitudes_.size());
    std::size_t n = num_qubits_;
    for (std::uint64_t old_index = 0; old_index < amplitudes_.size(); old_index++) {
        std::uint64_t new_index = 0;
        for (std::size_t k = 0; k < n; k++) {
            std::uint64_t bit = (old_index >> (n - 1 - order[k])) & 1;
            new_index |= bit << (n - 1 - k);
        }
        out[new_index] = amplitudes_[old_index];
    }
    return StateVector(n, std::move(out));
}

StateVector StateVector::moved(std::size_t from, std::size_t to) const {
    check_qubit(*this, from);
    check_qubit(*this, to);
    std::vector<std::size_t> order;
    order.reserve(num_qubits_);
    for (std::size_t q = 0; q < num_qubits_; q++) {
        if (q != from) {
            order.push_back(q);
        }
    }
    order.insert(order.begin() + static_cast<std::ptrdiff_t>(to), from);
    return permuted(order);
}

StateVector prepare_arbitrary(Complex alpha, Complex beta) {
    return StateVector::from_amplitudes({alpha, beta});
}

StateVector prepare_plus() {
    return StateAccess::make(1, {Complex{kInvSqrt2, 0}, Complex{kInvSqrt2, 0}});
}

StateVector prepare_ghz(std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("GHZ state needs at least 2 qubits, got " + std::to_string(n));
    }
    check_size(n);
    std::vector<Complex> amps(std::size_t{1} << n);
    amps.front() = kInvSqrt2;
    amps.back() = kInvSqrt2;
    return StateAccess::make(n, std::move(amps));
}

StateVector tensor(const StateVector &a, const StateVector &b) {
    std::size_t n = a.num_qubits() + b.num_qubits();
    check_size(n);
    std::vector<Complex> out(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); i++) {
        for (std::size_t j = 0; j < b.size(); j++) {
            out[i * b.size() + j] = a[i] * b[j];
        }
    }
    return StateAccess::make(n, std::move(out));
}

StateVector apply_pauli(StateVector state, Pauli which, std::size_t qubit) {
    check_qubit(state, qubit);
    auto &amps = StateAccess::amps(state);
    std::uint64_t m = mask_of(state, qubit);
    bool do_z = which == Pauli::Z || which == Pauli::XZ;
    bool do_x = which == Pauli::X || which == Pauli::XZ;
    // XZ is the operator product sigma_x sigma_z: Z acts first.
    if (do_z) {
        for (std::uint64_t i = 0; i < amps.size(); i++) {
            if (i & m) {
                amps[i] = -amps[i];
            }
        }
    }
    if (do_x) {
        for (std::uint64_t i = 0; i < amps.size(); i++) {
            if (!(i & m)) {
                std::swap(amps[i], amps[i | m]);
            }
        }
    }
    return state;
}

StateVector apply_cphase(StateVector state, std::size_t i, std::size_t j) {
    check_pair(state, i, j);
    auto &amps = StateAccess::amps(state);
    std::uint64_t both = mask_of(state, i) | mask_of(state, j);
    for (std::uint64_t k = 0; k < amps.size(); k++) {
        if ((k & both) == both) {
            amps[k] = -amps[k];
        }
    }
    return state;
}

Projection project_bell(const StateVector &state, std::size_t q1, std::size_t q2, BellOutcome outcome) {
    check_pair(state, q1, q2);
    return finish_projection(contract<2>(state, {q1, q2}, bell_bra(outcome)));
}

Measured<BellOutcome> measure_bell(const StateVector &state, std::size_t q1, std::size_t q2, RandomSource &rng) {
    check_pair(state, q1, q2);
    static constexpr std::array<BellOutcome, 4> kOutcomes{
        BellOutcome{0, 0}, BellOutcome{0, 1}, BellOutcome{1, 0}, BellOutcome{1, 1}};
    return sample(kOutcomes, [&](BellOutcome o) { return project_bell(state, q1, q2, o); }, rng);
}

Projection project_x(const StateVector &state, std::size_t qubit, Bit outcome) {
    check_qubit(state, qubit);
    std::array<Complex, 2> bra{kInvSqrt2, outcome ? -kInvSqrt2 : kInvSqrt2};
    return finish_projection(contract<1>(state, {qubit}, bra));
}

Measured<Bit> measure_x(const StateVector &state, std::size_t qubit, RandomSource &rng) {
    check_qubit(state, qubit);
    static constexpr std::array<Bit, 2> kOutcomes{0, 1};
    return sample(kOutcomes, [&](Bit o) { return project_x(state, qubit, o); }, rng);
}

Projection project_z(const StateVector &state, std::size_t qubit, Bit outcome) {
    check_qubit(state, qubit);
    std::array<Complex, 2> bra{};
    bra[outcome ? 1 : 0] = 1.0;
    return finish_projection(contract<1>(state, {qubit}, bra));
}

Measured<Bit> measure_z(const StateVector &state, std::size_t qubit, RandomSource &rng) {
    check_qubit(state, qubit);
    static constexpr std::array<Bit, 2> kOutcomes{0, 1};
    return sample(kOutcomes, [&](Bit o) { return project_z(state, qubit, o); }, rng);
}

Complex inner_product(const StateVector &a, const StateVector &b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw std::invalid_argument("inner product of registers with different sizes");
    }
    Complex acc{};
    for (std::size_t i = 0; i < a.size(); i++) {
        acc += std::conj(a[i]) * b[i];
    }
    return acc;
}

double overlap_fidelity(const StateVector &a, const StateVector &b) {
    return std::norm(inner_product(a, b));
}

double fidelity_with_pure(const StateVector &state, std::span<const std::size_t> kept, const StateVector &target) {
    if (kept.size() != target.num_qubits()) {
        throw std::invalid_argument(
            "fidelity target has " + std::to_string(target.num_qubits()) + " qubits but " +
            std::to_string(kept.size()) + " were kept");
    }
    std::vector<std::size_t> kept_shifts;
    for (std::size_t q : kept) {
        check_qubit(state, q);
        kept_shifts.push_back(state.num_qubits() - 1 - q);
    }
    std::vector<std::size_t> sorted = kept_shifts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("kept qubits must be distinct");
    }
    std::size_t k = kept.size();
    std::size_t env_count = std::size_t{1} << (state.num_qubits() - k);
    double total = 0;
    for (std::uint64_t env = 0; env < env_count; env++) {
        std::uint64_t base = scatter(env, sorted);
        Complex acc{};
        for (std::uint64_t label = 0; label < target.size(); label++) {
            std::uint64_t full = base;
            for (std::size_t j = 0; j < k; j++) {
                if ((label >> (k - 1 - j)) & 1) {
                    full |= std::uint64_t{1} << kept_shifts[j];
                }
            }
            acc += std::conj(target[label]) * state[full];
        }
        total += std::norm(acc);
    }
    return std::clamp(total, 0.0, 1.0);
}

DensityMatrix reduced_density_matrix(const StateVector &state, std::span<const std::size_t> kept) {
    std::vector<std::size_t> kept_shifts;
    for (std::size_t q : kept) {
        check_qubit(state, q);
        kept_shifts.push_back(state.num_qubits() - 1 - q);
    }
    std::vector<std::size_t> sorted = kept_shifts;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("kept qubits must be distinct");
    }
    std::size_t k = kept.size();
    std::size_t dim = std::size_t{1} << k;
    std::vector<std::uint64_t> offsets(dim);
    for (std::uint64_t label = 0; label < dim; label++) {
        for (std::size_t j = 0; j < k; j++) {
            if ((label >> (k - 1 - j)) & 1) {
                offsets[label] |= std::uint64_t{1} << kept_shifts[j];
            }
        }
    }
    DensityMatrix rho;
    rho.dim = dim;
    rho.entries.assign(dim * dim, Complex{});
    std::size_t env_count = std::size_t{1} << (state.num_qubits() - k);
    for (std::uint64_t env = 0; env < env_count; env++) {
        std::uint64_t base = scatter(env, sorted);
        for (std::size_t r = 0; r < dim; r++) {
            Complex ar = state[base | offsets[r]];
            if (ar == Complex{}) {
                continue;
            }
            for (std::size_t c = 0; c < dim; c++) {
                rho.entries[r * dim + c] += ar * std::conj(state[base | offsets[c]]);
            }
        }
    }
    return rho;
}

double max_abs_difference(const DensityMatrix &a, const DensityMatrix &b) {
    if (a.dim != b.dim) {
        throw std::invalid_argument("density matrices have different dimensions");
    }
    double worst = 0;
    for (std::size_t i = 0; i < a.entries.size(); i++) {
        worst = std::max(worst, std::abs(a.entries[i] - b.entries[i]));
    }
    return worst;
}

double pauli_expectation(const StateVector &state, std::span<const PauliTerm> terms) {
    StateVector image = state;
    for (const auto &t : terms) {
        if (t.op == Pauli::XZ) {
            throw std::invalid_argument("pauli_expectation takes Hermitian X/Z factors only");
        }
        image = apply_pauli(std::move(image), t.op, t.qubit);
    }
    return inner_product(state, image).real();
}

}  // namespace ghznet
