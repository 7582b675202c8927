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

#ifndef GHZNET_QSIM_HPP
#define GHZNET_QSIM_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace ghznet {

using Complex = std::complex<double>;
using Bit = std::uint8_t;

/// Hard cap on the dense register size.
inline constexpr std::size_t kMaxQubits = 24;
/// Tolerance for single-operation exactness claims.
inline constexpr double kExactTol = 1e-12;
/// Tolerance for accumulated multi-step protocol checks.
inline constexpr double kProtocolTol = 1e-9;

/// Deterministic 64-bit stream. Identical seeds give identical draws on every platform,
/// so uniforms are built from raw engine output rather than std::uniform_real_distribution.
class RandomSource {
   public:
    explicit RandomSource(std::uint64_t seed) : engine_(seed), seed_(seed) {
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    std::uint64_t next_u64() {
        return engine_();
    }
    std::uint64_t seed() const {
        return seed_;
    }

   private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

/// Normalized amplitude vector over an ordered qubit register.
///
/// Qubit 0 is the most significant position of the basis label, so for a 3-qubit register
/// the amplitude of |q0 q1 q2> = |110> sits at index 6.
class StateVector {
   public:
    /// The empty register (one amplitude equal to 1).
    StateVector();

    /// Builds a state from raw amplitudes, renormalizing. Length must be a power of two and
    /// the vector must not vanish.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes);
    static StateVector basis(std::size_t num_qubits, std::uint64_t index);

    std::size_t num_qubits() const {
        return num_qubits_;
    }
    std::size_t size() const {
        return amplitudes_.size();
    }
    const std::vector<Complex> &amplitudes() const {
        return amplitudes_;
    }
    Complex operator[](std::size_t index) const {
        return amplitudes_[index];
    }
    double norm_squared() const;

    /// Reorders qubits: qubit k of the result is qubit `order[k]` of this state.
    StateVector permuted(std::span<const std::size_t> order) const;
    /// Moves one qubit to a new position, shifting the others to keep their relative order.
    StateVector moved(std::size_t from, std::size_t to) const;

   private:
    friend struct StateAccess;
    StateVector(std::size_t num_qubits, std::vector<Complex> amplitudes);

    std::size_t num_qubits_;
    std::vector<Complex> amplitudes_;
};

enum class Pauli { I, X, Z, XZ };

/// Outcome of a Bell measurement on (q1, q2).
///
/// The outcome selects the projector (|0,flip> + (-1)^sign |1,!flip>)/sqrt(2). With an input
/// a|0>+b|1> on q1 and one GHZ leg on q2, outcome (0,0) leaves the remaining legs in
/// a|0..0>+b|1..1>, (0,1) in a|0..0>-b|1..1>, (1,0) in a|1..1>+b|0..0> and (1,1) in
/// a|1..1>-b|0..0>.
struct BellOutcome {
    Bit flip = 0;
    Bit sign = 0;

    friend bool operator==(const BellOutcome &, const BellOutcome &) = default;
};

/// Result of forcing a particular measurement outcome.
struct Projection {
    double probability = 0.0;
    /// Renormalized post-measurement state; meaningless when `probability` is zero.
    StateVector state;

    bool possible() const {
        return probability > 0.0;
    }
};

template <typename Outcome>
struct Measured {
    Outcome outcome;
    StateVector state;
};

StateVector prepare_arbitrary(Complex alpha, Complex beta);
StateVector prepare_plus();
StateVector prepare_ghz(std::size_t n);
StateVector tensor(const StateVector &a, const StateVector &b);

StateVector apply_pauli(StateVector state, Pauli which, std::size_t qubit);
StateVector apply_cphase(StateVector state, std::size_t i, std::size_t j);

/// Bell-basis projections. The measured qubits are removed from the register.
Projection project_bell(const StateVector &state, std::size_t q1, std::size_t q2, BellOutcome outcome);
Measured<BellOutcome> measure_bell(const StateVector &state, std::size_t q1, std::size_t q2, RandomSource &rng);

/// X-basis projection: outcome 0 is |+>, outcome 1 is |->.
Projection project_x(const StateVector &state, std::size_t qubit, Bit outcome);
Measured<Bit> measure_x(const StateVector &state, std::size_t qubit, RandomSource &rng);

Projection project_z(const StateVector &state, std::size_t qubit, Bit outcome);
Measured<Bit> measure_z(const StateVector &state, std::size_t qubit, RandomSource &rng);

Complex inner_product(const StateVector &a, const StateVector &b);
/// Phase-insensitive overlap |<a|b>|^2.
double overlap_fidelity(const StateVector &a, const StateVector &b);

/// <target| rho |target> where rho is the reduced state of `kept` (in that order).
double fidelity_with_pure(const StateVector &state, std::span<const std::size_t> kept, const StateVector &target);

/// Row-major reduced density matrix over `kept` (in that order).
struct DensityMatrix {
    std::size_t dim = 1;
    std::vector<Complex> entries{Complex{1.0, 0.0}};

    Complex operator()(std::size_t row, std::size_t col) const {
        return entries[row * dim + col];
    }
};
DensityMatrix reduced_density_matrix(const StateVector &state, std::span<const std::size_t> kept);
double max_abs_difference(const DensityMatrix &a, const DensityMatrix &b);

struct PauliTerm {
    std::size_t qubit;
    Pauli op;
};
/// Re <psi| P |psi> for a product of X and Z factors on distinct qubits.
double pauli_expectation(const StateVector &state, std::span<const PauliTerm> terms);

}  // namespace ghznet

#endif
