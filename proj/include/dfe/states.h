// Copyright 2026 The DFE Grouping Authors
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

#ifndef DFE_STATES_H
#define DFE_STATES_H

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "dfe/pauli_string.h"
#include "dfe/state_vector.h"

namespace dfe {

class MeasurementBasis;

enum class StateKind { kHaar, kW, kGhz };

std::string_view to_string(StateKind kind);
StateKind parse_state_kind(std::string_view text);

/// Haar: normalized vector of i.i.d. standard complex Gaussians drawn from `seed`.
/// W and GHZ ignore the seed.
StateVector make_state(StateKind kind, int n, std::uint64_t seed);

struct PauliTerm {
    PauliString pauli;
    double coefficient = 0;

    bool operator==(const PauliTerm &) const = default;
};

/// Target-state coefficients b_k = <psi|P_k|psi> / sqrt(d) of every Pauli string
/// whose magnitude exceeds the threshold, in canonical (x_bits, z_bits) order.
struct CoefficientTable {
    int num_qubits = 0;
    std::vector<PauliTerm> entries;

    std::size_t dimension() const {
        return std::size_t{1} << num_qubits;
    }
    /// Zero for strings that were not stored.
    double coefficient(const PauliString &p) const;
    double sum_of_squares() const;
};

/// Enumerates all 4^n Pauli strings. The identity entry is set to exactly 1/sqrt(d).
CoefficientTable pauli_coefficients(const StateVector &psi, double threshold = 1e-12);

/// CSV with header `pauli,coefficient`.
void write_coefficients_csv(const CoefficientTable &table, std::ostream &out);
CoefficientTable read_coefficients_csv(std::istream &in);

/// Depolarized copy of a pure state: sigma = (1 - p)|psi><psi| + p 1/d.
/// Kept in factored form; never expanded to a density matrix.
struct NoisyState {
    StateVector target;
    double p = 0;

    NoisyState(StateVector target, double p);

    std::size_t dimension() const {
        return target.dimension();
    }
};

/// Tr(rho sigma) for rho = |psi><psi| the state sigma was built from: (1 - p) + p/d.
double true_fidelity(const NoisyState &sigma);

/// Tr(rho sigma) for an arbitrary pure target: (1 - p)|<target|psi_sigma>|^2 + p/d.
/// The overlap is divided by both squared norms so identical states give exactly 1.
double fidelity(const StateVector &target, const NoisyState &sigma);

/// a_k = Tr(sigma P_k)/sqrt(d) given b_k of sigma's underlying pure state.
double noisy_coefficient(const NoisyState &sigma, const PauliTerm &term);

/// (1 - p)|<r|psi>|^2 + p/d for each basis vector |r>.
std::vector<double> outcome_probabilities(const NoisyState &sigma, const MeasurementBasis &basis);

}  // namespace dfe

#endif
