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

#ifndef DFE_MEASUREMENT_H
#define DFE_MEASUREMENT_H

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "dfe/grouping.h"
#include "dfe/pauli_string.h"
#include "dfe/state_vector.h"

namespace dfe {

class NonCommutingGroupError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Random-weight diagonalization kept producing a basis that is not a common
/// eigenbasis of the group.
class DiagonalizationError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

enum class BasisKind { kProduct, kEntangled };

/// Orthonormal common eigenbasis {|r>} of a commuting group, together with the
/// eigenvalue c_l^(r) in {-1, +1} of every member l on every basis vector r.
///
/// Product bases are stored as one letter per qubit (outcome bit 0 is the +1
/// eigenstate of that letter); entangled bases as a dense column-major unitary.
class MeasurementBasis {
   public:
    static MeasurementBasis product(int num_qubits, std::string letters, std::span<const PauliString> members);
    static MeasurementBasis entangled(
        int num_qubits, std::vector<Amplitude> unitary, std::vector<std::int8_t> eigen_table,
        std::vector<PauliString> members);

    int num_qubits() const {
        return num_qubits_;
    }
    std::size_t dimension() const {
        return std::size_t{1} << num_qubits_;
    }
    BasisKind kind() const {
        return kind_;
    }
    /// Per-qubit measurement letters; empty for entangled bases.
    const std::string &letters() const {
        return letters_;
    }
    const std::vector<PauliString> &members() const {
        return members_;
    }
    int eigenvalue(std::size_t member, std::size_t outcome) const {
        return eigen_table_.at(member * dimension() + outcome);
    }
    /// Computational-basis amplitudes of |r>.
    std::vector<Amplitude> vector(std::size_t outcome) const;
    /// <r|psi> for every outcome r.
    std::vector<Amplitude> overlaps(const StateVector &psi) const;

   private:
    int num_qubits_ = 0;
    BasisKind kind_ = BasisKind::kProduct;
    std::string letters_;
    std::vector<Amplitude> unitary_;
    std::vector<std::int8_t> eigen_table_;
    std::vector<PauliString> members_;
};

/// QWC-compatible groups (always the case in QWC mode) get a product basis.
/// Other FC groups are diagonalized through a random combination of members,
/// verified member by member and redrawn up to five times.
MeasurementBasis common_eigenbasis(const PauliGroup &group, Commutation mode, std::uint64_t seed);

/// C_r = sum_l c_l^(r) b_l for every outcome r.
std::vector<double> outcome_values(const PauliGroup &group, const MeasurementBasis &basis);

struct OutcomeSample {
    std::vector<std::uint64_t> counts;  // indexed by outcome
    std::uint64_t total = 0;
};

/// Categorical sampler over a fixed outcome distribution.
class OutcomeSampler {
   public:
    /// Entries below -1e-12 or a total deviating from 1 by more than 1e-8 are rejected.
    explicit OutcomeSampler(std::span<const double> probs);

    /// Draws shot by shot, or through conditional binomials once shots exceed 4x the outcome count.
    void sample(std::uint64_t shots, std::mt19937_64 &rng, OutcomeSample &out);
    std::size_t size() const {
        return size_;
    }

   private:
    std::size_t size_;
    std::vector<double> probs_;
    std::discrete_distribution<std::size_t> dist_;
};

OutcomeSample sample_outcomes(std::span<const double> probs, std::uint64_t shots, std::uint64_t seed);

}  // namespace dfe

#endif
