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

#ifndef DFE_PAULI_STRING_H
#define DFE_PAULI_STRING_H

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "dfe/state_vector.h"

namespace dfe {

/// Commutation framework used to decide whether two Pauli strings can share a
/// measurement setting.
enum class Commutation {
    kQubitWise,  // QWC: every single-qubit factor pair commutes
    kFull,       // FC: the full operators commute
};

std::string_view to_string(Commutation mode);
Commutation parse_commutation(std::string_view text);

/// An n-qubit Pauli operator without sign, stored as symplectic bit masks.
///
/// Qubit j carries the letter I/X/Z/Y for (x_j, z_j) = (0,0)/(1,0)/(0,1)/(1,1).
/// The bit for qubit j sits at position (n - 1 - j) in both masks, which is
/// also its position in a computational basis index, so `x_bits` is exactly the
/// bit flip the operator applies to a basis state. In text form the leftmost
/// character is qubit 0 ("XIZY").
///
/// Ordering compares (n, x_bits, z_bits) lexicographically. That order is the
/// canonical tie-break used when sorting by coefficient magnitude.
class PauliString {
   public:
    PauliString() = default;
    PauliString(int num_qubits, std::uint32_t x_bits, std::uint32_t z_bits);

    static PauliString identity(int num_qubits);
    static PauliString from_str(std::string_view text);
    std::string str() const;

    int num_qubits() const {
        return num_qubits_;
    }
    std::uint32_t x_bits() const {
        return x_bits_;
    }
    std::uint32_t z_bits() const {
        return z_bits_;
    }
    std::size_t dimension() const {
        return std::size_t{1} << num_qubits_;
    }
    /// Qubits carrying a non-identity letter.
    std::uint32_t support() const {
        return x_bits_ | z_bits_;
    }
    bool is_identity() const {
        return (x_bits_ | z_bits_) == 0;
    }
    char letter(int qubit) const;

    friend auto operator<=>(const PauliString &, const PauliString &) = default;

   private:
    int num_qubits_ = 0;
    std::uint32_t x_bits_ = 0;
    std::uint32_t z_bits_ = 0;
};

std::ostream &operator<<(std::ostream &out, const PauliString &p);

/// QWC implies FC. Throws DimensionError on mismatched qubit counts.
bool commutes(const PauliString &p, const PauliString &q, Commutation mode);

/// P|psi> including the i phase contributed by every Y factor.
StateVector apply_pauli(const PauliString &p, const StateVector &psi);

/// <psi|P|psi>. psi must be normalized within 1e-8.
double expectation(const StateVector &psi, const PauliString &p);

}  // namespace dfe

#endif
