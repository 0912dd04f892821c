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

#ifndef DFE_STATE_VECTOR_H
#define DFE_STATE_VECTOR_H

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dfe {

inline constexpr int kMaxQubits = 12;

using Amplitude = std::complex<double>;

/// Raised when operands disagree on qubit count or Hilbert-space dimension.
class DimensionError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Pure n-qubit state. Basis index bit (n - 1 - j) holds qubit j, so qubit 0
/// is the most significant bit and the leftmost tensor factor.
struct StateVector {
    int num_qubits = 0;
    std::vector<Amplitude> amplitudes;

    StateVector() = default;
    StateVector(int num_qubits, std::vector<Amplitude> amplitudes);

    std::size_t dimension() const {
        return amplitudes.size();
    }
    double norm_sq() const;
};

/// Throws DimensionError unless 1 <= n <= kMaxQubits.
void check_qubit_count(int n);

/// Throws std::invalid_argument when |<psi|psi> - 1| exceeds tolerance.
void check_normalized(const StateVector &psi, double tolerance = 1e-8);

}  // namespace dfe

#endif
