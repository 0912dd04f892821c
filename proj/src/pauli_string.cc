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

#include "dfe/pauli_string.h"

#include <bit>
#include <cmath>
#include <ostream>

namespace dfe {

StateVector::StateVector(int n, std::vector<Amplitude> amps) : num_qubits(n), amplitudes(std::move(amps)) {
    check_qubit_count(n);
    if (amplitudes.size() != (std::size_t{1} << n)) {
        throw DimensionError(
            "state of " + std::to_string(n) + " qubits needs " + std::to_string(std::size_t{1} << n) +
            " amplitudes, got " + std::to_string(amplitudes.size()));
    }
}

double StateVector::norm_sq() const {
    double total = 0;
    for (const auto &a : amplitudes) {
        total += std::norm(a);
    }
    return total;
}

void check_qubit_count(int n) {
    if (n < 1 || n > kMaxQubits) {
        throw DimensionError("qubit count " + std::to_string(n) + " outside [1, " + std::to_string(kMaxQubits) + "]");
    }
}

void check_normalized(const StateVector &psi, double tolerance) {
    double deviation = std::abs(psi.norm_sq() - 1.0);
    if (!(deviation <= tolerance)) {
        throw std::invalid_argument("state is not normalized (|norm^2 - 1| = " + std::to_string(deviation) + ")");
    }
}

std::string_view to_string(Commutation mode) {
    return mode == Commutation::kQubitWise ? "qwc" : "fc";
}

Commutation parse_commutation(std::string_view text) {
    if (text == "qwc" || text == "QWC") {
        return Commutation::kQubitWise;
    }
    if (text == "fc" || text == "FC") {
        return Commutation::kFull;
    }
    throw std::invalid_argument("unknown commutation mode '" + std::string(text) + "'");
}

PauliString::PauliString(int num_qubits, std::uint32_t x_bits, std::uint32_t z_bits)
    : num_qubits_(num_qubits), x_bits_(x_bits), z_bits_(z_bits) {
    check_qubit_count(num_qubits);
    std::uint32_t mask = (std::uint32_t{1} << num_qubits) - 1;
    if ((x_bits | z_bits) & ~mask) {
        throw std::invalid_argument("Pauli bit masks exceed qubit count");
    }
}

PauliString PauliString::identity(int num_qubits) {
    return PauliString(num_qubits, 0, 0);
}

PauliString PauliString::from_str(std::string_view text) {
    int n = static_cast<int>(text.size());
    check_qubit_count(n);
    std::uint32_t xs = 0;
    std::uint32_t zs = 0;
    for (int j = 0; j < n; j++) {
        std::uint32_t bit = std::uint32_t{1} << (n - 1 - j);
        switch (text[j]) {
            case 'I':
                break;
            case 'X':
                xs |= bit;
                break;
            case 'Y':
                xs |= bit;
                zs |= bit;
                break;
            case 'Z':
                zs |= bit;
                break;
            default:
                throw std::invalid_argument("bad Pauli character '" + std::string(1, text[j]) + "' in '" +
                                            std::string(text) + "'");
        }
    }
    return PauliString(n, xs, zs);
}

char PauliString::letter(int qubit) const {
    std::uint32_t bit = std::uint32_t{1} << (num_qubits_ - 1 - qubit);
    bool x = x_bits_ & bit;
    bool z = z_bits_ & bit;
    return "IZXY"[x * 2 + z];
}

std::string PauliString::str() const {
    std::string out(num_qubits_, 'I');
    for (int j = 0; j < num_qubits_; j++) {
        out[j] = letter(j);
    }
    return out;
}

std::ostream &operator<<(std::ostream &out, const PauliString &p) {
    return out << p.str();
}

bool commutes(const PauliString &p, const PauliString &q, Commutation mode) {
    if (p.num_qubits() != q.num_qubits()) {
        throw DimensionError("commutes: qubit counts differ (" + p.str() + " vs " + q.str() + ")");
    }
    if (mode == Commutation::kFull) {
        return (std::popcount((p.x_bits() & q.z_bits()) ^ (q.x_bits() & p.z_bits())) & 1) == 0;
    }
    // Qubits where both are non-identity must carry the same letter.
    std::uint32_t shared = p.support() & q.support();
    std::uint32_t differ = (p.x_bits() ^ q.x_bits()) | (p.z_bits() ^ q.z_bits());
    return (shared & differ) == 0;
}

namespace {

// i^k for k mod 4.
Amplitude power_of_i(int k) {
    switch (k & 3) {
        case 0:
            return {1, 0};
        case 1:
            return {0, 1};
        case 2:
            return {-1, 0};
        default:
            return {0, -1};
    }
}

}  // namespace

StateVector apply_pauli(const PauliString &p, const StateVector &psi) {
    if (psi.dimension() != p.dimension()) {
        throw DimensionError("apply_pauli: " + p.str() + " acts on dimension " + std::to_string(p.dimension()) +
                             ", state has " + std::to_string(psi.dimension()));
    }
    // P|b> = i^{|x & z|} (-1)^{|z & b|} |b ^ x>
    Amplitude phase = power_of_i(std::popcount(p.x_bits() & p.z_bits()));
    StateVector out;
    out.num_qubits = psi.num_qubits;
    out.amplitudes.resize(psi.dimension());
    for (std::size_t b = 0; b < psi.dimension(); b++) {
        Amplitude v = phase * psi.amplitudes[b];
        if (std::popcount(p.z_bits() & static_cast<std::uint32_t>(b)) & 1) {
            v = -v;
        }
        out.amplitudes[b ^ p.x_bits()] = v;
    }
    return out;
}

double expectation(const StateVector &psi, const PauliString &p) {
    if (psi.dimension() != p.dimension()) {
        throw DimensionError("expectation: dimension mismatch for " + p.str());
    }
    check_normalized(psi);
    StateVector image = apply_pauli(p, psi);
    Amplitude total = 0;
    for (std::size_t b = 0; b < psi.dimension(); b++) {
        total += std::conj(psi.amplitudes[b]) * image.amplitudes[b];
    }
    if (std::abs(total.imag()) > 1e-10) {
        throw std::logic_error("expectation of Hermitian operator has imaginary part " + std::to_string(total.imag()));
    }
    return total.real();
}

}  // namespace dfe
