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

#include "dfe/states.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "dfe/measurement.h"

namespace dfe {

std::string_view to_string(StateKind kind) {
    switch (kind) {
        case StateKind::kHaar:
            return "haar";
        case StateKind::kW:
            return "w";
        case StateKind::kGhz:
            return "ghz";
    }
    return "?";
}

StateKind parse_state_kind(std::string_view text) {
    if (text == "haar") {
        return StateKind::kHaar;
    }
    if (text == "w") {
        return StateKind::kW;
    }
    if (text == "ghz") {
        return StateKind::kGhz;
    }
    throw std::invalid_argument("unknown state kind '" + std::string(text) + "'");
}

StateVector make_state(StateKind kind, int n, std::uint64_t seed) {
    check_qubit_count(n);
    std::size_t d = std::size_t{1} << n;
    std::vector<Amplitude> amps(d);
    switch (kind) {
        case StateKind::kHaar: {
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (auto &a : amps) {
                double re = gauss(rng);
                double im = gauss(rng);
                a = {re, im};
            }
            double norm = 0;
            for (const auto &a : amps) {
                norm += std::norm(a);
            }
            norm = std::sqrt(norm);
            for (auto &a : amps) {
                a /= norm;
            }
            break;
        }
        case StateKind::kW: {
            double amp = 1.0 / std::sqrt(static_cast<double>(n));
            for (int j = 0; j < n; j++) {
                amps[std::size_t{1} << j] = amp;
            }
            break;
        }
        case StateKind::kGhz: {
            double amp = 1.0 / std::sqrt(2.0);
            amps.front() += amp;
            amps.back() += amp;
            break;
        }
    }
    return StateVector(n, std::move(amps));
}

double CoefficientTable::coefficient(const PauliString &p) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), p, [](const PauliTerm &t, const PauliString &key) {
        return t.pauli < key;
    });
    if (it != entries.end() && it->pauli == p) {
        return it->coefficient;
    }
    return 0.0;
}

double CoefficientTable::sum_of_squares() const {
    double total = 0;
    for (const auto &e : entries) {
        total += e.coefficient * e.coefficient;
    }
    return total;
}

namespace {

// Unnormalized in-place Walsh-Hadamard transform.
void walsh_hadamard(std::vector<Amplitude> &v) {
    for (std::size_t half = 1; half < v.size(); half <<= 1) {
        for (std::size_t block = 0; block < v.size(); block += 2 * half) {
            for (std::size_t i = block; i < block + half; i++) {
                Amplitude a = v[i];
                Amplitude b = v[i + half];
                v[i] = a + b;
                v[i + half] = a - b;
            }
        }
    }
}

}  // namespace

CoefficientTable pauli_coefficients(const StateVector &psi, double threshold) {
    check_qubit_count(psi.num_qubits);
    check_normalized(psi);
    if (threshold < 0) {
        throw std::invalid_argument("coefficient threshold must be non-negative");
    }
    int n = psi.num_qubits;
    std::size_t d = psi.dimension();
    double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
    // Dividing by <psi|psi> removes the rounding left in the amplitudes' norm.
    double norm_sq = psi.norm_sq();

    CoefficientTable table;
    table.num_qubits = n;
    // For fixed x, <psi|P_{x,z}|psi> = i^{|x&z|} * sum_b (-1)^{z.b} conj(psi[b^x]) psi[b],
    // i.e. one Walsh-Hadamard transform yields every z at once.
    std::vector<Amplitude> v(d);
    for (std::uint32_t x = 0; x < d; x++) {
        for (std::size_t b = 0; b < d; b++) {
            v[b] = std::conj(psi.amplitudes[b ^ x]) * psi.amplitudes[b];
        }
        walsh_hadamard(v);
        for (std::uint32_t z = 0; z < d; z++) {
            double value;
            switch (std::popcount(x & z) & 3) {
                case 0:
                    value = v[z].real();
                    break;
                case 1:
                    value = -v[z].imag();
                    break;
                case 2:
                    value = -v[z].real();
                    break;
                default:
                    value = v[z].imag();
                    break;
            }
            double b = (x == 0 && z == 0) ? inv_sqrt_d : value / norm_sq * inv_sqrt_d;
            if (std::abs(b) > threshold) {
                table.entries.push_back({PauliString(n, x, z), b});
            }
        }
    }
    return table;
}

void write_coefficients_csv(const CoefficientTable &table, std::ostream &out) {
    out << "pauli,coefficient\n";
    out << std::setprecision(17);
    for (const auto &e : table.entries) {
        out << e.pauli.str() << ',' << e.coefficient << '\n';
    }
}

CoefficientTable read_coefficients_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line != "pauli,coefficient") {
        throw std::invalid_argument("coefficient CSV must start with header 'pauli,coefficient'");
    }
    CoefficientTable table;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("malformed coefficient row '" + line + "'");
        }
        PauliString p = PauliString::from_str(std::string_view(line).substr(0, comma));
        double b = std::stod(line.substr(comma + 1));
        if (table.num_qubits == 0) {
            table.num_qubits = p.num_qubits();
        } else if (table.num_qubits != p.num_qubits()) {
            throw DimensionError("coefficient CSV mixes qubit counts");
        }
        table.entries.push_back({p, b});
    }
    std::sort(table.entries.begin(), table.entries.end(), [](const PauliTerm &a, const PauliTerm &b) {
        return a.pauli < b.pauli;
    });
    return table;
}

NoisyState::NoisyState(StateVector t, double noise) : target(std::move(t)), p(noise) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("depolarizing probability must lie in [0, 1]");
    }
    check_qubit_count(target.num_qubits);
}

double true_fidelity(const NoisyState &sigma) {
    return (1.0 - sigma.p) + sigma.p / static_cast<double>(sigma.dimension());
}

double fidelity(const StateVector &target, const NoisyState &sigma) {
    if (target.dimension() != sigma.dimension()) {
        throw DimensionError("fidelity: target and noisy state dimensions differ");
    }
    Amplitude overlap = 0;
    for (std::size_t b = 0; b < target.dimension(); b++) {
        overlap += std::conj(target.amplitudes[b]) * sigma.target.amplitudes[b];
    }
    double overlap_sq = std::norm(overlap) / (target.norm_sq() * sigma.target.norm_sq());
    return (1.0 - sigma.p) * overlap_sq + sigma.p / static_cast<double>(sigma.dimension());
}

double noisy_coefficient(const NoisyState &sigma, const PauliTerm &term) {
    if (term.pauli.is_identity()) {
        return 1.0 / std::sqrt(static_cast<double>(sigma.dimension()));
    }
    return (1.0 - sigma.p) * term.coefficient;
}

std::vector<double> outcome_probabilities(const NoisyState &sigma, const MeasurementBasis &basis) {
    if (basis.dimension() != sigma.dimension()) {
        throw DimensionError("outcome_probabilities: basis dimension " + std::to_string(basis.dimension()) +
                             " vs state dimension " + std::to_string(sigma.dimension()));
    }
    std::vector<Amplitude> overlaps = basis.overlaps(sigma.target);
    double mixed = sigma.p / static_cast<double>(sigma.dimension());
    std::vector<double> probs(overlaps.size());
    for (std::size_t r = 0; r < overlaps.size(); r++) {
        probs[r] = (1.0 - sigma.p) * std::norm(overlaps[r]) + mixed;
    }
    return probs;
}

}  // namespace dfe
