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

#include "dfe/measurement.h"

#include <algorithm>
#include <bit>
#include <cmath>

#include <Eigen/Dense>

#include "dfe/seeding.h"

namespace dfe {

namespace {

constexpr int kMaxDiagonalizationAttempts = 5;
constexpr double kEigenTolerance = 1e-8;

// Column `outcome` of the single-qubit eigenbasis for `letter`, row `bit`.
Amplitude single_qubit_eigenvector(char letter, int outcome, int bit) {
    static const double h = 1.0 / std::sqrt(2.0);
    switch (letter) {
        case 'X':
            return (outcome == 1 && bit == 1) ? Amplitude(-h, 0) : Amplitude(h, 0);
        case 'Y':
            if (bit == 0) {
                return {h, 0};
            }
            return outcome == 0 ? Amplitude(0, h) : Amplitude(0, -h);
        default:
            return outcome == bit ? Amplitude(1, 0) : Amplitude(0, 0);
    }
}

Amplitude pauli_phase(const PauliString &p) {
    switch (std::popcount(p.x_bits() & p.z_bits()) & 3) {
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

void check_pairwise(const PauliGroup &group, Commutation mode) {
    for (std::size_t a = 0; a < group.members.size(); a++) {
        for (std::size_t b = a + 1; b < group.members.size(); b++) {
            if (!commutes(group.members[a].pauli, group.members[b].pauli, mode)) {
                throw NonCommutingGroupError(
                    "group " + std::to_string(group.index) + ": " + group.members[a].pauli.str() + " and " +
                    group.members[b].pauli.str() + " do not commute (" + std::string(to_string(mode)) + ")");
            }
        }
    }
}

bool pairwise_qubit_wise(const PauliGroup &group) {
    for (std::size_t a = 0; a < group.members.size(); a++) {
        for (std::size_t b = a + 1; b < group.members.size(); b++) {
            if (!commutes(group.members[a].pauli, group.members[b].pauli, Commutation::kQubitWise)) {
                return false;
            }
        }
    }
    return true;
}

MeasurementBasis product_basis_for(const PauliGroup &group, int n) {
    std::string letters(n, 'Z');
    std::vector<PauliString> members;
    members.reserve(group.members.size());
    for (const auto &m : group.members) {
        for (int j = 0; j < n; j++) {
            char c = m.pauli.letter(j);
            if (c != 'I') {
                letters[j] = c;
            }
        }
        members.push_back(m.pauli);
    }
    return MeasurementBasis::product(n, std::move(letters), members);
}

}  // namespace

MeasurementBasis MeasurementBasis::product(int num_qubits, std::string letters, std::span<const PauliString> members) {
    check_qubit_count(num_qubits);
    if (static_cast<int>(letters.size()) != num_qubits) {
        throw DimensionError("product basis needs one letter per qubit");
    }
    MeasurementBasis out;
    out.num_qubits_ = num_qubits;
    out.kind_ = BasisKind::kProduct;
    out.letters_ = std::move(letters);
    out.members_.assign(members.begin(), members.end());
    std::size_t d = out.dimension();
    out.eigen_table_.resize(members.size() * d);
    for (std::size_t l = 0; l < members.size(); l++) {
        const PauliString &p = members[l];
        if (p.num_qubits() != num_qubits) {
            throw DimensionError("product basis member " + p.str() + " has wrong qubit count");
        }
        for (int j = 0; j < num_qubits; j++) {
            char c = p.letter(j);
            if (c != 'I' && c != out.letters_[j]) {
                throw NonCommutingGroupError(
                    "member " + p.str() + " is not diagonal in product basis " + out.letters_);
            }
        }
        // Outcome bit j selects the -1 eigenvector on qubit j.
        for (std::size_t r = 0; r < d; r++) {
            bool odd = std::popcount(p.support() & static_cast<std::uint32_t>(r)) & 1;
            out.eigen_table_[l * d + r] = odd ? -1 : 1;
        }
    }
    return out;
}

MeasurementBasis MeasurementBasis::entangled(
    int num_qubits, std::vector<Amplitude> unitary, std::vector<std::int8_t> eigen_table,
    std::vector<PauliString> members) {
    check_qubit_count(num_qubits);
    MeasurementBasis out;
    out.num_qubits_ = num_qubits;
    out.kind_ = BasisKind::kEntangled;
    std::size_t d = out.dimension();
    if (unitary.size() != d * d || eigen_table.size() != members.size() * d) {
        throw DimensionError("entangled basis: unitary or eigenvalue table has the wrong size");
    }
    out.unitary_ = std::move(unitary);
    out.eigen_table_ = std::move(eigen_table);
    out.members_ = std::move(members);
    return out;
}

std::vector<Amplitude> MeasurementBasis::vector(std::size_t outcome) const {
    std::size_t d = dimension();
    if (outcome >= d) {
        throw std::out_of_range("basis outcome index out of range");
    }
    std::vector<Amplitude> out(d);
    if (kind_ == BasisKind::kEntangled) {
        for (std::size_t b = 0; b < d; b++) {
            out[b] = unitary_[outcome * d + b];
        }
        return out;
    }
    for (std::size_t b = 0; b < d; b++) {
        Amplitude amp = 1;
        for (int j = 0; j < num_qubits_; j++) {
            int shift = num_qubits_ - 1 - j;
            amp *= single_qubit_eigenvector(letters_[j], (outcome >> shift) & 1, (b >> shift) & 1);
        }
        out[b] = amp;
    }
    return out;
}

std::vector<Amplitude> MeasurementBasis::overlaps(const StateVector &psi) const {
    std::size_t d = dimension();
    if (psi.dimension() != d) {
        throw DimensionError("overlaps: state dimension does not match basis");
    }
    if (kind_ == BasisKind::kEntangled) {
        std::vector<Amplitude> out(d);
        for (std::size_t r = 0; r < d; r++) {
            Amplitude total = 0;
            const Amplitude *column = &unitary_[r * d];
            for (std::size_t b = 0; b < d; b++) {
                total += std::conj(column[b]) * psi.amplitudes[b];
            }
            out[r] = total;
        }
        return out;
    }
    // Rotate one qubit at a time by the adjoint of its eigenvector matrix.
    std::vector<Amplitude> v = psi.amplitudes;
    for (int j = 0; j < num_qubits_; j++) {
        char c = letters_[j];
        if (c == 'Z') {
            continue;
        }
        Amplitude m00 = std::conj(single_qubit_eigenvector(c, 0, 0));
        Amplitude m01 = std::conj(single_qubit_eigenvector(c, 0, 1));
        Amplitude m10 = std::conj(single_qubit_eigenvector(c, 1, 0));
        Amplitude m11 = std::conj(single_qubit_eigenvector(c, 1, 1));
        std::size_t bit = std::size_t{1} << (num_qubits_ - 1 - j);
        for (std::size_t b = 0; b < d; b++) {
            if (b & bit) {
                continue;
            }
            Amplitude a0 = v[b];
            Amplitude a1 = v[b | bit];
            v[b] = m00 * a0 + m01 * a1;
            v[b | bit] = m10 * a0 + m11 * a1;
        }
    }
    return v;
}

MeasurementBasis common_eigenbasis(const PauliGroup &group, Commutation mode, std::uint64_t seed) {
    if (group.members.empty()) {
        throw std::invalid_argument("common_eigenbasis: empty group");
    }
    int n = group.members.front().pauli.num_qubits();
    check_pairwise(group, mode);
    if (mode == Commutation::kQubitWise || pairwise_qubit_wise(group)) {
        return product_basis_for(group, n);
    }

    std::size_t d = std::size_t{1} << n;
    std::vector<PauliString> members;
    for (const auto &m : group.members) {
        members.push_back(m.pauli);
    }
    for (int attempt = 0; attempt < kMaxDiagonalizationAttempts; attempt++) {
        std::mt19937_64 rng(derive_seed(seed, {static_cast<std::uint64_t>(attempt)}));
        std::normal_distribution<double> gauss;
        Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
        for (const auto &p : members) {
            if (p.is_identity()) {
                continue;
            }
            Amplitude w = gauss(rng) * pauli_phase(p);
            for (std::size_t b = 0; b < d; b++) {
                bool odd = std::popcount(p.z_bits() & static_cast<std::uint32_t>(b)) & 1;
                h(b ^ p.x_bits(), b) += odd ? -w : w;
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
        if (solver.info() != Eigen::Success) {
            continue;
        }
        const Eigen::MatrixXcd &u = solver.eigenvectors();

        std::vector<std::int8_t> table(members.size() * d);
        bool ok = true;
        std::vector<Amplitude> image(d);
        for (std::size_t l = 0; l < members.size() && ok; l++) {
            const PauliString &p = members[l];
            if (p.is_identity()) {
                std::fill(table.begin() + l * d, table.begin() + (l + 1) * d, std::int8_t{1});
                continue;
            }
            Amplitude phase = pauli_phase(p);
            for (std::size_t r = 0; r < d && ok; r++) {
                Amplitude diag = 0;
                for (std::size_t b = 0; b < d; b++) {
                    bool odd = std::popcount(p.z_bits() & static_cast<std::uint32_t>(b)) & 1;
                    Amplitude v = phase * u(b, r);
                    image[b ^ p.x_bits()] = odd ? -v : v;
                }
                for (std::size_t b = 0; b < d; b++) {
                    diag += std::conj(u(b, r)) * image[b];
                }
                int c = diag.real() >= 0 ? 1 : -1;
                for (std::size_t b = 0; b < d; b++) {
                    if (std::abs(image[b] - static_cast<double>(c) * u(b, r)) > kEigenTolerance) {
                        ok = false;
                        break;
                    }
                }
                table[l * d + r] = static_cast<std::int8_t>(c);
            }
        }
        if (!ok) {
            continue;
        }
        std::vector<Amplitude> unitary(d * d);
        for (std::size_t r = 0; r < d; r++) {
            for (std::size_t b = 0; b < d; b++) {
                unitary[r * d + b] = u(b, r);
            }
        }
        return MeasurementBasis::entangled(n, std::move(unitary), std::move(table), std::move(members));
    }
    throw DiagonalizationError(
        "group " + std::to_string(group.index) + ": no verified common eigenbasis after " +
        std::to_string(kMaxDiagonalizationAttempts) + " weight draws");
}

std::vector<double> outcome_values(const PauliGroup &group, const MeasurementBasis &basis) {
    if (basis.members().size() != group.members.size()) {
        throw std::invalid_argument("outcome_values: basis was built for a different group");
    }
    std::size_t d = basis.dimension();
    std::vector<double> values(d, 0.0);
    for (std::size_t l = 0; l < group.members.size(); l++) {
        if (basis.members()[l] != group.members[l].pauli) {
            throw std::invalid_argument("outcome_values: basis member order differs from group");
        }
        double b = group.members[l].coefficient;
        for (std::size_t r = 0; r < d; r++) {
            values[r] += basis.eigenvalue(l, r) * b;
        }
    }
    return values;
}

namespace {

std::vector<double> validated_probabilities(std::span<const double> probs) {
    if (probs.empty()) {
        throw std::invalid_argument("outcome distribution is empty");
    }
    std::vector<double> out(probs.begin(), probs.end());
    double total = 0;
    for (double &p : out) {
        if (!(p >= -1e-12)) {
            throw std::invalid_argument("outcome probability " + std::to_string(p) + " is negative");
        }
        p = std::max(p, 0.0);
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-8) {
        throw std::invalid_argument("outcome probabilities sum to " + std::to_string(total));
    }
    return out;
}

}  // namespace

OutcomeSampler::OutcomeSampler(std::span<const double> probs) : size_(probs.size()) {
    probs_ = validated_probabilities(probs);
    dist_ = std::discrete_distribution<std::size_t>(probs_.begin(), probs_.end());
}

void OutcomeSampler::sample(std::uint64_t shots, std::mt19937_64 &rng, OutcomeSample &out) {
    if (shots == 0) {
        throw std::invalid_argument("shot count must be at least 1");
    }
    out.counts.assign(size_, 0);
    out.total = shots;
    if (shots <= 4 * size_) {
        for (std::uint64_t s = 0; s < shots; s++) {
            out.counts[dist_(rng)]++;
        }
        return;
    }
    double total = 0;
    for (double q : probs_) {
        total += q;
    }
    std::uint64_t left = shots;
    for (std::size_t r = 0; r + 1 < size_ && left > 0; r++) {
        double q = total > 0 ? std::clamp(probs_[r] / total, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::uint64_t> dist(left, q);
        std::uint64_t c = dist(rng);
        out.counts[r] = c;
        left -= c;
        total -= probs_[r];
    }
    out.counts[size_ - 1] += left;
}

OutcomeSample sample_outcomes(std::span<const double> probs, std::uint64_t shots, std::uint64_t seed) {
    OutcomeSampler sampler(probs);
    std::mt19937_64 rng(seed);
    OutcomeSample out;
    sampler.sample(shots, rng, out);
    return out;
}

}  // namespace dfe
