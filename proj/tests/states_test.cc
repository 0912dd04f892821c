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
#include <cmath>
#include <map>
#include <sstream>

#include "gtest/gtest.h"

#include "dense_oracle.h"
#include "dfe/grouping.h"
#include "dfe/measurement.h"

namespace dfe {
namespace {

std::map<std::string, double> nonzero(const CoefficientTable &table, double tol = 1e-12) {
    std::map<std::string, double> out;
    for (const auto &e : table.entries) {
        if (std::abs(e.coefficient) > tol) {
            out[e.pauli.str()] = e.coefficient;
        }
    }
    return out;
}

TEST(MakeState, GhzAndW) {
    double s = 1 / std::sqrt(2.0);
    StateVector ghz = make_state(StateKind::kGhz, 2, 0);
    StateVector w = make_state(StateKind::kW, 2, 0);
    std::vector<Amplitude> ghz_expected{s, 0, 0, s};
    std::vector<Amplitude> w_expected{0, s, s, 0};
    for (int i = 0; i < 4; i++) {
        EXPECT_NEAR(std::abs(ghz.amplitudes[i] - ghz_expected[i]), 0, 1e-15);
        EXPECT_NEAR(std::abs(w.amplitudes[i] - w_expected[i]), 0, 1e-15);
    }
    StateVector w5 = make_state(StateKind::kW, 5, 0);
    EXPECT_NEAR(std::norm(w5.amplitudes[0b00100]), 0.2, 1e-15);
    EXPECT_EQ(w5.amplitudes[0b00110], Amplitude(0));
}

TEST(MakeState, HaarIsNormalizedAndDeterministic) {
    for (int n = 1; n <= 8; n++) {
        StateVector a = make_state(StateKind::kHaar, n, 42);
        StateVector b = make_state(StateKind::kHaar, n, 42);
        EXPECT_EQ(a.amplitudes, b.amplitudes);
        EXPECT_NEAR(a.norm_sq(), 1, 1e-10);
        EXPECT_NE(make_state(StateKind::kHaar, n, 43).amplitudes, a.amplitudes);
    }
}

TEST(MakeState, RejectsBadQubitCounts) {
    EXPECT_THROW(make_state(StateKind::kHaar, 0, 1), DimensionError);
    EXPECT_THROW(make_state(StateKind::kGhz, kMaxQubits + 1, 1), DimensionError);
}

TEST(MakeState, HaarSingleQubitMarginalIsUnbiased) {
    double sum = 0;
    double sum_sq = 0;
    const int samples = 1000;
    for (int s = 0; s < samples; s++) {
        double z = expectation(make_state(StateKind::kHaar, 2, 5000 + s), PauliString::from_str("ZI"));
        sum += z;
        sum_sq += z * z;
    }
    double mean = sum / samples;
    double se = std::sqrt((sum_sq / samples - mean * mean) / (samples - 1));
    EXPECT_LE(std::abs(mean), 4 * se);
}

TEST(StateKindText, RoundTrips) {
    for (auto k : {StateKind::kHaar, StateKind::kW, StateKind::kGhz}) {
        EXPECT_EQ(parse_state_kind(to_string(k)), k);
    }
    EXPECT_THROW(parse_state_kind("bell"), std::invalid_argument);
}

TEST(PauliCoefficients, BellState) {
    auto table = pauli_coefficients(make_state(StateKind::kGhz, 2, 0));
    std::map<std::string, double> expected{{"II", 0.5}, {"XX", 0.5}, {"YY", -0.5}, {"ZZ", 0.5}};
    auto got = nonzero(table);
    ASSERT_EQ(got.size(), expected.size());
    for (const auto &[k, v] : expected) {
        EXPECT_NEAR(got[k], v, 1e-14) << k;
    }
}

TEST(PauliCoefficients, GhzThreeQubits) {
    auto table = pauli_coefficients(make_state(StateKind::kGhz, 3, 0));
    double a = 1 / std::sqrt(8.0);
    std::map<std::string, double> expected{{"III", a},  {"XXX", a},  {"ZZI", a},  {"ZIZ", a},
                                           {"IZZ", a},  {"XYY", -a}, {"YXY", -a}, {"YYX", -a}};
    auto got = nonzero(table);
    ASSERT_EQ(got.size(), expected.size());
    for (const auto &[k, v] : expected) {
        EXPECT_NEAR(got[k], v, 1e-14) << k;
    }
}

TEST(PauliCoefficients, MatchDenseTraceOracle) {
    for (int n = 1; n <= 3; n++) {
        StateVector psi = make_state(StateKind::kHaar, n, 70 + n);
        oracle::Vector v = oracle::to_vector(psi);
        oracle::Matrix rho = v * v.adjoint();
        auto table = pauli_coefficients(psi, 0);
        ASSERT_EQ(table.entries.size(), std::size_t{1} << (2 * n));
        double sqrt_d = std::sqrt(static_cast<double>(psi.dimension()));
        for (const auto &e : table.entries) {
            double dense = (rho * oracle::pauli_matrix(e.pauli)).trace().real() / sqrt_d;
            EXPECT_NEAR(e.coefficient, dense, 1e-12) << e.pauli;
        }
    }
}

TEST(PauliCoefficients, AgreeWithExpectation) {
    StateVector psi = make_state(StateKind::kHaar, 5, 3);
    auto table = pauli_coefficients(psi, 0);
    double sqrt_d = std::sqrt(32.0);
    for (std::size_t i = 0; i < table.entries.size(); i += 37) {
        const auto &e = table.entries[i];
        EXPECT_NEAR(e.coefficient, expectation(psi, e.pauli) / sqrt_d, 1e-12) << e.pauli;
    }
}

TEST(PauliCoefficients, SquaresSumToOneAndIdentityIsExact) {
    for (auto kind : {StateKind::kHaar, StateKind::kW, StateKind::kGhz}) {
        for (int n = 1; n <= 7; n++) {
            auto table = pauli_coefficients(make_state(kind, n, 100 + n));
            EXPECT_NEAR(table.sum_of_squares(), 1, 1e-8);
            EXPECT_EQ(table.coefficient(PauliString::identity(n)), 1 / std::sqrt(static_cast<double>(1 << n)));
        }
    }
}

TEST(PauliCoefficients, CanonicalOrderAndLookup) {
    auto table = pauli_coefficients(make_state(StateKind::kHaar, 3, 8));
    EXPECT_TRUE(std::is_sorted(table.entries.begin(), table.entries.end(),
                               [](const PauliTerm &a, const PauliTerm &b) { return a.pauli < b.pauli; }));
    auto sparse = pauli_coefficients(make_state(StateKind::kGhz, 3, 0));
    EXPECT_EQ(sparse.coefficient(PauliString::from_str("XII")), 0);
}

TEST(PauliCoefficients, CsvRoundTrip) {
    auto table = pauli_coefficients(make_state(StateKind::kHaar, 3, 9));
    std::stringstream buffer;
    write_coefficients_csv(table, buffer);
    EXPECT_EQ(buffer.str().substr(0, 17), "pauli,coefficient");
    CoefficientTable back = read_coefficients_csv(buffer);
    EXPECT_EQ(back.num_qubits, 3);
    EXPECT_EQ(back.entries, table.entries);
}

TEST(PauliCoefficients, CsvRejectsGarbage) {
    std::stringstream bad("pauli,coefficient\nXQ,0.5\n");
    EXPECT_THROW(read_coefficients_csv(bad), std::invalid_argument);
    std::stringstream header("nope\n");
    EXPECT_THROW(read_coefficients_csv(header), std::invalid_argument);
}

TEST(NoisyState, ValidatesP) {
    StateVector psi = make_state(StateKind::kGhz, 2, 0);
    EXPECT_THROW(NoisyState(psi, -0.1), std::invalid_argument);
    EXPECT_THROW(NoisyState(psi, 1.5), std::invalid_argument);
}

TEST(TrueFidelity, Examples) {
    EXPECT_EQ(true_fidelity(NoisyState(make_state(StateKind::kHaar, 3, 1), 0)), 1.0);
    EXPECT_DOUBLE_EQ(true_fidelity(NoisyState(make_state(StateKind::kHaar, 8, 1), 0.1)), 0.900390625);
    EXPECT_DOUBLE_EQ(true_fidelity(NoisyState(make_state(StateKind::kGhz, 2, 1), 0.1)), 0.925);
    EXPECT_DOUBLE_EQ(true_fidelity(NoisyState(make_state(StateKind::kHaar, 4, 1), 0.1)), 0.90625);
}

TEST(TrueFidelity, ParsevalAgreesWithDenseTrace) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; trial++) {
        int n = 1 + trial % 3;
        StateVector psi = make_state(StateKind::kHaar, n, rng());
        double p = std::uniform_real_distribution<double>(0, 1)(rng);
        NoisyState sigma(psi, p);
        auto table = pauli_coefficients(psi, 0);
        double parseval = 0;
        for (const auto &e : table.entries) {
            parseval += noisy_coefficient(sigma, e) * e.coefficient;
        }
        oracle::Vector v = oracle::to_vector(psi);
        double dense = (oracle::Matrix(v * v.adjoint()) * oracle::depolarized(psi, p)).trace().real();
        EXPECT_NEAR(parseval, true_fidelity(sigma), 1e-8);
        EXPECT_NEAR(parseval, dense, 1e-8);
    }
}

TEST(Fidelity, OrthogonalTarget) {
    NoisyState sigma(make_state(StateKind::kGhz, 3, 0), 0.2);
    StateVector zero(3, {1, 0, 0, 0, 0, 0, 0, 0});
    EXPECT_NEAR(fidelity(zero, sigma), 0.8 * 0.5 + 0.2 / 8, 1e-15);
    EXPECT_THROW(fidelity(make_state(StateKind::kGhz, 2, 0), sigma), DimensionError);
}

TEST(OutcomeProbabilities, Examples) {
    StateVector zero(2, {1, 0, 0, 0});
    auto computational = MeasurementBasis::product(2, "ZZ", {});
    auto probs = outcome_probabilities(NoisyState(zero, 0), computational);
    EXPECT_EQ(probs, (std::vector<double>{1, 0, 0, 0}));

    auto uniform = outcome_probabilities(NoisyState(make_state(StateKind::kHaar, 2, 4), 1), computational);
    for (double q : uniform) {
        EXPECT_NEAR(q, 0.25, 1e-15);
    }

    StateVector bell = make_state(StateKind::kGhz, 2, 0);
    PauliGroup group;
    for (const char *s : {"XX", "YY", "ZZ"}) {
        group.add({PauliString::from_str(s), 0.5});
    }
    auto bell_basis = common_eigenbasis(group, Commutation::kFull, 1);
    auto bell_probs = outcome_probabilities(NoisyState(bell, 0.1), bell_basis);
    std::sort(bell_probs.begin(), bell_probs.end());
    EXPECT_NEAR(bell_probs[0], 0.025, 1e-12);
    EXPECT_NEAR(bell_probs[1], 0.025, 1e-12);
    EXPECT_NEAR(bell_probs[2], 0.025, 1e-12);
    EXPECT_NEAR(bell_probs[3], 0.925, 1e-12);
}

TEST(OutcomeProbabilities, SumToOne) {
    for (int n = 1; n <= 6; n++) {
        NoisyState sigma(make_state(StateKind::kHaar, n, 300 + n), 0.3);
        std::string letters(n, 'X');
        letters[0] = 'Y';
        auto probs = outcome_probabilities(sigma, MeasurementBasis::product(n, letters, {}));
        double total = 0;
        for (double q : probs) {
            total += q;
        }
        EXPECT_NEAR(total, 1, 1e-10);
    }
    EXPECT_THROW(outcome_probabilities(NoisyState(make_state(StateKind::kGhz, 2, 0), 0),
                                       MeasurementBasis::product(3, "ZZZ", {})),
                 DimensionError);
}

}  // namespace
}  // namespace dfe
