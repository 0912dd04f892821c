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

#include "dfe/invariants.h"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "dfe/grouping.h"
#include "dfe/measurement.h"
#include "dfe/pauli_string.h"
#include "dfe/protocol.h"
#include "dfe/seeding.h"
#include "dfe/states.h"

namespace dfe {

namespace {

PauliString random_pauli(int n, std::mt19937_64 &rng) {
    std::uint32_t mask = (std::uint32_t{1} << n) - 1;
    return PauliString(n, static_cast<std::uint32_t>(rng()) & mask, static_cast<std::uint32_t>(rng()) & mask);
}

std::string check_commutation(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 500; trial++) {
        int n = 1 + static_cast<int>(rng() % 6);
        PauliString p = random_pauli(n, rng);
        PauliString q = random_pauli(n, rng);
        bool qwc = commutes(p, q, Commutation::kQubitWise);
        bool fc = commutes(p, q, Commutation::kFull);
        if (qwc && !fc) {
            return p.str() + "," + q.str() + ": QWC without FC";
        }
        if (fc != commutes(q, p, Commutation::kFull) || qwc != commutes(q, p, Commutation::kQubitWise)) {
            return p.str() + "," + q.str() + ": asymmetric";
        }
        // PQ|v> = +-QP|v> decides FC independently of the symplectic formula.
        StateVector v = make_state(StateKind::kHaar, n, rng());
        StateVector pq = apply_pauli(p, apply_pauli(q, v));
        StateVector qp = apply_pauli(q, apply_pauli(p, v));
        double diff = 0;
        for (std::size_t b = 0; b < v.dimension(); b++) {
            diff = std::max(diff, std::abs(pq.amplitudes[b] - qp.amplitudes[b]));
        }
        if ((diff < 1e-10) != fc) {
            return p.str() + "," + q.str() + ": FC disagrees with operator product";
        }
    }
    return {};
}

std::string check_coefficients(std::uint64_t seed) {
    for (int n = 1; n <= 3; n++) {
        StateVector psi = make_state(StateKind::kHaar, n, derive_seed(seed, {static_cast<std::uint64_t>(n)}));
        CoefficientTable table = pauli_coefficients(psi, 0.0);
        if (std::abs(table.sum_of_squares() - 1) > 1e-8) {
            return "sum of b^2 != 1 at n=" + std::to_string(n);
        }
        double sqrt_d = std::sqrt(static_cast<double>(psi.dimension()));
        for (const auto &e : table.entries) {
            double direct = expectation(psi, e.pauli) / sqrt_d;
            if (std::abs(direct - e.coefficient) > 1e-10) {
                return "coefficient of " + e.pauli.str() + " disagrees with expectation()";
            }
        }
        NoisyState sigma(psi, 0.3);
        double parseval = 0;
        for (const auto &e : table.entries) {
            parseval += noisy_coefficient(sigma, e) * e.coefficient;
        }
        if (std::abs(parseval - true_fidelity(sigma)) > 1e-8) {
            return "sum a_k b_k != fidelity at n=" + std::to_string(n);
        }
    }
    return {};
}

std::string check_grouping(std::uint64_t seed) {
    for (int n = 2; n <= 3; n++) {
        StateVector psi = make_state(StateKind::kHaar, n, derive_seed(seed, {static_cast<std::uint64_t>(10 + n)}));
        CoefficientTable table = pauli_coefficients(psi);
        std::size_t counts[2];
        for (Commutation mode : {Commutation::kQubitWise, Commutation::kFull}) {
            Grouping g = sorted_insertion(table, mode);
            double total = 0;
            for (const auto &group : g.groups) {
                total += group.norm_sq;
                for (std::size_t a = 0; a < group.size(); a++) {
                    for (std::size_t b = a + 1; b < group.size(); b++) {
                        if (!commutes(group.members[a].pauli, group.members[b].pauli, mode)) {
                            return "non-commuting pair in group";
                        }
                    }
                }
            }
            if (g.num_terms() != table.entries.size()) {
                return "grouping is not a partition";
            }
            if (std::abs(total - 1) > 1e-8) {
                return "group weights do not sum to 1";
            }
            counts[mode == Commutation::kFull] = g.groups.size();
        }
        if (counts[1] > counts[0]) {
            return "FC produced more groups than QWC";
        }
        std::size_t expected = 1;
        for (int j = 0; j < n; j++) {
            expected *= 3;
        }
        if (counts[0] != expected + 1) {
            return "QWC group count " + std::to_string(counts[0]) + " != 3^n + 1";
        }
    }
    return {};
}

std::string check_measurement(std::uint64_t seed) {
    StateVector psi = make_state(StateKind::kHaar, 3, seed);
    NoisyState sigma(psi, 0.2);
    CoefficientTable table = pauli_coefficients(psi);
    for (Commutation mode : {Commutation::kQubitWise, Commutation::kFull}) {
        Grouping g = sorted_insertion(table, mode);
        for (const auto &group : g.groups) {
            MeasurementBasis basis = common_eigenbasis(group, mode, derive_seed(seed, {group.index}));
            std::vector<double> probs = outcome_probabilities(sigma, basis);
            for (std::size_t l = 0; l < group.size(); l++) {
                const PauliTerm &t = group.members[l];
                double mean = 0;
                for (std::size_t r = 0; r < probs.size(); r++) {
                    mean += probs[r] * basis.eigenvalue(l, r);
                }
                double expected = noisy_coefficient(sigma, t) * std::sqrt(static_cast<double>(psi.dimension()));
                if (std::abs(mean - expected) > 1e-8) {
                    return "law of total expectation fails for " + t.pauli.str();
                }
            }
        }
    }
    return {};
}

std::string check_protocol(std::uint64_t seed) {
    std::vector<Amplitude> bell(4);
    bell[0] = bell[3] = 1 / std::sqrt(2.0);
    StateVector target(2, bell);
    DfeConfig config{0.05, 0.05, std::nullopt, Protocol::kGroupedFc, OutcomeModel::kJoint, seed};
    DfeResult r = run_dfe(config, target, NoisyState(target, 0.0));
    if (r.estimate != 1.0) {
        return "Bell state at p=0 estimated as " + std::to_string(r.estimate);
    }
    CoefficientTable table = pauli_coefficients(make_state(StateKind::kHaar, 3, seed));
    for (const auto &e : table.entries) {
        double b = e.coefficient;
        if (copies_grouped(std::abs(b), b * b, 8, config) != copies_original(b * b, 8, config)) {
            return "singleton copy count differs for " + e.pauli.str();
        }
    }
    return {};
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
    std::vector<std::pair<std::string, std::function<std::string(std::uint64_t)>>> checks{
        {"commutation predicates", check_commutation},
        {"coefficient tables", check_coefficients},
        {"sorted insertion groupings", check_grouping},
        {"common eigenbases", check_measurement},
        {"protocol identities", check_protocol},
    };
    std::vector<CheckResult> out;
    for (const auto &[name, fn] : checks) {
        CheckResult result{name, false, {}};
        try {
            result.detail = fn(derive_seed(seed, {out.size()}));
            result.passed = result.detail.empty();
        } catch (const std::exception &e) {
            result.detail = std::string("exception: ") + e.what();
        }
        out.push_back(std::move(result));
    }
    return out;
}

}  // namespace dfe
