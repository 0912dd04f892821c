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

#ifndef DFE_PROTOCOL_H
#define DFE_PROTOCOL_H

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "dfe/grouping.h"
#include "dfe/measurement.h"
#include "dfe/states.h"

namespace dfe {

/// Which estimator to run. The original protocol samples single Pauli strings
/// by b_k^2; the grouped ones sample sorted-insertion groups by ||b_k||^2.
enum class Protocol { kOriginal, kGroupedQwc, kGroupedFc };

std::string_view to_string(Protocol protocol);
/// Accepts "original", "qwc"/"grouped_qwc", "fc"/"grouped_fc".
Protocol parse_protocol(std::string_view text);

/// How simulated shots of a group measurement are drawn. kJoint samples outcomes r of the
/// common eigenbasis POVM. kMarginal draws every member's +-1 outcome independently from
/// its own marginal (1 + Tr(sigma P)) / 2, discarding correlations between members.
enum class OutcomeModel { kJoint, kMarginal };

std::string_view to_string(OutcomeModel model);
/// Accepts "joint" and "marginal".
OutcomeModel parse_outcome_model(std::string_view text);

/// ceil(1 / (epsilon^2 delta)), ignoring floating-point noise below 1e-9 relative.
std::uint64_t default_sample_count(double epsilon, double delta);

struct DfeConfig {
    double epsilon = 0.05;
    double delta = 0.05;
    std::optional<std::uint64_t> ell;  // defaults to default_sample_count
    Protocol protocol = Protocol::kOriginal;
    OutcomeModel outcomes = OutcomeModel::kJoint;
    std::uint64_t seed = 0;
    bool keep_rounds = false;

    std::uint64_t sample_count() const;
    /// Throws std::invalid_argument for epsilon <= 0, delta outside (0, 1) or ell == 0.
    void validate() const;
};

struct DfeRound {
    std::size_t group_index = 0;
    std::uint64_t copies = 0;
    double estimate = 0;  // X for this round
};

struct DfeResult {
    DfeConfig config;
    int num_qubits = 0;
    double p = 0;
    double estimate = 0;
    double true_fidelity = 0;
    std::uint64_t total_copies = 0;
    std::size_t num_groups = 0;
    double mean_x_sq = 0;       // mean of X^2 over rounds
    double min_regime_ratio = 0;  // min over groups of ||b||_1^2 / ||b||^4
    std::vector<DfeRound> rounds;  // filled only when config.keep_rounds
};

/// `ell` i.i.d. categorical draws from `weights` (nonnegative, summing to 1 within 1e-8).
std::vector<std::size_t> importance_sample(std::span<const double> weights, std::uint64_t ell, std::uint64_t seed);

/// ceil(2 ln(2/delta) / (b^2 d ell eps^2)).
std::uint64_t copies_original(double b_sq, std::size_t d, const DfeConfig &config);

/// ceil(2 ||b||_1^2 ln(2/delta) / (||b||^4 d ell eps^2)).
std::uint64_t copies_grouped(double norm_l1, double norm_sq, std::size_t d, const DfeConfig &config);

/// X = sum_r counts(r) C_r / (m ||b||^2 sqrt(d)).
double estimate_x_grouped(
    const PauliGroup &group, const OutcomeSample &sample, const MeasurementBasis &basis, std::size_t d);

/// 1 + 1/(eps^2 delta) + (2d/eps^2) ln(2/delta).
double expected_copy_bound(const DfeConfig &config, std::size_t d);

/// Singletons for the original protocol, sorted insertion otherwise.
Grouping build_grouping(const CoefficientTable &table, Protocol protocol);

/// Full protocol: coefficient table of `target`, grouping, sampling and simulated measurement of `sigma`.
DfeResult run_dfe(const DfeConfig &config, const StateVector &target, const NoisyState &sigma);

/// Same, reusing a prebuilt grouping of the target's coefficients. `reference_fidelity` is
/// reported as the true fidelity. Rounds draw from per-round seed streams, so the result
/// does not depend on round evaluation order.
DfeResult run_dfe_on_grouping(
    const DfeConfig &config, const Grouping &grouping, const NoisyState &sigma, double reference_fidelity);

/// Exact first and second moments of one round's X under the configured shot model,
/// with the per-round ceiling on m. Var(estimate) = (second - mean^2) / ell.
struct RoundMoments {
    double mean = 0;
    double second = 0;
    double mean_copies = 0;  // expected m per round

    double estimator_variance(std::uint64_t ell) const {
        return (second - mean * mean) / static_cast<double>(ell);
    }
};

RoundMoments round_moments(const DfeConfig &config, const Grouping &grouping, const NoisyState &sigma);

nlohmann::json to_json(const DfeResult &result);

}  // namespace dfe

#endif
