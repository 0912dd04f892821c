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

#include "dfe/protocol.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <random>

#include "dfe/seeding.h"

namespace dfe {

namespace {

// Sub-stream labels mixed into the run seed.
constexpr std::uint64_t kSamplingStream = 1;
constexpr std::uint64_t kRoundStream = 2;
constexpr std::uint64_t kBasisStream = 3;

std::uint64_t copies_for_ratio(double ratio, std::size_t d, const DfeConfig &config) {
    config.validate();
    double eps = config.epsilon;
    double value = 2.0 * ratio / (static_cast<double>(d) * static_cast<double>(config.sample_count()) * eps * eps) *
                   std::log(2.0 / config.delta);
    if (!std::isfinite(value) || value > 1e15) {
        throw std::overflow_error("copy count overflows");
    }
    auto m = static_cast<std::uint64_t>(std::ceil(value));
    return m < 1 ? 1 : m;
}

double estimate_from_counts(
    std::span<const double> values, const OutcomeSample &sample, double norm_sq, std::size_t d) {
    if (sample.total == 0) {
        throw std::invalid_argument("outcome sample has no shots");
    }
    if (sample.counts.size() != values.size()) {
        throw DimensionError("outcome sample does not match basis dimension");
    }
    double total = 0;
    for (std::size_t r = 0; r < values.size(); r++) {
        if (sample.counts[r] != 0) {
            total += static_cast<double>(sample.counts[r]) * values[r];
        }
    }
    return total / (static_cast<double>(sample.total) * norm_sq * std::sqrt(static_cast<double>(d)));
}

}  // namespace

std::string_view to_string(Protocol protocol) {
    switch (protocol) {
        case Protocol::kOriginal:
            return "original";
        case Protocol::kGroupedQwc:
            return "qwc";
        case Protocol::kGroupedFc:
            return "fc";
    }
    return "?";
}

Protocol parse_protocol(std::string_view text) {
    if (text == "original") {
        return Protocol::kOriginal;
    }
    if (text == "qwc" || text == "grouped_qwc") {
        return Protocol::kGroupedQwc;
    }
    if (text == "fc" || text == "grouped_fc") {
        return Protocol::kGroupedFc;
    }
    throw std::invalid_argument("unknown protocol '" + std::string(text) + "'");
}

std::string_view to_string(OutcomeModel model) {
    return model == OutcomeModel::kJoint ? "joint" : "marginal";
}

OutcomeModel parse_outcome_model(std::string_view text) {
    if (text == "joint") {
        return OutcomeModel::kJoint;
    }
    if (text == "marginal") {
        return OutcomeModel::kMarginal;
    }
    throw std::invalid_argument("unknown outcome model '" + std::string(text) + "'");
}

std::uint64_t default_sample_count(double epsilon, double delta) {
    double x = 1.0 / (epsilon * epsilon * delta);
    double nearest = std::round(x);
    if (std::abs(x - nearest) <= 1e-9 * x) {
        return static_cast<std::uint64_t>(nearest);
    }
    return static_cast<std::uint64_t>(std::ceil(x));
}

std::uint64_t DfeConfig::sample_count() const {
    return ell.value_or(default_sample_count(epsilon, delta));
}

void DfeConfig::validate() const {
    if (!(epsilon > 0)) {
        throw std::invalid_argument("epsilon must be positive");
    }
    if (!(delta > 0 && delta < 1)) {
        throw std::invalid_argument("delta must lie in (0, 1)");
    }
    if (ell.has_value() && *ell == 0) {
        throw std::invalid_argument("ell must be at least 1");
    }
}

std::vector<std::size_t> importance_sample(std::span<const double> weights, std::uint64_t ell, std::uint64_t seed) {
    if (weights.empty()) {
        throw std::invalid_argument("importance_sample: no weights");
    }
    double total = 0;
    for (double w : weights) {
        if (!(w >= 0)) {
            throw std::invalid_argument("importance_sample: negative weight");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-8) {
        throw std::invalid_argument("importance_sample: weights sum to " + std::to_string(total) + ", not 1");
    }
    std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> out(ell);
    for (auto &k : out) {
        k = dist(rng);
    }
    return out;
}

std::uint64_t copies_original(double b_sq, std::size_t d, const DfeConfig &config) {
    if (!(b_sq > 0)) {
        throw std::invalid_argument("copies_original: b^2 must be positive");
    }
    return copies_for_ratio(1.0 / b_sq, d, config);
}

std::uint64_t copies_grouped(double norm_l1, double norm_sq, std::size_t d, const DfeConfig &config) {
    if (!(norm_sq > 0)) {
        throw std::invalid_argument("copies_grouped: ||b||^2 must be positive");
    }
    if (norm_l1 < std::sqrt(norm_sq) * (1 - 1e-12)) {
        throw std::invalid_argument("copies_grouped: ||b||_1 is smaller than ||b||_2");
    }
    // Grouped so that a singleton (l1^2 == norm_sq) reproduces 1 / b^2 bit for bit.
    return copies_for_ratio((norm_l1 * norm_l1 / norm_sq) / norm_sq, d, config);
}

double estimate_x_grouped(
    const PauliGroup &group, const OutcomeSample &sample, const MeasurementBasis &basis, std::size_t d) {
    if (basis.dimension() != d) {
        throw DimensionError("estimate_x_grouped: basis dimension differs from d");
    }
    std::vector<double> values = outcome_values(group, basis);
    return estimate_from_counts(values, sample, group.norm_sq, d);
}

double expected_copy_bound(const DfeConfig &config, std::size_t d) {
    config.validate();
    double eps_sq = config.epsilon * config.epsilon;
    return 1.0 + 1.0 / (eps_sq * config.delta) + 2.0 * static_cast<double>(d) / eps_sq * std::log(2.0 / config.delta);
}

Grouping build_grouping(const CoefficientTable &table, Protocol protocol) {
    switch (protocol) {
        case Protocol::kOriginal:
            return singleton_grouping(table);
        case Protocol::kGroupedQwc:
            return sorted_insertion(table, Commutation::kQubitWise);
        case Protocol::kGroupedFc:
            return sorted_insertion(table, Commutation::kFull);
    }
    throw std::invalid_argument("unknown protocol");
}

namespace {

struct GroupPlan {
    std::optional<MeasurementBasis> basis;
    std::vector<double> values;
    std::optional<OutcomeSampler> sampler;
    std::vector<double> plus_probs;  // marginal model: P(+1) per member
    std::uint64_t copies;
};

// Sum over m shots of C = sum_l b_l c_l with independent +-1 draws per member.
double marginal_sum(const PauliGroup &group, const GroupPlan &plan, std::mt19937_64 &rng) {
    double total = 0;
    auto m = static_cast<long long>(plan.copies);
    for (std::size_t l = 0; l < group.members.size(); l++) {
        std::binomial_distribution<long long> dist(m, plan.plus_probs[l]);
        long long plus = dist(rng);
        total += group.members[l].coefficient * static_cast<double>(2 * plus - m);
    }
    return total;
}

}  // namespace

DfeResult run_dfe_on_grouping(
    const DfeConfig &config, const Grouping &grouping, const NoisyState &sigma, double reference_fidelity) {
    config.validate();
    if (grouping.dimension() != sigma.dimension()) {
        throw DimensionError("run_dfe: grouping and noisy state dimensions differ");
    }
    if (grouping.groups.empty()) {
        throw std::invalid_argument("run_dfe: empty grouping");
    }
    std::size_t d = grouping.dimension();
    std::uint64_t ell = config.sample_count();

    DfeResult result;
    result.config = config;
    result.num_qubits = grouping.num_qubits;
    result.p = sigma.p;
    result.true_fidelity = reference_fidelity;
    result.num_groups = grouping.groups.size();
    result.min_regime_ratio = std::numeric_limits<double>::infinity();
    for (const auto &g : grouping.groups) {
        result.min_regime_ratio = std::min(result.min_regime_ratio, g.norm_l1 * g.norm_l1 / (g.norm_sq * g.norm_sq));
    }

    std::vector<double> weights = grouping.weights();
    std::vector<std::size_t> picks = importance_sample(weights, ell, derive_seed(config.seed, {kSamplingStream}));

    std::vector<std::unique_ptr<GroupPlan>> plans(grouping.groups.size());
    auto plan_for = [&](std::size_t k) -> GroupPlan & {
        if (!plans[k]) {
            const PauliGroup &group = grouping.groups[k];
            auto plan = std::make_unique<GroupPlan>();
            plan->copies = copies_grouped(group.norm_l1, group.norm_sq, d, config);
            if (config.outcomes == OutcomeModel::kJoint) {
                plan->basis = common_eigenbasis(group, grouping.mode, derive_seed(config.seed, {kBasisStream, k}));
                plan->values = outcome_values(group, *plan->basis);
                plan->sampler.emplace(outcome_probabilities(sigma, *plan->basis));
            } else {
                for (const auto &term : group.members) {
                    double e = noisy_coefficient(sigma, term) * std::sqrt(static_cast<double>(d));
                    plan->plus_probs.push_back(std::clamp((1 + e) / 2, 0.0, 1.0));
                }
            }
            plans[k] = std::move(plan);
        }
        return *plans[k];
    };

    if (config.keep_rounds) {
        result.rounds.reserve(ell);
    }
    OutcomeSample sample;
    double sum_x = 0;
    double sum_x_sq = 0;
    for (std::uint64_t i = 0; i < ell; i++) {
        std::size_t k = picks[i];
        GroupPlan &plan = plan_for(k);
        std::mt19937_64 rng(derive_seed(config.seed, {kRoundStream, i}));
        double x = 0;
        if (plan.sampler) {
            plan.sampler->sample(plan.copies, rng, sample);
            x = estimate_from_counts(plan.values, sample, grouping.groups[k].norm_sq, d);
        } else {
            x = marginal_sum(grouping.groups[k], plan, rng) /
                (static_cast<double>(plan.copies) * grouping.groups[k].norm_sq * std::sqrt(static_cast<double>(d)));
        }
        sum_x += x;
        sum_x_sq += x * x;
        result.total_copies += plan.copies;
        if (config.keep_rounds) {
            result.rounds.push_back({k, plan.copies, x});
        }
    }
    result.estimate = sum_x / static_cast<double>(ell);
    result.mean_x_sq = sum_x_sq / static_cast<double>(ell);
    return result;
}

DfeResult run_dfe(const DfeConfig &config, const StateVector &target, const NoisyState &sigma) {
    if (target.dimension() != sigma.dimension()) {
        throw DimensionError("run_dfe: target and noisy state dimensions differ");
    }
    CoefficientTable table = pauli_coefficients(target);
    Grouping grouping = build_grouping(table, config.protocol);
    return run_dfe_on_grouping(config, grouping, sigma, fidelity(target, sigma));
}

RoundMoments round_moments(const DfeConfig &config, const Grouping &grouping, const NoisyState &sigma) {
    config.validate();
    if (grouping.dimension() != sigma.dimension()) {
        throw DimensionError("round_moments: grouping and noisy state dimensions differ");
    }
    std::size_t d = grouping.dimension();
    double sqrt_d = std::sqrt(static_cast<double>(d));
    RoundMoments out;
    for (std::size_t k = 0; k < grouping.groups.size(); k++) {
        const PauliGroup &group = grouping.groups[k];
        auto m = static_cast<double>(copies_grouped(group.norm_l1, group.norm_sq, d, config));
        double mean_c = 0;
        double var_c = 0;
        if (config.outcomes == OutcomeModel::kJoint) {
            MeasurementBasis basis = common_eigenbasis(group, grouping.mode, derive_seed(config.seed, {kBasisStream, k}));
            std::vector<double> probs = outcome_probabilities(sigma, basis);
            std::vector<double> values = outcome_values(group, basis);
            double second_c = 0;
            for (std::size_t r = 0; r < d; r++) {
                mean_c += probs[r] * values[r];
                second_c += probs[r] * values[r] * values[r];
            }
            var_c = std::max(second_c - mean_c * mean_c, 0.0);
        } else {
            for (const auto &term : group.members) {
                double e = noisy_coefficient(sigma, term) * sqrt_d;
                mean_c += term.coefficient * e;
                var_c += term.coefficient * term.coefficient * std::max(1 - e * e, 0.0);
            }
        }
        double scale = group.norm_sq * sqrt_d;
        double x = mean_c / scale;
        out.mean += group.norm_sq * x;
        out.second += group.norm_sq * (var_c / (m * scale * scale) + x * x);
        out.mean_copies += group.norm_sq * m;
    }
    return out;
}

nlohmann::json to_json(const DfeResult &result) {
    return {
        {"mode", std::string(to_string(result.config.protocol))},
        {"outcomes", std::string(to_string(result.config.outcomes))},
        {"n", result.num_qubits},
        {"p", result.p},
        {"epsilon", result.config.epsilon},
        {"delta", result.config.delta},
        {"ell", result.config.sample_count()},
        {"seed", result.config.seed},
        {"estimate", result.estimate},
        {"true_fidelity", result.true_fidelity},
        {"total_copies", result.total_copies},
        {"num_groups", result.num_groups},
    };
}

}  // namespace dfe
