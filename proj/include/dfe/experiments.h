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

#ifndef DFE_EXPERIMENTS_H
#define DFE_EXPERIMENTS_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "dfe/protocol.h"
#include "dfe/states.h"

namespace dfe {

struct BatchConfig {
    StateKind state = StateKind::kHaar;
    int n = 4;
    double p = 0.1;
    double epsilon = 0.05;
    double delta = 0.05;
    std::optional<std::uint64_t> ell;
    std::vector<Protocol> protocols{Protocol::kOriginal, Protocol::kGroupedQwc, Protocol::kGroupedFc};
    OutcomeModel outcomes = OutcomeModel::kJoint;
    std::uint64_t num_samples = 200;
    std::uint64_t master_seed = 1;
    std::string output_path;  // empty: nothing written
    unsigned threads = 0;     // 0: DFE_THREADS or hardware concurrency

    void validate() const;
};

/// One run of one protocol on one sampled state.
struct SampleRecord {
    std::uint64_t sample_id = 0;
    std::uint64_t seed = 0;
    double estimate = 0;
    double true_fidelity = 0;
    double residual = 0;
    std::uint64_t total_copies = 0;
    std::size_t num_groups = 0;
    double mean_x_sq = 0;
    double regime_ratio = 0;

    bool operator==(const SampleRecord &) const = default;
};

struct StatsSummary {
    StateKind state = StateKind::kHaar;
    Protocol protocol = Protocol::kOriginal;
    OutcomeModel outcomes = OutcomeModel::kJoint;
    int n = 0;
    double p = 0;
    double epsilon = 0;
    double delta = 0;
    std::uint64_t ell = 0;
    std::uint64_t num_samples = 0;
    double mean_estimate = 0;
    double mean_residual = 0;
    double variance_of_estimate = 0;  // unbiased sample variance of the residuals
    double mean_copies = 0;
    std::uint64_t min_copies = 0;
    double median_copies = 0;
    std::uint64_t max_copies = 0;
    double mean_num_groups = 0;
    double mean_x_sq = 0;
    double min_regime_ratio = 0;

    bool operator==(const StatsSummary &) const = default;
};

struct ExperimentStats {
    StatsSummary summary;
    std::vector<SampleRecord> samples;
};

StatsSummary summarize(
    const BatchConfig &config, Protocol protocol, std::uint64_t ell, std::span<const SampleRecord> samples);

/// Runs every requested protocol on `num_samples` states. Haar samples draw a
/// fresh state per sample; W and GHZ reuse one state. Sample s of protocol m
/// uses seed derive_seed(master, {s, m}). Writes results when output_path is set.
std::vector<ExperimentStats> run_batch(const BatchConfig &config);

/// Worker count: DFE_THREADS when set and positive, otherwise hardware concurrency.
unsigned default_thread_count();

struct VarianceReport {
    double variance_ratio = 0;      // Var(grouped) / Var(original)
    double variance_reduction = 0;  // 1 - ratio
    double variance_diff_se = 0;    // bootstrap SE of Var(original) - Var(grouped)
    double copies_ratio = 0;
    double copies_reduction = 0;
    double mean_x_sq_grouped = 0;
    double mean_x_sq_original = 0;
    double x_sq_diff_se = 0;  // bootstrap SE of E[X_orig^2] - E[X_grouped^2]
    double min_regime_ratio = 0;
    bool appendix_b_regime = false;  // min ||b||_1^2 / ||b||^4 >= 10 over both groupings
    bool variance_bounded = true;    // Var(g) <= Var(o) + 3 SE, checked only in regime
    bool second_moment_bounded = true;  // E[Xg^2] <= E[Xo^2] + 3 SE, checked only in regime

    nlohmann::json to_json() const;
};

inline constexpr double kRegimeThreshold = 10.0;

/// Compares a grouped batch against the original batch on the same samples.
/// Bootstrap resamples sample indices (paired).
VarianceReport variance_comparison(
    const ExperimentStats &grouped, const ExperimentStats &original, std::uint64_t bootstrap_seed = 7,
    int resamples = 1000);

inline constexpr const char *kResultsCsvHeader =
    "sample_id,mode,n,state,p,estimate,true_fidelity,residual,total_copies,num_groups,seed";

/// Writes `path` (one CSV row per sample and mode, ordered by sample then mode)
/// and `path` + ".json" with the summaries.
void write_results(std::span<const ExperimentStats> stats, const std::filesystem::path &path);

/// Inverse of write_results.
std::vector<ExperimentStats> read_results(const std::filesystem::path &path);

nlohmann::json to_json(const StatsSummary &summary);
StatsSummary summary_from_json(const nlohmann::json &j);

}  // namespace dfe

#endif
