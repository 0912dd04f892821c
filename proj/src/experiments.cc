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

#include "dfe/experiments.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "dfe/seeding.h"

namespace dfe {

namespace {

constexpr std::uint64_t kStateStream = 0x5747;

std::uint64_t protocol_label(Protocol protocol) {
    return 100 + static_cast<std::uint64_t>(protocol);
}

double unbiased_variance(std::span<const double> xs) {
    if (xs.size() < 2) {
        return 0.0;
    }
    double mean = 0;
    for (double x : xs) {
        mean += x;
    }
    mean /= static_cast<double>(xs.size());
    double ss = 0;
    for (double x : xs) {
        ss += (x - mean) * (x - mean);
    }
    return ss / static_cast<double>(xs.size() - 1);
}

double stddev(std::span<const double> xs) {
    return std::sqrt(unbiased_variance(xs));
}

}  // namespace

void BatchConfig::validate() const {
    check_qubit_count(n);
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("p must lie in [0, 1]");
    }
    DfeConfig probe{epsilon, delta, ell};
    probe.validate();
    if (protocols.empty()) {
        throw std::invalid_argument("batch needs at least one protocol");
    }
    if (num_samples < 1) {
        throw std::invalid_argument("num_samples must be at least 1");
    }
}

unsigned default_thread_count() {
    if (const char *env = std::getenv("DFE_THREADS")) {
        char *end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

StatsSummary summarize(
    const BatchConfig &config, Protocol protocol, std::uint64_t ell, std::span<const SampleRecord> samples) {
    StatsSummary s;
    s.state = config.state;
    s.protocol = protocol;
    s.outcomes = config.outcomes;
    s.n = config.n;
    s.p = config.p;
    s.epsilon = config.epsilon;
    s.delta = config.delta;
    s.ell = ell;
    s.num_samples = samples.size();
    if (samples.empty()) {
        return s;
    }
    std::vector<double> residuals;
    std::vector<std::uint64_t> copies;
    s.min_regime_ratio = std::numeric_limits<double>::infinity();
    for (const auto &r : samples) {
        residuals.push_back(r.residual);
        copies.push_back(r.total_copies);
        s.mean_estimate += r.estimate;
        s.mean_residual += r.residual;
        s.mean_copies += static_cast<double>(r.total_copies);
        s.mean_num_groups += static_cast<double>(r.num_groups);
        s.mean_x_sq += r.mean_x_sq;
        s.min_regime_ratio = std::min(s.min_regime_ratio, r.regime_ratio);
    }
    double count = static_cast<double>(samples.size());
    s.mean_estimate /= count;
    s.mean_residual /= count;
    s.mean_copies /= count;
    s.mean_num_groups /= count;
    s.mean_x_sq /= count;
    s.variance_of_estimate = unbiased_variance(residuals);
    std::sort(copies.begin(), copies.end());
    s.min_copies = copies.front();
    s.max_copies = copies.back();
    std::size_t mid = copies.size() / 2;
    s.median_copies = copies.size() % 2 == 1 ? static_cast<double>(copies[mid])
                                             : 0.5 * static_cast<double>(copies[mid - 1] + copies[mid]);
    return s;
}

std::vector<ExperimentStats> run_batch(const BatchConfig &config) {
    config.validate();
    std::uint64_t ell = config.ell.value_or(default_sample_count(config.epsilon, config.delta));
    std::size_t num_modes = config.protocols.size();

    // W and GHZ targets do not change between samples.
    struct Prepared {
        StateVector state;
        std::vector<Grouping> groupings;
    };
    auto prepare = [&](const StateVector &state) {
        Prepared out{state, {}};
        CoefficientTable table = pauli_coefficients(state);
        for (Protocol m : config.protocols) {
            out.groupings.push_back(build_grouping(table, m));
        }
        return out;
    };
    std::optional<Prepared> fixed;
    if (config.state != StateKind::kHaar) {
        fixed = prepare(make_state(config.state, config.n, config.master_seed));
    }

    std::vector<std::vector<SampleRecord>> records(num_modes, std::vector<SampleRecord>(config.num_samples));
    auto run_sample = [&](std::uint64_t s) {
        std::optional<Prepared> local;
        const Prepared *prepared = fixed ? &*fixed : nullptr;
        if (!prepared) {
            local = prepare(make_state(config.state, config.n, derive_seed(config.master_seed, {s, kStateStream})));
            prepared = &*local;
        }
        NoisyState sigma(prepared->state, config.p);
        double f = true_fidelity(sigma);
        for (std::size_t m = 0; m < num_modes; m++) {
            DfeConfig run{config.epsilon, config.delta, ell, config.protocols[m], config.outcomes,
                          derive_seed(config.master_seed, {s, protocol_label(config.protocols[m])})};
            DfeResult result = run_dfe_on_grouping(run, prepared->groupings[m], sigma, f);
            SampleRecord &rec = records[m][s];
            rec.sample_id = s;
            rec.seed = run.seed;
            rec.estimate = result.estimate;
            rec.true_fidelity = result.true_fidelity;
            rec.residual = result.estimate - result.true_fidelity;
            rec.total_copies = result.total_copies;
            rec.num_groups = result.num_groups;
            rec.mean_x_sq = result.mean_x_sq;
            rec.regime_ratio = result.min_regime_ratio;
        }
    };

    unsigned threads = config.threads ? config.threads : default_thread_count();
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, config.num_samples));
    if (threads <= 1) {
        for (std::uint64_t s = 0; s < config.num_samples; s++) {
            run_sample(s);
        }
    } else {
        std::atomic<std::uint64_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; t++) {
            pool.emplace_back([&] {
                for (std::uint64_t s = next++; s < config.num_samples; s = next++) {
                    try {
                        run_sample(s);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                        next = config.num_samples;
                    }
                }
            });
        }
        for (auto &t : pool) {
            t.join();
        }
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    std::vector<ExperimentStats> out;
    for (std::size_t m = 0; m < num_modes; m++) {
        ExperimentStats stats;
        stats.summary = summarize(config, config.protocols[m], ell, records[m]);
        stats.samples = std::move(records[m]);
        out.push_back(std::move(stats));
    }
    if (!config.output_path.empty()) {
        write_results(out, config.output_path);
    }
    return out;
}

nlohmann::json VarianceReport::to_json() const {
    return {
        {"variance_ratio", variance_ratio},
        {"variance_reduction", variance_reduction},
        {"variance_diff_se", variance_diff_se},
        {"copies_ratio", copies_ratio},
        {"copies_reduction", copies_reduction},
        {"mean_x_sq_grouped", mean_x_sq_grouped},
        {"mean_x_sq_original", mean_x_sq_original},
        {"x_sq_diff_se", x_sq_diff_se},
        {"min_regime_ratio", min_regime_ratio},
        {"appendix_b_regime", appendix_b_regime},
        {"variance_bounded", variance_bounded},
        {"second_moment_bounded", second_moment_bounded},
    };
}

VarianceReport variance_comparison(
    const ExperimentStats &grouped, const ExperimentStats &original, std::uint64_t bootstrap_seed, int resamples) {
    const StatsSummary &g = grouped.summary;
    const StatsSummary &o = original.summary;
    if (g.n != o.n || g.state != o.state || g.p != o.p || g.epsilon != o.epsilon || g.delta != o.delta ||
        g.ell != o.ell || grouped.samples.size() != original.samples.size() || grouped.samples.empty()) {
        throw std::invalid_argument("variance_comparison: batches were not run with matching configurations");
    }
    VarianceReport report;
    if (o.variance_of_estimate > 0) {
        report.variance_ratio = g.variance_of_estimate / o.variance_of_estimate;
    } else {
        report.variance_ratio = g.variance_of_estimate > 0 ? std::numeric_limits<double>::infinity() : 1.0;
    }
    report.variance_reduction = 1.0 - report.variance_ratio;
    report.copies_ratio = o.mean_copies > 0 ? g.mean_copies / o.mean_copies : 1.0;
    report.copies_reduction = 1.0 - report.copies_ratio;
    report.mean_x_sq_grouped = g.mean_x_sq;
    report.mean_x_sq_original = o.mean_x_sq;
    report.min_regime_ratio = std::min(g.min_regime_ratio, o.min_regime_ratio);
    report.appendix_b_regime = report.min_regime_ratio >= kRegimeThreshold;

    std::size_t count = grouped.samples.size();
    std::mt19937_64 rng(bootstrap_seed);
    std::uniform_int_distribution<std::size_t> pick(0, count - 1);
    std::vector<double> var_diffs;
    std::vector<double> xsq_diffs;
    std::vector<double> rg(count);
    std::vector<double> ro(count);
    for (int b = 0; b < resamples; b++) {
        double xsq = 0;
        for (std::size_t i = 0; i < count; i++) {
            std::size_t k = pick(rng);
            rg[i] = grouped.samples[k].residual;
            ro[i] = original.samples[k].residual;
            xsq += original.samples[k].mean_x_sq - grouped.samples[k].mean_x_sq;
        }
        var_diffs.push_back(unbiased_variance(ro) - unbiased_variance(rg));
        xsq_diffs.push_back(xsq / static_cast<double>(count));
    }
    report.variance_diff_se = stddev(var_diffs);
    report.x_sq_diff_se = stddev(xsq_diffs);
    if (report.appendix_b_regime) {
        report.variance_bounded = g.variance_of_estimate <= o.variance_of_estimate + 3 * report.variance_diff_se;
        report.second_moment_bounded = g.mean_x_sq <= o.mean_x_sq + 3 * report.x_sq_diff_se;
    }
    return report;
}

nlohmann::json to_json(const StatsSummary &s) {
    return {
        {"state", std::string(to_string(s.state))},
        {"mode", std::string(to_string(s.protocol))},
        {"outcomes", std::string(to_string(s.outcomes))},
        {"n", s.n},
        {"p", s.p},
        {"epsilon", s.epsilon},
        {"delta", s.delta},
        {"ell", s.ell},
        {"num_samples", s.num_samples},
        {"mean_estimate", s.mean_estimate},
        {"mean_residual", s.mean_residual},
        {"variance_of_estimate", s.variance_of_estimate},
        {"mean_copies", s.mean_copies},
        {"min_copies", s.min_copies},
        {"median_copies", s.median_copies},
        {"max_copies", s.max_copies},
        {"mean_num_groups", s.mean_num_groups},
        {"mean_x_sq", s.mean_x_sq},
        {"min_regime_ratio", s.min_regime_ratio},
    };
}

StatsSummary summary_from_json(const nlohmann::json &j) {
    StatsSummary s;
    s.state = parse_state_kind(j.at("state").get<std::string>());
    s.protocol = parse_protocol(j.at("mode").get<std::string>());
    s.outcomes = parse_outcome_model(j.value("outcomes", std::string("joint")));
    s.n = j.at("n").get<int>();
    s.p = j.at("p").get<double>();
    s.epsilon = j.at("epsilon").get<double>();
    s.delta = j.at("delta").get<double>();
    s.ell = j.at("ell").get<std::uint64_t>();
    s.num_samples = j.at("num_samples").get<std::uint64_t>();
    s.mean_estimate = j.at("mean_estimate").get<double>();
    s.mean_residual = j.at("mean_residual").get<double>();
    s.variance_of_estimate = j.at("variance_of_estimate").get<double>();
    s.mean_copies = j.at("mean_copies").get<double>();
    s.min_copies = j.at("min_copies").get<std::uint64_t>();
    s.median_copies = j.at("median_copies").get<double>();
    s.max_copies = j.at("max_copies").get<std::uint64_t>();
    s.mean_num_groups = j.at("mean_num_groups").get<double>();
    s.mean_x_sq = j.at("mean_x_sq").get<double>();
    s.min_regime_ratio = j.at("min_regime_ratio").get<double>();
    return s;
}

void write_results(std::span<const ExperimentStats> stats, const std::filesystem::path &path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream csv(path);
    if (!csv) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    csv << kResultsCsvHeader << '\n' << std::setprecision(17);
    std::uint64_t rows = stats.empty() ? 0 : stats.front().samples.size();
    for (std::uint64_t s = 0; s < rows; s++) {
        for (const auto &st : stats) {
            const SampleRecord &r = st.samples.at(s);
            const StatsSummary &m = st.summary;
            csv << r.sample_id << ',' << to_string(m.protocol) << ',' << m.n << ',' << to_string(m.state) << ','
                << m.p << ',' << r.estimate << ',' << r.true_fidelity << ',' << r.residual << ',' << r.total_copies
                << ',' << r.num_groups << ',' << r.seed << '\n';
        }
    }
    if (!csv) {
        throw std::runtime_error("write to '" + path.string() + "' failed");
    }

    nlohmann::json sidecar = nlohmann::json::array();
    for (const auto &st : stats) {
        nlohmann::json entry = to_json(st.summary);
        nlohmann::json xsq = nlohmann::json::array();
        nlohmann::json regime = nlohmann::json::array();
        for (const auto &r : st.samples) {
            xsq.push_back(r.mean_x_sq);
            regime.push_back(r.regime_ratio);
        }
        entry["mean_x_sq_per_sample"] = std::move(xsq);
        entry["regime_ratio_per_sample"] = std::move(regime);
        sidecar.push_back(std::move(entry));
    }
    std::filesystem::path json_path = path.string() + ".json";
    std::ofstream js(json_path);
    if (!js) {
        throw std::runtime_error("cannot open '" + json_path.string() + "' for writing");
    }
    js << sidecar.dump(2) << '\n';
    if (!js) {
        throw std::runtime_error("write to '" + json_path.string() + "' failed");
    }
}

std::vector<ExperimentStats> read_results(const std::filesystem::path &path) {
    std::filesystem::path json_path = path.string() + ".json";
    std::ifstream js(json_path);
    if (!js) {
        throw std::runtime_error("cannot open '" + json_path.string() + "'");
    }
    nlohmann::json sidecar = nlohmann::json::parse(js);
    std::vector<ExperimentStats> out;
    for (const auto &entry : sidecar) {
        ExperimentStats st;
        st.summary = summary_from_json(entry);
        const auto &xsq = entry.at("mean_x_sq_per_sample");
        const auto &regime = entry.at("regime_ratio_per_sample");
        st.samples.resize(xsq.size());
        for (std::size_t i = 0; i < xsq.size(); i++) {
            st.samples[i].mean_x_sq = xsq[i].get<double>();
            st.samples[i].regime_ratio = regime.at(i).get<double>();
        }
        out.push_back(std::move(st));
    }

    std::ifstream csv(path);
    if (!csv) {
        throw std::runtime_error("cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(csv, line) || line != kResultsCsvHeader) {
        throw std::runtime_error("'" + path.string() + "' does not start with the results header");
    }
    while (std::getline(csv, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cols.push_back(cell);
        }
        if (cols.size() != 11) {
            throw std::runtime_error("'" + path.string() + "': malformed row '" + line + "'");
        }
        Protocol protocol = parse_protocol(cols[1]);
        auto st = std::find_if(out.begin(), out.end(), [&](const ExperimentStats &e) {
            return e.summary.protocol == protocol;
        });
        if (st == out.end()) {
            throw std::runtime_error("'" + path.string() + "': row for mode without summary");
        }
        std::uint64_t id = std::stoull(cols[0]);
        SampleRecord &r = st->samples.at(id);
        r.sample_id = id;
        r.estimate = std::stod(cols[5]);
        r.true_fidelity = std::stod(cols[6]);
        r.residual = std::stod(cols[7]);
        r.total_copies = std::stoull(cols[8]);
        r.num_groups = std::stoull(cols[9]);
        r.seed = std::stoull(cols[10]);
    }
    return out;
}

}  // namespace dfe
