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

// Command-line front end: `dfe run`, `dfe groups`, `dfe verify`.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"

#include "dfe/experiments.h"
#include "dfe/grouping.h"
#include "dfe/invariants.h"
#include "dfe/protocol.h"
#include "dfe/seeding.h"
#include "dfe/states.h"

namespace {

constexpr int kExitInvariantFailure = 1;
constexpr int kExitUsage = 2;

struct RunOptions {
    std::string state = "haar";
    std::string profile = "desk";
    int n = 0;
    double p = 0.1;
    double epsilon = 0.05;
    double delta = 0.05;
    std::uint64_t ell = 0;
    std::string mode = "all";
    std::string outcomes = "joint";
    std::uint64_t samples = 0;
    std::uint64_t seed = 1;
    std::string out;
};

struct GroupsOptions {
    std::string state = "haar";
    int n = 4;
    std::string mode = "fc";
    std::uint64_t seed = 1;
    std::string json;
    bool all_groups = false;
};

void print_summary(const dfe::StatsSummary &s) {
    std::cout << std::left << std::setw(9) << dfe::to_string(s.protocol) << std::right << std::setprecision(6)
              << " groups=" << std::setw(9) << s.mean_num_groups << " mean=" << std::setw(10) << s.mean_estimate
              << " var=" << std::setw(12) << s.variance_of_estimate << " copies=" << std::setw(10) << s.mean_copies
              << " [" << s.min_copies << ", " << s.median_copies << ", " << s.max_copies << "]\n";
}

int do_run(const RunOptions &opt) {
    dfe::BatchConfig cfg;
    cfg.state = dfe::parse_state_kind(opt.state);
    bool full = opt.profile == "full";
    cfg.n = opt.n ? opt.n : (full ? 8 : 4);
    cfg.num_samples = opt.samples ? opt.samples : (full ? 1000 : 200);
    cfg.p = opt.p;
    cfg.epsilon = opt.epsilon;
    cfg.delta = opt.delta;
    if (opt.ell) {
        cfg.ell = opt.ell;
    }
    if (opt.mode == "all") {
        cfg.protocols = {dfe::Protocol::kOriginal, dfe::Protocol::kGroupedQwc, dfe::Protocol::kGroupedFc};
    } else {
        cfg.protocols = {dfe::parse_protocol(opt.mode)};
    }
    cfg.outcomes = dfe::parse_outcome_model(opt.outcomes);
    cfg.master_seed = opt.seed;
    cfg.output_path = opt.out;
    cfg.validate();

    std::vector<dfe::ExperimentStats> stats = dfe::run_batch(cfg);
    dfe::DfeConfig bound_cfg{cfg.epsilon, cfg.delta};
    double bound = dfe::expected_copy_bound(bound_cfg, std::size_t{1} << cfg.n);
    std::cout << "state=" << opt.state << " n=" << cfg.n << " p=" << cfg.p << " samples=" << cfg.num_samples
              << " ell=" << stats.front().summary.ell << " F=" << std::setprecision(10)
              << (1 - cfg.p) + cfg.p / static_cast<double>(std::size_t{1} << cfg.n) << "\n";
    bool ok = true;
    for (const auto &s : stats) {
        print_summary(s.summary);
        if (s.summary.mean_copies > bound) {
            std::cout << "  mean copies exceed the bound " << bound << "\n";
            ok = false;
        }
    }
    const dfe::ExperimentStats *original = nullptr;
    for (const auto &s : stats) {
        if (s.summary.protocol == dfe::Protocol::kOriginal) {
            original = &s;
        }
    }
    if (original) {
        for (const auto &s : stats) {
            if (&s == original) {
                continue;
            }
            dfe::VarianceReport r = dfe::variance_comparison(s, *original);
            std::cout << dfe::to_string(s.summary.protocol) << " vs original: variance reduction "
                      << std::setprecision(4) << 100 * r.variance_reduction << "%, copies reduction "
                      << 100 * r.copies_reduction << "%, regime=" << (r.appendix_b_regime ? "yes" : "no") << "\n";
            if (!r.variance_bounded || !r.second_moment_bounded) {
                std::cout << "  variance ordering violated beyond 3 bootstrap standard errors\n";
                ok = false;
            }
        }
    }
    if (!opt.out.empty()) {
        std::cout << "wrote " << opt.out << " and " << opt.out << ".json\n";
    }
    return ok ? 0 : kExitInvariantFailure;
}

int do_groups(const GroupsOptions &opt) {
    dfe::StateKind kind = dfe::parse_state_kind(opt.state);
    dfe::Protocol protocol = dfe::parse_protocol(opt.mode);
    dfe::StateVector psi = dfe::make_state(kind, opt.n, dfe::derive_seed(opt.seed, {0, 0x5747}));
    dfe::Grouping grouping = dfe::build_grouping(dfe::pauli_coefficients(psi), protocol);
    std::cout << "groups: " << grouping.groups.size() << " (" << grouping.num_terms() << " Pauli strings)\n";
    std::cout << "index  size      norm_sq      norm_l1\n";
    std::size_t shown = opt.all_groups ? grouping.groups.size() : std::min<std::size_t>(grouping.groups.size(), 20);
    for (std::size_t k = 0; k < shown; k++) {
        const auto &g = grouping.groups[k];
        std::cout << std::setw(5) << k << std::setw(6) << g.size() << std::setw(13) << std::setprecision(6)
                  << g.norm_sq << std::setw(13) << g.norm_l1 << "\n";
    }
    if (shown < grouping.groups.size()) {
        std::cout << "... (" << grouping.groups.size() - shown << " more, --all to list)\n";
    }
    if (!opt.json.empty()) {
        std::ofstream out(opt.json);
        if (!out) {
            throw std::runtime_error("cannot open '" + opt.json + "' for writing");
        }
        out << dfe::to_json(grouping).dump(2) << "\n";
    }
    return 0;
}

int do_verify(std::uint64_t seed) {
    bool ok = true;
    for (const auto &c : dfe::run_invariant_suite(seed)) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name;
        if (!c.passed) {
            std::cout << ": " << c.detail;
            ok = false;
        }
        std::cout << "\n";
    }
    return ok ? 0 : kExitInvariantFailure;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Direct fidelity estimation with grouped Pauli sampling"};
    app.require_subcommand(1);

    RunOptions run_opt;
    auto *run = app.add_subcommand("run", "Run a batch of fidelity estimations and write CSV/JSON results");
    run->add_option("--state", run_opt.state, "Target state")->check(CLI::IsMember({"haar", "w", "ghz"}));
    run->add_option("--profile", run_opt.profile, "desk: n=4, 200 samples; full: n=8, 1000 samples")
        ->check(CLI::IsMember({"desk", "full"}));
    run->add_option("--n", run_opt.n, "Qubit count (overrides profile)")->check(CLI::Range(1, dfe::kMaxQubits));
    run->add_option("--p", run_opt.p, "Depolarizing probability")->check(CLI::Range(0.0, 1.0));
    run->add_option("--epsilon", run_opt.epsilon, "Additive error parameter")->check(CLI::PositiveNumber);
    run->add_option("--delta", run_opt.delta, "Failure probability")->check(CLI::Range(0.0, 1.0));
    run->add_option("--ell", run_opt.ell, "Sampled Paulis/groups per run (default ceil(1/(eps^2 delta)))");
    run->add_option("--mode", run_opt.mode, "Protocol")->check(CLI::IsMember({"original", "qwc", "fc", "all"}));
    run->add_option("--outcomes", run_opt.outcomes, "Shot model: joint eigenbasis outcomes or independent per-Pauli marginals")
        ->check(CLI::IsMember({"joint", "marginal"}));
    run->add_option("--samples", run_opt.samples, "Number of sampled states (overrides profile)");
    run->add_option("--seed", run_opt.seed, "Master seed");
    run->add_option("--out", run_opt.out, "CSV output path; a .json summary is written next to it");

    GroupsOptions groups_opt;
    auto *groups = app.add_subcommand("groups", "Print the sorted-insertion grouping of a target state");
    groups->add_option("--state", groups_opt.state, "Target state")->check(CLI::IsMember({"haar", "w", "ghz"}));
    groups->add_option("--n", groups_opt.n, "Qubit count")->check(CLI::Range(1, dfe::kMaxQubits));
    groups->add_option("--mode", groups_opt.mode, "Grouping")->check(CLI::IsMember({"original", "qwc", "fc"}));
    groups->add_option("--seed", groups_opt.seed, "Seed for Haar states");
    groups->add_option("--json", groups_opt.json, "Write the grouping as JSON");
    groups->add_flag("--all", groups_opt.all_groups, "List every group");

    std::uint64_t verify_seed = 1;
    auto *verify = app.add_subcommand("verify", "Run the invariant self-check suite");
    verify->add_option("--seed", verify_seed, "Seed for the random instances");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run) {
            return do_run(run_opt);
        }
        if (*groups) {
            return do_groups(groups_opt);
        }
        return do_verify(verify_seed);
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariantFailure;
    }
}
