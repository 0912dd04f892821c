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

#include "dfe/grouping.h"

#include <algorithm>
#include <cmath>

namespace dfe {

bool PauliGroup::accepts(const PauliString &p, Commutation mode) const {
    for (const auto &m : members) {
        if (!commutes(m.pauli, p, mode)) {
            return false;
        }
    }
    return true;
}

void PauliGroup::add(const PauliTerm &term) {
    members.push_back(term);
    norm_sq += term.coefficient * term.coefficient;
    norm_l1 += std::abs(term.coefficient);
}

GroupNorms group_norms(const PauliGroup &group) {
    if (group.members.empty()) {
        throw std::invalid_argument("group_norms: empty group");
    }
    GroupNorms out{0, 0};
    for (const auto &m : group.members) {
        out.norm_sq += m.coefficient * m.coefficient;
        out.norm_l1 += std::abs(m.coefficient);
    }
    return out;
}

std::size_t Grouping::num_terms() const {
    std::size_t total = 0;
    for (const auto &g : groups) {
        total += g.size();
    }
    return total;
}

std::vector<double> Grouping::weights() const {
    std::vector<double> out;
    out.reserve(groups.size());
    for (const auto &g : groups) {
        out.push_back(g.norm_sq);
    }
    return out;
}

Grouping sorted_insertion(const CoefficientTable &table, Commutation mode, IdentityPlacement identity) {
    check_qubit_count(table.num_qubits);
    std::vector<PauliTerm> terms;
    terms.reserve(table.entries.size());
    for (const auto &e : table.entries) {
        if (e.coefficient != 0.0) {
            terms.push_back(e);
        }
    }
    if (terms.empty()) {
        throw std::invalid_argument("sorted_insertion: coefficient table has no nonzero entries");
    }
    std::sort(terms.begin(), terms.end(), [](const PauliTerm &a, const PauliTerm &b) {
        double ma = std::abs(a.coefficient);
        double mb = std::abs(b.coefficient);
        if (ma != mb) {
            return ma > mb;
        }
        return a.pauli < b.pauli;
    });

    Grouping out;
    out.num_qubits = table.num_qubits;
    out.mode = mode;
    // Groups before `open_from` take no further members.
    std::size_t open_from = 0;
    for (const auto &t : terms) {
        if (identity == IdentityPlacement::kOwnGroup && t.pauli.is_identity()) {
            PauliGroup own;
            own.add(t);
            out.groups.insert(out.groups.begin(), std::move(own));
            open_from = 1;
            continue;
        }
        auto target = std::find_if(out.groups.begin() + open_from, out.groups.end(), [&](const PauliGroup &g) {
            return g.accepts(t.pauli, mode);
        });
        if (target == out.groups.end()) {
            PauliGroup fresh;
            fresh.index = out.groups.size();
            fresh.add(t);
            out.groups.push_back(std::move(fresh));
        } else {
            target->add(t);
        }
    }
    for (std::size_t k = 0; k < out.groups.size(); k++) {
        out.groups[k].index = k;
    }
    return out;
}

Grouping singleton_grouping(const CoefficientTable &table) {
    check_qubit_count(table.num_qubits);
    Grouping out;
    out.num_qubits = table.num_qubits;
    // A single string is trivially qubit-wise commuting, so its eigenbasis is a product basis.
    out.mode = Commutation::kQubitWise;
    for (const auto &e : table.entries) {
        if (e.coefficient == 0.0) {
            continue;
        }
        PauliGroup g;
        g.index = out.groups.size();
        g.add(e);
        out.groups.push_back(std::move(g));
    }
    if (out.groups.empty()) {
        throw std::invalid_argument("singleton_grouping: coefficient table has no nonzero entries");
    }
    return out;
}

nlohmann::json to_json(const Grouping &grouping) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto &g : grouping.groups) {
        nlohmann::json members = nlohmann::json::array();
        for (const auto &m : g.members) {
            members.push_back({{"pauli", m.pauli.str()}, {"b", m.coefficient}});
        }
        groups.push_back(std::move(members));
    }
    return {
        {"header", {{"mode", std::string(to_string(grouping.mode))}, {"n", grouping.num_qubits}}},
        {"groups", std::move(groups)},
    };
}

Grouping grouping_from_json(const nlohmann::json &j) {
    Grouping out;
    out.num_qubits = j.at("header").at("n").get<int>();
    out.mode = parse_commutation(j.at("header").at("mode").get<std::string>());
    check_qubit_count(out.num_qubits);
    for (const auto &members : j.at("groups")) {
        PauliGroup g;
        g.index = out.groups.size();
        for (const auto &m : members) {
            PauliString p = PauliString::from_str(m.at("pauli").get<std::string>());
            if (p.num_qubits() != out.num_qubits) {
                throw DimensionError("grouping JSON member " + p.str() + " does not match header n");
            }
            if (!g.accepts(p, out.mode)) {
                throw std::invalid_argument("grouping JSON member " + p.str() + " does not commute with its group");
            }
            g.add({p, m.at("b").get<double>()});
        }
        out.groups.push_back(std::move(g));
    }
    return out;
}

}  // namespace dfe
