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

#ifndef DFE_GROUPING_H
#define DFE_GROUPING_H

#include <cstddef>
#include <vector>

#include "json.hpp"

#include "dfe/pauli_string.h"
#include "dfe/states.h"

namespace dfe {

/// A family of mutually commuting Pauli strings with their target coefficients.
/// Members keep insertion order; norms are cached at construction.
struct PauliGroup {
    std::size_t index = 0;
    std::vector<PauliTerm> members;
    double norm_sq = 0;  // sum of b^2
    double norm_l1 = 0;  // sum of |b|

    /// True when `p` commutes with every member under `mode`.
    bool accepts(const PauliString &p, Commutation mode) const;
    void add(const PauliTerm &term);
    std::size_t size() const {
        return members.size();
    }
};

struct GroupNorms {
    double norm_sq;
    double norm_l1;
};

/// Recomputes both norms from the members.
GroupNorms group_norms(const PauliGroup &group);

/// A non-overlapping partition of a coefficient table.
struct Grouping {
    int num_qubits = 0;
    Commutation mode = Commutation::kFull;
    std::vector<PauliGroup> groups;

    std::size_t dimension() const {
        return std::size_t{1} << num_qubits;
    }
    std::size_t num_terms() const;
    /// Sampling weights ||b_k||^2, one per group.
    std::vector<double> weights() const;
};

enum class IdentityPlacement {
    kOwnGroup,  // the identity string is group 0 and accepts no other member
    kInline,    // the identity is inserted like any other string
};

/// Greedy sorted insertion: terms sorted by |b| descending (ties by canonical
/// Pauli order), each joins the first group it commutes with or opens a new one.
/// Zero coefficients are dropped.
///
/// With kOwnGroup, QWC on a full 4^n table yields 3^n + 1 groups.
Grouping sorted_insertion(
    const CoefficientTable &table, Commutation mode, IdentityPlacement identity = IdentityPlacement::kOwnGroup);

/// Every nonzero term in its own group, in canonical table order.
Grouping singleton_grouping(const CoefficientTable &table);

nlohmann::json to_json(const Grouping &grouping);
Grouping grouping_from_json(const nlohmann::json &j);

}  // namespace dfe

#endif
