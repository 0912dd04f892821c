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

#ifndef DFE_INVARIANTS_H
#define DFE_INVARIANTS_H

#include <cstdint>
#include <string>
#include <vector>

namespace dfe {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Fast self-checks of the library's structural invariants on small random
/// instances. Backs `dfe verify`.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed);

}  // namespace dfe

#endif
