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

#ifndef DFE_SEEDING_H
#define DFE_SEEDING_H

#include <cstdint>
#include <initializer_list>

namespace dfe {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t v) {
    v += 0x9E3779B97F4A7C15ULL;
    v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ULL;
    v = (v ^ (v >> 27)) * 0x94D049BB133111EBULL;
    return v ^ (v >> 31);
}

/// Derives an independent seed for a sub-stream, e.g. derive_seed(master, {sample, mode}).
/// Order of the labels matters.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> labels) {
    std::uint64_t h = mix64(master);
    for (std::uint64_t label : labels) {
        h = mix64(h ^ mix64(label + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

}  // namespace dfe

#endif
