// Copyright 2026 The kscert Authors
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

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kscert/assign.hpp"
#include "kscert/exact.hpp"

namespace kscert {

/// Headline numbers of a presented inequality: score <= bound, quantum value.
struct Headline {
    long bound;
    long quantum;
};

struct CatalogEntry {
    std::string_view name;
    std::string_view summary;
    std::string_view text;
    Verdict expected_verdict;
    std::size_t expected_polynomials;
    Headline projector;
    Headline dichotomic;
};

namespace catalog_text {

inline constexpr std::string_view mermin_peres = R"(# Two-qubit magic square: rows multiply to +I, the last column to -I.
name mermin-peres
dim 4
mode parity

[observables]
pauli +XI label X1
pauli +IX label X2
pauli +XX label X1 X2
pauli +IZ label Z2
pauli +ZI label Z1
pauli +ZZ label Z1 Z2
pauli +XZ label X1 Z2
pauli +ZX label Z1 X2
pauli +YY label Y1 Y2

[contexts]
1 2 3
4 5 6
7 8 9
1 4 7
2 5 8
3 6 9
)";

inline constexpr std::string_view mermin_pentagram = R"(# Three-qubit star: four lines multiply to +I, the XXX-XYY-YXY-YYX line to -I.
name mermin-pentagram
dim 8
mode parity

[observables]
pauli +XII
pauli +IXI
pauli +IIX
pauli +YII
pauli +IYI
pauli +IIY
pauli +XXX
pauli +XYY
pauli +YXY
pauli +YYX

[contexts]
1 2 3 7
3 4 5 10
2 4 6 9
1 5 6 8
7 8 9 10
)";

inline constexpr std::string_view cabello_18 = R"(# Eighteen rays in dimension four, each in exactly two of nine orthogonal bases.
name cabello-18
dim 4
mode auto

[observables]
ray 0 0 0 1
ray 0 0 1 0
ray 1 1 0 0
ray 1 -1 0 0
ray 0 1 0 0
ray 1 0 1 0
ray 1 0 -1 0
ray 1 -1 1 -1
ray 1 -1 -1 1
ray 0 0 1 1
ray 1 1 1 1
ray 0 1 0 -1
ray 1 0 0 1
ray 1 0 0 -1
ray 0 1 -1 0
ray 1 1 -1 1
ray 1 1 1 -1
ray -1 1 1 1
)";

inline constexpr std::string_view peres_24 = R"(# Twenty-four rays in dimension four; every orthogonal pair lies in one of 24 bases.
name peres-24
dim 4
mode auto

[observables]
ray 1 0 0 0
ray 0 1 0 0
ray 0 0 1 0
ray 0 0 0 1
ray 1 1 0 0
ray 1 -1 0 0
ray 1 0 1 0
ray 1 0 -1 0
ray 1 0 0 1
ray 1 0 0 -1
ray 0 1 1 0
ray 0 1 -1 0
ray 0 1 0 1
ray 0 1 0 -1
ray 0 0 1 1
ray 0 0 1 -1
ray 1 1 1 1
ray 1 1 1 -1
ray 1 1 -1 1
ray 1 1 -1 -1
ray 1 -1 1 1
ray 1 -1 1 -1
ray 1 -1 -1 1
ray 1 -1 -1 -1
)";

inline constexpr std::string_view peres_33 = R"(# Thirty-three rays in dimension three built from 0, 1 and sqrt2.
name peres-33
dim 3
mode ray

[observables]
ray 0 0 1
ray 0 1 0
ray 1 0 0
ray 0 1 1
ray 0 1 -1
ray 1 0 1
ray 1 0 -1
ray 1 1 0
ray 1 -1 0
ray 0 1 sqrt2
ray 0 1 -sqrt2
ray 0 sqrt2 1
ray 0 sqrt2 -1
ray 1 0 sqrt2
ray 1 0 -sqrt2
ray 1 sqrt2 0
ray 1 -sqrt2 0
ray sqrt2 0 1
ray sqrt2 0 -1
ray sqrt2 1 0
ray sqrt2 -1 0
ray 1 1 sqrt2
ray 1 1 -sqrt2
ray 1 -1 sqrt2
ray 1 -1 -sqrt2
ray 1 sqrt2 1
ray 1 sqrt2 -1
ray 1 -sqrt2 1
ray 1 -sqrt2 -1
ray sqrt2 1 1
ray sqrt2 1 -1
ray sqrt2 -1 1
ray sqrt2 -1 -1
)";

}  // namespace catalog_text

inline const std::vector<CatalogEntry> &catalog() {
    static const std::vector<CatalogEntry> entries = {
        {"mermin-peres", "dim 4, 9 Pauli observables, 6 contexts (parity)", catalog_text::mermin_peres,
         Verdict::KSProof, 6, {4, 6}, {4, 6}},
        {"mermin-pentagram", "dim 8, 10 Pauli observables, 5 contexts (parity)", catalog_text::mermin_pentagram,
         Verdict::KSProof, 5, {3, 5}, {3, 5}},
        {"cabello-18", "dim 4, 18 rays, 9 bases", catalog_text::cabello_18, Verdict::KSProof, 72, {8, 9},
         {131, 135}},
        {"peres-24", "dim 4, 24 rays, 24 bases (every orthogonal pair in a basis)", catalog_text::peres_24,
         Verdict::KSProof, 24, {23, 24}, {188, 192}},
        {"peres-33", "dim 3, 33 rays, 16 bases", catalog_text::peres_33, Verdict::KSProof, 88, {15, 16},
         {132, 136}},
    };
    return entries;
}

inline std::optional<CatalogEntry> find_catalog_entry(std::string_view name) {
    for (const auto &e : catalog()) {
        if (e.name == name) {
            return e;
        }
    }
    return std::nullopt;
}

}  // namespace kscert
