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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "kscert/kscert.hpp"
#include "support/oracles.hpp"

using namespace kscert;

namespace {

ObservableSet rays(std::size_t dim, const std::vector<std::vector<Scalar>> &vectors) {
    ObservableSet set(dim);
    for (const auto &v : vectors) {
        set.add(ray_observable(make_ray(v)));
    }
    return set;
}

std::vector<std::vector<std::size_t>> members(const std::vector<Context> &ctxs) {
    std::vector<std::vector<std::size_t>> out;
    for (const auto &c : ctxs) {
        out.push_back(c.members);
    }
    return out;
}

ObservableSet mermin_peres() {
    return load_catalog("mermin-peres").set;
}

}  // namespace

TEST(OrthogonalityGraph, StandardBasisIsATriangle) {
    ObservableSet set = rays(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    OrthogonalityGraph g = build_orthogonality_graph(set);
    EXPECT_EQ(g.edge_count(), 3u);
    EXPECT_EQ(g.edges(), (std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}, {0, 2}, {1, 2}}));
    EXPECT_FALSE(g.adjacent(0, 0));
}

TEST(OrthogonalityGraph, NonOrthogonalPair) {
    OrthogonalityGraph g = build_orthogonality_graph(rays(3, {{1, 0, 0}, {1, 1, 0}}));
    EXPECT_EQ(g.edge_count(), 0u);
}

TEST(OrthogonalityGraph, ComplexRaysUseHermitianProduct) {
    // (1, i) and (1, -i) are orthogonal; (1, i) and (i, 1) are too; (1, i) and (1, i)-ish are not.
    OrthogonalityGraph g = build_orthogonality_graph(rays(2, {{1, Scalar::i()}, {1, -Scalar::i()}, {1, 1}}));
    EXPECT_TRUE(g.adjacent(0, 1));
    EXPECT_FALSE(g.adjacent(0, 2));
    EXPECT_FALSE(g.adjacent(1, 2));
}

TEST(OrthogonalityGraph, RejectsNonRays) {
    try {
        build_orthogonality_graph(mermin_peres());
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NonRayMember);
    }
}

TEST(OrthogonalityGraph, CabelloMatchesProjectorOracle) {
    ObservableSet set = load_catalog("cabello-18").set;
    OrthogonalityGraph g = build_orthogonality_graph(set);
    auto table = oracle::orthogonality_table(set);
    std::size_t count = 0;
    for (std::size_t i = 0; i < set.size(); i++) {
        for (std::size_t j = 0; j < set.size(); j++) {
            EXPECT_EQ(g.adjacent(i, j), table[i][j]) << i << "," << j;
            count += table[i][j] ? 1 : 0;
        }
    }
    EXPECT_EQ(g.edge_count(), count / 2);
    EXPECT_EQ(g.edge_count(), 63u);
}

TEST(EnumerateBases, StandardBasis) {
    ObservableSet set = rays(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    auto bases = enumerate_bases(set, build_orthogonality_graph(set));
    ASSERT_EQ(bases.size(), 1u);
    EXPECT_EQ(bases[0].members, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(EnumerateBases, TwoUnrelatedBases) {
    ObservableSet set =
        rays(3, {{1, 2, 2}, {1, 0, 0}, {2, 1, -2}, {0, 1, 0}, {2, -2, 1}, {0, 0, 1}});
    OrthogonalityGraph g = build_orthogonality_graph(set);
    EXPECT_EQ(g.edge_count(), 6u);
    auto bases = enumerate_bases(set, g);
    EXPECT_EQ(members(bases), (std::vector<std::vector<std::size_t>>{{0, 2, 4}, {1, 3, 5}}));
}

TEST(EnumerateBases, CabelloHasNineBases) {
    ObservableSet set = load_catalog("cabello-18").set;
    auto bases = enumerate_bases(set, build_orthogonality_graph(set));
    EXPECT_EQ(bases.size(), 9u);
    EXPECT_EQ(members(bases), oracle::maximal_cliques_of_size(oracle::orthogonality_table(set), 4));
    // each ray in exactly two bases
    std::vector<int> count(18, 0);
    for (const auto &b : bases) {
        for (std::size_t m : b.members) {
            count[m]++;
        }
    }
    EXPECT_TRUE(std::all_of(count.begin(), count.end(), [](int c) { return c == 2; }));
}

TEST(EnumerateBases, PeresHasSixteenBases) {
    ObservableSet set = load_catalog("peres-33").set;
    OrthogonalityGraph g = build_orthogonality_graph(set);
    EXPECT_EQ(g.edge_count(), 72u);
    auto bases = enumerate_bases(set, g);
    EXPECT_EQ(bases.size(), 16u);
    EXPECT_EQ(members(bases), oracle::maximal_cliques_of_size(oracle::orthogonality_table(set), 3));
}

TEST(EnumerateBases, IndependentOfInputOrder) {
    ObservableSet set = load_catalog("cabello-18").set;
    std::vector<std::size_t> perm(set.size());
    for (std::size_t k = 0; k < perm.size(); k++) {
        perm[k] = k;
    }
    std::mt19937_64 rng(7);
    std::shuffle(perm.begin(), perm.end(), rng);
    ObservableSet shuffled(4);
    for (std::size_t k : perm) {
        shuffled.add(ray_observable(*set[k].ray));
    }
    auto original = members(enumerate_bases(set, build_orthogonality_graph(set)));
    auto mapped = members(enumerate_bases(shuffled, build_orthogonality_graph(shuffled)));
    for (auto &b : mapped) {
        for (auto &m : b) {
            m = perm[m];
        }
        std::sort(b.begin(), b.end());
    }
    std::sort(mapped.begin(), mapped.end());
    EXPECT_EQ(mapped, original);
}

TEST(EnumerateBases, EveryBasisResolvesIdentity) {
    ObservableSet set = load_catalog("peres-33").set;
    for (const auto &b : enumerate_bases(set, build_orthogonality_graph(set))) {
        ExactMatrix sum = ExactMatrix::zero(3);
        for (std::size_t m : b.members) {
            sum += set[m].matrix;
        }
        EXPECT_EQ(sum, ExactMatrix::identity(3));
        EXPECT_NO_THROW(validate_context(set, b.members));
    }
}

TEST(ValidateContext, MerminPeresRow) {
    ObservableSet set = mermin_peres();
    Context c = validate_context(set, {2, 0, 1});
    EXPECT_EQ(c.members, (std::vector<std::size_t>{0, 1, 2}));
    for (std::size_t a : c.members) {
        for (std::size_t b : c.members) {
            EXPECT_TRUE(commutes(set[a].matrix, set[b].matrix));
        }
    }
}

TEST(ValidateContext, NonCommutingPair) {
    ObservableSet set(2);
    set.add(pauli_observable("X"));
    set.add(pauli_observable("Z"));
    try {
        validate_context(set, {0, 1});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::NotCommuting);
        EXPECT_EQ(e.indices(), (std::vector<std::size_t>{0, 1}));
    }
}

TEST(ValidateContext, FirstOffendingPairReported) {
    ObservableSet set = mermin_peres();
    // XI (1) commutes with IX (2) and XX (3); IZ (4) fails with IX (2) first.
    try {
        validate_context(set, {0, 1, 3});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.indices(), (std::vector<std::size_t>{1, 3}));
    }
}

TEST(ValidateContext, SingletonAndBadIds) {
    ObservableSet set = mermin_peres();
    EXPECT_EQ(validate_context(set, {4}).size(), 1u);
    EXPECT_THROW(validate_context(set, {0, 0}), Error);
    EXPECT_THROW(validate_context(set, {9}), Error);
    EXPECT_THROW(validate_context(set, {}), Error);
}

TEST(ContextProduct, MerminPeresRowAndColumn) {
    ObservableSet set = mermin_peres();
    ContextProduct row = context_product(set, validate_context(set, {0, 1, 2}));
    EXPECT_EQ(row.product, ExactMatrix::identity(4));
    EXPECT_EQ(row.delta, Scalar(1));
    ContextProduct col = context_product(set, validate_context(set, {2, 5, 8}));
    EXPECT_EQ(col.product, ExactMatrix::identity(4) * Scalar(-1));
    EXPECT_EQ(col.delta, Scalar(-1));
    // independent check with the oracle product
    ExactMatrix p = oracle::mat_mul(oracle::mat_mul(set[2].matrix, set[5].matrix), set[8].matrix);
    EXPECT_EQ(p, col.product);
}

TEST(ContextProduct, SingletonIdentityAndNonScalar) {
    ObservableSet set(2);
    set.add(make_observable(ExactMatrix::identity(2)));
    set.add(pauli_observable("Z"));
    EXPECT_EQ(context_product(set, validate_context(set, {0})).delta, Scalar(1));
    EXPECT_FALSE(context_product(set, validate_context(set, {1})).delta.has_value());
}
