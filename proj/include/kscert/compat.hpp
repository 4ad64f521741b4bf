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

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kscert/error.hpp"
#include "kscert/exact.hpp"
#include "kscert/model.hpp"

namespace kscert {

/// Vertices are rays; (i, j) is an edge iff v_i^dagger v_j = 0.
class OrthogonalityGraph {
   public:
    OrthogonalityGraph() = default;
    explicit OrthogonalityGraph(std::size_t vertices)
        : n_(vertices), adjacent_(vertices * vertices, 0), neighbors_(vertices) {
    }

    std::size_t vertex_count() const {
        return n_;
    }
    bool adjacent(std::size_t i, std::size_t j) const {
        return adjacent_[i * n_ + j] != 0;
    }
    const std::vector<std::size_t> &neighbors(std::size_t i) const {
        return neighbors_[i];
    }
    /// Edges (i, j) with i < j in lexicographic order.
    std::vector<std::pair<std::size_t, std::size_t>> edges() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < n_; i++) {
            for (std::size_t j : neighbors_[i]) {
                if (j > i) {
                    out.emplace_back(i, j);
                }
            }
        }
        return out;
    }
    std::size_t edge_count() const {
        std::size_t total = 0;
        for (const auto &adj : neighbors_) {
            total += adj.size();
        }
        return total / 2;
    }

    void add_edge(std::size_t i, std::size_t j) {
        if (i == j) {
            throw Error(ErrorCode::InvalidArgument, "self-loops are not allowed");
        }
        if (adjacent(i, j)) {
            return;
        }
        adjacent_[i * n_ + j] = adjacent_[j * n_ + i] = 1;
        insert_sorted(neighbors_[i], j);
        insert_sorted(neighbors_[j], i);
    }

   private:
    static void insert_sorted(std::vector<std::size_t> &v, std::size_t x) {
        v.insert(std::upper_bound(v.begin(), v.end(), x), x);
    }

    std::size_t n_ = 0;
    std::vector<char> adjacent_;
    std::vector<std::vector<std::size_t>> neighbors_;
};

inline OrthogonalityGraph build_orthogonality_graph(const ObservableSet &set) {
    for (const auto &obs : set.observables()) {
        if (!obs.is_ray()) {
            throw Error(
                ErrorCode::NonRayMember, "observable " + std::to_string(obs.id + 1) + " is not a ray", {obs.id});
        }
    }
    OrthogonalityGraph graph(set.size());
    for (std::size_t i = 0; i < set.size(); i++) {
        for (std::size_t j = i + 1; j < set.size(); j++) {
            if (inner_product(set[i].ray->vector, set[j].ray->vector).is_zero()) {
                graph.add_edge(i, j);
            }
        }
    }
    return graph;
}

/// All cliques of exactly `size` vertices, each in increasing index order, the list sorted
/// lexicographically.
inline std::vector<Context> enumerate_cliques(const OrthogonalityGraph &graph, std::size_t size) {
    std::vector<Context> out;
    if (size == 0) {
        return out;
    }
    std::vector<std::size_t> current;
    // Extend with candidates that are larger than every chosen vertex and adjacent to all of them.
    auto extend = [&](auto &self, const std::vector<std::size_t> &candidates) -> void {
        if (current.size() == size) {
            out.push_back(Context{current});
            return;
        }
        if (current.size() + candidates.size() < size) {
            return;
        }
        for (std::size_t k = 0; k < candidates.size(); k++) {
            std::size_t v = candidates[k];
            std::vector<std::size_t> next;
            for (std::size_t m = k + 1; m < candidates.size(); m++) {
                if (graph.adjacent(v, candidates[m])) {
                    next.push_back(candidates[m]);
                }
            }
            current.push_back(v);
            self(self, next);
            current.pop_back();
        }
    };
    std::vector<std::size_t> all(graph.vertex_count());
    for (std::size_t k = 0; k < all.size(); k++) {
        all[k] = k;
    }
    extend(extend, all);
    return out;
}

/// Orthogonal bases: the n-cliques of the orthogonality graph, each checked to satisfy
/// sum_k P_k = I exactly.
inline std::vector<Context> enumerate_bases(const ObservableSet &set, const OrthogonalityGraph &graph) {
    if (graph.vertex_count() != set.size()) {
        throw Error(ErrorCode::InvalidArgument, "graph and observable set disagree on the number of rays");
    }
    std::vector<Context> bases = enumerate_cliques(graph, set.dim());
    ExactMatrix id = ExactMatrix::identity(set.dim());
    for (const auto &basis : bases) {
        ExactMatrix sum = ExactMatrix::zero(set.dim());
        for (std::size_t m : basis.members) {
            sum += set[m].matrix;
        }
        if (!(sum == id)) {
            throw Error(ErrorCode::InvalidArgument, "an orthogonal n-clique does not resolve the identity");
        }
    }
    return bases;
}

/// Sorts `ids` and checks range and distinctness; commutation is not examined.
inline Context canonical_context(const ObservableSet &set, std::vector<std::size_t> ids) {
    if (ids.empty()) {
        throw Error(ErrorCode::InvalidArgument, "a context needs at least one observable");
    }
    std::sort(ids.begin(), ids.end());
    for (std::size_t k = 0; k < ids.size(); k++) {
        if (ids[k] >= set.size()) {
            throw Error(
                ErrorCode::UnknownVariable, "context member " + std::to_string(ids[k] + 1) + " is out of range",
                {ids[k]});
        }
        if (k > 0 && ids[k] == ids[k - 1]) {
            throw Error(
                ErrorCode::InvalidArgument, "context lists observable " + std::to_string(ids[k] + 1) + " twice",
                {ids[k]});
        }
    }
    return Context{std::move(ids)};
}

/// Sorts and checks `ids`, then certifies pairwise commutation.
inline Context validate_context(const ObservableSet &set, std::vector<std::size_t> ids) {
    Context ctx = canonical_context(set, std::move(ids));
    const auto &m = ctx.members;
    for (std::size_t a = 0; a < m.size(); a++) {
        for (std::size_t b = a + 1; b < m.size(); b++) {
            if (!commutes(set[m[a]].matrix, set[m[b]].matrix)) {
                throw Error(
                    ErrorCode::NotCommuting,
                    "observables " + std::to_string(m[a] + 1) + " and " + std::to_string(m[b] + 1) +
                        " do not commute",
                    {m[a], m[b]});
            }
        }
    }
    return ctx;
}

struct ContextProduct {
    ExactMatrix product;
    /// Set when the product equals delta * I.
    std::optional<Scalar> delta;
};

inline ContextProduct context_product(const ObservableSet &set, const Context &ctx) {
    ExactMatrix prod = ExactMatrix::identity(set.dim());
    for (std::size_t m : ctx.members) {
        prod = prod * set.at(m).matrix;
    }
    auto delta = prod.scalar_multiple_of_identity();
    return ContextProduct{std::move(prod), std::move(delta)};
}

}  // namespace kscert
