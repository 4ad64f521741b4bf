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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kscert/error.hpp"
#include "kscert/exact.hpp"

namespace kscert {

/// Rank-one projector P = v v^dagger / (v^dagger v), stored with the unnormalized vector.
struct Ray {
    std::vector<Scalar> vector;
    ExactMatrix projector;
};

/// An observable A_i: Hermitian matrix plus its distinct eigenvalues.
///
/// The declared spectrum is verified to be exactly the set of eigenvalues: the product
/// of (A - a_j I) vanishes and no factor can be dropped.
struct Observable {
    std::size_t id = 0;
    ExactMatrix matrix;
    std::vector<Rational> spectrum;
    std::string label;
    std::optional<Ray> ray;
    std::optional<std::string> pauli;

    bool is_ray() const {
        return ray.has_value();
    }
    bool is_dichotomic() const {
        return spectrum.size() == 2 && spectrum[0] == -1 && spectrum[1] == 1;
    }
    std::size_t degree() const {
        return spectrum.size();
    }
};

/// A measurement context: strictly increasing observable indices.
struct Context {
    std::vector<std::size_t> members;

    bool contains(std::size_t id) const {
        return std::binary_search(members.begin(), members.end(), id);
    }
    std::size_t size() const {
        return members.size();
    }
    friend bool operator==(const Context &, const Context &) = default;
    friend auto operator<=>(const Context &, const Context &) = default;
};

/// v(A_i) for the observables it covers.
using ValueAssignment = std::map<std::size_t, Rational>;

namespace detail {

inline ExactMatrix annihilator(const ExactMatrix &m, const std::vector<Rational> &spectrum, std::size_t skip) {
    ExactMatrix prod = ExactMatrix::identity(m.dim());
    for (std::size_t k = 0; k < spectrum.size(); k++) {
        if (k == skip) {
            continue;
        }
        prod = prod * (m - ExactMatrix::identity(m.dim()) * Scalar(spectrum[k]));
    }
    return prod;
}

inline std::vector<Rational> sorted_distinct(std::vector<Rational> values) {
    std::sort(values.begin(), values.end());
    for (std::size_t k = 1; k < values.size(); k++) {
        if (values[k] == values[k - 1]) {
            throw Error(
                ErrorCode::InvalidArgument, "spectrum values must be pairwise distinct (repeated " +
                                                values[k].get_str() + ")");
        }
    }
    return values;
}

inline std::optional<std::vector<Rational>> detect_spectrum(const ExactMatrix &m) {
    std::size_t n = m.dim();
    ExactMatrix id = ExactMatrix::identity(n);
    ExactMatrix sq = m * m;
    std::vector<Rational> candidates;
    if (sq == id) {
        candidates = {Rational(-1), Rational(1)};
    } else if (sq == m) {
        candidates = {Rational(0), Rational(1)};
    } else {
        return std::nullopt;
    }
    // Shrink to the minimal annihilating subset.
    for (const auto &a : candidates) {
        if (m == id * Scalar(a)) {
            return std::vector<Rational>{a};
        }
    }
    return candidates;
}

}  // namespace detail

/// Builds an observable after checking hermiticity and that `spectrum` is exactly its set of
/// eigenvalues. With no spectrum, {0,1} or {-1,1} (or a singleton) is detected from
/// A^2 = A or A^2 = I; anything else must be declared.
inline Observable make_observable(
    ExactMatrix matrix, std::optional<std::vector<Rational>> spectrum = std::nullopt, std::string label = {}) {
    if (matrix.dim() == 0) {
        throw Error(ErrorCode::DimensionMismatch, "observable matrix must have positive dimension");
    }
    if (!matrix.is_hermitian()) {
        throw Error(ErrorCode::NonHermitian, "observable matrix is not Hermitian");
    }
    std::vector<Rational> values;
    if (spectrum.has_value()) {
        if (spectrum->empty()) {
            throw Error(ErrorCode::InvalidArgument, "spectrum must be non-empty");
        }
        values = detail::sorted_distinct(*spectrum);
    } else {
        auto detected = detail::detect_spectrum(matrix);
        if (!detected.has_value()) {
            throw Error(
                ErrorCode::AnnihilationFailure,
                "spectrum not declared and the matrix is neither idempotent nor involutory");
        }
        values = std::move(*detected);
    }
    std::size_t none = values.size();
    if (!detail::annihilator(matrix, values, none).is_zero()) {
        throw Error(ErrorCode::AnnihilationFailure, "declared spectrum does not annihilate the matrix");
    }
    if (values.size() > 1) {
        for (std::size_t k = 0; k < values.size(); k++) {
            if (detail::annihilator(matrix, values, k).is_zero()) {
                throw Error(
                    ErrorCode::AnnihilationFailure,
                    "declared value " + values[k].get_str() + " is not an eigenvalue of the matrix");
            }
        }
    }
    Observable obs;
    obs.matrix = std::move(matrix);
    obs.spectrum = std::move(values);
    obs.label = std::move(label);
    return obs;
}

inline Ray make_ray(std::vector<Scalar> vector) {
    Real norm2;
    for (const auto &c : vector) {
        norm2 += c.norm2();
    }
    if (norm2.is_zero()) {
        throw Error(ErrorCode::ZeroVector, "ray vector must be nonzero");
    }
    ExactMatrix projector = ExactMatrix::outer(vector, vector) * Scalar(Real(1) / norm2);
    return Ray{std::move(vector), std::move(projector)};
}

/// The projector observable of a ray, spectrum {0,1} (or {1} in dimension 1).
inline Observable ray_observable(Ray ray, std::string label = {}) {
    Observable obs = make_observable(ray.projector, std::nullopt, std::move(label));
    obs.ray = std::move(ray);
    return obs;
}

/// A = I - 2P.
inline Observable dichotomize(const Ray &ray, std::string label = {}) {
    std::size_t n = ray.projector.dim();
    ExactMatrix a = ExactMatrix::identity(n) - ray.projector * Scalar(2);
    return make_observable(std::move(a), std::nullopt, std::move(label));
}

inline const ExactMatrix &pauli_matrix(char letter) {
    static const ExactMatrix I = ExactMatrix::identity(2);
    static const ExactMatrix X = ExactMatrix::from_rows({{0, 1}, {1, 0}});
    static const ExactMatrix Y = ExactMatrix::from_rows({{0, -Scalar::i()}, {Scalar::i(), 0}});
    static const ExactMatrix Z = ExactMatrix::from_rows({{1, 0}, {0, -1}});
    switch (letter) {
        case 'I': return I;
        case 'X': return X;
        case 'Y': return Y;
        case 'Z': return Z;
        default:
            throw Error(ErrorCode::InvalidArgument, std::string("unknown Pauli letter '") + letter + "'");
    }
}

/// "+XY" -> X (x) Y, "-ZZ" -> -(Z (x) Z). A missing sign means '+'.
inline ExactMatrix pauli_string_matrix(const std::string &word) {
    std::size_t pos = 0;
    int sign = 1;
    if (!word.empty() && (word[0] == '+' || word[0] == '-')) {
        sign = word[0] == '-' ? -1 : 1;
        pos = 1;
    }
    if (pos >= word.size()) {
        throw Error(ErrorCode::InvalidArgument, "empty Pauli string");
    }
    ExactMatrix m = pauli_matrix(word[pos]);
    for (std::size_t k = pos + 1; k < word.size(); k++) {
        m = kron(m, pauli_matrix(word[k]));
    }
    if (sign < 0) {
        m *= Scalar(-1);
    }
    return m;
}

inline Observable pauli_observable(const std::string &word, std::string label = {}) {
    Observable obs = make_observable(pauli_string_matrix(word), std::nullopt, std::move(label));
    obs.pauli = word[0] == '+' || word[0] == '-' ? word : "+" + word;
    return obs;
}

/// The observable set S = {A_1 .. A_mu} in a fixed Hilbert-space dimension.
class ObservableSet {
   public:
    ObservableSet() = default;
    explicit ObservableSet(std::size_t dim) : dim_(dim) {
        if (dim == 0) {
            throw Error(ErrorCode::DimensionMismatch, "dimension must be positive");
        }
    }

    std::size_t dim() const {
        return dim_;
    }
    std::size_t size() const {
        return observables_.size();
    }
    const std::vector<Observable> &observables() const {
        return observables_;
    }
    const Observable &at(std::size_t id) const {
        if (id >= observables_.size()) {
            throw Error(
                ErrorCode::UnknownVariable, "observable index " + std::to_string(id + 1) + " is out of range",
                {id});
        }
        return observables_[id];
    }
    const Observable &operator[](std::size_t id) const {
        return observables_[id];
    }

    /// Appends an observable, assigning it the next id. Equal matrices are rejected.
    std::size_t add(Observable obs) {
        if (obs.matrix.dim() != dim_) {
            throw Error(
                ErrorCode::DimensionMismatch, "observable has dimension " + std::to_string(obs.matrix.dim()) +
                                                  " in a dimension-" + std::to_string(dim_) + " set");
        }
        for (const auto &existing : observables_) {
            if (existing.matrix == obs.matrix) {
                throw Error(
                    ErrorCode::DuplicateObservable,
                    "observable " + std::to_string(observables_.size() + 1) + " duplicates observable " +
                        std::to_string(existing.id + 1),
                    {existing.id, observables_.size()});
            }
        }
        obs.id = observables_.size();
        observables_.push_back(std::move(obs));
        return observables_.back().id;
    }

    bool all_rays() const {
        return !observables_.empty() &&
               std::all_of(observables_.begin(), observables_.end(), [](const Observable &o) { return o.is_ray(); });
    }
    bool all_dichotomic() const {
        return !observables_.empty() && std::all_of(observables_.begin(), observables_.end(), [](const Observable &o) {
                   return o.is_dichotomic();
               });
    }

    const std::vector<Context> &declared_contexts() const {
        return declared_contexts_;
    }
    void set_declared_contexts(std::vector<Context> contexts) {
        declared_contexts_ = std::move(contexts);
    }

   private:
    std::size_t dim_ = 0;
    std::vector<Observable> observables_;
    std::vector<Context> declared_contexts_;
};

/// Replaces every ray P_i by A_i = I - 2P_i; other observables are kept.
inline ObservableSet dichotomized(const ObservableSet &set) {
    ObservableSet out(set.dim());
    for (const auto &obs : set.observables()) {
        if (obs.is_ray()) {
            out.add(dichotomize(*obs.ray, obs.label));
        } else {
            out.add(obs);
        }
    }
    out.set_declared_contexts(set.declared_contexts());
    return out;
}

/// Display name of observable `id`: "P<k>" for rays, "A<k>" otherwise (1-based).
inline std::string variable_name(const ObservableSet &set, std::size_t id) {
    bool ray = id < set.size() && set[id].is_ray();
    return (ray ? "P" : "A") + std::to_string(id + 1);
}

}  // namespace kscert
