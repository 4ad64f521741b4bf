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

// Seeded random generators for the property suites.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "kscert/kscert.hpp"

namespace kscert::gen {

using Rng = std::mt19937_64;

inline long uniform(Rng &rng, long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(rng);
}

inline bool coin(Rng &rng) {
    return uniform(rng, 0, 1) == 1;
}

inline Rational rational(Rng &rng, long range = 5, long max_den = 4) {
    return make_rational(uniform(rng, -range, range), uniform(rng, 1, max_den));
}

inline Real real(Rng &rng, bool with_sqrt2) {
    return with_sqrt2 ? Real(rational(rng), rational(rng)) : Real(rational(rng));
}

inline Scalar scalar(Rng &rng, bool with_sqrt2 = false) {
    return Scalar(real(rng, with_sqrt2), real(rng, with_sqrt2));
}

inline ExactMatrix matrix(Rng &rng, std::size_t dim, bool with_sqrt2 = false) {
    ExactMatrix m(dim);
    for (std::size_t r = 0; r < dim; r++) {
        for (std::size_t c = 0; c < dim; c++) {
            m.at(r, c) = scalar(rng, with_sqrt2);
        }
    }
    return m;
}

inline ExactMatrix hermitian(Rng &rng, std::size_t dim) {
    ExactMatrix m = matrix(rng, dim);
    return m + m.adjoint();
}

/// Distinct sorted rationals, `count` of them.
inline std::vector<Rational> spectrum(Rng &rng, std::size_t count) {
    std::vector<Rational> out;
    while (out.size() < count) {
        Rational q = make_rational(uniform(rng, -3, 3), uniform(rng, 1, 2));
        if (std::find(out.begin(), out.end(), q) == out.end()) {
            out.push_back(q);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// `count` commuting diagonal observables in dimension `dim`; observable k has a random
/// spectrum of size 1..max_spec and every eigenvalue appears on the diagonal.
inline ObservableSet diagonal_set(Rng &rng, std::size_t count, std::size_t dim, std::size_t max_spec = 3) {
    ObservableSet set(dim);
    while (set.size() < count) {
        std::size_t d = static_cast<std::size_t>(uniform(rng, 1, static_cast<long>(std::min(max_spec, dim))));
        std::vector<Rational> spec = spectrum(rng, d);
        std::vector<Scalar> diag;
        for (std::size_t k = 0; k < dim; k++) {
            diag.push_back(Scalar(k < d ? spec[k] : spec[static_cast<std::size_t>(uniform(rng, 0, static_cast<long>(d) - 1))]));
        }
        std::shuffle(diag.begin(), diag.end(), rng);
        ExactMatrix m = ExactMatrix::diagonal(diag);
        bool duplicate = false;
        for (const auto &o : set.observables()) {
            duplicate = duplicate || o.matrix == m;
        }
        if (!duplicate) {
            set.add(make_observable(m, spec));
        }
    }
    return set;
}

/// Random polynomial in `ids` with up to `terms` terms, exponents up to `max_exp`.
inline Polynomial polynomial(
    Rng &rng, const std::vector<std::size_t> &ids, std::size_t terms, unsigned max_exp, bool complex_coeffs = false) {
    Polynomial p;
    for (std::size_t t = 0; t < terms; t++) {
        Monomial m;
        for (std::size_t id : ids) {
            unsigned e = static_cast<unsigned>(uniform(rng, 0, max_exp));
            if (e > 0) {
                m = m * Monomial::variable(id, e);
            }
        }
        Scalar c = complex_coeffs ? Scalar(Real(rational(rng)), Real(rational(rng))) : Scalar(rational(rng));
        p.add_term(m, c);
    }
    return p;
}

/// A random subset (at least `min_size` members) of `0..n-1`, sorted.
inline std::vector<std::size_t> subset(Rng &rng, std::size_t n, std::size_t min_size) {
    std::vector<std::size_t> all(n);
    for (std::size_t k = 0; k < n; k++) {
        all[k] = k;
    }
    std::shuffle(all.begin(), all.end(), rng);
    std::size_t size = static_cast<std::size_t>(uniform(rng, static_cast<long>(min_size), static_cast<long>(n)));
    all.resize(size);
    std::sort(all.begin(), all.end());
    return all;
}

/// The rays of `file` restricted to `keep`, as a fresh set.
inline ObservableSet ray_subset(const ObservableSet &rays, const std::vector<std::size_t> &keep) {
    ObservableSet out(rays.dim());
    for (std::size_t k : keep) {
        out.add(ray_observable(*rays[k].ray));
    }
    return out;
}

}  // namespace kscert::gen
