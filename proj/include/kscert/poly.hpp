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
#include <concepts>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kscert/error.hpp"
#include "kscert/exact.hpp"
#include "kscert/model.hpp"

namespace kscert {

/// Product of commuting variables, e.g. A1^2 * A3. Factors are kept sorted by id.
class Monomial {
   public:
    Monomial() = default;

    static Monomial variable(std::size_t id, unsigned exponent = 1) {
        Monomial m;
        if (exponent > 0) {
            m.factors_.emplace_back(id, exponent);
        }
        return m;
    }

    const std::vector<std::pair<std::size_t, unsigned>> &factors() const {
        return factors_;
    }
    bool is_one() const {
        return factors_.empty();
    }
    unsigned degree() const {
        unsigned d = 0;
        for (const auto &f : factors_) {
            d += f.second;
        }
        return d;
    }
    unsigned exponent_of(std::size_t id) const {
        for (const auto &f : factors_) {
            if (f.first == id) {
                return f.second;
            }
        }
        return 0;
    }

    friend Monomial operator*(const Monomial &a, const Monomial &b) {
        Monomial out;
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < a.factors_.size() || j < b.factors_.size()) {
            if (j == b.factors_.size() || (i < a.factors_.size() && a.factors_[i].first < b.factors_[j].first)) {
                out.factors_.push_back(a.factors_[i++]);
            } else if (i == a.factors_.size() || b.factors_[j].first < a.factors_[i].first) {
                out.factors_.push_back(b.factors_[j++]);
            } else {
                out.factors_.emplace_back(a.factors_[i].first, a.factors_[i].second + b.factors_[j].second);
                i++;
                j++;
            }
        }
        return out;
    }

    friend bool operator==(const Monomial &, const Monomial &) = default;

    /// Graded lexicographic: lower total degree first, then compare the variable ids
    /// written out with multiplicity (A1*A2 < A1*A3 < A2*A3, A1^2 < A1*A2).
    friend bool operator<(const Monomial &a, const Monomial &b) {
        unsigned da = a.degree();
        unsigned db = b.degree();
        if (da != db) {
            return da < db;
        }
        std::vector<std::size_t> ea = a.expanded();
        std::vector<std::size_t> eb = b.expanded();
        return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
    }

   private:
    std::vector<std::size_t> expanded() const {
        std::vector<std::size_t> out;
        for (const auto &[id, e] : factors_) {
            out.insert(out.end(), e, id);
        }
        return out;
    }

    std::vector<std::pair<std::size_t, unsigned>> factors_;
};

/// Multivariate polynomial in commuting observables with Scalar coefficients.
/// Zero coefficients are never stored.
class Polynomial {
   public:
    using TermMap = std::map<Monomial, Scalar>;

    Polynomial() = default;
    Polynomial(Scalar constant) {
        add_term(Monomial(), std::move(constant));
    }
    Polynomial(int constant) : Polynomial(Scalar(constant)) {
    }

    static Polynomial variable(std::size_t id) {
        Polynomial p;
        p.add_term(Monomial::variable(id), Scalar(1));
        return p;
    }
    static Polynomial term(Monomial m, Scalar coeff) {
        Polynomial p;
        p.add_term(std::move(m), std::move(coeff));
        return p;
    }

    const TermMap &terms() const {
        return terms_;
    }
    bool is_zero() const {
        return terms_.empty();
    }
    std::size_t term_count() const {
        return terms_.size();
    }
    Scalar coefficient(const Monomial &m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Scalar() : it->second;
    }
    Scalar constant_term() const {
        return coefficient(Monomial());
    }
    unsigned degree() const {
        unsigned d = 0;
        for (const auto &t : terms_) {
            d = std::max(d, t.first.degree());
        }
        return d;
    }
    /// Sorted ids of every variable that occurs.
    std::vector<std::size_t> variables() const {
        std::vector<std::size_t> out;
        for (const auto &t : terms_) {
            for (const auto &f : t.first.factors()) {
                out.push_back(f.first);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
    bool has_real_coefficients() const {
        return std::all_of(terms_.begin(), terms_.end(), [](const auto &t) { return t.second.is_real(); });
    }

    void add_term(const Monomial &m, const Scalar &coeff) {
        if (coeff.is_zero()) {
            return;
        }
        auto [it, inserted] = terms_.emplace(m, coeff);
        if (!inserted) {
            it->second += coeff;
            if (it->second.is_zero()) {
                terms_.erase(it);
            }
        }
    }

    /// Coefficient-wise complex conjugate. Variables are Hermitian, so monomials are self-adjoint.
    Polynomial conj() const {
        Polynomial out;
        for (const auto &[m, c] : terms_) {
            out.terms_.emplace(m, c.conj());
        }
        return out;
    }

    Polynomial operator-() const {
        Polynomial out;
        for (const auto &[m, c] : terms_) {
            out.terms_.emplace(m, -c);
        }
        return out;
    }
    Polynomial &operator+=(const Polynomial &o) {
        for (const auto &[m, c] : o.terms_) {
            add_term(m, c);
        }
        return *this;
    }
    Polynomial &operator-=(const Polynomial &o) {
        for (const auto &[m, c] : o.terms_) {
            add_term(m, -c);
        }
        return *this;
    }
    Polynomial &operator*=(const Scalar &s) {
        if (s.is_zero()) {
            terms_.clear();
            return *this;
        }
        for (auto &t : terms_) {
            t.second *= s;
        }
        return *this;
    }

    friend Polynomial operator+(Polynomial a, const Polynomial &b) {
        return a += b;
    }
    friend Polynomial operator-(Polynomial a, const Polynomial &b) {
        return a -= b;
    }
    friend Polynomial operator*(Polynomial a, const Scalar &s) {
        return a *= s;
    }
    friend Polynomial operator*(const Scalar &s, Polynomial a) {
        return a *= s;
    }
    friend Polynomial operator*(const Polynomial &a, const Polynomial &b) {
        Polynomial out;
        for (const auto &[ma, ca] : a.terms_) {
            for (const auto &[mb, cb] : b.terms_) {
                out.add_term(ma * mb, ca * cb);
            }
        }
        return out;
    }
    friend bool operator==(const Polynomial &, const Polynomial &) = default;

   private:
    TermMap terms_;
};

namespace detail {

/// Coefficients (low to high, length d) of x^e modulo prod_j (x - a_j).
inline std::vector<Rational> power_mod_minimal(const std::vector<Rational> &spectrum, unsigned e) {
    std::size_t d = spectrum.size();
    // Monic minimal polynomial m(x) = x^d + sum_k m[k] x^k.
    std::vector<Rational> m(d + 1, Rational(0));
    m[0] = 1;
    for (const auto &a : spectrum) {
        for (std::size_t k = d; k > 0; k--) {
            m[k] = m[k - 1] - a * m[k];
        }
        m[0] = -a * m[0];
    }
    std::vector<Rational> r(d, Rational(0));
    if (d == 0) {
        return r;
    }
    r[0] = 1;
    if (d == 1) {
        // x == a, so x^e == a^e.
        Rational v(1);
        for (unsigned k = 0; k < e; k++) {
            v *= spectrum[0];
        }
        r[0] = v;
        return r;
    }
    for (unsigned step = 0; step < e; step++) {
        Rational top = r[d - 1];
        for (std::size_t k = d - 1; k > 0; k--) {
            r[k] = r[k - 1] - top * m[k];
        }
        r[0] = -top * m[0];
    }
    return r;
}

}  // namespace detail

/// Brings every exponent of variable i below d_i = |spectrum_of(i)| using
/// (A_i - a_1)...(A_i - a_d) = 0. `spectrum_of` maps an id to its eigenvalue list.
template <typename SpectrumOf>
    requires std::invocable<SpectrumOf &, std::size_t>
Polynomial reduce(const Polynomial &p, SpectrumOf &&spectrum_of) {
    Polynomial out;
    for (const auto &[mono, coeff] : p.terms()) {
        bool needs_rewrite = false;
        for (const auto &[id, e] : mono.factors()) {
            if (e >= spectrum_of(id).size()) {
                needs_rewrite = true;
                break;
            }
        }
        if (!needs_rewrite) {
            out.add_term(mono, coeff);
            continue;
        }
        Polynomial acc(coeff);
        for (const auto &[id, e] : mono.factors()) {
            const std::vector<Rational> &spec = spectrum_of(id);
            Polynomial factor;
            if (e < spec.size()) {
                factor = Polynomial::term(Monomial::variable(id, e), Scalar(1));
            } else {
                std::vector<Rational> low = detail::power_mod_minimal(spec, e);
                for (std::size_t k = 0; k < low.size(); k++) {
                    factor.add_term(Monomial::variable(id, static_cast<unsigned>(k)), Scalar(low[k]));
                }
            }
            acc = acc * factor;
        }
        out += acc;
    }
    return out;
}

inline Polynomial reduce(const Polynomial &p, const ObservableSet &set) {
    return reduce(p, [&](std::size_t id) -> const std::vector<Rational> & { return set.at(id).spectrum; });
}

/// Replaces each variable in `rules` by the given polynomial (no reduction applied).
inline Polynomial substitute(const Polynomial &p, const std::map<std::size_t, Polynomial> &rules) {
    Polynomial out;
    for (const auto &[mono, coeff] : p.terms()) {
        Polynomial acc(coeff);
        Monomial kept;
        for (const auto &[id, e] : mono.factors()) {
            auto it = rules.find(id);
            if (it == rules.end()) {
                kept = kept * Monomial::variable(id, e);
                continue;
            }
            for (unsigned k = 0; k < e; k++) {
                acc = acc * it->second;
            }
        }
        out += acc * Polynomial::term(kept, Scalar(1));
    }
    return out;
}

/// Substitutes the operators for the variables: r(A_1, ..., A_mu) as an exact matrix.
inline ExactMatrix eval_operator(const Polynomial &p, const ObservableSet &set) {
    std::size_t n = set.dim();
    ExactMatrix out = ExactMatrix::zero(n);
    for (const auto &[mono, coeff] : p.terms()) {
        ExactMatrix term = ExactMatrix::identity(n);
        for (const auto &[id, e] : mono.factors()) {
            const ExactMatrix &m = set.at(id).matrix;
            for (unsigned k = 0; k < e; k++) {
                term = term * m;
            }
        }
        out += term * coeff;
    }
    return out;
}

/// r|_v, the value of p at the classical assignment v.
inline Scalar eval_assignment(const Polynomial &p, const ValueAssignment &v) {
    Scalar total;
    for (const auto &[mono, coeff] : p.terms()) {
        Rational prod(1);
        for (const auto &[id, e] : mono.factors()) {
            auto it = v.find(id);
            if (it == v.end()) {
                throw Error(
                    ErrorCode::UnassignedVariable, "variable " + std::to_string(id + 1) + " has no assigned value",
                    {id});
            }
            for (unsigned k = 0; k < e; k++) {
                prod *= it->second;
            }
        }
        total += coeff * Scalar(prod);
    }
    return total;
}

/// Maps a variable id to its printed name.
using VariableNamer = std::function<std::string(std::size_t)>;

inline VariableNamer default_namer(char prefix = 'A') {
    return [prefix](std::size_t id) { return std::string(1, prefix) + std::to_string(id + 1); };
}

inline VariableNamer set_namer(const ObservableSet &set) {
    return [&set](std::size_t id) { return variable_name(set, id); };
}

namespace detail {

inline std::string monomial_text(const Monomial &m, const VariableNamer &name) {
    std::string out;
    for (const auto &[id, e] : m.factors()) {
        if (!out.empty()) {
            out += "*";
        }
        out += name(id);
        if (e > 1) {
            out += "^" + std::to_string(e);
        }
    }
    return out;
}

}  // namespace detail

/// Canonical rendering in graded-lex term order, e.g. "-3 + 1/2*A1*A2*A3 - 1/2*A3*A6*A9".
inline std::string to_string(const Polynomial &p, const VariableNamer &name = default_namer()) {
    if (p.is_zero()) {
        return "0";
    }
    std::string out;
    bool first = true;
    for (const auto &[mono, coeff] : p.terms()) {
        bool negative = false;
        std::string ctext;
        if (coeff.is_real()) {
            Real v = coeff.re();
            if (v.sign() < 0) {
                negative = true;
                v = -v;
            }
            bool mixed = !v.is_rational() && sgn(v.rational_part()) != 0;
            ctext = mixed ? "(" + v.to_string() + ")" : v.to_string();
        } else {
            ctext = coeff.to_string();
        }
        std::string body;
        if (mono.is_one()) {
            body = ctext;
        } else if (ctext == "1") {
            body = detail::monomial_text(mono, name);
        } else {
            body = ctext + "*" + detail::monomial_text(mono, name);
        }
        if (first) {
            out += (negative ? "-" : "") + body;
        } else {
            out += (negative ? " - " : " + ") + body;
        }
        first = false;
    }
    return out;
}

/// A polynomial living in one measurement context, stored reduced modulo the minimal
/// polynomials of the context members, with its normalization constant c (default 1).
class ContextPolynomial {
   public:
    ContextPolynomial() = default;

    /// Wraps `p`; every variable must be a member of `ctx`.
    static ContextPolynomial make(const ObservableSet &set, Context ctx, const Polynomial &p) {
        ContextPolynomial out;
        out.context_ = std::move(ctx);
        for (std::size_t id : out.context_.members) {
            out.spectra_.push_back(set.at(id).spectrum);
        }
        out.check_variables(p);
        out.poly_ = reduce(p, out.spectrum_lookup());
        return out;
    }
    static ContextPolynomial variable(const ObservableSet &set, const Context &ctx, std::size_t id) {
        return make(set, ctx, Polynomial::variable(id));
    }
    static ContextPolynomial constant(const ObservableSet &set, const Context &ctx, const Scalar &s) {
        return make(set, ctx, Polynomial(s));
    }

    const Context &context() const {
        return context_;
    }
    const Polynomial &polynomial() const {
        return poly_;
    }
    const Rational &normalization() const {
        return normalization_;
    }
    ContextPolynomial with_normalization(Rational c) const {
        ContextPolynomial out = *this;
        out.normalization_ = std::move(c);
        return out;
    }
    const std::vector<Rational> &spectrum_of(std::size_t id) const {
        auto it = std::lower_bound(context_.members.begin(), context_.members.end(), id);
        if (it == context_.members.end() || *it != id) {
            throw Error(
                ErrorCode::VariableOutsideContext,
                "variable " + std::to_string(id + 1) + " is not a member of the context", {id});
        }
        return spectra_[static_cast<std::size_t>(it - context_.members.begin())];
    }

    ContextPolynomial reduced() const {
        ContextPolynomial out = *this;
        out.poly_ = reduce(poly_, spectrum_lookup());
        return out;
    }

    ContextPolynomial conjugate() const {
        ContextPolynomial out = *this;
        out.poly_ = poly_.conj();
        out.normalization_ = 1;
        return out;
    }

    friend ContextPolynomial operator+(const ContextPolynomial &a, const ContextPolynomial &b) {
        ContextPolynomial out = combined_frame(a, b);
        out.poly_ = a.poly_ + b.poly_;
        return out;
    }
    friend ContextPolynomial operator-(const ContextPolynomial &a, const ContextPolynomial &b) {
        ContextPolynomial out = combined_frame(a, b);
        out.poly_ = a.poly_ - b.poly_;
        return out;
    }
    friend ContextPolynomial operator*(const ContextPolynomial &a, const ContextPolynomial &b) {
        ContextPolynomial out = combined_frame(a, b);
        out.poly_ = reduce(a.poly_ * b.poly_, out.spectrum_lookup());
        return out;
    }
    friend ContextPolynomial operator*(const ContextPolynomial &a, const Scalar &s) {
        ContextPolynomial out = a;
        out.poly_ *= s;
        out.normalization_ = 1;
        return out;
    }
    friend bool operator==(const ContextPolynomial &, const ContextPolynomial &) = default;

   private:
    std::function<const std::vector<Rational> &(std::size_t)> spectrum_lookup() const {
        return [this](std::size_t id) -> const std::vector<Rational> & { return spectrum_of(id); };
    }

    void check_variables(const Polynomial &p) const {
        for (std::size_t id : p.variables()) {
            if (!context_.contains(id)) {
                throw Error(
                    ErrorCode::VariableOutsideContext,
                    "variable " + std::to_string(id + 1) + " is not a member of the context", {id});
            }
        }
    }

    static bool covers(const ContextPolynomial &frame, const ContextPolynomial &other) {
        for (std::size_t id : other.poly_.variables()) {
            if (!frame.context_.contains(id)) {
                return false;
            }
        }
        return true;
    }

    /// The operand whose context contains the other's variables supplies the result's context.
    static ContextPolynomial combined_frame(const ContextPolynomial &a, const ContextPolynomial &b) {
        ContextPolynomial out;
        if (covers(a, b)) {
            out.context_ = a.context_;
            out.spectra_ = a.spectra_;
        } else if (covers(b, a)) {
            out.context_ = b.context_;
            out.spectra_ = b.spectra_;
        } else {
            throw Error(ErrorCode::IncompatibleContexts, "polynomials live in incompatible contexts");
        }
        return out;
    }

    Context context_;
    std::vector<std::vector<Rational>> spectra_;
    Polynomial poly_;
    Rational normalization_{1};
};

/// Re-reduces against the context's minimal polynomials; idempotent.
inline ContextPolynomial reduce(const ContextPolynomial &p) {
    return p.reduced();
}

inline ExactMatrix eval_operator(const ContextPolynomial &p, const ObservableSet &set) {
    return eval_operator(p.polynomial(), set);
}

inline Scalar eval_assignment(const ContextPolynomial &p, const ValueAssignment &v) {
    return eval_assignment(p.polynomial(), v);
}

/// Calls `visit(v)` for every assignment of `ids` drawn from their spectra.
template <typename SpectrumOf, typename Visit>
void for_each_assignment(const std::vector<std::size_t> &ids, SpectrumOf &&spectrum_of, Visit &&visit) {
    ValueAssignment v;
    auto rec = [&](auto &self, std::size_t k) -> void {
        if (k == ids.size()) {
            visit(static_cast<const ValueAssignment &>(v));
            return;
        }
        for (const auto &a : spectrum_of(ids[k])) {
            v[ids[k]] = a;
            self(self, k + 1);
        }
    };
    rec(rec, 0);
}

/// c = min over assignments v with p|_v != 0 of |p|_v|^2, by full enumeration of the
/// variables' spectra.
inline Rational normalization_constant(const ContextPolynomial &p) {
    std::optional<Real> best;
    for_each_assignment(
        p.polynomial().variables(), [&](std::size_t id) -> const std::vector<Rational> & { return p.spectrum_of(id); },
        [&](const ValueAssignment &v) {
            Scalar value = eval_assignment(p.polynomial(), v);
            if (value.is_zero()) {
                return;
            }
            Real sq = value.norm2();
            if (!best.has_value() || sq < *best) {
                best = sq;
            }
        });
    if (!best.has_value()) {
        throw Error(
            ErrorCode::IdenticallyZeroOnAssignments, "polynomial vanishes at every assignment of its variables");
    }
    if (!best->is_rational()) {
        throw Error(ErrorCode::InvalidArgument, "normalization constant is irrational; use Gaussian-rational coefficients");
    }
    return best->rational_part();
}

/// (p^dagger p) / c, reduced. The square root of c never appears.
inline ContextPolynomial normalized_square(const ContextPolynomial &p) {
    Rational c = normalization_constant(p);
    ContextPolynomial sq = p.conjugate() * p;
    return sq * Scalar(Rational(1) / c);
}

}  // namespace kscert
