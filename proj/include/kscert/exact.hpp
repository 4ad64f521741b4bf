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

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kscert/error.hpp"

namespace kscert {

using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) {
        throw Error(ErrorCode::InvalidArgument, "zero denominator");
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

inline std::string rational_to_string(const Rational &q) {
    return q.get_str();
}

/// Exact element a + b*sqrt(2) of the field Q(sqrt2).
///
/// The irrational part is only needed for ray sets whose components include sqrt(2)
/// (Peres's 33 rays); everything else stays in Q with b = 0.
class Real {
   public:
    Real() = default;
    Real(int v) : a_(v) {
    }
    Real(long v) : a_(v) {
    }
    Real(Rational a) : a_(std::move(a)) {
    }
    Real(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {
    }

    static Real sqrt2() {
        return Real(Rational(0), Rational(1));
    }

    const Rational &rational_part() const {
        return a_;
    }
    const Rational &sqrt2_part() const {
        return b_;
    }
    bool is_zero() const {
        return sgn(a_) == 0 && sgn(b_) == 0;
    }
    bool is_rational() const {
        return sgn(b_) == 0;
    }

    /// Sign of a + b*sqrt2, decided exactly by comparing a^2 with 2 b^2.
    int sign() const {
        int sa = sgn(a_);
        int sb = sgn(b_);
        if (sb == 0) {
            return sa;
        }
        if (sa == 0 || sa == sb) {
            return sb;
        }
        Rational lhs = a_ * a_;
        Rational rhs = 2 * b_ * b_;
        int c = cmp(lhs, rhs);
        return c > 0 ? sa : (c < 0 ? sb : 0);
    }

    /// a - b*sqrt2, the Galois conjugate.
    Real galois_conjugate() const {
        return Real(a_, -b_);
    }

    Real operator-() const {
        return Real(-a_, -b_);
    }
    Real &operator+=(const Real &o) {
        a_ += o.a_;
        b_ += o.b_;
        return *this;
    }
    Real &operator-=(const Real &o) {
        a_ -= o.a_;
        b_ -= o.b_;
        return *this;
    }
    Real &operator*=(const Real &o) {
        Rational a = a_ * o.a_ + 2 * b_ * o.b_;
        Rational b = a_ * o.b_ + b_ * o.a_;
        a_ = std::move(a);
        b_ = std::move(b);
        return *this;
    }
    Real &operator/=(const Real &o) {
        if (o.is_zero()) {
            throw Error(ErrorCode::InvalidArgument, "division by zero");
        }
        Rational norm = o.a_ * o.a_ - 2 * o.b_ * o.b_;
        *this *= o.galois_conjugate();
        a_ /= norm;
        b_ /= norm;
        return *this;
    }

    friend Real operator+(Real x, const Real &y) {
        return x += y;
    }
    friend Real operator-(Real x, const Real &y) {
        return x -= y;
    }
    friend Real operator*(Real x, const Real &y) {
        return x *= y;
    }
    friend Real operator/(Real x, const Real &y) {
        return x /= y;
    }
    friend bool operator==(const Real &x, const Real &y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator<(const Real &x, const Real &y) {
        return (x - y).sign() < 0;
    }
    friend bool operator>(const Real &x, const Real &y) {
        return y < x;
    }
    friend bool operator<=(const Real &x, const Real &y) {
        return !(y < x);
    }
    friend bool operator>=(const Real &x, const Real &y) {
        return !(x < y);
    }

    /// Canonical text: "3/2", "sqrt2", "-1/2*sqrt2", "1-3*sqrt2".
    std::string to_string() const {
        if (sgn(b_) == 0) {
            return a_.get_str();
        }
        std::string irr;
        if (b_ == 1) {
            irr = "sqrt2";
        } else if (b_ == -1) {
            irr = "-sqrt2";
        } else {
            irr = b_.get_str() + "*sqrt2";
        }
        if (sgn(a_) == 0) {
            return irr;
        }
        return a_.get_str() + (sgn(b_) > 0 ? "+" : "") + irr;
    }

   private:
    Rational a_{0};
    Rational b_{0};
};

/// Exact complex number re + im*i with re, im in Q(sqrt2).
class Scalar {
   public:
    Scalar() = default;
    Scalar(int v) : re_(v) {
    }
    Scalar(long v) : re_(v) {
    }
    Scalar(Rational v) : re_(std::move(v)) {
    }
    Scalar(Real re) : re_(std::move(re)) {
    }
    Scalar(Real re, Real im) : re_(std::move(re)), im_(std::move(im)) {
    }

    static Scalar i() {
        return Scalar(Real(0), Real(1));
    }

    const Real &re() const {
        return re_;
    }
    const Real &im() const {
        return im_;
    }
    bool is_zero() const {
        return re_.is_zero() && im_.is_zero();
    }
    bool is_real() const {
        return im_.is_zero();
    }
    bool is_rational() const {
        return im_.is_zero() && re_.is_rational();
    }
    /// Gaussian rational: both parts in Q.
    bool is_gaussian_rational() const {
        return re_.is_rational() && im_.is_rational();
    }

    Scalar conj() const {
        return Scalar(re_, -im_);
    }
    /// |z|^2 = conj(z) z.
    Real norm2() const {
        return re_ * re_ + im_ * im_;
    }

    Scalar operator-() const {
        return Scalar(-re_, -im_);
    }
    Scalar &operator+=(const Scalar &o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Scalar &operator-=(const Scalar &o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Scalar &operator*=(const Scalar &o) {
        if (im_.is_zero() && o.im_.is_zero()) {
            re_ *= o.re_;
            return *this;
        }
        Real re = re_ * o.re_ - im_ * o.im_;
        Real im = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(re);
        im_ = std::move(im);
        return *this;
    }
    Scalar &operator/=(const Scalar &o) {
        Real n = o.norm2();
        if (n.is_zero()) {
            throw Error(ErrorCode::InvalidArgument, "division by zero");
        }
        *this *= o.conj();
        re_ /= n;
        im_ /= n;
        return *this;
    }

    friend Scalar operator+(Scalar x, const Scalar &y) {
        return x += y;
    }
    friend Scalar operator-(Scalar x, const Scalar &y) {
        return x -= y;
    }
    friend Scalar operator*(Scalar x, const Scalar &y) {
        return x *= y;
    }
    friend Scalar operator/(Scalar x, const Scalar &y) {
        return x /= y;
    }
    friend bool operator==(const Scalar &x, const Scalar &y) {
        return x.re_ == y.re_ && x.im_ == y.im_;
    }

    /// Real values print as Real::to_string; complex ones as the pair "(re,im)".
    std::string to_string() const {
        if (im_.is_zero()) {
            return re_.to_string();
        }
        return "(" + re_.to_string() + "," + im_.to_string() + ")";
    }

   private:
    Real re_;
    Real im_;
};

/// Dense n x n matrix over Scalar, row-major.
class ExactMatrix {
   public:
    ExactMatrix() = default;
    explicit ExactMatrix(std::size_t dim) : dim_(dim), entries_(dim * dim) {
    }

    static ExactMatrix zero(std::size_t dim) {
        return ExactMatrix(dim);
    }
    static ExactMatrix identity(std::size_t dim) {
        ExactMatrix m(dim);
        for (std::size_t k = 0; k < dim; k++) {
            m.at(k, k) = Scalar(1);
        }
        return m;
    }
    static ExactMatrix diagonal(const std::vector<Scalar> &diag) {
        ExactMatrix m(diag.size());
        for (std::size_t k = 0; k < diag.size(); k++) {
            m.at(k, k) = diag[k];
        }
        return m;
    }
    static ExactMatrix from_rows(std::initializer_list<std::initializer_list<Scalar>> rows) {
        ExactMatrix m(rows.size());
        std::size_t r = 0;
        for (const auto &row : rows) {
            if (row.size() != rows.size()) {
                throw Error(ErrorCode::DimensionMismatch, "matrix rows must form a square");
            }
            std::size_t c = 0;
            for (const auto &v : row) {
                m.at(r, c++) = v;
            }
            r++;
        }
        return m;
    }
    /// Rank-one outer product u v^dagger.
    static ExactMatrix outer(const std::vector<Scalar> &u, const std::vector<Scalar> &v) {
        if (u.size() != v.size()) {
            throw Error(ErrorCode::DimensionMismatch, "outer product of vectors with different lengths");
        }
        ExactMatrix m(u.size());
        for (std::size_t r = 0; r < u.size(); r++) {
            for (std::size_t c = 0; c < v.size(); c++) {
                m.at(r, c) = u[r] * v[c].conj();
            }
        }
        return m;
    }

    std::size_t dim() const {
        return dim_;
    }
    Scalar &at(std::size_t r, std::size_t c) {
        return entries_[r * dim_ + c];
    }
    const Scalar &at(std::size_t r, std::size_t c) const {
        return entries_[r * dim_ + c];
    }
    const std::vector<Scalar> &entries() const {
        return entries_;
    }

    bool is_zero() const {
        for (const auto &e : entries_) {
            if (!e.is_zero()) {
                return false;
            }
        }
        return true;
    }

    ExactMatrix adjoint() const {
        ExactMatrix m(dim_);
        for (std::size_t r = 0; r < dim_; r++) {
            for (std::size_t c = 0; c < dim_; c++) {
                m.at(c, r) = at(r, c).conj();
            }
        }
        return m;
    }

    bool is_hermitian() const {
        for (std::size_t r = 0; r < dim_; r++) {
            for (std::size_t c = r; c < dim_; c++) {
                if (!(at(r, c) == at(c, r).conj())) {
                    return false;
                }
            }
        }
        return true;
    }

    /// Returns delta when the matrix equals delta * I.
    std::optional<Scalar> scalar_multiple_of_identity() const {
        if (dim_ == 0) {
            return std::nullopt;
        }
        const Scalar &d = at(0, 0);
        for (std::size_t r = 0; r < dim_; r++) {
            for (std::size_t c = 0; c < dim_; c++) {
                const Scalar &e = at(r, c);
                if (r == c ? !(e == d) : !e.is_zero()) {
                    return std::nullopt;
                }
            }
        }
        return d;
    }

    Scalar trace() const {
        Scalar t;
        for (std::size_t k = 0; k < dim_; k++) {
            t += at(k, k);
        }
        return t;
    }

    ExactMatrix &operator+=(const ExactMatrix &o) {
        check_same_dim(o);
        for (std::size_t k = 0; k < entries_.size(); k++) {
            entries_[k] += o.entries_[k];
        }
        return *this;
    }
    ExactMatrix &operator-=(const ExactMatrix &o) {
        check_same_dim(o);
        for (std::size_t k = 0; k < entries_.size(); k++) {
            entries_[k] -= o.entries_[k];
        }
        return *this;
    }
    ExactMatrix &operator*=(const Scalar &s) {
        for (auto &e : entries_) {
            e *= s;
        }
        return *this;
    }

    friend ExactMatrix operator+(ExactMatrix a, const ExactMatrix &b) {
        return a += b;
    }
    friend ExactMatrix operator-(ExactMatrix a, const ExactMatrix &b) {
        return a -= b;
    }
    friend ExactMatrix operator*(ExactMatrix a, const Scalar &s) {
        return a *= s;
    }
    friend ExactMatrix operator*(const Scalar &s, ExactMatrix a) {
        return a *= s;
    }
    friend ExactMatrix operator*(const ExactMatrix &a, const ExactMatrix &b);
    friend bool operator==(const ExactMatrix &a, const ExactMatrix &b) {
        return a.dim_ == b.dim_ && a.entries_ == b.entries_;
    }

    void check_same_dim(const ExactMatrix &o) const {
        if (dim_ != o.dim_) {
            throw Error(
                ErrorCode::DimensionMismatch,
                "matrix dimension mismatch: " + std::to_string(dim_) + " vs " + std::to_string(o.dim_));
        }
    }

   private:
    std::size_t dim_ = 0;
    std::vector<Scalar> entries_;
};

inline ExactMatrix mat_mul(const ExactMatrix &a, const ExactMatrix &b) {
    a.check_same_dim(b);
    std::size_t n = a.dim();
    ExactMatrix out(n);
    for (std::size_t r = 0; r < n; r++) {
        for (std::size_t k = 0; k < n; k++) {
            const Scalar &lhs = a.at(r, k);
            if (lhs.is_zero()) {
                continue;
            }
            for (std::size_t c = 0; c < n; c++) {
                const Scalar &rhs = b.at(k, c);
                if (!rhs.is_zero()) {
                    out.at(r, c) += lhs * rhs;
                }
            }
        }
    }
    return out;
}

inline ExactMatrix operator*(const ExactMatrix &a, const ExactMatrix &b) {
    return mat_mul(a, b);
}

/// Tensor product; the left factor indexes the blocks.
inline ExactMatrix kron(const ExactMatrix &a, const ExactMatrix &b) {
    std::size_t na = a.dim();
    std::size_t nb = b.dim();
    ExactMatrix out(na * nb);
    for (std::size_t r1 = 0; r1 < na; r1++) {
        for (std::size_t c1 = 0; c1 < na; c1++) {
            const Scalar &s = a.at(r1, c1);
            if (s.is_zero()) {
                continue;
            }
            for (std::size_t r2 = 0; r2 < nb; r2++) {
                for (std::size_t c2 = 0; c2 < nb; c2++) {
                    out.at(r1 * nb + r2, c1 * nb + c2) = s * b.at(r2, c2);
                }
            }
        }
    }
    return out;
}

/// True iff ab - ba = 0 exactly.
inline bool commutes(const ExactMatrix &a, const ExactMatrix &b) {
    a.check_same_dim(b);
    return mat_mul(a, b) == mat_mul(b, a);
}

/// Hermitian inner product u^dagger v.
inline Scalar inner_product(const std::vector<Scalar> &u, const std::vector<Scalar> &v) {
    if (u.size() != v.size()) {
        throw Error(ErrorCode::DimensionMismatch, "inner product of vectors with different lengths");
    }
    Scalar s;
    for (std::size_t k = 0; k < u.size(); k++) {
        s += u[k].conj() * v[k];
    }
    return s;
}

inline std::vector<Scalar> mat_vec(const ExactMatrix &m, const std::vector<Scalar> &v) {
    if (m.dim() != v.size()) {
        throw Error(ErrorCode::DimensionMismatch, "matrix-vector dimension mismatch");
    }
    std::vector<Scalar> out(v.size());
    for (std::size_t r = 0; r < m.dim(); r++) {
        for (std::size_t c = 0; c < m.dim(); c++) {
            if (!m.at(r, c).is_zero() && !v[c].is_zero()) {
                out[r] += m.at(r, c) * v[c];
            }
        }
    }
    return out;
}

}  // namespace kscert
