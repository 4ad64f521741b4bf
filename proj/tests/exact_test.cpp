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

#include "kscert/exact.hpp"
#include "kscert/model.hpp"
#include "support/oracles.hpp"

using namespace kscert;

namespace {

const ExactMatrix &X() {
    return pauli_matrix('X');
}
const ExactMatrix &Y() {
    return pauli_matrix('Y');
}
const ExactMatrix &Z() {
    return pauli_matrix('Z');
}
ExactMatrix I2() {
    return ExactMatrix::identity(2);
}

}  // namespace

TEST(Rational, CanonicalForm) {
    EXPECT_EQ(make_rational(2, 4), make_rational(1, 2));
    EXPECT_EQ(make_rational(3, -6), make_rational(-1, 2));
    EXPECT_EQ(make_rational(3, -6).get_den(), 2);
    EXPECT_THROW(make_rational(1, 0), Error);
    EXPECT_EQ(rational_to_string(make_rational(-6, 4)), "-3/2");
}

TEST(Real, Sqrt2Arithmetic) {
    Real s = Real::sqrt2();
    EXPECT_EQ(s * s, Real(2));
    EXPECT_TRUE((s * s).is_rational());
    EXPECT_EQ((Real(1) + s) * (Real(1) - s), Real(-1));
    EXPECT_EQ(Real(1) / (Real(1) + s), s - Real(1));
    EXPECT_THROW(Real(1) / Real(0), Error);
}

TEST(Real, ExactSign) {
    Real s = Real::sqrt2();
    EXPECT_EQ(s.sign(), 1);
    EXPECT_EQ((Real(3) - Real(2) * s).sign(), 1);   // 3 > 2.828
    EXPECT_EQ((Real(2) - Real(2) * s).sign(), -1);
    EXPECT_EQ((Real(make_rational(-7, 5)) + s).sign(), 1);  // sqrt2 > 1.4
    EXPECT_EQ(Real(0).sign(), 0);
    EXPECT_LT(Real(make_rational(141, 100)), s);
    EXPECT_GT(Real(make_rational(142, 100)), s);
}

TEST(Real, Rendering) {
    EXPECT_EQ(Real(make_rational(3, 2)).to_string(), "3/2");
    EXPECT_EQ(Real::sqrt2().to_string(), "sqrt2");
    EXPECT_EQ((-Real::sqrt2()).to_string(), "-sqrt2");
    EXPECT_EQ(Real(0, make_rational(-1, 2)).to_string(), "-1/2*sqrt2");
    EXPECT_EQ(Real(1, -3).to_string(), "1-3*sqrt2");
    EXPECT_EQ(Real(0).to_string(), "0");
}

TEST(Scalar, GaussianArithmetic) {
    Scalar i = Scalar::i();
    EXPECT_EQ(i * i, Scalar(-1));
    Scalar z(Real(1), Real(2));
    EXPECT_EQ(z * z.conj(), Scalar(5));
    EXPECT_EQ(z.norm2(), Real(5));
    EXPECT_EQ(z / z, Scalar(1));
    EXPECT_EQ(Scalar(1) / i, -i);
    EXPECT_TRUE(Scalar(make_rational(1, 3)).is_rational());
    EXPECT_FALSE(i.is_real());
    EXPECT_TRUE(i.is_gaussian_rational());
    EXPECT_FALSE(Scalar(Real::sqrt2()).is_gaussian_rational());
    EXPECT_EQ(Scalar(Real(1), Real(-1)).to_string(), "(1,-1)");
    EXPECT_THROW(Scalar(1) / Scalar(0), Error);
}

TEST(MatMul, IdentityTimesIdentity) {
    EXPECT_EQ(mat_mul(I2(), I2()), I2());
}

TEST(MatMul, PauliXZ) {
    EXPECT_EQ(mat_mul(X(), Z()), ExactMatrix::from_rows({{0, -1}, {1, 0}}));
}

TEST(MatMul, XIAndIXGiveXX) {
    ExactMatrix xi = kron(X(), I2());
    ExactMatrix ix = kron(I2(), X());
    ExactMatrix expected = oracle::kron(X(), X());
    EXPECT_EQ(mat_mul(xi, ix), expected);
    EXPECT_EQ(oracle::mat_mul(oracle::kron(X(), I2()), oracle::kron(I2(), X())), expected);
}

TEST(MatMul, DimensionMismatch) {
    try {
        mat_mul(I2(), ExactMatrix::identity(3));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Commutes, Examples) {
    EXPECT_TRUE(commutes(X(), X()));
    EXPECT_FALSE(commutes(X(), Z()));
    EXPECT_TRUE(commutes(kron(X(), I2()), kron(I2(), Y())));
    EXPECT_THROW(commutes(X(), ExactMatrix::identity(3)), Error);
}

TEST(Kron, Examples) {
    EXPECT_EQ(kron(I2(), I2()), ExactMatrix::identity(4));
    EXPECT_EQ(
        kron(X(), I2()), ExactMatrix::from_rows({{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}}));
    EXPECT_EQ(kron(Z(), Z()), ExactMatrix::diagonal({1, -1, -1, 1}));
    EXPECT_EQ(kron(Z(), Z()), oracle::kron(Z(), Z()));
    EXPECT_EQ(kron(X(), ExactMatrix::identity(3)).dim(), 6u);
}

TEST(ExactMatrix, HermitianAndAdjoint) {
    EXPECT_TRUE(Y().is_hermitian());
    ExactMatrix m = ExactMatrix::from_rows({{1, Scalar::i()}, {Scalar::i(), 0}});
    EXPECT_FALSE(m.is_hermitian());
    EXPECT_EQ(m.adjoint().at(0, 1), -Scalar::i());
    EXPECT_EQ((Z() * Scalar(3)).trace(), Scalar(0));
}

TEST(ExactMatrix, ScalarMultipleOfIdentity) {
    EXPECT_EQ(ExactMatrix::identity(3).scalar_multiple_of_identity(), Scalar(1));
    EXPECT_EQ((ExactMatrix::identity(2) * Scalar(-2)).scalar_multiple_of_identity(), Scalar(-2));
    EXPECT_FALSE(Z().scalar_multiple_of_identity().has_value());
}

TEST(ExactMatrix, FromRowsRejectsRagged) {
    EXPECT_THROW(ExactMatrix::from_rows({{1, 0}, {0}}), Error);
}

TEST(InnerProduct, ConjugatesFirstArgument) {
    std::vector<Scalar> u = {Scalar::i(), 0};
    std::vector<Scalar> v = {1, 0};
    EXPECT_EQ(inner_product(u, v), -Scalar::i());
    EXPECT_EQ(inner_product(u, u), Scalar(1));
    EXPECT_EQ(mat_vec(X(), v), (std::vector<Scalar>{0, 1}));
}
