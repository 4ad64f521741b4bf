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

#include "kscert/kscert.hpp"

using namespace kscert;

namespace {

std::vector<Rational> spec(std::initializer_list<long> values) {
    std::vector<Rational> out;
    for (long v : values) {
        out.emplace_back(v);
    }
    return out;
}

ErrorCode code_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(MakeObservable, ZZWithDeclaredSpectrum) {
    ExactMatrix zz = kron(pauli_matrix('Z'), pauli_matrix('Z'));
    Observable obs = make_observable(zz, spec({-1, 1}));
    EXPECT_EQ(obs.spectrum, spec({-1, 1}));
    EXPECT_TRUE(obs.is_dichotomic());
    ExactMatrix id = ExactMatrix::identity(4);
    EXPECT_TRUE(((zz - id) * (zz + id)).is_zero());
}

TEST(MakeObservable, IdentityHasDegreeOne) {
    Observable obs = make_observable(ExactMatrix::identity(3), spec({1}));
    EXPECT_EQ(obs.degree(), 1u);
    EXPECT_EQ(make_observable(ExactMatrix::identity(3)).spectrum, spec({1}));
}

TEST(MakeObservable, PauliXIsNotAProjector) {
    EXPECT_EQ(code_of([] { make_observable(pauli_matrix('X'), spec({0, 1})); }), ErrorCode::AnnihilationFailure);
}

TEST(MakeObservable, NonHermitian) {
    ExactMatrix m = ExactMatrix::from_rows({{0, 1}, {0, 0}});
    EXPECT_EQ(code_of([&] { make_observable(m, spec({0})); }), ErrorCode::NonHermitian);
}

TEST(MakeObservable, AutoDetection) {
    EXPECT_EQ(make_observable(pauli_matrix('X')).spectrum, spec({-1, 1}));
    EXPECT_EQ(make_observable(ExactMatrix::diagonal({1, 0})).spectrum, spec({0, 1}));
    EXPECT_EQ(make_observable(ExactMatrix::diagonal({-1, -1})).spectrum, spec({-1}));
    EXPECT_EQ(make_observable(ExactMatrix::zero(2)).spectrum, spec({0}));
    EXPECT_EQ(
        code_of([] { make_observable(ExactMatrix::diagonal({2, 3})); }), ErrorCode::AnnihilationFailure);
}

TEST(MakeObservable, DeclaredGeneralSpectrum) {
    Observable obs = make_observable(ExactMatrix::diagonal({2, 3, 3}), spec({3, 2}));
    EXPECT_EQ(obs.spectrum, spec({2, 3}));
    EXPECT_EQ(obs.degree(), 2u);
    // 5 never occurs, so (A-2)(A-3) alone already annihilates A.
    EXPECT_EQ(
        code_of([] { make_observable(ExactMatrix::diagonal({2, 3}), spec({2, 3, 5})); }),
        ErrorCode::AnnihilationFailure);
}

TEST(MakeRay, StandardBasisVector) {
    Ray r = make_ray({1, 0, 0});
    EXPECT_EQ(r.projector, ExactMatrix::diagonal({1, 0, 0}));
}

TEST(MakeRay, HalfBlock) {
    Ray r = make_ray({1, 1, 0});
    Scalar h(make_rational(1, 2));
    // vv^dagger / (v^dagger v) entry by entry
    for (std::size_t a = 0; a < 3; a++) {
        for (std::size_t b = 0; b < 3; b++) {
            Scalar expected = (a < 2 && b < 2) ? h : Scalar(0);
            EXPECT_EQ(r.projector.at(a, b), expected);
        }
    }
    EXPECT_EQ(r.projector * r.projector, r.projector);
    EXPECT_TRUE(r.projector.is_hermitian());
}

TEST(MakeRay, ScaleInvariance) {
    EXPECT_EQ(make_ray({2, 0, 0}).projector, make_ray({1, 0, 0}).projector);
    EXPECT_EQ(make_ray({Scalar::i(), Scalar::i()}).projector, make_ray({1, 1}).projector);
}

TEST(MakeRay, ZeroVector) {
    EXPECT_EQ(code_of([] { make_ray({0, 0, 0}); }), ErrorCode::ZeroVector);
}

TEST(MakeRay, ComplexAndSqrt2Components) {
    Ray r = make_ray({1, Scalar::i()});
    EXPECT_EQ(r.projector.at(0, 1), Scalar(Real(0), Real(make_rational(-1, 2))));
    Ray s = make_ray({0, 1, Scalar(Real::sqrt2())});
    EXPECT_EQ(s.projector * s.projector, s.projector);
    EXPECT_EQ(s.projector.at(1, 2), Scalar(Real(0, make_rational(1, 3))));
    EXPECT_EQ(ray_observable(s).spectrum, spec({0, 1}));
}

TEST(Dichotomize, DiagonalExample) {
    Observable a = dichotomize(make_ray({1, 0, 0}));
    EXPECT_EQ(a.matrix, ExactMatrix::diagonal({-1, 1, 1}));
    EXPECT_EQ(a.spectrum, spec({-1, 1}));
    EXPECT_EQ(a.matrix * a.matrix, ExactMatrix::identity(3));
}

TEST(Dichotomize, CabelloFirstRay) {
    ProofFile f = load_catalog("cabello-18");
    const Ray &r = *f.set[0].ray;
    Observable a = dichotomize(r);
    EXPECT_EQ(a.matrix, ExactMatrix::identity(4) - r.projector * Scalar(2));
    EXPECT_EQ(a.matrix, ExactMatrix::diagonal({1, 1, 1, -1}));
}

TEST(Dichotomize, RecoversProjector) {
    Ray r = make_ray({1, -1, Scalar(Real::sqrt2())});
    Observable a = dichotomize(r);
    EXPECT_EQ((ExactMatrix::identity(3) - a.matrix) * Scalar(make_rational(1, 2)), r.projector);
}

TEST(Dichotomize, DimensionOne) {
    // I - 2P is -1 when P is the whole space.
    Observable a = dichotomize(make_ray({3}));
    EXPECT_EQ(a.spectrum, spec({-1}));
}

TEST(Pauli, Strings) {
    EXPECT_EQ(pauli_string_matrix("+XY"), kron(pauli_matrix('X'), pauli_matrix('Y')));
    EXPECT_EQ(pauli_string_matrix("-ZZ"), kron(pauli_matrix('Z'), pauli_matrix('Z')) * Scalar(-1));
    EXPECT_EQ(pauli_string_matrix("ZI"), kron(pauli_matrix('Z'), ExactMatrix::identity(2)));
    EXPECT_EQ(code_of([] { pauli_string_matrix("+XQ"); }), ErrorCode::InvalidArgument);
    EXPECT_EQ(code_of([] { pauli_string_matrix("+"); }), ErrorCode::InvalidArgument);
    Observable yy = pauli_observable("YY");
    EXPECT_EQ(yy.pauli, "+YY");
    EXPECT_TRUE(yy.is_dichotomic());
}

TEST(ObservableSet, RejectsDuplicates) {
    ObservableSet set(3);
    set.add(ray_observable(make_ray({1, 0, 0})));
    set.add(ray_observable(make_ray({0, 1, 0})));
    try {
        set.add(ray_observable(make_ray({-2, 0, 0})));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::DuplicateObservable);
        EXPECT_EQ(e.indices(), (std::vector<std::size_t>{0, 2}));
    }
    EXPECT_EQ(set.size(), 2u);
}

TEST(ObservableSet, DimensionAndIds) {
    ObservableSet set(2);
    EXPECT_EQ(code_of([&] { set.add(pauli_observable("XX")); }), ErrorCode::DimensionMismatch);
    std::size_t id = set.add(pauli_observable("X"));
    EXPECT_EQ(id, 0u);
    EXPECT_EQ(set[0].id, 0u);
    EXPECT_EQ(code_of([&] { set.at(5); }), ErrorCode::UnknownVariable);
    EXPECT_TRUE(set.all_dichotomic());
    EXPECT_FALSE(set.all_rays());
    EXPECT_EQ(code_of([] { ObservableSet bad(0); }), ErrorCode::DimensionMismatch);
}

TEST(ObservableSet, Dichotomized) {
    ProofFile f = load_catalog("cabello-18");
    ObservableSet d = dichotomized(f.set);
    ASSERT_EQ(d.size(), 18u);
    for (std::size_t k = 0; k < d.size(); k++) {
        EXPECT_TRUE(d[k].is_dichotomic());
        EXPECT_EQ(d[k].matrix, ExactMatrix::identity(4) - f.set[k].matrix * Scalar(2));
    }
    EXPECT_EQ(variable_name(f.set, 3), "P4");
    EXPECT_EQ(variable_name(d, 3), "A4");
}
