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

#include "support/fidelity.hpp"

using namespace kscert;

TEST(Fidelity, RenderingsMatchFixturesAndOracles) {
    for (const auto &c : fidelity::cases()) {
        fidelity::maybe_regenerate(c);
        EXPECT_EQ(fidelity::check(c), "") << c.file;
    }
}

TEST(Fidelity, Peres24DichotomicClosedForm) {
    // (n^2 - 3n + 4) N - 4 and (n^2 - 3n + 4) N for N bases of size n
    ProofFile f = load_catalog("peres-24");
    PipelineOptions opt;
    opt.form = Form::Dichotomic;
    Derivation d = run_derive(f, opt);
    long n = 4;
    long N = static_cast<long>(d.analysis.contexts.size());
    EXPECT_EQ(N, 24);
    EXPECT_EQ(d.presented.classical_bound, Rational((n * n - 3 * n + 4) * N - 4));
    EXPECT_EQ(d.presented.quantum_value, Rational((n * n - 3 * n + 4) * N));
}

TEST(Fidelity, GeneralDimensionClosedForm) {
    // bases-only dichotomic score on a single basis in dimension n gives n^2 - 3n + 4
    for (std::size_t n = 3; n <= 5; n++) {
        ObservableSet set(n);
        for (std::size_t j = 0; j < n; j++) {
            std::vector<Scalar> v(n, Scalar(0));
            v[j] = Scalar(1);
            set.add(ray_observable(make_ray(v)));
        }
        ExactMatrix g = eval_operator(fidelity::basis_dichotomic_score(set), dichotomized(set));
        long nl = static_cast<long>(n);
        EXPECT_EQ(g, ExactMatrix::identity(n) * Scalar(nl * nl - 3 * nl + 4));
    }
}
