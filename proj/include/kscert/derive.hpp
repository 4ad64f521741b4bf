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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kscert/assign.hpp"
#include "kscert/compat.hpp"
#include "kscert/error.hpp"
#include "kscert/exact.hpp"
#include "kscert/model.hpp"
#include "kscert/poly.hpp"

namespace kscert {

enum class Provenance { RayPairsAndBases, RayBasesOnly, Parity, UserSupplied };

inline std::string_view provenance_name(Provenance p) {
    switch (p) {
        case Provenance::RayPairsAndBases: return "ray-pairs-bases";
        case Provenance::RayBasesOnly: return "bases-only";
        case Provenance::Parity: return "parity";
        case Provenance::UserSupplied: return "user-supplied";
    }
    return "unknown";
}

/// {r_1, ..., r_N}: polynomials that vanish as operators, each with its normalization c_i.
struct CompleteSet {
    std::vector<ContextPolynomial> polynomials;
    Provenance provenance = Provenance::UserSupplied;
};

/// Thrown when a derivation is requested for a set that is not a KS proof.
class NotKSProofError : public Error {
   public:
    NotKSProofError(const std::string &message, ProofCertificate certificate)
        : Error(ErrorCode::NotKSProof, message), certificate_(std::move(certificate)) {
    }
    const ProofCertificate &certificate() const {
        return certificate_;
    }

   private:
    ProofCertificate certificate_;
};

namespace detail {

inline ContextPolynomial with_computed_normalization(const ContextPolynomial &p) {
    return p.with_normalization(normalization_constant(p));
}

inline ContextPolynomial basis_polynomial(const ObservableSet &set, const Context &basis) {
    Polynomial sum(-1);
    for (std::size_t m : basis.members) {
        sum += Polynomial::variable(m);
    }
    return with_computed_normalization(ContextPolynomial::make(set, basis, sum));
}

inline void require_rays(const ObservableSet &set) {
    for (const auto &obs : set.observables()) {
        if (!obs.is_ray()) {
            throw Error(
                ErrorCode::NonRayMember, "observable " + std::to_string(obs.id + 1) + " is not a ray", {obs.id});
        }
    }
}

}  // namespace detail

/// One P_i P_j per orthogonal pair plus one (sum_k P_k - 1) per basis.
inline CompleteSet build_complete_set_rays(
    const ObservableSet &set, const OrthogonalityGraph &graph, const std::vector<Context> &bases) {
    detail::require_rays(set);
    CompleteSet cs;
    cs.provenance = Provenance::RayPairsAndBases;
    for (const auto &[i, j] : graph.edges()) {
        Context ctx = validate_context(set, {i, j});
        cs.polynomials.push_back(detail::with_computed_normalization(
            ContextPolynomial::make(set, ctx, Polynomial::variable(i) * Polynomial::variable(j))));
    }
    for (const auto &basis : bases) {
        cs.polynomials.push_back(detail::basis_polynomial(set, validate_context(set, basis.members)));
    }
    return cs;
}

/// The first orthogonal pair lying in none of `bases`, if any.
inline std::optional<std::pair<std::size_t, std::size_t>> uncovered_edge(
    const OrthogonalityGraph &graph, const std::vector<Context> &bases) {
    for (const auto &[i, j] : graph.edges()) {
        bool covered = false;
        for (const auto &b : bases) {
            if (b.contains(i) && b.contains(j)) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            return std::make_pair(i, j);
        }
    }
    return std::nullopt;
}

/// {sum_k P_k - 1 : bases}, valid when every orthogonal pair sits inside some basis.
inline CompleteSet build_complete_set_bases_only(
    const ObservableSet &set, const OrthogonalityGraph &graph, const std::vector<Context> &bases) {
    detail::require_rays(set);
    if (auto edge = uncovered_edge(graph, bases)) {
        throw Error(
            ErrorCode::EdgeOutsideBases,
            "orthogonal rays " + std::to_string(edge->first + 1) + " and " + std::to_string(edge->second + 1) +
                " lie in no common basis",
            {edge->first, edge->second});
    }
    CompleteSet cs;
    cs.provenance = Provenance::RayBasesOnly;
    for (const auto &basis : bases) {
        cs.polynomials.push_back(detail::basis_polynomial(set, validate_context(set, basis.members)));
    }
    return cs;
}

/// {prod_{i in ctx} A_i - delta_ctx}, each with c = 4. Requires a parity proof.
inline CompleteSet build_complete_set_parity(const ObservableSet &set, const std::vector<Context> &contexts) {
    ProofCertificate cert = parity_certify(set, contexts);
    if (!cert.is_proof()) {
        throw Error(ErrorCode::NotParityProof, "not a parity proof: " + cert.detail, cert.odd_observables);
    }
    CompleteSet cs;
    cs.provenance = Provenance::Parity;
    for (std::size_t a = 0; a < contexts.size(); a++) {
        Context ctx = validate_context(set, contexts[a].members);
        Monomial prod;
        for (std::size_t m : ctx.members) {
            prod = prod * Monomial::variable(m);
        }
        Polynomial p = Polynomial::term(prod, Scalar(1)) - Polynomial(Scalar(cert.deltas[a]));
        cs.polynomials.push_back(detail::with_computed_normalization(ContextPolynomial::make(set, ctx, p)));
    }
    return cs;
}

/// Wraps user polynomials and computes every c_i. Contexts are put in canonical form
/// only; commutation is certified by verify_complete_set after condition 1.
inline CompleteSet user_complete_set(
    const ObservableSet &set, const std::vector<std::pair<std::vector<std::size_t>, Polynomial>> &polys) {
    CompleteSet cs;
    cs.provenance = Provenance::UserSupplied;
    for (const auto &[ids, p] : polys) {
        Context ctx = canonical_context(set, ids);
        cs.polynomials.push_back(detail::with_computed_normalization(ContextPolynomial::make(set, ctx, p)));
    }
    return cs;
}

/// Condition 1: every member vanishes as an operator (else Condition1Violated).
/// Then every context must commute (else NotCommuting).
/// Condition 2: no assignment zeroes all members, decided by general_unsat.
inline ProofCertificate verify_complete_set(
    const ObservableSet &set, const CompleteSet &cs, std::uint64_t node_cap = 0) {
    for (std::size_t k = 0; k < cs.polynomials.size(); k++) {
        ExactMatrix m = eval_operator(cs.polynomials[k], set);
        if (!m.is_zero()) {
            std::string text;
            for (std::size_t r = 0; r < m.dim(); r++) {
                text += r == 0 ? "[" : "; ";
                for (std::size_t c = 0; c < m.dim(); c++) {
                    text += (c == 0 ? "" : " ") + m.at(r, c).to_string();
                }
            }
            text += "]";
            throw Error(
                ErrorCode::Condition1Violated,
                "polynomial " + std::to_string(k + 1) + " does not vanish as an operator: " + text, {k});
        }
    }
    return general_unsat(set, cs.polynomials, node_cap);
}

struct CertificateRecord {
    std::string kind;
    std::string statement;
    friend bool operator==(const CertificateRecord &, const CertificateRecord &) = default;
};

/// F = -sum_i r_i^dagger r_i / c_i with its quantum and classical certificates.
struct Inequality {
    CompleteSet complete_set;
    Polynomial F;
    /// max of F over classical assignments: certified <= -1, or exact.
    ClassicalBound f_bound;
    ProofCertificate completeness;
    std::vector<CertificateRecord> certificates;
};

struct DeriveOptions {
    bool exact_bound = false;
    std::uint64_t node_cap = kDefaultNodeCap;
};

inline std::string stats_text(const SearchStats &s) {
    return "nodes=" + std::to_string(s.nodes) + " propagations=" + std::to_string(s.propagations);
}

inline Inequality assemble_F(const ObservableSet &set, const CompleteSet &cs, const DeriveOptions &options = {}) {
    Inequality ineq;
    ineq.complete_set = cs;
    ineq.completeness = verify_complete_set(set, cs, options.node_cap);
    if (!ineq.completeness.is_proof()) {
        throw NotKSProofError("not a KS proof: an assignment zeroes every polynomial", ineq.completeness);
    }
    ineq.certificates.push_back(
        {"condition1", "all " + std::to_string(cs.polynomials.size()) + " polynomials vanish as operators"});
    ineq.certificates.push_back(
        {"condition2", "general-unsat: no assignment zeroes every polynomial (" +
                           stats_text(ineq.completeness.stats) + ")"});

    ScoreFunction score = ScoreFunction::negated_squares(cs.polynomials);
    ineq.F = score.total();
    if (!eval_operator(ineq.F, set).is_zero()) {
        throw Error(ErrorCode::InvalidArgument, "internal error: F is not the zero operator");
    }
    ineq.certificates.push_back({"quantum", "F evaluates to the zero operator, so <F> = 0 for every state"});

    if (options.exact_bound) {
        ineq.f_bound = classical_max(set, score, BoundMode::Exact, options.node_cap);
        ineq.certificates.push_back(
            {"classical", "max F = " + ineq.f_bound.value.get_str() + " (exact branch and bound, " +
                              stats_text(ineq.f_bound.stats) + ")"});
    } else {
        // Condition 2 already decided unsatisfiability; every violated normalized square is >= 1.
        ineq.f_bound.mode = BoundMode::CertifyOnly;
        ineq.f_bound.value = -1;
        ineq.f_bound.exact = false;
        ineq.f_bound.stats = ineq.completeness.stats;
        ineq.certificates.push_back({"classical", "max F <= -1 (certified by condition 2)"});
    }
    return ineq;
}

enum class Form { Projector, Dichotomic };

inline std::string_view form_name(Form f) {
    return f == Form::Projector ? "projector" : "dichotomic";
}

/// The inequality G <= bound, with F = scale * G + offset (scale > 0).
struct PresentedInequality {
    Form form = Form::Projector;
    /// True when rays were rewritten as A_i = I - 2 P_i.
    bool dichotomized = false;
    Polynomial score;
    Rational scale;
    Rational offset;
    Rational classical_bound;
    bool bound_exact = false;
    Rational quantum_value;
    std::vector<CertificateRecord> certificates;
};

namespace detail {

inline Rational rational_coefficient(const Scalar &s) {
    if (!s.is_rational()) {
        throw Error(ErrorCode::InvalidArgument, "presented forms need rational coefficients");
    }
    return s.re().rational_part();
}

/// 1 / lcm of the coefficient denominators: the largest q with p / q integral and no
/// common integer factor divided out.
inline Rational denominator_scale(const Polynomial &p) {
    mpz_class den_lcm = 1;
    for (const auto &[m, c] : p.terms()) {
        den_lcm = lcm(den_lcm, mpz_class(rational_coefficient(c).get_den()));
    }
    return Rational(1) / Rational(den_lcm);
}

inline Polynomial without_constant(const Polynomial &p) {
    return p - Polynomial(p.constant_term());
}

}  // namespace detail

/// Rearranges F into a score G with integer coefficients.
///
/// Projector form (and any set without rays): G is F minus its constant, times the lcm of
/// its coefficient denominators, so G has integer coefficients. Dichotomic form on rays:
/// the projector score is rewritten with P_i = (1 - A_i)/2, reduced with A_i^2 = 1, and
/// its non-constant part multiplied by 2^deg to clear the substitution denominators.
inline PresentedInequality present(const ObservableSet &set, const Inequality &ineq, Form form) {
    PresentedInequality out;
    out.form = form;
    Rational t = detail::rational_coefficient(ineq.F.constant_term());
    Polynomial h = detail::without_constant(ineq.F);
    Rational s = detail::denominator_scale(h);
    Polynomial g = h * Scalar(Rational(1) / s);

    bool has_rays = false;
    for (const auto &obs : set.observables()) {
        has_rays = has_rays || obs.is_ray();
    }
    const ObservableSet *frame = &set;
    std::optional<ObservableSet> dich;
    if (form == Form::Dichotomic && has_rays) {
        dich = dichotomized(set);
        frame = &*dich;
        std::map<std::size_t, Polynomial> rules;
        for (const auto &obs : set.observables()) {
            if (obs.is_ray()) {
                rules[obs.id] = (Polynomial(1) - Polynomial::variable(obs.id)) * Scalar(make_rational(1, 2));
            }
        }
        unsigned k = g.degree();
        Polynomial sub = reduce(substitute(g, rules), *dich);
        Rational c0 = detail::rational_coefficient(sub.constant_term());
        Rational pow2(1);
        for (unsigned j = 0; j < k; j++) {
            pow2 *= 2;
        }
        g = detail::without_constant(sub) * Scalar(pow2);
        // F = s (c0 + G / 2^k) + t
        t = s * c0 + t;
        s = s / pow2;
        out.dichotomized = true;
    }
    out.score = std::move(g);
    out.scale = s;
    out.offset = t;
    out.classical_bound = (ineq.f_bound.value - t) / s;
    out.bound_exact = ineq.f_bound.exact;
    out.quantum_value = -t / s;

    ExactMatrix g_op = eval_operator(out.score, *frame);
    if (!(g_op == ExactMatrix::identity(set.dim()) * Scalar(out.quantum_value))) {
        throw Error(ErrorCode::InvalidArgument, "internal error: presented score is not a multiple of the identity");
    }
    out.certificates.push_back(
        {"presentation", "score evaluates to " + out.quantum_value.get_str() + " * I as an operator"});
    out.certificates.push_back(
        {"affine", "F = " + out.scale.get_str() + " * G + (" + out.offset.get_str() + ")"});
    if (!(out.classical_bound < out.quantum_value)) {
        throw Error(ErrorCode::InvalidArgument, "internal error: classical bound does not lie below the quantum value");
    }
    return out;
}

/// <psi| G |psi> / <psi|psi>.
inline Scalar expectation(const ObservableSet &set, const Polynomial &g, const std::vector<Scalar> &state) {
    if (state.size() != set.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "state dimension does not match the observable set");
    }
    Scalar norm = inner_product(state, state);
    if (norm.is_zero()) {
        throw Error(ErrorCode::ZeroState, "state vector must be nonzero");
    }
    ExactMatrix op = eval_operator(g, set);
    return inner_product(state, mat_vec(op, state)) / norm;
}

}  // namespace kscert
