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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kscert/compat.hpp"
#include "kscert/error.hpp"
#include "kscert/exact.hpp"
#include "kscert/model.hpp"
#include "kscert/poly.hpp"

namespace kscert {

enum class Verdict { KSProof, NotKSProof };
enum class Method { RayColoring, Parity, GeneralCSP };

inline std::string_view verdict_name(Verdict v) {
    return v == Verdict::KSProof ? "KSProof" : "NotKSProof";
}
inline std::string_view method_name(Method m) {
    switch (m) {
        case Method::RayColoring: return "RayColoring";
        case Method::Parity: return "Parity";
        case Method::GeneralCSP: return "GeneralCSP";
    }
    return "Unknown";
}

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t propagations = 0;
    friend bool operator==(const SearchStats &, const SearchStats &) = default;
};

/// Outcome of a value-assignment search. A NotKSProof verdict carries a satisfying
/// assignment whenever one was constructed.
struct ProofCertificate {
    Verdict verdict = Verdict::NotKSProof;
    Method method = Method::GeneralCSP;
    std::optional<ValueAssignment> witness;
    SearchStats stats;
    std::string detail;
    /// Parity only: delta_alpha per context, and observables met an odd number of times.
    std::vector<int> deltas;
    std::vector<std::size_t> odd_observables;

    bool is_proof() const {
        return verdict == Verdict::KSProof;
    }
};

/// Value order tried by every search: smaller |a| first, positive before negative
/// (0 before 1, +1 before -1).
inline std::vector<Rational> search_value_order(std::vector<Rational> values) {
    std::sort(values.begin(), values.end(), [](const Rational &x, const Rational &y) {
        int c = cmp(abs(x), abs(y));
        if (c != 0) {
            return c < 0;
        }
        return x > y;
    });
    return values;
}

/// KS rules for rays: (i) no two orthogonal rays both 1, (ii) exactly one 1 per basis.
inline bool satisfies_ks_rules(
    const OrthogonalityGraph &graph, const std::vector<Context> &bases, const ValueAssignment &v) {
    auto value = [&](std::size_t id) -> std::optional<Rational> {
        auto it = v.find(id);
        return it == v.end() ? std::nullopt : std::optional<Rational>(it->second);
    };
    for (std::size_t i = 0; i < graph.vertex_count(); i++) {
        auto vi = value(i);
        if (!vi.has_value() || (*vi != 0 && *vi != 1)) {
            return false;
        }
    }
    for (const auto &[i, j] : graph.edges()) {
        if (*value(i) == 1 && *value(j) == 1) {
            return false;
        }
    }
    for (const auto &b : bases) {
        Rational sum(0);
        for (std::size_t m : b.members) {
            sum += *value(m);
        }
        if (sum != 1) {
            return false;
        }
    }
    return true;
}

namespace detail {

class RayColoringSearch {
   public:
    RayColoringSearch(const OrthogonalityGraph &graph, const std::vector<Context> &bases)
        : graph_(graph), bases_(bases), state_(graph.vertex_count(), -1), bases_of_(graph.vertex_count()) {
        for (std::size_t b = 0; b < bases.size(); b++) {
            for (std::size_t m : bases[b].members) {
                if (m >= graph.vertex_count()) {
                    throw Error(ErrorCode::InvalidArgument, "basis member outside the graph", {m});
                }
                bases_of_[m].push_back(b);
            }
        }
    }

    bool run() {
        return search();
    }
    const std::vector<signed char> &state() const {
        return state_;
    }
    const SearchStats &stats() const {
        return stats_;
    }

   private:
    bool set(std::size_t v, int val) {
        if (state_[v] == val) {
            return true;
        }
        if (state_[v] != -1) {
            return false;
        }
        state_[v] = static_cast<signed char>(val);
        trail_.push_back(v);
        queue_.push_back(v);
        return true;
    }

    bool propagate() {
        while (!queue_.empty()) {
            std::size_t v = queue_.back();
            queue_.pop_back();
            if (state_[v] == 1) {
                for (std::size_t u : graph_.neighbors(v)) {
                    if (state_[u] == 1) {
                        return false;
                    }
                    if (state_[u] == -1) {
                        stats_.propagations++;
                        set(u, 0);
                    }
                }
                continue;
            }
            for (std::size_t b : bases_of_[v]) {
                std::size_t unassigned = 0;
                std::size_t last = 0;
                bool has_one = false;
                for (std::size_t m : bases_[b].members) {
                    if (state_[m] == 1) {
                        has_one = true;
                        break;
                    }
                    if (state_[m] == -1) {
                        unassigned++;
                        last = m;
                    }
                }
                if (has_one) {
                    continue;
                }
                if (unassigned == 0) {
                    return false;
                }
                if (unassigned == 1) {
                    stats_.propagations++;
                    set(last, 1);
                }
            }
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            state_[trail_.back()] = -1;
            trail_.pop_back();
        }
        queue_.clear();
    }

    bool search() {
        stats_.nodes++;
        // Branch inside the open basis with the fewest unassigned rays.
        std::size_t best_basis = bases_.size();
        std::size_t best_open = SIZE_MAX;
        for (std::size_t b = 0; b < bases_.size(); b++) {
            std::size_t open = 0;
            bool has_one = false;
            for (std::size_t m : bases_[b].members) {
                if (state_[m] == 1) {
                    has_one = true;
                    break;
                }
                open += state_[m] == -1;
            }
            if (!has_one && open > 0 && open < best_open) {
                best_open = open;
                best_basis = b;
            }
        }
        if (best_basis == bases_.size()) {
            // Every basis holds its 1; the remaining rays can all be 0.
            for (std::size_t v = 0; v < state_.size(); v++) {
                if (state_[v] == -1) {
                    state_[v] = 0;
                }
            }
            return true;
        }
        std::size_t var = 0;
        for (std::size_t m : bases_[best_basis].members) {
            if (state_[m] == -1) {
                var = m;
                break;
            }
        }
        for (int val : {0, 1}) {
            std::size_t mark = trail_.size();
            if (set(var, val) && propagate() && search()) {
                return true;
            }
            undo(mark);
        }
        return false;
    }

    const OrthogonalityGraph &graph_;
    const std::vector<Context> &bases_;
    std::vector<signed char> state_;
    std::vector<std::vector<std::size_t>> bases_of_;
    std::vector<std::size_t> trail_;
    std::vector<std::size_t> queue_;
    SearchStats stats_;
};

}  // namespace detail

/// Complete backtracking search for a {0,1} assignment obeying the KS rules on the
/// orthogonality graph and the given bases. KSProof iff none exists.
inline ProofCertificate ks_colorability(
    const ObservableSet &set, const OrthogonalityGraph &graph, const std::vector<Context> &bases) {
    if (graph.vertex_count() != set.size()) {
        throw Error(ErrorCode::InvalidArgument, "graph and observable set disagree on the number of rays");
    }
    detail::RayColoringSearch search(graph, bases);
    ProofCertificate cert;
    cert.method = Method::RayColoring;
    bool found = search.run();
    cert.stats = search.stats();
    if (found) {
        cert.verdict = Verdict::NotKSProof;
        ValueAssignment v;
        for (std::size_t i = 0; i < search.state().size(); i++) {
            v[i] = search.state()[i];
        }
        if (!satisfies_ks_rules(graph, bases, v)) {
            throw Error(ErrorCode::InvalidArgument, "internal error: coloring witness fails the KS rules");
        }
        cert.witness = std::move(v);
        cert.detail = "a {0,1} assignment satisfies every KS rule";
    } else {
        cert.verdict = Verdict::KSProof;
        cert.detail = "no {0,1} assignment satisfies the KS rules";
    }
    return cert;
}

namespace detail {

/// Solves prod_{i in ctx} v_i = delta_ctx over v_i in {-1,1} as a GF(2) system.
inline std::optional<ValueAssignment> solve_parity_system(
    std::size_t observables, const std::vector<Context> &contexts, const std::vector<int> &deltas) {
    std::size_t cols = observables;
    std::vector<std::vector<unsigned char>> rows;
    for (std::size_t a = 0; a < contexts.size(); a++) {
        std::vector<unsigned char> row(cols + 1, 0);
        for (std::size_t m : contexts[a].members) {
            row[m] ^= 1;
        }
        row[cols] = deltas[a] < 0 ? 1 : 0;
        rows.push_back(std::move(row));
    }
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); c++) {
        std::size_t p = r;
        while (p < rows.size() && !rows[p][c]) {
            p++;
        }
        if (p == rows.size()) {
            continue;
        }
        std::swap(rows[p], rows[r]);
        for (std::size_t k = 0; k < rows.size(); k++) {
            if (k != r && rows[k][c]) {
                for (std::size_t j = c; j <= cols; j++) {
                    rows[k][j] ^= rows[r][j];
                }
            }
        }
        pivot_col.push_back(c);
        r++;
    }
    for (std::size_t k = r; k < rows.size(); k++) {
        if (rows[k][cols]) {
            return std::nullopt;
        }
    }
    std::vector<unsigned char> x(cols, 0);
    for (std::size_t k = 0; k < r; k++) {
        x[pivot_col[k]] = rows[k][cols];
    }
    ValueAssignment v;
    for (std::size_t i = 0; i < cols; i++) {
        v[i] = x[i] ? -1 : 1;
    }
    return v;
}

}  // namespace detail

/// Parity test: every context product is delta_alpha * I, prod delta_alpha = -1 and every
/// observable occurs in an even number of contexts.
inline ProofCertificate parity_certify(const ObservableSet &set, const std::vector<Context> &contexts) {
    for (const auto &obs : set.observables()) {
        if (!obs.is_dichotomic()) {
            throw Error(
                ErrorCode::NotDichotomic,
                "observable " + std::to_string(obs.id + 1) + " does not have spectrum {-1, 1}", {obs.id});
        }
    }
    ProofCertificate cert;
    cert.method = Method::Parity;
    int product = 1;
    std::vector<std::size_t> occurrences(set.size(), 0);
    for (std::size_t a = 0; a < contexts.size(); a++) {
        Context ctx = validate_context(set, contexts[a].members);
        ContextProduct cp = context_product(set, ctx);
        if (!cp.delta.has_value() || !(*cp.delta == Scalar(1) || *cp.delta == Scalar(-1))) {
            throw Error(
                ErrorCode::NotScalarMultiple,
                "product of context " + std::to_string(a + 1) + " is not +I or -I", {a});
        }
        int delta = *cp.delta == Scalar(1) ? 1 : -1;
        cert.deltas.push_back(delta);
        product *= delta;
        for (std::size_t m : ctx.members) {
            occurrences[m]++;
        }
    }
    for (std::size_t i = 0; i < occurrences.size(); i++) {
        if (occurrences[i] % 2 == 1) {
            cert.odd_observables.push_back(i);
        }
    }
    bool product_ok = product == -1;
    if (product_ok && cert.odd_observables.empty()) {
        cert.verdict = Verdict::KSProof;
        cert.detail = "product of deltas is -1 and every observable occurs an even number of times";
        return cert;
    }
    cert.verdict = Verdict::NotKSProof;
    std::string detail;
    if (!product_ok) {
        detail = "product of deltas is +1";
    }
    for (std::size_t i : cert.odd_observables) {
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += "observable " + variable_name(set, i) + " occurs in " + std::to_string(occurrences[i]) +
                  " context(s) (odd)";
    }
    cert.detail = detail;
    cert.witness = detail::solve_parity_system(set.size(), contexts, cert.deltas);
    return cert;
}

namespace detail {

/// Finite-domain CSP: each observable ranges over its spectrum, each polynomial must vanish.
/// Forward checking on constraints with one open variable, singleton domains assigned
/// immediately, most-constrained variable first (smallest domain, most constraints, lowest id).
class PolynomialCsp {
   public:
    PolynomialCsp(const ObservableSet &set, const std::vector<ContextPolynomial> &polys, std::uint64_t node_cap)
        : node_cap_(node_cap) {
        std::vector<std::size_t> ids;
        for (const auto &p : polys) {
            for (std::size_t id : p.polynomial().variables()) {
                ids.push_back(id);
            }
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (std::size_t id : ids) {
            Var var;
            var.id = id;
            var.values = search_value_order(set.at(id).spectrum);
            if (var.values.size() > 64) {
                throw Error(ErrorCode::InvalidArgument, "spectra larger than 64 values are not supported", {id});
            }
            vars_.push_back(std::move(var));
        }
        auto index_of = [&](std::size_t id) {
            return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
        };
        for (std::size_t c = 0; c < polys.size(); c++) {
            Constraint con;
            for (std::size_t id : polys[c].polynomial().variables()) {
                con.vars.push_back(index_of(id));
                vars_[index_of(id)].constraints.push_back(c);
            }
            for (const auto &[mono, coeff] : polys[c].polynomial().terms()) {
                Term t;
                t.coeff = coeff;
                for (const auto &[id, e] : mono.factors()) {
                    t.factors.emplace_back(index_of(id), e);
                }
                con.terms.push_back(std::move(t));
            }
            constraints_.push_back(std::move(con));
        }
        value_.assign(vars_.size(), -1);
        domain_.resize(vars_.size());
        for (std::size_t k = 0; k < vars_.size(); k++) {
            std::size_t n = vars_[k].values.size();
            domain_[k] = n == 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << n) - 1);
        }
    }

    bool run() {
        // Constant constraints and constraints with a single variable are checked up front.
        for (std::size_t c = 0; c < constraints_.size(); c++) {
            if (constraints_[c].vars.empty()) {
                if (!evaluate(c).is_zero()) {
                    return false;
                }
            }
        }
        for (std::size_t c = 0; c < constraints_.size(); c++) {
            if (constraints_[c].vars.size() == 1 && !narrow(c, constraints_[c].vars[0])) {
                return false;
            }
        }
        if (!propagate()) {
            return false;
        }
        return search();
    }

    ValueAssignment assignment() const {
        ValueAssignment v;
        for (std::size_t k = 0; k < vars_.size(); k++) {
            v[vars_[k].id] = vars_[k].values[static_cast<std::size_t>(value_[k])];
        }
        return v;
    }
    const SearchStats &stats() const {
        return stats_;
    }

   private:
    struct Var {
        std::size_t id = 0;
        std::vector<Rational> values;
        std::vector<std::size_t> constraints;
    };
    struct Term {
        Scalar coeff;
        std::vector<std::pair<std::size_t, unsigned>> factors;
    };
    struct Constraint {
        std::vector<std::size_t> vars;
        std::vector<Term> terms;
    };
    struct TrailEntry {
        std::size_t var;
        std::uint64_t domain;
        int value;
    };

    Scalar evaluate(std::size_t c) const {
        Scalar total;
        for (const auto &t : constraints_[c].terms) {
            Rational prod(1);
            for (const auto &[k, e] : t.factors) {
                const Rational &a = vars_[k].values[static_cast<std::size_t>(value_[k])];
                for (unsigned j = 0; j < e; j++) {
                    prod *= a;
                }
            }
            total += t.coeff * Scalar(prod);
        }
        return total;
    }

    void save(std::size_t k) {
        trail_.push_back(TrailEntry{k, domain_[k], value_[k]});
    }

    void assign(std::size_t k, int idx) {
        save(k);
        value_[k] = idx;
        domain_[k] = std::uint64_t(1) << idx;
        queue_.push_back(k);
    }

    /// Restricts the single open variable `k` of constraint `c` to values zeroing it.
    bool narrow(std::size_t c, std::size_t k) {
        std::uint64_t mask = domain_[k];
        std::uint64_t keep = 0;
        for (int idx = 0; idx < 64 && (mask >> idx) != 0; idx++) {
            if (!((mask >> idx) & 1)) {
                continue;
            }
            value_[k] = idx;
            if (evaluate(c).is_zero()) {
                keep |= std::uint64_t(1) << idx;
            }
            value_[k] = -1;
        }
        if (keep == 0) {
            return false;
        }
        if (keep != mask) {
            save(k);
            domain_[k] = keep;
        }
        if (std::popcount(keep) == 1) {
            stats_.propagations++;
            int idx = std::countr_zero(keep);
            assign(k, idx);
        }
        return true;
    }

    bool propagate() {
        while (!queue_.empty()) {
            std::size_t k = queue_.back();
            queue_.pop_back();
            for (std::size_t c : vars_[k].constraints) {
                std::size_t open = 0;
                std::size_t last = 0;
                for (std::size_t u : constraints_[c].vars) {
                    if (value_[u] < 0) {
                        open++;
                        last = u;
                    }
                }
                if (open == 0) {
                    if (!evaluate(c).is_zero()) {
                        return false;
                    }
                } else if (open == 1) {
                    if (!narrow(c, last)) {
                        return false;
                    }
                }
            }
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            const TrailEntry &e = trail_.back();
            domain_[e.var] = e.domain;
            value_[e.var] = e.value;
            trail_.pop_back();
        }
        queue_.clear();
    }

    bool search() {
        stats_.nodes++;
        if (node_cap_ != 0 && stats_.nodes > node_cap_) {
            throw Error(ErrorCode::SearchBudgetExceeded, "search exceeded the node cap");
        }
        std::size_t best = vars_.size();
        for (std::size_t k = 0; k < vars_.size(); k++) {
            if (value_[k] >= 0) {
                continue;
            }
            if (best == vars_.size()) {
                best = k;
                continue;
            }
            int dk = std::popcount(domain_[k]);
            int db = std::popcount(domain_[best]);
            if (dk < db || (dk == db && vars_[k].constraints.size() > vars_[best].constraints.size())) {
                best = k;
            }
        }
        if (best == vars_.size()) {
            return true;
        }
        std::uint64_t mask = domain_[best];
        for (int idx = 0; idx < 64 && (mask >> idx) != 0; idx++) {
            if (!((mask >> idx) & 1)) {
                continue;
            }
            std::size_t mark = trail_.size();
            assign(best, idx);
            if (propagate() && search()) {
                return true;
            }
            undo(mark);
        }
        return false;
    }

    std::uint64_t node_cap_;
    std::vector<Var> vars_;
    std::vector<Constraint> constraints_;
    std::vector<int> value_;
    std::vector<std::uint64_t> domain_;
    std::vector<TrailEntry> trail_;
    std::vector<std::size_t> queue_;
    SearchStats stats_;
};

}  // namespace detail

/// Searches for an assignment (each observable over its spectrum) zeroing every polynomial.
/// KSProof iff none exists. `node_cap` of 0 means unlimited.
inline ProofCertificate general_unsat(
    const ObservableSet &set, const std::vector<ContextPolynomial> &polys, std::uint64_t node_cap = 0) {
    for (std::size_t k = 0; k < polys.size(); k++) {
        const Context &ctx = polys[k].context();
        for (std::size_t id : polys[k].polynomial().variables()) {
            if (!ctx.contains(id)) {
                throw Error(
                    ErrorCode::VariableOutsideContext,
                    "polynomial " + std::to_string(k + 1) + " uses variable " + std::to_string(id + 1) +
                        " outside its context",
                    {k, id});
            }
        }
        validate_context(set, ctx.members);
    }
    detail::PolynomialCsp csp(set, polys, node_cap);
    ProofCertificate cert;
    cert.method = Method::GeneralCSP;
    bool found = csp.run();
    cert.stats = csp.stats();
    if (!found) {
        cert.verdict = Verdict::KSProof;
        cert.detail = "no assignment zeroes every polynomial";
        return cert;
    }
    ValueAssignment v = csp.assignment();
    for (const auto &p : polys) {
        if (!eval_assignment(p, v).is_zero()) {
            throw Error(ErrorCode::InvalidArgument, "internal error: CSP witness fails a constraint");
        }
    }
    cert.verdict = Verdict::NotKSProof;
    cert.witness = std::move(v);
    cert.detail = "an assignment zeroes every polynomial";
    return cert;
}

enum class BoundMode { Exact, CertifyOnly };

/// One summand of a score. `upper_bound`, when set, is a known bound valid at every
/// assignment (0 for a negated square).
struct ScorePiece {
    Polynomial poly;
    std::optional<Rational> upper_bound;
};

/// A real score as a sum of pieces; `constraints` is the complete set when the score is
/// F = -sum r_i^dagger r_i / c_i.
struct ScoreFunction {
    std::vector<ScorePiece> pieces;
    std::vector<ContextPolynomial> constraints;

    /// Generic score: one piece per term.
    static ScoreFunction of(const Polynomial &p) {
        ScoreFunction s;
        for (const auto &[m, c] : p.terms()) {
            s.pieces.push_back(ScorePiece{Polynomial::term(m, c), std::nullopt});
        }
        return s;
    }
    /// F built from a complete set: pieces -normalized_square(r_i), each bounded by 0.
    static ScoreFunction negated_squares(const std::vector<ContextPolynomial> &complete_set) {
        ScoreFunction s;
        for (const auto &r : complete_set) {
            s.pieces.push_back(ScorePiece{-normalized_square(r).polynomial(), Rational(0)});
        }
        s.constraints = complete_set;
        return s;
    }

    Polynomial total() const {
        Polynomial out;
        for (const auto &p : pieces) {
            out += p.poly;
        }
        return out;
    }
};

/// Maximum of a score over classical assignments. `value` is the exact maximum when
/// `exact` is set, otherwise a certified upper bound.
struct ClassicalBound {
    BoundMode mode = BoundMode::CertifyOnly;
    Rational value;
    bool exact = false;
    std::optional<ValueAssignment> argmax;
    SearchStats stats;
};

inline constexpr std::uint64_t kDefaultNodeCap = 100'000'000;

namespace detail {

class ScoreBranchAndBound {
   public:
    ScoreBranchAndBound(const ObservableSet &set, const ScoreFunction &score, std::uint64_t node_cap)
        : node_cap_(node_cap) {
        std::vector<std::size_t> ids;
        std::vector<std::size_t> uses;
        for (const auto &piece : score.pieces) {
            for (std::size_t id : piece.poly.variables()) {
                ids.push_back(id);
            }
        }
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        auto index_of = [&](std::size_t id) {
            return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
        };
        vars_.resize(ids.size());
        for (std::size_t k = 0; k < ids.size(); k++) {
            vars_[k].id = ids[k];
            vars_[k].values = search_value_order(set.at(ids[k]).spectrum);
        }
        for (const auto &piece : score.pieces) {
            Piece p;
            p.upper = piece.upper_bound;
            for (std::size_t id : piece.poly.variables()) {
                p.vars.push_back(index_of(id));
                vars_[index_of(id)].uses++;
            }
            for (const auto &[mono, coeff] : piece.poly.terms()) {
                if (!coeff.is_rational()) {
                    throw Error(ErrorCode::InvalidArgument, "score coefficients must be rational");
                }
                Term t;
                t.coeff = coeff.re().rational_part();
                for (const auto &[id, e] : mono.factors()) {
                    t.factors.emplace_back(index_of(id), e);
                }
                p.terms.push_back(std::move(t));
            }
            pieces_.push_back(std::move(p));
        }
        order_.resize(vars_.size());
        for (std::size_t k = 0; k < order_.size(); k++) {
            order_[k] = k;
        }
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return vars_[a].uses > vars_[b].uses;
        });
        value_.assign(vars_.size(), -1);
    }

    void run() {
        search(0);
    }
    const std::optional<Rational> &best() const {
        return best_;
    }
    ValueAssignment argmax() const {
        ValueAssignment v;
        for (std::size_t k = 0; k < vars_.size(); k++) {
            v[vars_[k].id] = vars_[k].values[static_cast<std::size_t>(best_value_[k])];
        }
        return v;
    }
    const SearchStats &stats() const {
        return stats_;
    }

   private:
    struct Var {
        std::size_t id = 0;
        std::vector<Rational> values;
        std::size_t uses = 0;
    };
    struct Term {
        Rational coeff;
        std::vector<std::pair<std::size_t, unsigned>> factors;
    };
    struct Piece {
        std::vector<std::size_t> vars;
        std::vector<Term> terms;
        std::optional<Rational> upper;
    };

    static Rational power(const Rational &a, unsigned e) {
        Rational out(1);
        for (unsigned k = 0; k < e; k++) {
            out *= a;
        }
        return out;
    }

    Rational term_upper(const Term &t) const {
        Rational lo(1);
        Rational hi(1);
        for (const auto &[k, e] : t.factors) {
            Rational flo;
            Rational fhi;
            if (value_[k] >= 0) {
                flo = fhi = power(vars_[k].values[static_cast<std::size_t>(value_[k])], e);
            } else {
                bool first = true;
                for (const auto &a : vars_[k].values) {
                    Rational p = power(a, e);
                    if (first || p < flo) {
                        flo = p;
                    }
                    if (first || p > fhi) {
                        fhi = p;
                    }
                    first = false;
                }
            }
            Rational c1 = lo * flo, c2 = lo * fhi, c3 = hi * flo, c4 = hi * fhi;
            lo = std::min({c1, c2, c3, c4});
            hi = std::max({c1, c2, c3, c4});
        }
        return sgn(t.coeff) >= 0 ? t.coeff * hi : t.coeff * lo;
    }

    Rational piece_value(const Piece &p) const {
        Rational total(0);
        for (const auto &t : p.terms) {
            Rational prod = t.coeff;
            for (const auto &[k, e] : t.factors) {
                prod *= power(vars_[k].values[static_cast<std::size_t>(value_[k])], e);
            }
            total += prod;
        }
        return total;
    }

    Rational upper_bound() const {
        Rational total(0);
        for (const auto &p : pieces_) {
            bool complete = std::all_of(p.vars.begin(), p.vars.end(), [&](std::size_t k) { return value_[k] >= 0; });
            if (complete) {
                total += piece_value(p);
            } else if (p.upper.has_value()) {
                total += *p.upper;
            } else {
                for (const auto &t : p.terms) {
                    total += term_upper(t);
                }
            }
        }
        return total;
    }

    void search(std::size_t depth) {
        stats_.nodes++;
        if (node_cap_ != 0 && stats_.nodes > node_cap_) {
            throw Error(ErrorCode::SearchBudgetExceeded, "exact bound search exceeded the node cap");
        }
        Rational ub = upper_bound();
        if (best_.has_value() && ub <= *best_) {
            return;
        }
        if (depth == order_.size()) {
            best_ = ub;
            best_value_ = value_;
            return;
        }
        std::size_t k = order_[depth];
        for (std::size_t idx = 0; idx < vars_[k].values.size(); idx++) {
            value_[k] = static_cast<int>(idx);
            search(depth + 1);
        }
        value_[k] = -1;
    }

    std::uint64_t node_cap_;
    std::vector<Var> vars_;
    std::vector<Piece> pieces_;
    std::vector<std::size_t> order_;
    std::vector<int> value_;
    std::optional<Rational> best_;
    std::vector<int> best_value_;
    SearchStats stats_;
};

}  // namespace detail

/// Exact mode: branch and bound over all assignments. CertifyOnly: for F built from a
/// normalized complete set, max F <= -1 iff the complete set is unsatisfiable, decided by
/// general_unsat; when satisfiable the maximum is exactly 0.
inline ClassicalBound classical_max(
    const ObservableSet &set, const ScoreFunction &score, BoundMode mode, std::uint64_t node_cap = kDefaultNodeCap) {
    ClassicalBound out;
    out.mode = mode;
    if (mode == BoundMode::Exact) {
        detail::ScoreBranchAndBound bb(set, score, node_cap);
        bb.run();
        out.value = *bb.best();
        out.exact = true;
        out.argmax = bb.argmax();
        out.stats = bb.stats();
        return out;
    }
    if (score.constraints.empty()) {
        throw Error(ErrorCode::InvalidArgument, "certify-only bounds need the score's complete set");
    }
    ProofCertificate cert = general_unsat(set, score.constraints, node_cap);
    out.stats = cert.stats;
    if (cert.is_proof()) {
        out.value = -1;
        out.exact = false;
    } else {
        out.value = 0;
        out.exact = true;
        out.argmax = cert.witness;
    }
    return out;
}

}  // namespace kscert
