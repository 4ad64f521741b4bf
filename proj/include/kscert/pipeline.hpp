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

#include <openssl/evp.h>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kscert/assign.hpp"
#include "kscert/catalog.hpp"
#include "kscert/compat.hpp"
#include "kscert/derive.hpp"
#include "kscert/error.hpp"
#include "kscert/io.hpp"
#include "kscert/model.hpp"
#include "kscert/poly.hpp"

namespace kscert {

struct PipelineOptions {
    /// Overrides the file's mode header when set.
    std::optional<Mode> mode;
    /// Overrides the file's form header when set.
    std::optional<Form> form;
    bool exact_bound = false;
    std::uint64_t node_cap = kDefaultNodeCap;
};

/// The resolved proof structure: which pipeline applies and the contexts it uses.
struct Analysis {
    Mode mode = Mode::General;
    std::optional<OrthogonalityGraph> graph;
    /// Enumerated bases for ray modes, declared contexts otherwise.
    std::vector<Context> contexts;
    std::optional<std::pair<std::size_t, std::size_t>> uncovered;
    std::string reason;
};

struct Derivation {
    Analysis analysis;
    Inequality inequality;
    PresentedInequality presented;
};

inline ProofFile load_catalog(std::string_view name) {
    auto entry = find_catalog_entry(name);
    if (!entry) {
        std::string known;
        for (const auto &e : catalog()) {
            known += (known.empty() ? "" : ", ") + std::string(e.name);
        }
        throw Error(ErrorCode::InvalidArgument, "unknown catalog entry '" + std::string(name) + "' (known: " + known + ")");
    }
    return parse_proof(entry->text);
}

namespace detail {

inline bool products_are_scalar(const ObservableSet &set) {
    for (const auto &ctx : set.declared_contexts()) {
        if (!context_product(set, ctx).delta.has_value()) {
            return false;
        }
    }
    return true;
}

inline std::string pair_text(std::pair<std::size_t, std::size_t> e) {
    return std::to_string(e.first + 1) + " and " + std::to_string(e.second + 1);
}

inline void analyze_rays(const ObservableSet &set, Analysis &out) {
    detail::require_rays(set);
    out.graph = build_orthogonality_graph(set);
    out.contexts = enumerate_bases(set, *out.graph);
    out.uncovered = uncovered_edge(*out.graph, out.contexts);
}

}  // namespace detail

/// Resolves the pipeline. Auto picks: the recorded complete set's provenance if any;
/// bases-only for rays with every orthogonal pair inside a basis, else the ray pipeline;
/// parity for dichotomic observables whose declared contexts multiply to +-I; else general.
inline Analysis analyze(const ProofFile &file, const PipelineOptions &options = {}) {
    const ObservableSet &set = file.set;
    Mode mode = options.mode.value_or(file.mode);
    Analysis out;
    if (mode == Mode::Auto) {
        if (file.complete_set_provenance.has_value()) {
            switch (*file.complete_set_provenance) {
                case Provenance::RayPairsAndBases: mode = Mode::Ray; break;
                case Provenance::RayBasesOnly: mode = Mode::BasesOnly; break;
                case Provenance::Parity: mode = Mode::Parity; break;
                case Provenance::UserSupplied: mode = Mode::General; break;
            }
            out.reason = "recorded complete set";
        } else if (set.all_rays()) {
            detail::analyze_rays(set, out);
            if (out.uncovered) {
                mode = Mode::Ray;
                out.reason = "orthogonal rays " + detail::pair_text(*out.uncovered) + " lie in no common basis";
            } else {
                mode = Mode::BasesOnly;
                out.reason = "every orthogonal pair lies in a basis";
            }
        } else if (set.all_dichotomic() && !set.declared_contexts().empty() && detail::products_are_scalar(set)) {
            mode = Mode::Parity;
            out.reason = "dichotomic observables with +-I context products";
        } else {
            throw Error(
                ErrorCode::InvalidArgument,
                "cannot choose a pipeline: the set is neither all rays nor a dichotomic set with +-I context "
                "products, and no complete set is supplied");
        }
    } else {
        out.reason = "requested";
    }
    out.mode = mode;
    switch (mode) {
        case Mode::Ray:
        case Mode::BasesOnly:
            if (!out.graph) {
                detail::analyze_rays(set, out);
            }
            break;
        case Mode::Parity:
            if (set.declared_contexts().empty()) {
                throw Error(ErrorCode::InvalidArgument, "parity mode needs declared contexts");
            }
            out.contexts = set.declared_contexts();
            break;
        case Mode::General:
            if (file.complete_set.empty()) {
                throw Error(ErrorCode::InvalidArgument, "general mode needs a [complete-set] section");
            }
            out.contexts = set.declared_contexts();
            break;
        case Mode::Auto:
            break;
    }
    return out;
}

inline Form resolve_form(const ProofFile &file, const PipelineOptions &options) {
    if (options.form) {
        return *options.form;
    }
    if (file.form) {
        return *file.form;
    }
    for (const auto &obs : file.set.observables()) {
        if (obs.is_ray()) {
            return Form::Projector;
        }
    }
    return Form::Dichotomic;
}

/// The complete set the file's own polynomials describe (contexts validated, c_i computed).
inline CompleteSet recorded_complete_set(const ProofFile &file) {
    std::vector<std::pair<std::vector<std::size_t>, Polynomial>> polys;
    for (const auto &decl : file.complete_set) {
        polys.emplace_back(decl.context, decl.polynomial);
    }
    CompleteSet cs = user_complete_set(file.set, polys);
    for (std::size_t k = 0; k < cs.polynomials.size(); k++) {
        const auto &declared = file.complete_set[k].normalization;
        if (declared && *declared != cs.polynomials[k].normalization()) {
            detail::fail_at(
                file.complete_set[k].line,
                "declared c=" + rational_to_string(*declared) + " but the minimum nonzero square is " +
                    rational_to_string(cs.polynomials[k].normalization()),
                ErrorCode::InvalidArgument);
        }
    }
    cs.provenance = file.complete_set_provenance.value_or(Provenance::UserSupplied);
    return cs;
}

inline CompleteSet build_complete_set(const ProofFile &file, const Analysis &a) {
    switch (a.mode) {
        case Mode::Ray:
            return build_complete_set_rays(file.set, *a.graph, a.contexts);
        case Mode::BasesOnly:
            return build_complete_set_bases_only(file.set, *a.graph, a.contexts);
        case Mode::Parity:
            return build_complete_set_parity(file.set, a.contexts);
        case Mode::General:
        case Mode::Auto:
            break;
    }
    CompleteSet cs = recorded_complete_set(file);
    cs.provenance = Provenance::UserSupplied;
    return cs;
}

/// Decides whether the set is a KS proof with the method matching its pipeline.
inline ProofCertificate run_verify(const ProofFile &file, const PipelineOptions &options = {}) {
    Analysis a = analyze(file, options);
    switch (a.mode) {
        case Mode::Ray:
        case Mode::BasesOnly:
            return ks_colorability(file.set, *a.graph, a.contexts);
        case Mode::Parity:
            return parity_certify(file.set, a.contexts);
        case Mode::General:
        case Mode::Auto:
            break;
    }
    return verify_complete_set(file.set, recorded_complete_set(file), options.node_cap);
}

/// Builds the complete set, assembles F and presents it. A complete set recorded in the
/// file under a built-in provenance must coincide with the freshly built one.
inline Derivation run_derive(const ProofFile &file, const PipelineOptions &options = {}) {
    Derivation d;
    d.analysis = analyze(file, options);
    CompleteSet cs = build_complete_set(file, d.analysis);
    if (d.analysis.mode != Mode::General && !file.complete_set.empty()) {
        CompleteSet recorded = recorded_complete_set(file);
        bool same = recorded.provenance == cs.provenance && recorded.polynomials.size() == cs.polynomials.size();
        for (std::size_t k = 0; same && k < cs.polynomials.size(); k++) {
            same = recorded.polynomials[k].context() == cs.polynomials[k].context() &&
                   recorded.polynomials[k].polynomial() == cs.polynomials[k].polynomial() &&
                   recorded.polynomials[k].normalization() == cs.polynomials[k].normalization();
        }
        if (!same) {
            throw Error(
                ErrorCode::InvalidArgument, "the recorded complete set does not match the one derived in " +
                                                std::string(mode_name(d.analysis.mode)) + " mode");
        }
    }
    DeriveOptions dopt;
    dopt.exact_bound = options.exact_bound;
    dopt.node_cap = options.node_cap;
    d.inequality = assemble_F(file.set, cs, dopt);
    d.presented = present(file.set, d.inequality, resolve_form(file, options));
    return d;
}

inline std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::Io, "SHA-256 digest failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int k = 0; k < len; k++) {
        out += hex[md[k] >> 4];
        out += hex[md[k] & 15];
    }
    return out;
}

namespace detail {

inline std::string scalar_token(const Scalar &s) {
    return s.to_string();
}

inline std::string observable_line(const ProofFile &file, std::size_t k) {
    const ObservableDecl &decl = file.observables[k];
    std::string out;
    switch (decl.kind) {
        case ObservableDecl::Kind::Ray:
            out = "ray";
            for (const auto &v : decl.values) {
                out += " " + scalar_token(v);
            }
            break;
        case ObservableDecl::Kind::Pauli:
            out = "pauli " + decl.pauli;
            break;
        case ObservableDecl::Kind::Matrix:
            out = "matrix";
            for (const auto &v : decl.values) {
                out += " " + scalar_token(v);
            }
            if (decl.spectrum) {
                out += " spectrum";
                for (const auto &q : *decl.spectrum) {
                    out += " " + rational_to_string(q);
                }
            }
            break;
    }
    if (!decl.label.empty()) {
        out += " label " + decl.label;
    }
    return out;
}

inline std::string ids_text(const std::vector<std::size_t> &ids) {
    std::string out;
    for (std::size_t id : ids) {
        out += (out.empty() ? "" : " ") + std::to_string(id + 1);
    }
    return out;
}

inline std::string assignment_text(const ObservableSet &set, const ValueAssignment &v) {
    std::string out;
    for (const auto &[id, value] : v) {
        out += (out.empty() ? "" : " ") + variable_name(set, id) + "=" + rational_to_string(value);
    }
    return out;
}

}  // namespace detail

inline std::string assignment_text(const ObservableSet &set, const ValueAssignment &v) {
    return detail::assignment_text(set, v);
}

/// Human-readable certificate report for `verify`.
inline std::string render_certificate(const ObservableSet &set, const ProofCertificate &cert) {
    std::ostringstream out;
    out << "verdict: " << verdict_name(cert.verdict) << "\n";
    out << "method: " << method_name(cert.method) << "\n";
    out << "search: " << stats_text(cert.stats) << "\n";
    if (!cert.deltas.empty()) {
        out << "deltas:";
        for (int d : cert.deltas) {
            out << (d > 0 ? " +1" : " -1");
        }
        out << "\n";
    }
    if (!cert.detail.empty()) {
        out << "detail: " << cert.detail << "\n";
    }
    if (cert.witness) {
        out << "witness: " << detail::assignment_text(set, *cert.witness) << "\n";
    }
    return out.str();
}

/// The inequality line "score <= bound" in the presented variables.
inline std::string inequality_text(const ObservableSet &set, const PresentedInequality &p) {
    VariableNamer name = p.dichotomized ? default_namer('A') : set_namer(set);
    return to_string(p.score, name) + " <= " + rational_to_string(p.classical_bound);
}

/// Human-readable summary for `derive` and `bound`.
inline std::string render_derivation(const ProofFile &file, const Derivation &d) {
    const ObservableSet &set = file.set;
    const Inequality &ineq = d.inequality;
    const PresentedInequality &p = d.presented;
    std::ostringstream out;
    if (!file.name.empty()) {
        out << "name: " << file.name << "\n";
    }
    out << "observables: " << set.size() << " in dimension " << set.dim() << "\n";
    out << "mode: " << mode_name(d.analysis.mode) << " (" << d.analysis.reason << ")\n";
    out << "contexts: " << d.analysis.contexts.size() << "\n";
    out << "complete set: " << ineq.complete_set.polynomials.size() << " polynomials ("
        << provenance_name(ineq.complete_set.provenance) << ")\n";
    out << "F = " << to_string(ineq.F, set_namer(set)) << "\n";
    out << "max F " << (ineq.f_bound.exact ? "= " : "<= ") << rational_to_string(ineq.f_bound.value)
        << (ineq.f_bound.exact ? " (exact)" : " (certified)") << "\n";
    out << "form: " << form_name(p.form) << "\n";
    out << "inequality: " << inequality_text(set, p) << "\n";
    out << "classical bound: " << rational_to_string(p.classical_bound) << (p.bound_exact ? " (exact)" : " (certified)")
        << "\n";
    out << "quantum value: " << rational_to_string(p.quantum_value) << "\n";
    out << "affine: F = " << rational_to_string(p.scale) << " * G + (" << rational_to_string(p.offset) << ")\n";
    if (ineq.f_bound.argmax) {
        out << "argmax: " << detail::assignment_text(set, *ineq.f_bound.argmax) << "\n";
    }
    for (const auto &c : ineq.certificates) {
        out << "certificate " << c.kind << ": " << c.statement << "\n";
    }
    for (const auto &c : p.certificates) {
        out << "certificate " << c.kind << ": " << c.statement << "\n";
    }
    return out.str();
}

/// The machine-readable record: a proof document (re-importable by parse_proof) with the
/// complete set, F, the presented inequality, certificates and SHA-256 hashes. The leading
/// comment block is the human-readable rendering. Output is byte-deterministic.
inline std::string export_record(const ProofFile &file, const Derivation &d) {
    const ObservableSet &set = file.set;
    const Inequality &ineq = d.inequality;
    const PresentedInequality &p = d.presented;
    VariableNamer names = set_namer(set);

    std::ostringstream obs;
    for (std::size_t k = 0; k < file.observables.size(); k++) {
        obs << detail::observable_line(file, k) << "\n";
    }
    std::ostringstream ctx;
    for (const auto &c : file.contexts) {
        std::vector<std::size_t> ids = c;
        ctx << detail::ids_text(ids) << "\n";
    }
    std::ostringstream cs;
    cs << "provenance " << provenance_name(ineq.complete_set.provenance) << "\n";
    for (const auto &r : ineq.complete_set.polynomials) {
        cs << detail::ids_text(r.context().members) << " : " << to_string(r.polynomial(), names)
           << " : c=" << rational_to_string(r.normalization()) << "\n";
    }
    std::string f_text = "F = " + to_string(ineq.F, names) + "\n";
    std::ostringstream pres;
    pres << "form " << form_name(p.form) << "\n";
    pres << "score " << to_string(p.score, p.dichotomized ? default_namer('A') : names) << "\n";
    pres << "scale " << rational_to_string(p.scale) << "\n";
    pres << "offset " << rational_to_string(p.offset) << "\n";
    pres << "direction <=\n";
    pres << "classical-bound " << rational_to_string(p.classical_bound) << "\n";
    pres << "bound-kind " << (p.bound_exact ? "exact" : "certified") << "\n";
    pres << "quantum-value " << rational_to_string(p.quantum_value) << "\n";
    std::ostringstream certs;
    for (const auto &c : ineq.certificates) {
        certs << c.kind << " " << c.statement << "\n";
    }
    for (const auto &c : p.certificates) {
        certs << c.kind << " " << c.statement << "\n";
    }

    std::ostringstream body;
    body << "# kscert inequality record\n";
    if (!file.name.empty()) {
        body << "# " << file.name << ": ";
    } else {
        body << "# ";
    }
    body << set.size() << " observables in dimension " << set.dim() << ", " << d.analysis.contexts.size()
         << " contexts, " << ineq.complete_set.polynomials.size() << " polynomials\n";
    body << "# " << inequality_text(set, p) << ", quantum value " << rational_to_string(p.quantum_value) << "\n";
    body << "\n";
    if (!file.name.empty()) {
        body << "name " << file.name << "\n";
    }
    body << "dim " << set.dim() << "\n";
    body << "mode " << mode_name(d.analysis.mode) << "\n";
    body << "form " << form_name(p.form) << "\n";
    body << "\n[observables]\n" << obs.str();
    if (!file.contexts.empty()) {
        body << "\n[contexts]\n" << ctx.str();
    }
    body << "\n[complete-set]\n" << cs.str();
    body << "\n[F]\n" << f_text;
    body << "\n[presented]\n" << pres.str();
    body << "\n[certificates]\n" << certs.str();

    std::string head = body.str();
    std::ostringstream hashes;
    hashes << "\n[hashes]\n";
    hashes << "sha256-observables " << sha256_hex(obs.str()) << "\n";
    hashes << "sha256-complete-set " << sha256_hex(cs.str()) << "\n";
    hashes << "sha256-F " << sha256_hex(f_text) << "\n";
    hashes << "sha256-presented " << sha256_hex(pres.str()) << "\n";
    hashes << "sha256-record " << sha256_hex(head) << "\n";
    return head + hashes.str();
}

}  // namespace kscert
