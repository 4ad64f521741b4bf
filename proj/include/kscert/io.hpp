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

#include <cctype>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kscert/derive.hpp"
#include "kscert/error.hpp"
#include "kscert/exact.hpp"
#include "kscert/model.hpp"
#include "kscert/poly.hpp"

namespace kscert {

enum class Mode { Auto, Ray, BasesOnly, Parity, General };

inline std::string_view mode_name(Mode m) {
    switch (m) {
        case Mode::Auto: return "auto";
        case Mode::Ray: return "ray";
        case Mode::BasesOnly: return "bases-only";
        case Mode::Parity: return "parity";
        case Mode::General: return "general";
    }
    return "unknown";
}

inline std::optional<Mode> parse_mode(std::string_view text) {
    for (Mode m : {Mode::Auto, Mode::Ray, Mode::BasesOnly, Mode::Parity, Mode::General}) {
        if (text == mode_name(m)) {
            return m;
        }
    }
    return std::nullopt;
}

inline std::optional<Form> parse_form(std::string_view text) {
    if (text == "projector") {
        return Form::Projector;
    }
    if (text == "dichotomic") {
        return Form::Dichotomic;
    }
    return std::nullopt;
}

inline std::optional<Provenance> parse_provenance(std::string_view text) {
    for (Provenance p :
         {Provenance::RayPairsAndBases, Provenance::RayBasesOnly, Provenance::Parity, Provenance::UserSupplied}) {
        if (text == provenance_name(p)) {
            return p;
        }
    }
    return std::nullopt;
}

namespace detail {

/// Recursive-descent parser for polynomial expressions:
///
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := power (('*'|'/') power)*          divisors must be constant
///   power  := atom ['^' integer]
///   atom   := integer | 'sqrt2' | 'i' | ('A'|'P') integer
///           | '(' expr ')' | '(' expr ',' expr ')'     the pair is re + im*i
///
/// Variables are 1-based observable indices.
class ExpressionParser {
   public:
    explicit ExpressionParser(std::string_view text) : text_(text) {
    }

    Polynomial parse() {
        Polynomial p = expr();
        skip_space();
        if (pos_ != text_.size()) {
            fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        }
        return p;
    }

   private:
    [[noreturn]] void fail(const std::string &what) const {
        throw Error(ErrorCode::Parse, "column " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            pos_++;
        }
    }
    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            pos_++;
            return true;
        }
        return false;
    }
    std::string digits() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            pos_++;
        }
        if (start == pos_) {
            fail("expected a number");
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    static Scalar constant_of(const Polynomial &p, const char *what, const ExpressionParser &self) {
        if (!p.variables().empty()) {
            self.fail(std::string(what) + " must be constant");
        }
        return p.constant_term();
    }

    Polynomial expr() {
        skip_space();
        bool negate = false;
        if (accept('-')) {
            negate = true;
        } else {
            accept('+');
        }
        Polynomial out = term();
        if (negate) {
            out = -out;
        }
        while (true) {
            if (accept('+')) {
                out += term();
            } else if (accept('-')) {
                out -= term();
            } else {
                return out;
            }
        }
    }

    Polynomial term() {
        Polynomial out = power();
        while (true) {
            if (accept('*')) {
                out = out * power();
            } else if (accept('/')) {
                Scalar d = constant_of(power(), "divisor", *this);
                if (d.is_zero()) {
                    fail("division by zero");
                }
                out *= Scalar(1) / d;
            } else {
                return out;
            }
        }
    }

    Polynomial power() {
        Polynomial base = atom();
        if (accept('^')) {
            skip_space();
            unsigned long e = std::stoul(digits());
            Polynomial out(1);
            for (unsigned long k = 0; k < e; k++) {
                out = out * base;
            }
            return out;
        }
        return base;
    }

    Polynomial atom() {
        skip_space();
        if (pos_ >= text_.size()) {
            fail("unexpected end of expression");
        }
        char c = text_[pos_];
        if (c == '(') {
            pos_++;
            Polynomial inner = expr();
            if (accept(',')) {
                Scalar re = constant_of(inner, "real part", *this);
                Scalar im = constant_of(expr(), "imaginary part", *this);
                if (!accept(')')) {
                    fail("expected ')'");
                }
                return Polynomial(re + im * Scalar::i());
            }
            if (!accept(')')) {
                fail("expected ')'");
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Rational q(digits());
            return Polynomial(Scalar(q));
        }
        if (text_.substr(pos_, 5) == "sqrt2") {
            pos_ += 5;
            return Polynomial(Scalar(Real::sqrt2()));
        }
        if (c == 'i') {
            pos_++;
            return Polynomial(Scalar::i());
        }
        if (c == 'A' || c == 'P') {
            pos_++;
            unsigned long k = std::stoul(digits());
            if (k == 0) {
                fail("observable indices start at 1");
            }
            return Polynomial::variable(static_cast<std::size_t>(k - 1));
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Polynomial parse_polynomial(std::string_view text) {
    return detail::ExpressionParser(text).parse();
}

inline Scalar parse_scalar(std::string_view text) {
    Polynomial p = parse_polynomial(text);
    if (!p.variables().empty()) {
        throw Error(ErrorCode::Parse, "expected a number, found '" + std::string(text) + "'");
    }
    return p.constant_term();
}

inline Rational parse_rational(std::string_view text) {
    Scalar s = parse_scalar(text);
    if (!s.is_rational()) {
        throw Error(ErrorCode::Parse, "expected a rational number, found '" + std::string(text) + "'");
    }
    return s.re().rational_part();
}

struct ObservableDecl {
    enum class Kind { Ray, Pauli, Matrix };
    Kind kind = Kind::Ray;
    std::vector<Scalar> values;
    std::string pauli;
    std::optional<std::vector<Rational>> spectrum;
    std::string label;
    std::size_t line = 0;
};

struct PolynomialDecl {
    std::vector<std::size_t> context;
    Polynomial polynomial;
    std::optional<Rational> normalization;
    std::size_t line = 0;
};

/// A parsed proof document together with the validated observable set it describes.
struct ProofFile {
    std::string name;
    std::size_t dim = 0;
    Mode mode = Mode::Auto;
    std::optional<Form> form;
    std::vector<ObservableDecl> observables;
    std::vector<std::vector<std::size_t>> contexts;
    std::vector<std::size_t> context_lines;
    std::vector<PolynomialDecl> complete_set;
    std::optional<Provenance> complete_set_provenance;
    ObservableSet set{1};
};

namespace detail {

inline std::vector<std::string> split_words(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string w;
    while (in >> w) {
        out.push_back(w);
    }
    return out;
}

inline std::string trim(std::string_view s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
        a++;
    }
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
        b--;
    }
    return std::string(s.substr(a, b - a));
}

[[noreturn]] inline void fail_at(std::size_t line, const std::string &what, ErrorCode code = ErrorCode::Parse) {
    throw Error(code, "line " + std::to_string(line) + ": " + what);
}

inline std::size_t parse_index(const std::string &word, std::size_t line) {
    if (word.empty() || word.find_first_not_of("0123456789") != std::string::npos) {
        fail_at(line, "expected an observable index, found '" + word + "'");
    }
    unsigned long k = std::stoul(word);
    if (k == 0) {
        fail_at(line, "observable indices start at 1");
    }
    return static_cast<std::size_t>(k - 1);
}

template <typename F>
auto at_line(std::size_t line, F &&f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error &e) {
        throw Error(e.code(), "line " + std::to_string(line) + ": " + e.what(), e.indices());
    }
}

inline ObservableDecl parse_observable_line(const std::string &body, std::size_t line, std::size_t dim) {
    ObservableDecl decl;
    decl.line = line;
    std::string rest = body;
    std::size_t label_at = std::string::npos;
    {
        // "label" runs to the end of the line.
        std::istringstream in(body);
        std::string w;
        std::size_t offset = 0;
        while (in >> w) {
            std::size_t at = body.find(w, offset);
            offset = at + w.size();
            if (w == "label") {
                label_at = at;
                break;
            }
        }
    }
    if (label_at != std::string::npos) {
        decl.label = trim(std::string_view(body).substr(label_at + 5));
        rest = body.substr(0, label_at);
    }
    std::vector<std::string> words = split_words(rest);
    if (words.empty()) {
        fail_at(line, "empty observable declaration");
    }
    std::vector<std::string> payload;
    std::vector<std::string> spectrum;
    bool in_spectrum = false;
    for (std::size_t k = 1; k < words.size(); k++) {
        if (words[k] == "spectrum") {
            if (in_spectrum) {
                fail_at(line, "spectrum given twice");
            }
            in_spectrum = true;
            continue;
        }
        (in_spectrum ? spectrum : payload).push_back(words[k]);
    }
    if (in_spectrum) {
        if (spectrum.empty()) {
            fail_at(line, "empty spectrum");
        }
        std::vector<Rational> values;
        for (const auto &w : spectrum) {
            values.push_back(at_line(line, [&] { return parse_rational(w); }));
        }
        decl.spectrum = std::move(values);
    }
    const std::string &kind = words[0];
    if (kind == "ray") {
        decl.kind = ObservableDecl::Kind::Ray;
        if (payload.size() != dim) {
            fail_at(
                line, "ray has " + std::to_string(payload.size()) + " components in a dimension-" +
                          std::to_string(dim) + " file",
                ErrorCode::DimensionMismatch);
        }
        if (decl.spectrum.has_value()) {
            fail_at(line, "rays take no spectrum");
        }
    } else if (kind == "pauli") {
        decl.kind = ObservableDecl::Kind::Pauli;
        if (payload.size() != 1) {
            fail_at(line, "pauli expects one signed word such as +XY");
        }
        decl.pauli = payload[0];
        return decl;
    } else if (kind == "matrix") {
        decl.kind = ObservableDecl::Kind::Matrix;
        if (payload.size() != dim * dim) {
            fail_at(
                line, "matrix has " + std::to_string(payload.size()) + " entries, expected " +
                          std::to_string(dim * dim),
                ErrorCode::DimensionMismatch);
        }
    } else {
        fail_at(line, "unknown observable kind '" + kind + "' (expected ray, pauli or matrix)");
    }
    for (const auto &w : payload) {
        decl.values.push_back(at_line(line, [&] { return parse_scalar(w); }));
    }
    return decl;
}

inline Observable build_observable(const ObservableDecl &decl, std::size_t dim) {
    return at_line(decl.line, [&]() -> Observable {
        switch (decl.kind) {
            case ObservableDecl::Kind::Ray:
                return ray_observable(make_ray(decl.values), decl.label);
            case ObservableDecl::Kind::Pauli: {
                Observable obs = pauli_observable(decl.pauli, decl.label);
                if (obs.matrix.dim() != dim) {
                    throw Error(
                        ErrorCode::DimensionMismatch, "Pauli string '" + decl.pauli + "' has dimension " +
                                                          std::to_string(obs.matrix.dim()) + ", expected " +
                                                          std::to_string(dim));
                }
                return obs;
            }
            case ObservableDecl::Kind::Matrix: {
                ExactMatrix m(dim);
                for (std::size_t r = 0; r < dim; r++) {
                    for (std::size_t c = 0; c < dim; c++) {
                        m.at(r, c) = decl.values[r * dim + c];
                    }
                }
                return make_observable(std::move(m), decl.spectrum, decl.label);
            }
        }
        throw Error(ErrorCode::Parse, "unknown observable kind");
    });
}

}  // namespace detail

/// Parses a proof document. Sections: a preamble (name, dim, mode, form), [observables],
/// [contexts], [complete-set]; the derived sections written by export are skipped.
inline ProofFile parse_proof(std::string_view text) {
    using detail::fail_at;
    ProofFile file;
    enum class Section { Preamble, Observables, Contexts, CompleteSet, Skipped };
    Section section = Section::Preamble;
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    bool seen_dim = false;
    while (std::getline(in, raw)) {
        line_no++;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = detail::trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                fail_at(line_no, "malformed section header");
            }
            std::string name = line.substr(1, line.size() - 2);
            if (name == "observables") {
                section = Section::Observables;
            } else if (name == "contexts") {
                section = Section::Contexts;
            } else if (name == "complete-set") {
                section = Section::CompleteSet;
            } else if (name == "F" || name == "presented" || name == "certificates" || name == "hashes") {
                section = Section::Skipped;
            } else {
                fail_at(line_no, "unknown section [" + name + "]");
            }
            if (section != Section::Skipped && !seen_dim) {
                fail_at(line_no, "the dim header must come before any section");
            }
            continue;
        }
        std::vector<std::string> words = detail::split_words(line);
        switch (section) {
            case Section::Preamble: {
                const std::string &key = words[0];
                std::string value = detail::trim(std::string_view(line).substr(key.size()));
                if (key == "name") {
                    file.name = value;
                } else if (key == "dim") {
                    if (words.size() != 2 || words[1].find_first_not_of("0123456789") != std::string::npos ||
                        std::stoul(words[1]) == 0) {
                        fail_at(line_no, "dim expects a positive integer");
                    }
                    file.dim = std::stoul(words[1]);
                    file.set = ObservableSet(file.dim);
                    seen_dim = true;
                } else if (key == "mode") {
                    auto m = parse_mode(value);
                    if (!m) {
                        fail_at(line_no, "unknown mode '" + value + "'");
                    }
                    file.mode = *m;
                } else if (key == "form") {
                    auto f = parse_form(value);
                    if (!f) {
                        fail_at(line_no, "unknown form '" + value + "'");
                    }
                    file.form = *f;
                } else {
                    fail_at(line_no, "unknown header key '" + key + "'");
                }
                break;
            }
            case Section::Observables: {
                ObservableDecl decl = detail::parse_observable_line(line, line_no, file.dim);
                file.set.add(detail::build_observable(decl, file.dim));
                file.observables.push_back(std::move(decl));
                break;
            }
            case Section::Contexts: {
                std::vector<std::size_t> ids;
                for (const auto &w : words) {
                    ids.push_back(detail::parse_index(w, line_no));
                }
                file.contexts.push_back(std::move(ids));
                file.context_lines.push_back(line_no);
                break;
            }
            case Section::CompleteSet: {
                if (words[0] == "provenance") {
                    auto p = words.size() == 2 ? parse_provenance(words[1]) : std::nullopt;
                    if (!p) {
                        fail_at(line_no, "unknown provenance");
                    }
                    file.complete_set_provenance = *p;
                    break;
                }
                std::size_t colon = line.find(':');
                if (colon == std::string::npos) {
                    fail_at(line_no, "expected '<context ids> : <polynomial>'");
                }
                PolynomialDecl decl;
                decl.line = line_no;
                for (const auto &w : detail::split_words(std::string_view(line).substr(0, colon))) {
                    decl.context.push_back(detail::parse_index(w, line_no));
                }
                std::string rest = line.substr(colon + 1);
                std::size_t second = rest.find(':');
                std::string expr = rest.substr(0, second);
                if (second != std::string::npos) {
                    std::string norm = detail::trim(std::string_view(rest).substr(second + 1));
                    if (norm.rfind("c=", 0) != 0) {
                        fail_at(line_no, "expected 'c=<rational>' after the polynomial");
                    }
                    decl.normalization = detail::at_line(line_no, [&] { return parse_rational(norm.substr(2)); });
                }
                decl.polynomial = detail::at_line(line_no, [&] { return parse_polynomial(expr); });
                file.complete_set.push_back(std::move(decl));
                break;
            }
            case Section::Skipped:
                break;
        }
    }
    if (!seen_dim) {
        throw Error(ErrorCode::Parse, "missing dim header");
    }
    if (file.set.size() == 0) {
        throw Error(ErrorCode::Parse, "no observables declared");
    }
    std::vector<Context> declared;
    for (std::size_t k = 0; k < file.contexts.size(); k++) {
        declared.push_back(detail::at_line(file.context_lines[k], [&] {
            return validate_context(file.set, file.contexts[k]);
        }));
    }
    file.set.set_declared_contexts(std::move(declared));
    if (!file.complete_set.empty() && !file.complete_set_provenance.has_value()) {
        file.complete_set_provenance = Provenance::UserSupplied;
    }
    return file;
}

inline std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline ProofFile parse_proof_file(const std::string &path) {
    return parse_proof(read_text_file(path));
}

}  // namespace kscert
