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

// Command-line front end: verify, derive, bound, export, catalog.
//
// Exit codes: 0 verified/derived, 2 not a KS proof, 3 input error, 4 search budget exceeded.
// Failures also print a one-line JSON error record on stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "kscert/kscert.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotProof = 2;
constexpr int kExitInput = 3;
constexpr int kExitBudget = 4;

struct InputFlags {
    std::string catalog;
    std::string input;
    std::string mode;
    std::string form;
    bool exact_bound = false;
    std::uint64_t node_cap = kscert::kDefaultNodeCap;
    std::string output;
};

void add_input_flags(CLI::App *cmd, InputFlags &flags, bool with_output) {
    auto *cat = cmd->add_option("--catalog", flags.catalog, "Built-in proof name (see `kscert catalog`)");
    auto *in = cmd->add_option("--input", flags.input, "Proof document path");
    cat->excludes(in);
    cmd->add_option("--mode", flags.mode, "ray|bases-only|parity|general|auto")
        ->check(CLI::IsMember({"ray", "bases-only", "parity", "general", "auto"}));
    cmd->add_option("--form", flags.form, "projector|dichotomic")->check(CLI::IsMember({"projector", "dichotomic"}));
    cmd->add_flag("--exact-bound", flags.exact_bound, "Compute the exact classical maximum");
    cmd->add_option("--node-cap", flags.node_cap, "Search node budget (0 = unlimited)");
    if (with_output) {
        cmd->add_option("--output", flags.output, "Write the result to this path instead of stdout");
    }
}

kscert::ProofFile load(const InputFlags &flags) {
    if (!flags.catalog.empty()) {
        return kscert::load_catalog(flags.catalog);
    }
    if (!flags.input.empty()) {
        return kscert::parse_proof_file(flags.input);
    }
    throw kscert::Error(kscert::ErrorCode::InvalidArgument, "one of --catalog or --input is required");
}

kscert::PipelineOptions options_of(const InputFlags &flags) {
    kscert::PipelineOptions opt;
    if (!flags.mode.empty()) {
        opt.mode = kscert::parse_mode(flags.mode);
    }
    if (!flags.form.empty()) {
        opt.form = kscert::parse_form(flags.form);
    }
    opt.exact_bound = flags.exact_bound;
    opt.node_cap = flags.node_cap;
    return opt;
}

void emit(const InputFlags &flags, const std::string &text) {
    if (flags.output.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(flags.output, std::ios::binary);
    if (!out || !(out << text)) {
        throw kscert::Error(kscert::ErrorCode::Io, "cannot write '" + flags.output + "'");
    }
}

nlohmann::ordered_json witness_json(const kscert::ObservableSet &set, const kscert::ValueAssignment &v) {
    nlohmann::ordered_json w = nlohmann::ordered_json::object();
    for (const auto &[id, value] : v) {
        w[kscert::variable_name(set, id)] = kscert::rational_to_string(value);
    }
    return w;
}

int report_error(
    int exit_code, const std::string &code, const std::string &message, const std::vector<std::size_t> &indices,
    const std::optional<kscert::ProofFile> &file, const kscert::ProofCertificate *cert) {
    nlohmann::ordered_json rec;
    rec["error"] = code;
    rec["exit"] = exit_code;
    rec["message"] = message;
    nlohmann::ordered_json ids = nlohmann::ordered_json::array();
    for (std::size_t i : indices) {
        ids.push_back(i + 1);
    }
    rec["indices"] = ids;
    if (cert != nullptr && file) {
        rec["method"] = std::string(kscert::method_name(cert->method));
        if (cert->witness) {
            rec["witness"] = witness_json(file->set, *cert->witness);
        }
    }
    std::cerr << rec.dump() << "\n";
    return exit_code;
}

int exit_code_for(kscert::ErrorCode code) {
    switch (code) {
        case kscert::ErrorCode::NotKSProof:
        case kscert::ErrorCode::NotParityProof:
            return kExitNotProof;
        case kscert::ErrorCode::SearchBudgetExceeded:
            return kExitBudget;
        default:
            return kExitInput;
    }
}

int run_verify(const InputFlags &flags, std::optional<kscert::ProofFile> &file) {
    file = load(flags);
    kscert::ProofCertificate cert = kscert::run_verify(*file, options_of(flags));
    emit(flags, kscert::render_certificate(file->set, cert));
    if (!cert.is_proof()) {
        return report_error(kExitNotProof, "NotKSProof", "not a KS proof: " + cert.detail, cert.odd_observables, file, &cert);
    }
    return kExitOk;
}

int run_derive(const InputFlags &flags, std::optional<kscert::ProofFile> &file, bool exact, bool as_export) {
    file = load(flags);
    kscert::PipelineOptions opt = options_of(flags);
    opt.exact_bound = opt.exact_bound || exact;
    kscert::Derivation d = kscert::run_derive(*file, opt);
    emit(flags, as_export ? kscert::export_record(*file, d) : kscert::render_derivation(*file, d));
    return kExitOk;
}

int run_catalog(const std::string &show) {
    if (!show.empty()) {
        kscert::load_catalog(show);
        std::cout << kscert::find_catalog_entry(show)->text;
        return kExitOk;
    }
    for (const auto &e : kscert::catalog()) {
        std::cout << e.name << "  " << e.summary << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Kochen-Specker proof verifier and noncontextuality inequality deriver"};
    app.require_subcommand(1);
    InputFlags flags;
    std::string show;

    auto *verify = app.add_subcommand("verify", "Decide whether the observables form a KS proof");
    add_input_flags(verify, flags, true);
    auto *derive = app.add_subcommand("derive", "Derive and print the noncontextuality inequality");
    add_input_flags(derive, flags, true);
    auto *bound = app.add_subcommand("bound", "Derive with the exact classical maximum");
    add_input_flags(bound, flags, true);
    auto *exp = app.add_subcommand("export", "Write the machine-readable inequality record");
    add_input_flags(exp, flags, true);
    auto *cat = app.add_subcommand("catalog", "List built-in proofs or print one");
    cat->add_option("name", show, "Entry to print");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    std::optional<kscert::ProofFile> file;
    try {
        if (verify->parsed()) {
            return run_verify(flags, file);
        }
        if (derive->parsed()) {
            return run_derive(flags, file, false, false);
        }
        if (bound->parsed()) {
            return run_derive(flags, file, true, false);
        }
        if (exp->parsed()) {
            return run_derive(flags, file, false, true);
        }
        return run_catalog(show);
    } catch (const kscert::NotKSProofError &e) {
        if (file) {
            std::cout << kscert::render_certificate(file->set, e.certificate());
        }
        return report_error(kExitNotProof, "NotKSProof", e.what(), e.indices(), file, &e.certificate());
    } catch (const kscert::Error &e) {
        return report_error(
            exit_code_for(e.code()), std::string(kscert::error_code_name(e.code())), e.what(), e.indices(), file,
            nullptr);
    } catch (const std::exception &e) {
        return report_error(kExitInput, "Internal", e.what(), {}, file, nullptr);
    }
}
