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
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kscert {

enum class ErrorCode {
    InvalidArgument,
    DimensionMismatch,
    NonHermitian,
    AnnihilationFailure,
    ZeroVector,
    DuplicateObservable,
    NonRayMember,
    NotCommuting,
    NotScalarMultiple,
    NotDichotomic,
    VariableOutsideContext,
    IncompatibleContexts,
    UnknownVariable,
    UnassignedVariable,
    IdenticallyZeroOnAssignments,
    EdgeOutsideBases,
    NotParityProof,
    Condition1Violated,
    NotKSProof,
    ZeroState,
    SearchBudgetExceeded,
    Parse,
    Io,
};

inline std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonHermitian: return "NonHermitian";
        case ErrorCode::AnnihilationFailure: return "AnnihilationFailure";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::DuplicateObservable: return "DuplicateObservable";
        case ErrorCode::NonRayMember: return "NonRayMember";
        case ErrorCode::NotCommuting: return "NotCommuting";
        case ErrorCode::NotScalarMultiple: return "NotScalarMultiple";
        case ErrorCode::NotDichotomic: return "NotDichotomic";
        case ErrorCode::VariableOutsideContext: return "VariableOutsideContext";
        case ErrorCode::IncompatibleContexts: return "IncompatibleContexts";
        case ErrorCode::UnknownVariable: return "UnknownVariable";
        case ErrorCode::UnassignedVariable: return "UnassignedVariable";
        case ErrorCode::IdenticallyZeroOnAssignments: return "IdenticallyZeroOnAssignments";
        case ErrorCode::EdgeOutsideBases: return "EdgeOutsideBases";
        case ErrorCode::NotParityProof: return "NotParityProof";
        case ErrorCode::Condition1Violated: return "Condition1Violated";
        case ErrorCode::NotKSProof: return "NotKSProof";
        case ErrorCode::ZeroState: return "ZeroState";
        case ErrorCode::SearchBudgetExceeded: return "SearchBudgetExceeded";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure in the library is reported through this exception type.
///
/// `indices` carries the offending observable / context indices (0-based) where the
/// error names them, e.g. the pair (i, j) of NotCommuting or EdgeOutsideBases.
class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &message, std::vector<std::size_t> indices = {})
        : std::runtime_error(message), code_(code), indices_(std::move(indices)) {
    }

    ErrorCode code() const noexcept {
        return code_;
    }
    const std::vector<std::size_t> &indices() const noexcept {
        return indices_;
    }

   private:
    ErrorCode code_;
    std::vector<std::size_t> indices_;
};

}  // namespace kscert
