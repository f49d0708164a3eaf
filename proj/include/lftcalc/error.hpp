/*
   Copyright 2026 The lftcalc Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lftcalc {

/// Every failure raised by the library carries one of these kinds.
enum class ErrorKind {
    NotPrime,
    EvenCharacteristic,
    CapExceeded,
    NotASquare,
    ZeroInput,
    DivisionByZero,
    IncompatibleLevels,
    NonUnitLeadingCoefficient,
    PrecisionExhausted,
    LengthMismatch,
    ZeroVector,
    TameInput,
    NotReduced,
    ZeroArgument,
    WildInput,
    UnramifiedInput,
    InseparableInput,
    NotLegendre,
    SlopeConditionViolated,
    HypothesisViolated,
    DegenerateOrder,
    InconsistentInput,
    WrongSourcePoint,
    InseparableB,
    SchemaError,
};

inline std::string_view error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::NotPrime: return "NotPrime";
        case ErrorKind::EvenCharacteristic: return "EvenCharacteristic";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::NotASquare: return "NotASquare";
        case ErrorKind::ZeroInput: return "ZeroInput";
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::IncompatibleLevels: return "IncompatibleLevels";
        case ErrorKind::NonUnitLeadingCoefficient: return "NonUnitLeadingCoefficient";
        case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::ZeroVector: return "ZeroVector";
        case ErrorKind::TameInput: return "TameInput";
        case ErrorKind::NotReduced: return "NotReduced";
        case ErrorKind::ZeroArgument: return "ZeroArgument";
        case ErrorKind::WildInput: return "WildInput";
        case ErrorKind::UnramifiedInput: return "UnramifiedInput";
        case ErrorKind::InseparableInput: return "InseparableInput";
        case ErrorKind::NotLegendre: return "NotLegendre";
        case ErrorKind::SlopeConditionViolated: return "SlopeConditionViolated";
        case ErrorKind::HypothesisViolated: return "HypothesisViolated";
        case ErrorKind::DegenerateOrder: return "DegenerateOrder";
        case ErrorKind::InconsistentInput: return "InconsistentInput";
        case ErrorKind::WrongSourcePoint: return "WrongSourcePoint";
        case ErrorKind::InseparableB: return "InseparableB";
        case ErrorKind::SchemaError: return "SchemaError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

   private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

}  // namespace lftcalc
