#pragma once

#include <stdexcept>
#include <string>

namespace recsolve {

// One exception type, tagged with the condition that fired. Callers that can
// recover dispatch on the kind; everything else surfaces as Unsolved(reason).
enum class Err {
    UnboundSymbol,
    NonIntegerExponent,
    DomainError,
    NotExpPoly,
    NoSignChange,
    SyntaxError,
    InconsistentArity,
    MixedForm,
    DuplicateCondition,
    NotHypergeometric,
    NotFactorable,
    NotPowerProduct,
    NonPositiveConstant,
    NotSupportedShape,
    CoefficientVanishes,
    NoInvariantCombination,
    NotReducible,
    NotEliminable,
    SingularSystem,
    NotFirstOrder,
    MissingInitialCondition,
    SymbolicBlocked,
    IllFormed,
    Unsupported,
    NoPositiveRoot,
    Internal,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::UnboundSymbol: return "UnboundSymbol";
        case Err::NonIntegerExponent: return "NonIntegerExponent";
        case Err::DomainError: return "DomainError";
        case Err::NotExpPoly: return "NotExpPoly";
        case Err::NoSignChange: return "NoSignChange";
        case Err::SyntaxError: return "SyntaxError";
        case Err::InconsistentArity: return "InconsistentArity";
        case Err::MixedForm: return "MixedForm";
        case Err::DuplicateCondition: return "DuplicateCondition";
        case Err::NotHypergeometric: return "NotHypergeometric";
        case Err::NotFactorable: return "NotFactorable";
        case Err::NotPowerProduct: return "NotPowerProduct";
        case Err::NonPositiveConstant: return "NonPositiveConstant";
        case Err::NotSupportedShape: return "NotSupportedShape";
        case Err::CoefficientVanishes: return "CoefficientVanishes";
        case Err::NoInvariantCombination: return "NoInvariantCombination";
        case Err::NotReducible: return "NotReducible";
        case Err::NotEliminable: return "NotEliminable";
        case Err::SingularSystem: return "SingularSystem";
        case Err::NotFirstOrder: return "NotFirstOrder";
        case Err::MissingInitialCondition: return "MissingInitialCondition";
        case Err::SymbolicBlocked: return "SymbolicBlocked";
        case Err::IllFormed: return "IllFormed";
        case Err::Unsupported: return "Unsupported";
        case Err::NoPositiveRoot: return "NoPositiveRoot";
        case Err::Internal: return "Internal";
    }
    return "?";
}

class Error : public std::runtime_error {
public:
    Error(Err kind, const std::string& what)
        : std::runtime_error(std::string(err_name(kind)) + ": " + what), kind_(kind) {}
    Err kind() const { return kind_; }

private:
    Err kind_;
};

// Parse diagnostics carry the offending position.
class ParseError : public Error {
public:
    ParseError(std::size_t pos, const std::string& expected)
        : Error(Err::SyntaxError, "at position " + std::to_string(pos) + ", expected " + expected),
          pos_(pos), expected_(expected) {}
    std::size_t position() const { return pos_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t pos_;
    std::string expected_;
};

}  // namespace recsolve
