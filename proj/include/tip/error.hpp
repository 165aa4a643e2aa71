#pragma once

#include <stdexcept>
#include <string>

namespace tip {

enum class Err {
    // graph validation
    CycleDetected,
    NegativeCost,
    MissingEndpoint,
    DuplicateEdge,
    DuplicateNode,
    BadParameter,
    ParseError,
    // simulation
    TargetUnreachable,
    ZeroOptimalCost,
    // analysis
    PreconditionViolated,
    // search
    BudgetExceeded,
    // rewards
    VariantViolation,
    // reductions
    SyntaxError,
    NotThreeCnf,
    NTooSmall,
    AssignmentNotSatisfying,
    NotMinimalMotivating,
    InfeasibleRewards,
    RelationViolated,
};

inline const char* err_name(Err e) {
    switch (e) {
        case Err::CycleDetected: return "CycleDetected";
        case Err::NegativeCost: return "NegativeCost";
        case Err::MissingEndpoint: return "MissingEndpoint";
        case Err::DuplicateEdge: return "DuplicateEdge";
        case Err::DuplicateNode: return "DuplicateNode";
        case Err::BadParameter: return "BadParameter";
        case Err::ParseError: return "ParseError";
        case Err::TargetUnreachable: return "TargetUnreachable";
        case Err::ZeroOptimalCost: return "ZeroOptimalCost";
        case Err::PreconditionViolated: return "PreconditionViolated";
        case Err::BudgetExceeded: return "BudgetExceeded";
        case Err::VariantViolation: return "VariantViolation";
        case Err::SyntaxError: return "SyntaxError";
        case Err::NotThreeCnf: return "NotThreeCnf";
        case Err::NTooSmall: return "NTooSmall";
        case Err::AssignmentNotSatisfying: return "AssignmentNotSatisfying";
        case Err::NotMinimalMotivating: return "NotMinimalMotivating";
        case Err::InfeasibleRewards: return "InfeasibleRewards";
        case Err::RelationViolated: return "RelationViolated";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
  public:
    Error(Err code, const std::string& what)
        : std::runtime_error(std::string(err_name(code)) + ": " + what), code_(code) {}
    Err code() const { return code_; }

  private:
    Err code_;
};

}  // namespace tip
