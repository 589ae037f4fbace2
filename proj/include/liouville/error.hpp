#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace liouville
{
enum class ErrorCode
{
    IndexOutOfRange,
    ExponentSignViolation,
    PotentialInvalid,
    ExponentOutOfRange,
    DiagonalEvaluation,
    GeometryViolation,
    QuadratureNonConvergence,
    TailNotIntegrable,
    InsufficientSamples,
    RuleNotApplicable,
    GridTooCoarse,
    InternalInconsistency,
    UnknownExperiment,
    ConfigParse,
    InvalidArgument,
};

std::string_view to_string(ErrorCode code);

//! Single exception type for the library; callers dispatch on code().
class Error : public std::runtime_error
{
  public:
    Error(ErrorCode code, std::string const& what);

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace liouville
