#pragma once

#include <stdexcept>
#include <string>

namespace cuspforge {

// Every failure raised by the library carries a stable machine-readable code,
// which the CLI copies into its run manifest.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what);
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define CUSPFORGE_ERROR(Name)                                        \
    class Name : public Error {                                      \
    public:                                                          \
        explicit Name(const std::string& what) : Error(#Name, what) {} \
    }

CUSPFORGE_ERROR(InvalidArgument);
CUSPFORGE_ERROR(GridTooSmall);
CUSPFORGE_ERROR(PathOutsideDomain);
CUSPFORGE_ERROR(RegionNotSimplyConnected);
CUSPFORGE_ERROR(BasepointOutsideRegion);
CUSPFORGE_ERROR(DomainError);
CUSPFORGE_ERROR(PoleError);
CUSPFORGE_ERROR(ParseError);
CUSPFORGE_ERROR(QuadratureFailure);
CUSPFORGE_ERROR(SingularityError);
CUSPFORGE_ERROR(FitFailure);
CUSPFORGE_ERROR(NewtonDivergence);
CUSPFORGE_ERROR(NotInvertible);
CUSPFORGE_ERROR(DenominatorDegenerate);
CUSPFORGE_ERROR(LineSearchStall);
CUSPFORGE_ERROR(Infeasible);
CUSPFORGE_ERROR(NormTooLarge);
CUSPFORGE_ERROR(ContactSplitViolation);
CUSPFORGE_ERROR(AxisMismatch);
CUSPFORGE_ERROR(IoError);

#undef CUSPFORGE_ERROR

}  // namespace cuspforge
