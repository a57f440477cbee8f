#pragma once

#include <stdexcept>
#include <string>

namespace cfdual {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CFDUAL_DEFINE_ERROR(NAME)                                     \
    struct NAME : Error {                                             \
        explicit NAME(const std::string& what = #NAME) : Error(what) {} \
    }

CFDUAL_DEFINE_ERROR(UnequalSides);
CFDUAL_DEFINE_ERROR(InvalidN);
CFDUAL_DEFINE_ERROR(SingularSample);
CFDUAL_DEFINE_ERROR(InvalidWindow);
CFDUAL_DEFINE_ERROR(CenterTooClose);
CFDUAL_DEFINE_ERROR(NotOrthogonal);
CFDUAL_DEFINE_ERROR(DegenerateAngle);
CFDUAL_DEFINE_ERROR(UndefinedInvD);
CFDUAL_DEFINE_ERROR(DegenerateRegion);
CFDUAL_DEFINE_ERROR(NonPositiveError);
CFDUAL_DEFINE_ERROR(NoDegeneratePoint);
CFDUAL_DEFINE_ERROR(Unsupported);
CFDUAL_DEFINE_ERROR(PartialForm);

#undef CFDUAL_DEFINE_ERROR

}  // namespace cfdual
