#pragma once

#include <stdexcept>
#include <string>

namespace slcd {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SLCD_DEFINE_ERROR(NAME)                                        \
    class NAME : public Error {                                        \
    public:                                                            \
        explicit NAME(const std::string& msg) : Error(msg) {}          \
    }

// geometry
SLCD_DEFINE_ERROR(NoIntersection);
SLCD_DEFINE_ERROR(DegenerateSegment);
SLCD_DEFINE_ERROR(ParallelLines);

// arrangement
SLCD_DEFINE_ERROR(DuplicateLines);

// candidates
SLCD_DEFINE_ERROR(EmptyCandidates);
SLCD_DEFINE_ERROR(KTooLarge);

// maps / grouping
SLCD_DEFINE_ERROR(ShapeMismatch);
SLCD_DEFINE_ERROR(NonFiniteInput);
SLCD_DEFINE_ERROR(DegenerateSplit);
SLCD_DEFINE_ERROR(BadPool);
SLCD_DEFINE_ERROR(BadChannelCount);

// scoring
SLCD_DEFINE_ERROR(BadImage);
SLCD_DEFINE_ERROR(NoCombination);

// applications
SLCD_DEFINE_ERROR(AllParallel);
SLCD_DEFINE_ERROR(DimensionMismatch);
SLCD_DEFINE_ERROR(EmptyIndexAfterFilter);
SLCD_DEFINE_ERROR(TooFewPoints);

// io
SLCD_DEFINE_ERROR(ParseError);
SLCD_DEFINE_ERROR(InvariantViolation);
SLCD_DEFINE_ERROR(SpecInvalid);
SLCD_DEFINE_ERROR(IoError);

#undef SLCD_DEFINE_ERROR

}  // namespace slcd
