#pragma once

#include <stdexcept>
#include <string>

namespace feast {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define FEAST_DECLARE_ERROR(Name)                                  \
    class Name : public Error {                                    \
    public:                                                        \
        explicit Name(const std::string& msg) : Error(msg) {}      \
    }

FEAST_DECLARE_ERROR(InvalidArgument);
FEAST_DECLARE_ERROR(NonFiniteEntry);
FEAST_DECLARE_ERROR(DimensionMismatch);
FEAST_DECLARE_ERROR(AllColumnsNegligible);
FEAST_DECLARE_ERROR(NoConvergence);
FEAST_DECLARE_ERROR(NotHermitian);
FEAST_DECLARE_ERROR(ZeroOperator);
FEAST_DECLARE_ERROR(UnsupportedFormat);
FEAST_DECLARE_ERROR(IoError);
FEAST_DECLARE_ERROR(DegenerateInterval);
FEAST_DECLARE_ERROR(NotConjugateSymmetric);
FEAST_DECLARE_ERROR(SingularShift);
FEAST_DECLARE_ERROR(NotOrthonormalized);
FEAST_DECLARE_ERROR(BNotFullRank);
FEAST_DECLARE_ERROR(UnknownVariant);
FEAST_DECLARE_ERROR(NotPsd);
FEAST_DECLARE_ERROR(DegenerateSplit);
FEAST_DECLARE_ERROR(SplitViolated);
FEAST_DECLARE_ERROR(SingularLeadingBlock);
FEAST_DECLARE_ERROR(GuessDimensionMismatch);
FEAST_DECLARE_ERROR(NetworkError);
FEAST_DECLARE_ERROR(ChecksumMismatch);

#undef FEAST_DECLARE_ERROR

// Parse failures carry the 1-based line number of the offending line.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, long line)
        : Error("line " + std::to_string(line) + ": " + msg), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

}  // namespace feast
