#pragma once

#include <stdexcept>
#include <string>

namespace fbl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The five interface conditions are linearly dependent; the problem is ill-formed.
struct RankDeficientError : Error {
    int rank;
    explicit RankDeficientError(int r)
        : Error("interface system is rank deficient: rank(G) = " + std::to_string(r)),
          rank(r) {}
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

struct DegenerateGMError : Error {
    DegenerateGMError() : Error("GM has rank < 4 identically in s") {}
};

struct InvalidVelocityError : Error {
    InvalidVelocityError() : Error("w^T v is identically zero; this residual carries no interface motion") {}
};

struct AllDegenerateError : Error {
    AllDegenerateError() : Error("every velocity candidate has w^T v identically zero") {}
};

struct NoFlatStateError : Error {
    using Error::Error;
};

struct ParamMismatchError : Error {
    using Error::Error;
};

struct BracketFailureError : Error {
    using Error::Error;
};

struct MappingSingularError : Error {
    using Error::Error;
};

struct SolveFailureError : Error {
    double achieved_residual;
    explicit SolveFailureError(double res)
        : Error("linear solve failed, achieved relative residual " + std::to_string(res)),
          achieved_residual(res) {}
    explicit SolveFailureError(const std::string& what) : Error(what), achieved_residual(-1.0) {}
};

struct ParseError : Error {
    using Error::Error;
};

}  // namespace fbl
