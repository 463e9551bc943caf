#pragma once

#include <stdexcept>
#include <string>

namespace mdexp {

// Base class for all library errors so callers can catch the whole family.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Two series with different truncation orders were combined.
class TruncationMismatch : public Error {
public:
    using Error::Error;
};

// geom_inverse needs a constant term of exactly 1 and no other p-free terms.
class NotAUnit : public Error {
public:
    using Error::Error;
};

// log_tail needs an argument with no p-free terms.
class NotNilpotent : public Error {
public:
    using Error::Error;
};

// div_by_p hit a term with p-power 0.
class NotDivisibleByP : public Error {
public:
    using Error::Error;
};

// A triangular solve stage produced an inadmissible kernel.
class SolveFailure : public Error {
public:
    SolveFailure(int stage, const std::string& what)
        : Error(what), stage_(stage) {}
    int stage() const noexcept { return stage_; }

private:
    int stage_;
};

// A numeric evaluation left the domain where the equations make sense
// (non-positive denominator or logarithm argument, non-finite value).
class OutsideDomain : public Error {
public:
    using Error::Error;
};

// Fixed-point iteration hit its iteration cap before reaching tolerance.
class MaxIterationsExceeded : public Error {
public:
    using Error::Error;
};

// The ball-mapping bound of the certificate failed.
class MembershipViolated : public Error {
public:
    using Error::Error;
};

// An assembled expansion fell outside its support window.
class ExpansionSupportViolation : public Error {
public:
    using Error::Error;
};

// A scalar argument was outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// A lattice is beyond the desk-scale enumeration limit.
class TooLarge : public Error {
public:
    using Error::Error;
};

// An internal guarantee was broken; indicates a bug, not a data condition.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace mdexp
