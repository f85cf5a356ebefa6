#ifndef SPREADTIME_ERRORS_HPP
#define SPREADTIME_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spreadtime {

// Base class for all domain errors raised by this library. Plain argument
// misuse (negative times, out-of-range probabilities) throws
// std::invalid_argument instead.
class SpreadError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The network specification violates one of its invariants.
class ValidationError : public SpreadError {
public:
    using SpreadError::SpreadError;
};

// The seeds already meet or exceed the completion target: the completion
// time is identically zero. Callers map this to T = 0, G = 0, R = 1.
class TrivialCompletion : public SpreadError {
public:
    using SpreadError::SpreadError;
};

// Some transient state has zero total outflow, so absorption cannot happen
// from every starting point.
class DegenerateReachability : public SpreadError {
public:
    using SpreadError::SpreadError;
};

// Rates passed to the generalized Erlang form are too close together for the
// partial-fraction coefficients to be trustworthy; use the matrix method.
class NearDegenerateRates : public SpreadError {
public:
    using SpreadError::SpreadError;
};

// A planning query has no solution within the allowed parameter range.
class InfeasibleError : public SpreadError {
public:
    using SpreadError::SpreadError;
};

// Moment query against a distribution whose moments diverge.
class InfiniteMoment : public SpreadError {
public:
    using SpreadError::SpreadError;
};

// No contact in the trace is long enough for the requested transfer.
class NoFeasibleTransfer : public SpreadError {
public:
    using SpreadError::SpreadError;
};

// Malformed trace input; carries the 1-based line number.
class TraceParseError : public SpreadError {
public:
    TraceParseError(std::size_t line, const std::string& what)
        : SpreadError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

} // namespace spreadtime

#endif
