#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace gdvfs {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition or type invariant was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The deadline is at or below the frequency-independent memory floor
/// (sum of w_m * d * t_a); no frequency choice can meet it.
class InfeasibleDeadline : public Error {
public:
    InfeasibleDeadline(double memory_floor, double budget)
        : Error(format(memory_floor, budget)),
          memory_floor_(memory_floor),
          budget_(budget) {}

    InfeasibleDeadline(double memory_floor, double budget, const std::string& detail)
        : Error(format(memory_floor, budget) + " (" + detail + ")"),
          memory_floor_(memory_floor),
          budget_(budget) {}

    double memory_floor() const noexcept { return memory_floor_; }
    double budget() const noexcept { return budget_; }

private:
    static std::string format(double memory_floor, double budget) {
        char buf[160];
        std::snprintf(buf, sizeof(buf),
                      "infeasible deadline: budget %.17g s is not above the memory floor %.17g s",
                      budget, memory_floor);
        return buf;
    }

    double memory_floor_;
    double budget_;
};

/// The unconstrained energy has no interior stationary point (c3 == 0):
/// energy is monotone increasing in frequency, the infimum sits at f -> 0.
class NoInteriorMinimum : public Error {
public:
    using Error::Error;
};

/// The operation is defined only for a narrower model than the one given
/// (the serial-ratio cubic exists for alpha = 2 only).
class Unsupported : public Error {
public:
    using Error::Error;
};

/// An exhaustive enumeration or grid was requested above its supported cap.
class LimitExceeded : public Error {
public:
    using Error::Error;
};

/// A non-finite value surfaced during evaluation.
class NumericError : public Error {
public:
    using Error::Error;
};

}  // namespace gdvfs
