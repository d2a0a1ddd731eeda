#pragma once

#include <stdexcept>
#include <string>

namespace pcbench {

// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Matrix dimension below the minimum of two stimuli.
class InvalidDimension : public Error {
 public:
  using Error::Error;
};

// A judgment whose winner and loser coincide or index out of range.
class InvalidJudgment : public Error {
 public:
  using Error::Error;
};

// Preference requested for a pair with no votes in either direction.
class UndefinedPreference : public Error {
 public:
  using Error::Error;
};

// Scaling problem without a unique solution (disconnected or degenerate).
class IllPosed : public Error {
 public:
  using Error::Error;
};

// Without-replacement oracle ran out of recorded votes for a pair.
class PoolExhausted : public Error {
 public:
  using Error::Error;
};

// Posterior violates its contract (e.g. negative pair variance).
class InvalidPosterior : public Error {
 public:
  using Error::Error;
};

// Correlation of a constant vector; reported instead of silently zero.
class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
};

// Dataset file failed schema or completeness validation.
class DatasetError : public Error {
 public:
  using Error::Error;
};

// Malformed command line; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcbench
