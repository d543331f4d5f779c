#pragma once

#include <stdexcept>
#include <string>

namespace catdcov {

/// Malformed or out-of-range input (labels, margins, files, flags).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Not enough observations for an estimator (e.g. n < 4 for the U-statistics).
class InsufficientSampleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A statistic or weight grid is undefined because a variable is constant.
class DegenerateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Influence function has a zero margin in a denominator at the requested point.
class SingularInfluenceError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A threshold selector has no defined answer (too few positive stats, flat sequence).
class SelectorError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Truth-relative metric undefined (one-class truth, length mismatch).
class MetricError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace catdcov
