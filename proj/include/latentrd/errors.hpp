#pragma once

#include <stdexcept>
#include <string>

namespace latentrd {

/// Argument shapes that do not agree (n x d vs m x k, square vs rectangular).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A scalar parameter outside the operation's domain (D <= 0, p outside [0,1], poles).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Symmetric matrix with an eigenvalue below the PSD clipping tolerance.
class NotPsdError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Probability-zero inputs such as a latent row of exactly zero norm.
class DegenerateInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unknown suite, kind or other lookup failures driven by user input.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

}  // namespace latentrd
