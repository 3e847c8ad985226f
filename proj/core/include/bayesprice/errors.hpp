#pragma once

#include <stdexcept>
#include <string>

namespace bayesprice {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input.
class InvalidInstance : public Error {
 public:
  using Error::Error;
};

/// Textual input (rationals, JSON payloads) that could not be parsed.
class ParseError : public InvalidInstance {
 public:
  using InvalidInstance::InvalidInstance;
};

/// A SQRT-SUM instance with sum of roots exactly equal to K.
class EqualityInstance : public InvalidInstance {
 public:
  explicit EqualityInstance(const std::string& what)
      : InvalidInstance("equality instance: " + what) {}
};

/// Resource limits: every subclass maps to "budget exceeded" at the CLI.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public ResourceLimit {
 public:
  using ResourceLimit::ResourceLimit;
};

class BudgetExceeded : public ResourceLimit {
 public:
  using ResourceLimit::ResourceLimit;
};

class TooManyAttributes : public ResourceLimit {
 public:
  using ResourceLimit::ResourceLimit;
};

class TooManyItems : public ResourceLimit {
 public:
  using ResourceLimit::ResourceLimit;
};

class SearchTooLarge : public ResourceLimit {
 public:
  using ResourceLimit::ResourceLimit;
};

/// A property that the hardness constructions guarantee did not hold.
/// Seeing one of these means a bug, never a property of the input.
class ProofViolation : public Error {
 public:
  using Error::Error;
};

/// Base-B digit decoding of a tail probability failed.
class DecodeError : public ProofViolation {
 public:
  using ProofViolation::ProofViolation;
};

}  // namespace bayesprice
