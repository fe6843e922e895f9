#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace ergo {

/// A point of the state space. Finite spaces use 0..size-1, the symbolic
/// space uses all of the naturals.
using State = std::uint64_t;

/// Position of a block inside a canonical partition.
using BlockId = std::size_t;

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A state outside the space, or an arithmetic limit of the representation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Objects from different spaces (or different backends) were combined.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// A structural invariant that the library guarantees failed to hold.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace ergo
