#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace regret_lab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A size parameter (depth, node count, horizon) is out of its supported range.
class SizeError : public Error {
 public:
  using Error::Error;
};

/// A precondition on an argument does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The graph violates a structural requirement (degree, labels, Eulerian).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Lookup of an edge, node or cycle that does not belong to the graph.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to reach its tolerance, or hit a singularity.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// An enumeration or search exceeded its configured budget.
class CapacityError : public Error {
 public:
  CapacityError(const std::string& what, std::size_t reached)
      : Error(what), reached_(reached) {}

  std::size_t reached() const noexcept { return reached_; }

 private:
  std::size_t reached_;
};

/// A player strategy produced an illegal move.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Random instance generation gave up.
class GenerationError : public Error {
 public:
  using Error::Error;
};

}  // namespace regret_lab
