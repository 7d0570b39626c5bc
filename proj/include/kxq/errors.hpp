#pragma once

#include <stdexcept>
#include <string>

namespace kxq {

/// Bad input data: invalid graph, malformed distribution, illegal query set.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A request that is well formed but not possible in the current state
/// (re-querying an edge, mutating a finalized session).
class ConflictError : public std::runtime_error {
 public:
  explicit ConflictError(const std::string& what) : std::runtime_error(what) {}
};

/// An input exceeded a configured size cap (exact enumeration, brute force).
class CapacityError : public std::length_error {
 public:
  explicit CapacityError(const std::string& what) : std::length_error(what) {}
};

class NotFoundError : public std::runtime_error {
 public:
  explicit NotFoundError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace kxq
