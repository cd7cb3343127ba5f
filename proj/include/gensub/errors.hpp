#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gensub {

/// Base class for all errors thrown by this library.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An element id or label was not present in a poset.
struct element_not_found : error {
  using error::error;
};

/// A poset construction produced (or was given) something that is not a
/// partial order, e.g. a cyclic cover graph or a case-wise product ordering
/// that fails a law.
struct poset_error : error {
  using error::error;
};

/// An operation's input contract was violated (unbounded poset passed to the
/// wildcards operator, non-generic class passed to an enumeration, ...).
struct precondition_error : error {
  using error::error;
};

/// A type expression is not admittable: wrong arity, unknown class name, or a
/// cofree type while cofree types are disabled.
struct not_admittable : error {
  using error::error;
};

/// The iterative construction exceeded its element budget. Carries the level
/// sizes reached so far, including the offending level.
struct budget_error : error {
  budget_error(const std::string& what, std::vector<std::size_t> sizes)
      : error(what), level_sizes(std::move(sizes)) {}
  std::vector<std::size_t> level_sizes;
};

}  // namespace gensub
