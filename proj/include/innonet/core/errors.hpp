#pragma once

#include <stdexcept>
#include <string>

namespace innonet {

/// Bad parameters or malformed input files.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Exact enumeration visited more nodes than its budget allows.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inclusion-exclusion refused: too many distinct competitor sets.
class CompetitorCapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Knowledge state does not belong to the network it was paired with.
class IntegrityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Iterative method hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool ok, const char* what) {
  if (!ok) throw InvalidInput(what);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidInput(what);
}

}  // namespace innonet
