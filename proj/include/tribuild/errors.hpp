#pragma once

#include <stdexcept>
#include <string>

namespace tribuild {

/// Invalid argument or malformed input (bad q, non-prime, out-of-range residue, parse failure).
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A desk-scale size cap was exceeded.
class CapExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Internal consistency failure while building a structure (e.g. conflicting gluing).
class ConsistencyError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InputError(what);
}

inline void require_cap(bool ok, const std::string& what) {
  if (!ok) throw CapExceeded(what);
}

}  // namespace detail
}  // namespace tribuild
