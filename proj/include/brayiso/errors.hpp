#pragma once

#include <stdexcept>
#include <string>

namespace brayiso {

// Inputs outside an operation's mathematical domain throw std::domain_error.
// Numerical procedures that fail to reach their tolerance throw NumericError.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require_domain(bool ok, const std::string& what) {
  if (!ok) throw std::domain_error(what);
}

}  // namespace brayiso
