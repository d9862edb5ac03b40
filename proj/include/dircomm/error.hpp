#pragma once

#include <stdexcept>
#include <string>

namespace dircomm {

/// Raised on violated preconditions and undefined quantities (zero denominators, NaN input).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(message);
}

}  // namespace dircomm
