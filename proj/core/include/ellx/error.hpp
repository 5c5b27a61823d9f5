#pragma once

#include <stdexcept>
#include <string>

namespace ellx {

/// Error type thrown by all ellx operations on contract violations.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ellx
