#pragma once

#include <stdexcept>
#include <string>

namespace tacshade {

enum class ErrorKind {
  InvalidMask,
  InvalidWindow,
  Shape,
  Domain,
  EmptyInput,
  DegenerateCluster,
  Parse,
  Io,
};

// Single exception type for the library; the CLI maps kind() onto exit codes
// (Io -> 1, everything else -> 2).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace tacshade
