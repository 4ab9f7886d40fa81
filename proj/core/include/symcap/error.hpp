#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace symcap {

enum class ErrorKind {
  invalid_dimension,
  not_symplectic,
  invalid_frame,
  validation,
  budget,
  precondition,
  degenerate_cut,
  hypothesis,
  infeasible,
  invalid_permutation,
  reconstruction,
  malformed_input,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so that front ends can
/// map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace symcap
