#include "symcap/error.hpp"

namespace symcap {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_dimension: return "invalid-dimension";
    case ErrorKind::not_symplectic: return "not-symplectic";
    case ErrorKind::invalid_frame: return "invalid-frame";
    case ErrorKind::validation: return "validation";
    case ErrorKind::budget: return "budget";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::degenerate_cut: return "degenerate-cut";
    case ErrorKind::hypothesis: return "hypothesis-violation";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::invalid_permutation: return "invalid-permutation";
    case ErrorKind::reconstruction: return "reconstruction-inconsistency";
    case ErrorKind::malformed_input: return "malformed-input";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace symcap
