#pragma once

#include <string>
#include <string_view>

#include "symcap/characteristic.hpp"
#include "symcap/polytope.hpp"
#include "symcap/symplectic.hpp"

namespace symcap::io {

/// Whole file as text; throws `malformed_input` when it cannot be read.
std::string read_file(const std::string& path);

/// {"dim": 2n, "halfspaces": [{"normal": [...], "offset": h}, ...]} or
/// {"dim": 2n, "vertices": [[...], ...]}. Unknown fields are rejected.
Polytope parse_polytope(std::string_view text, const Tolerances& tol = {});

/// {"dim": 2n, "rows": [[...], ...]}, row-major.
SymplecticMatrix parse_psi(std::string_view text, const Tolerances& tol = {});
std::string psi_to_json(const SymplecticMatrix& psi);

/// A path together with the boundary condition it claims to satisfy.
struct PathDocument {
  PiecewiseAffinePath path;
  BoundaryCondition boundary;
};

/// {"total_time", "start", "segments": [{"length", "velocity", "facet"}],
///  "origin", "boundary"}. Doubles are written in shortest round-trip form.
std::string path_to_json(const PathDocument& doc);
PathDocument parse_path(std::string_view text, const Tolerances& tol = {});

/// FNV-1a 64-bit hash of the bytes, as 16 lowercase hex digits.
std::string digest(std::string_view bytes);

}  // namespace symcap::io
