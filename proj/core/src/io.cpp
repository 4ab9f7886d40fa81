#include "symcap/io.hpp"

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "symcap/error.hpp"

namespace symcap::io {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    fail(ErrorKind::malformed_input, std::string("invalid JSON: ") + e.what());
  }
}

void allow_only(const json& obj, std::initializer_list<const char*> keys, const char* what) {
  if (!obj.is_object()) fail(ErrorKind::malformed_input, std::string(what) + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) fail(ErrorKind::malformed_input, std::string(what) + ": unknown field \"" + key + "\"");
  }
}

const json& field(const json& obj, const char* key, const char* what) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorKind::malformed_input, std::string(what) + ": missing field \"" + key + "\"");
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) fail(ErrorKind::malformed_input, std::string(what) + " must be a number");
  return j.get<double>();
}

int integer(const json& j, const char* what) {
  if (!j.is_number_integer()) fail(ErrorKind::malformed_input, std::string(what) + " must be an integer");
  return j.get<int>();
}

Vec vector(const json& j, Eigen::Index size, const char* what) {
  if (!j.is_array() || (size >= 0 && static_cast<Eigen::Index>(j.size()) != size)) {
    std::ostringstream msg;
    msg << what << " must be an array of " << size << " numbers";
    fail(ErrorKind::malformed_input, msg.str());
  }
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], what);
  return v;
}

json to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

int read_dim(const json& doc, const char* what) {
  const int dim = integer(field(doc, "dim", what), "dim");
  if (dim <= 0 || dim % 2 != 0) fail(ErrorKind::invalid_dimension, "dim must be a positive even integer");
  return dim;
}

json psi_json(const SymplecticMatrix& psi) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < psi.matrix().rows(); ++r) rows.push_back(to_json(psi.matrix().row(r).transpose()));
  return {{"dim", psi.dim()}, {"rows", rows}};
}

SymplecticMatrix psi_from(const json& doc, const Tolerances& tol) {
  allow_only(doc, {"dim", "rows"}, "Psi");
  const int dim = read_dim(doc, "Psi");
  const json& rows = field(doc, "rows", "Psi");
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
    fail(ErrorKind::malformed_input, "Psi rows must be an array of dim rows");
  }
  Mat m(dim, dim);
  for (int r = 0; r < dim; ++r) m.row(r) = vector(rows[static_cast<std::size_t>(r)], dim, "Psi row").transpose();
  return SymplecticMatrix::validate(m, tol.sym);
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::malformed_input, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Polytope parse_polytope(std::string_view text, const Tolerances& tol) {
  const json doc = parse_json(text);
  allow_only(doc, {"dim", "halfspaces", "vertices"}, "polytope");
  const int dim = read_dim(doc, "polytope");
  const bool has_h = doc.contains("halfspaces");
  const bool has_v = doc.contains("vertices");
  if (has_h == has_v) fail(ErrorKind::malformed_input, "polytope needs exactly one of halfspaces or vertices");
  if (has_h) {
    const json& hs = doc["halfspaces"];
    if (!hs.is_array()) fail(ErrorKind::malformed_input, "halfspaces must be an array");
    std::vector<Facet> facets;
    for (const auto& h : hs) {
      allow_only(h, {"normal", "offset"}, "halfspace");
      facets.push_back({vector(field(h, "normal", "halfspace"), dim, "normal"),
                        number(field(h, "offset", "halfspace"), "offset")});
    }
    return Polytope::from_halfspaces(facets, dim, tol);
  }
  const json& vs = doc["vertices"];
  if (!vs.is_array()) fail(ErrorKind::malformed_input, "vertices must be an array");
  std::vector<Vec> points;
  for (const auto& v : vs) points.push_back(vector(v, dim, "vertex"));
  return Polytope::from_vertices(points, dim, tol);
}

SymplecticMatrix parse_psi(std::string_view text, const Tolerances& tol) {
  return psi_from(parse_json(text), tol);
}

std::string psi_to_json(const SymplecticMatrix& psi) { return psi_json(psi).dump(); }

std::string path_to_json(const PathDocument& doc) {
  const auto& p = doc.path;
  json segments = json::array();
  for (const auto& s : p.segments) {
    segments.push_back({{"length", s.length}, {"velocity", to_json(s.velocity)}, {"facet", s.facet}});
  }
  json boundary;
  switch (doc.boundary.kind) {
    case BoundaryKind::closed:
      boundary = {{"kind", "closed"}};
      break;
    case BoundaryKind::psi:
      boundary = {{"kind", "psi"}, {"psi", psi_json(*doc.boundary.psi)}};
      break;
    case BoundaryKind::leaf:
      boundary = {{"kind", "leaf"}, {"n", doc.boundary.frame->n()}, {"k", doc.boundary.frame->k()}};
      break;
  }
  json out = {{"total_time", p.total_time},
              {"start", to_json(p.start)},
              {"segments", segments},
              {"origin", to_json(p.origin)},
              {"boundary", boundary}};
  return out.dump(2) + "\n";
}

PathDocument parse_path(std::string_view text, const Tolerances& tol) {
  const json doc = parse_json(text);
  allow_only(doc, {"total_time", "start", "segments", "origin", "boundary"}, "path");
  PathDocument out;
  auto& p = out.path;
  p.total_time = number(field(doc, "total_time", "path"), "total_time");
  p.start = vector(field(doc, "start", "path"), -1, "start");
  const auto dim = p.start.size();
  if (dim <= 0 || dim % 2 != 0) fail(ErrorKind::invalid_dimension, "path start must have even dimension");
  p.origin = doc.contains("origin") ? vector(doc["origin"], dim, "origin") : Vec::Zero(dim);
  const json& segs = field(doc, "segments", "path");
  if (!segs.is_array()) fail(ErrorKind::malformed_input, "segments must be an array");
  for (const auto& s : segs) {
    allow_only(s, {"length", "velocity", "facet"}, "segment");
    p.segments.push_back({number(field(s, "length", "segment"), "length"),
                          vector(field(s, "velocity", "segment"), dim, "velocity"),
                          integer(field(s, "facet", "segment"), "facet")});
  }
  if (doc.contains("boundary")) {
    const json& b = doc["boundary"];
    allow_only(b, {"kind", "psi", "n", "k"}, "boundary");
    const json& kind = field(b, "kind", "boundary");
    if (kind == "closed") {
      out.boundary = BoundaryCondition::closed();
    } else if (kind == "psi") {
      out.boundary = BoundaryCondition::twisted(psi_from(field(b, "psi", "boundary"), tol));
    } else if (kind == "leaf") {
      out.boundary = BoundaryCondition::leafwise(integer(field(b, "n", "boundary"), "n"),
                                                 integer(field(b, "k", "boundary"), "k"));
    } else {
      fail(ErrorKind::malformed_input, "boundary kind must be closed, psi or leaf");
    }
  }
  return out;
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = hex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace symcap::io
