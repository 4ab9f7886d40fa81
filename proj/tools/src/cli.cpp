#include "symcap_cli/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "symcap/capacity.hpp"
#include "symcap/characteristic.hpp"
#include "symcap/error.hpp"
#include "symcap/io.hpp"
#include "symcap/oracle2d.hpp"

namespace symcap::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Flags {
  std::string mode = "exact";
  std::size_t perm_budget = 10000;
  std::uint64_t seed = 0;
  std::string emit_path;
  std::string format = "json";
  unsigned threads = 1;
  double tol_feas = Tolerances{}.feas;
  std::string translate = "auto";
  bool diagnostics = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--mode", f.mode, "Permutation search mode")
      ->check(CLI::IsMember({"exact", "random"}));
  sub->add_option("--perm-budget", f.perm_budget, "Permutations sampled in random mode");
  sub->add_option("--seed", f.seed, "Seed for every random choice");
  sub->add_option("--emit-path", f.emit_path, "Write the certificate path JSON here");
  sub->add_option("--format", f.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--threads", f.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
  sub->add_option("--tol-feas", f.tol_feas, "Feasibility tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--translate", f.translate, "Move an interior point to the origin first")
      ->check(CLI::IsMember({"auto", "none"}));
  sub->add_flag("--diagnostics", f.diagnostics, "Print timing and worker count on stderr");
}

SearchOptions search_options(const Flags& f) {
  SearchOptions o;
  o.mode = f.mode == "random" ? PermutationMode::random : PermutationMode::exact;
  o.perm_budget = f.perm_budget;
  o.seed = f.seed;
  o.threads = f.threads;
  o.auto_translate = f.translate == "auto";
  o.tol.feas = f.tol_feas;
  return o;
}

// The echoed command leaves out flags that do not influence the result, so
// reports stay byte-identical across worker counts.
Json command_echo(const std::vector<std::string>& args) {
  Json echo = Json::array();
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--threads") {
      ++i;
      continue;
    }
    if (a.rfind("--threads=", 0) == 0 || a == "--diagnostics") continue;
    echo.push_back(a);
  }
  return echo;
}

Json vec_json(const Vec& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

Json verification_json(const VerificationReport& r) {
  return Json{{"boundary_residual", r.boundary_residual},
              {"facet_residual", r.facet_residual},
              {"outside_violation", r.outside_violation},
              {"direction_residual", r.direction_residual},
              {"action", r.action},
              {"action_relative_error", r.action_relative_error},
              {"dual_sum", r.dual_sum},
              {"dual_relative_error", r.dual_relative_error},
              {"facets_once", r.facets_once},
              {"passed", r.passes()}};
}

std::string_view boundary_name(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::closed: return "closed";
    case BoundaryKind::psi: return "psi";
    case BoundaryKind::leaf: return "leaf";
  }
  return "unknown";
}

struct Certified {
  CapacityResult result;
  BoundaryCondition boundary;
  PiecewiseAffinePath path;
  VerificationReport check;
};

Certified certify(const Polytope& p, CapacityResult result, BoundaryCondition boundary) {
  Certified c{std::move(result), std::move(boundary), {}, {}};
  c.path = reconstruct(p, c.result, c.boundary);
  c.check = verify(c.path, p, c.boundary, c.result.value);
  return c;
}

Json capacity_json(const Certified& c, const Flags& f) {
  const auto& r = c.result;
  Json sigma = Json::array();
  for (int s : r.sigma) sigma.push_back(s);
  Json search{{"mode", f.mode}, {"permutations_searched", r.permutations_searched}, {"seed", f.seed}};
  if (r.mode == PermutationMode::random) search["perm_budget"] = f.perm_budget;
  return Json{{"capacity", to_string(r.kind)},
              {"value", r.value},
              {"certificate",
               {{"sigma", sigma},
                {"beta", vec_json(r.beta)},
                {"v", vec_json(r.v)},
                {"objective", r.objective},
                {"translation", vec_json(r.translation)}}},
              {"verification", verification_json(c.check)},
              {"search", search}};
}

void write_path(const std::string& file, const Certified& c) {
  std::ofstream out(file, std::ios::binary);
  if (!out) fail(ErrorKind::malformed_input, "cannot write " + file);
  out << io::path_to_json({c.path, c.boundary});
}

struct CsvRow {
  std::string input;
  std::string capacity;
  double value;
};

class Reporter {
 public:
  Reporter(const Flags& f, const std::vector<std::string>& args, std::ostream& out)
      : flags_(f), out_(out) {
    doc_["schema"] = 1;
    doc_["command"] = command_echo(args);
  }

  Json& doc() { return doc_; }
  void row(std::string input, std::string capacity, double value) {
    rows_.push_back({std::move(input), std::move(capacity), value});
  }

  void emit() {
    if (flags_.format == "csv") {
      out_ << "input,capacity,value,mode,seed\n";
      for (const auto& r : rows_) {
        out_ << csv_field(r.input) << ',' << csv_field(r.capacity) << ',' << format_double(r.value)
             << ',' << flags_.mode << ',' << flags_.seed << '\n';
      }
      return;
    }
    out_ << doc_.dump(2) << '\n';
  }

 private:
  const Flags& flags_;
  std::ostream& out_;
  Json doc_;
  std::vector<CsvRow> rows_;
};

std::vector<double> parse_line_spec(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::malformed_input, "--line expects nx,ny,c");
    }
  }
  if (values.size() != 3) fail(ErrorKind::malformed_input, "--line expects nx,ny,c");
  return values;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::hypothesis:
    case ErrorKind::infeasible:
    case ErrorKind::degenerate_cut:
    case ErrorKind::precondition:
      return exit_hypothesis;
    case ErrorKind::budget:
      return exit_budget;
    case ErrorKind::reconstruction:
      return exit_verification;
    default:
      return exit_malformed;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symplectic capacities of convex polytopes"};
  app.require_subcommand(1);
  Flags flags;
  std::string file, psi_file, path_file, line_spec, capacity = "lr", which;
  int k = 0;

  auto* ehz_cmd = app.add_subcommand("ehz", "Ekeland-Hofer-Zehnder capacity");
  ehz_cmd->add_option("FILE", file, "Polytope JSON")->required();
  add_common(ehz_cmd, flags);

  auto* psi_cmd = app.add_subcommand("psi-ehz", "Psi-relative capacity");
  psi_cmd->add_option("FILE", file, "Polytope JSON")->required();
  psi_cmd->add_option("--psi", psi_file, "Symplectic matrix JSON")->required();
  add_common(psi_cmd, flags);

  auto* lr_cmd = app.add_subcommand("lr", "Coisotropic capacity relative to R^{n,k}");
  lr_cmd->add_option("FILE", file, "Polytope JSON")->required();
  lr_cmd->add_option("--k", k, "Frame index, 0 <= k < n")->required();
  add_common(lr_cmd, flags);

  auto* cut_cmd = app.add_subcommand(
      "cut-experiment", "Compare c_LR of a planar polytope with the sum over two cut parts");
  cut_cmd->add_option("FILE", file, "Planar polytope JSON")->required();
  cut_cmd->add_option("--line", line_spec, "Line nx*x + ny*y = c as nx,ny,c")->required();
  cut_cmd->add_option("--capacity", capacity, "Capacity to compare")->check(CLI::IsMember({"lr"}));
  add_common(cut_cmd, flags);

  auto* oracle_cmd = app.add_subcommand("oracle", "Planar ground-truth oracles");
  oracle_cmd->add_option("FILE", file, "Planar polytope JSON")->required();
  oracle_cmd->add_option("--which", which, "Oracle")->required()->check(
      CLI::IsMember({"area", "lr", "ehz2d"}));
  add_common(oracle_cmd, flags);

  auto* verify_cmd = app.add_subcommand("verify", "Check an emitted path against a polytope");
  verify_cmd->add_option("PATHFILE", path_file, "Path JSON")->required();
  verify_cmd->add_option("FILE", file, "Polytope JSON")->required();
  add_common(verify_cmd, flags);

  std::vector<const char*> argv{"symcap"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_malformed;
  }

  const auto started = std::chrono::steady_clock::now();
  int status = exit_ok;
  try {
    const SearchOptions opts = search_options(flags);
    const std::string text = io::read_file(file);
    const Polytope polytope = io::parse_polytope(text, opts.tol);
    Reporter rep(flags, args, out);
    rep.doc()["input"] = file;
    rep.doc()["digest"] = io::digest(text);
    auto record = [&](const Certified& c, const std::string& label) {
      // A budgeted search returns an upper bound whose path need not be a
      // characteristic, so only exact runs are held to their certificate.
      if (!c.check.passes() && c.result.mode == PermutationMode::exact) status = exit_verification;
      rep.row(label, std::string(to_string(c.result.kind)), c.result.value);
      return capacity_json(c, flags);
    };

    if (ehz_cmd->parsed() || psi_cmd->parsed() || lr_cmd->parsed()) {
      Certified c;
      if (ehz_cmd->parsed()) {
        c = certify(polytope, ehz(polytope, opts), BoundaryCondition::closed());
      } else if (psi_cmd->parsed()) {
        const std::string psi_text = io::read_file(psi_file);
        const auto psi = io::parse_psi(psi_text, opts.tol);
        rep.doc()["psi"] = psi_file;
        rep.doc()["psi_digest"] = io::digest(psi_text);
        c = certify(polytope, psi_ehz(polytope, psi, opts), BoundaryCondition::twisted(psi));
      } else {
        const int n = polytope.half_dim();
        rep.doc()["k"] = k;
        c = certify(polytope, lr(polytope, n, k, opts), BoundaryCondition::leafwise(n, k));
      }
      const Json block = record(c, file);
      for (const auto& [key, value] : block.items()) rep.doc()[key] = value;
      if (!flags.emit_path.empty()) write_path(flags.emit_path, c);
    } else if (cut_cmd->parsed()) {
      const auto line = parse_line_spec(line_spec);
      Vec normal(2);
      normal << line[0], line[1];
      const auto cut = cut_experiment(polytope, normal, line[2], opts);
      const Certified whole = certify(polytope, cut.whole, BoundaryCondition::leafwise(1, 0));
      const Certified first = certify(cut.parts[0], cut.first, BoundaryCondition::leafwise(1, 0));
      const Certified second = certify(cut.parts[1], cut.second, BoundaryCondition::leafwise(1, 0));
      rep.doc()["capacity"] = capacity;
      rep.doc()["line"] = {{"normal", vec_json(normal)}, {"offset", line[2]}};
      rep.doc()["values"] = {cut.whole.value, cut.first.value, cut.second.value};
      rep.doc()["margin"] = cut.margin;
      rep.doc()["whole"] = record(whole, file);
      rep.doc()["parts"] = {record(first, file + "#D_1"), record(second, file + "#D_2")};
      if (!flags.emit_path.empty()) write_path(flags.emit_path, whole);
    } else if (oracle_cmd->parsed()) {
      const double value = which == "area"  ? polygon_area(polytope)
                           : which == "lr" ? lr_oracle(polytope, opts.tol)
                                           : ehz_oracle_2d(polytope);
      rep.doc()["oracle"] = which;
      rep.doc()["value"] = value;
      rep.row(file, "oracle:" + which, value);
    } else if (verify_cmd->parsed()) {
      const std::string path_text = io::read_file(path_file);
      const auto doc = io::parse_path(path_text, opts.tol);
      const auto check = verify(doc.path, polytope, doc.boundary, doc.path.total_time);
      if (!check.passes()) status = exit_verification;
      rep.doc()["path"] = path_file;
      rep.doc()["path_digest"] = io::digest(path_text);
      rep.doc()["boundary"] = boundary_name(doc.boundary.kind);
      rep.doc()["expected_value"] = doc.path.total_time;
      rep.doc()["verification"] = verification_json(check);
      rep.row(path_file, "verify:action", check.action);
    }
    rep.emit();
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return exit_internal;
  }
  if (flags.diagnostics) {
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    err << Json{{"threads", flags.threads}, {"elapsed_ms", ms}}.dump() << '\n';
  }
  if (status == exit_verification) err << "error: certificate verification failed\n";
  return status;
}

}  // namespace symcap::cli
