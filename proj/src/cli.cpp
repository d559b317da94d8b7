#include "g2kit/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "g2kit/audit.hpp"
#include "g2kit/coflow.hpp"
#include "g2kit/g2core.hpp"
#include "g2kit/io.hpp"
#include "g2kit/numberlat.hpp"
#include "g2kit/sweep.hpp"

namespace g2kit::cli {

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
std::vector<T> parse_list(std::string_view text, std::size_t expected, const char* what) {
  std::vector<T> out;
  for (const auto& item : split(text, ',')) {
    T v{};
    const char* end = item.data() + item.size();
    const auto [ptr, ec] = std::from_chars(item.data(), end, v);
    if (item.empty() || ec != std::errc{} || ptr != end) {
      throw std::invalid_argument(std::string("malformed ") + what + " '" + item + "' in '" + std::string(text) + "'");
    }
    out.push_back(v);
  }
  if (expected > 0 && out.size() != expected) {
    throw std::invalid_argument("expected " + std::to_string(expected) + " values, got " + std::to_string(out.size()) +
                                " in '" + std::string(text) + "'");
  }
  return out;
}

std::string read_matrix_arg(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw std::invalid_argument("cannot read matrix file " + arg.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  // Newlines separate rows as well as ';'.
  std::string out;
  for (const auto& line : split(text, '\n')) {
    if (line.empty()) continue;
    if (!out.empty() && out.back() != ';') out += ';';
    out += line;
  }
  return out;
}

CoclosedParams params_from(const std::string& text) {
  const auto v = parse_reals(text, 6);
  return {v[0], v[1], v[2], v[3], v[4], v[5]};
}

std::string g17(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

struct Global {
  double tol = 1e-9;
  std::string format = "json";
  std::string out_path;
};

class Output {
 public:
  Output(const Global& g, std::ostream& fallback) : fallback_(fallback) {
    if (!g.out_path.empty()) {
      file_.open(g.out_path);
      if (!file_) throw std::invalid_argument("cannot open output file " + g.out_path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

void require_format(const Global& g, std::initializer_list<std::string_view> allowed, const char* cmd) {
  for (auto f : allowed) {
    if (g.format == f) return;
  }
  throw UsageError(std::string("format '") + g.format + "' is not supported by " + cmd);
}

// ---- verify-lattice -------------------------------------------------------

struct LatticeArgs {
  std::string example;
  std::string poly;
  std::vector<std::string> units;
};

int do_verify_lattice(const LatticeArgs& a, const Global& g, std::ostream& out) {
  require_format(g, {"json", "text"}, "verify-lattice");
  LatticeCertificate cert;
  if (!a.example.empty()) {
    if (!a.poly.empty() || !a.units.empty()) throw UsageError("--example excludes --poly and --unit");
    cert = certify_example(a.example);
  } else {
    if (a.poly.empty() || a.units.size() != 3) throw UsageError("need --example, or --poly with three --unit");
    const auto c = parse_ints(a.poly, 4);
    const QuarticPoly p{{c[0], c[1], c[2], c[3]}};
    std::array<UnitSpec, 3> units;
    for (int i = 0; i < 3; ++i) units[i] = UnitSpec{parse_ints(a.units[i])};
    cert = certify_lattice(p, units);
  }
  Output o(g, out);
  if (g.format == "json") {
    o.stream() << json(cert).dump(2) << '\n';
  } else {
    auto& s = o.stream();
    s << "polynomial: " << cert.poly.to_string() << '\n';
    for (int i = 0; i < 3; ++i) {
      s << "A" << i + 1 << " (det " << cert.determinants[i] << "):\n";
      for (const auto& row : cert.matrices[i]) {
        s << "  " << row[0] << ' ' << row[1] << ' ' << row[2] << ' ' << row[3] << '\n';
      }
    }
    s << "diagonalization residual: " << cert.checks.diagonalize_residual << '\n';
    s << "independence rank: " << cert.checks.independence_rank << '\n';
    if (cert.matches_reference) s << "matches stored matrices: " << (*cert.matches_reference ? "yes" : "no") << '\n';
    for (const auto& f : cert.failures) s << "failure: " << f << '\n';
    s << "verdict: " << (cert.verdict ? "true" : "false") << '\n';
  }
  return cert.verdict ? kOk : kVerdictFalse;
}

// ---- torsion / erp-check --------------------------------------------------

struct StructureArgs {
  std::string A, B, C;
  std::string closed;
  std::string coclosed;
};

BracketTriple triple_from(const StructureArgs& a) {
  const int given = (!a.A.empty() || !a.B.empty() || !a.C.empty()) + !a.closed.empty() + !a.coclosed.empty();
  if (given != 1) throw UsageError("give exactly one of --A/--B/--C, --closed, --coclosed");
  if (!a.closed.empty()) {
    const auto v = parse_reals(a.closed, 3);
    return closed_triple(v[0], v[1], v[2]);
  }
  if (!a.coclosed.empty()) return params_from(a.coclosed).triple();
  if (a.A.empty() || a.B.empty() || a.C.empty()) throw UsageError("--A, --B and --C go together");
  return {parse_matrix4(read_matrix_arg(a.A)), parse_matrix4(read_matrix_arg(a.B)),
          parse_matrix4(read_matrix_arg(a.C))};
}

int do_torsion(const StructureArgs& a, const Global& g, std::ostream& out) {
  require_format(g, {"json", "text"}, "torsion");
  const BracketTriple t = triple_from(a);
  const TorsionReport r = torsion_report(t);
  Output o(g, out);
  if (g.format == "json") {
    o.stream() << json(r).dump(2) << '\n';
  } else {
    auto& s = o.stream();
    s << "tau0 " << g17(r.tau0) << "\n|tau1| " << g17(r.tau1_norm) << "\n|tau2| " << g17(r.tau2_norm)
      << "\n|tau3| " << g17(r.tau3_norm) << "\nclass " << r.torsion_class << "\nF "
      << (r.F ? g17(*r.F) : std::string("undefined")) << '\n';
    if (r.erp_residual) s << "erp_residual " << g17(*r.erp_residual) << '\n';
    s << "Ricci (e7, e1, e2, e3, ..., e6):\n" << format_matrix(r.ricci_display) << '\n';
  }
  return kOk;
}

int do_erp_check(const StructureArgs& a, const Global& g, std::ostream& out) {
  require_format(g, {"json", "text"}, "erp-check");
  const BracketTriple t = triple_from(a);
  const G2Structure s(t);
  json j;
  bool erp = false;
  try {
    const ErpResidual r = erp_residual(s);
    erp = r.residual_norm < g.tol;
    j = json{{"closed", true}, {"erp_residual", r.residual_norm}, {"tau_norm_sq", r.tau_norm_sq},
             {"tol", g.tol},   {"erp", erp}};
    try {
      j["F"] = homothety_F(t);
    } catch (const std::domain_error&) {
      j["F"] = nullptr;
    }
  } catch (const std::domain_error& e) {
    j = json{{"closed", false}, {"erp", false}, {"reason", e.what()}};
  }
  Output o(g, out);
  if (g.format == "json") {
    o.stream() << j.dump(2) << '\n';
  } else {
    for (const auto& [k, v] : j.items()) o.stream() << k << ' ' << v.dump() << '\n';
  }
  return erp ? kOk : kVerdictFalse;
}

// ---- soliton ----------------------------------------------------------------

struct SolitonArgs {
  std::string base;
  std::string params;
  std::optional<double> modified;
};

int do_soliton(const SolitonArgs& a, const Global& g, std::ostream& out) {
  require_format(g, {"json", "text"}, "soliton");
  Output o(g, out);
  auto& s = o.stream();
  if (!a.base.empty()) {
    if (!a.params.empty() || a.modified) throw UsageError("--base excludes --params and --modified");
    const auto v = parse_reals(a.base, 4);
    const auto sols = soliton_solve(v[0], v[1], v[2], v[3]);
    bool ok = true;
    for (const auto& x : sols) ok = ok && x.residual < g.tol;
    if (g.format == "json") {
      s << json(sols).dump(2) << '\n';
    } else {
      s << sols.size() << " solution(s)\n";
      for (const auto& x : sols) {
        s << "c1 " << g17(x.params.c1) << " c2 " << g17(x.params.c2) << " lambda " << g17(x.lambda) << " residual "
          << g17(x.residual) << (x.compatible ? "" : " (A, B, C dependent)") << '\n';
      }
    }
    return ok ? kOk : kVerdictFalse;
  }
  if (a.params.empty()) throw UsageError("need --base or --params");
  const CoclosedParams p = params_from(a.params);
  if (a.modified) {
    const double r = modified_soliton_residual(p, *a.modified);
    const json j{{"params", p}, {"m", *a.modified}, {"residual", r}, {"soliton", r < g.tol}};
    if (g.format == "json") {
      s << j.dump(2) << '\n';
    } else {
      s << "modified residual " << g17(r) << '\n';
    }
    return r < g.tol ? kOk : kVerdictFalse;
  }
  const SolitonFit f = soliton_residual(p);
  if (g.format == "json") {
    json j = f;
    j["soliton"] = f.residual < g.tol;
    s << j.dump(2) << '\n';
  } else {
    s << "residual " << g17(f.residual) << "\nbest_lambda " << g17(f.best_lambda) << "\nbest_D " << g17(f.best_D[0])
      << ' ' << g17(f.best_D[1]) << ' ' << g17(f.best_D[2]) << ' ' << g17(f.best_D[3]) << '\n';
    if (f.degenerate) s << "flat: every lambda fits\n";
  }
  return f.residual < g.tol ? kOk : kVerdictFalse;
}

// ---- flow -------------------------------------------------------------------

struct FlowArgs {
  std::string init;
  std::string sweep;
  double t_max = 10.0;
  double sample_dt = 0.0;
  int threads = 0;
};

std::vector<CoclosedParams> read_inits(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read sweep file " + path);
  std::vector<CoclosedParams> inits;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    inits.push_back(params_from(t));
  }
  return inits;
}

int do_flow(const FlowArgs& a, const Global& g, std::ostream& out) {
  if (!(a.t_max > 0.0)) throw UsageError("--t-max must be positive");
  if ((a.init.empty()) == (a.sweep.empty())) throw UsageError("give exactly one of --init and --sweep");
  FlowOptions opts;
  opts.sample_dt = a.sample_dt;
  Output o(g, out);
  if (!a.sweep.empty()) {
    require_format(g, {"csv", "json"}, "flow --sweep");
    const auto inits = read_inits(a.sweep);
    const auto rows = flow_sweep(inits, a.t_max, opts, a.threads);
    if (g.format == "csv") {
      write_flow_sweep_csv(o.stream(), rows);
    } else {
      json j = json::array();
      for (const auto& r : rows) {
        j.push_back(json{{"init", r.init},
                         {"status", to_string(r.status)},
                         {"steps", r.steps},
                         {"final", r.final_sample},
                         {"window_drift", std::isfinite(r.window_drift) ? json(r.window_drift) : json(nullptr)}});
      }
      o.stream() << j.dump(2) << '\n';
    }
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.status != FlowStatus::diverged;
    return ok ? kOk : kVerdictFalse;
  }
  const FlowTrajectory traj = integrate(params_from(a.init), a.t_max, opts);
  if (g.format == "csv") {
    write_trajectory_csv(o.stream(), traj);
  } else if (g.format == "json") {
    o.stream() << json{{"status", to_string(traj.status)}, {"message", traj.message}, {"steps", traj.steps},
                       {"rejected", traj.rejected}, {"samples", traj.samples}}
                      .dump(2)
               << '\n';
  } else {
    const auto& f = traj.samples.back();
    o.stream() << "status " << to_string(traj.status) << "\nsteps " << traj.steps << "\nt " << g17(f.t) << "\nparams "
               << g17(f.p.a1) << ' ' << g17(f.p.a2) << ' ' << g17(f.p.b1) << ' ' << g17(f.p.b2) << ' '
               << g17(f.p.c1) << ' ' << g17(f.p.c2) << "\nN " << g17(f.N) << '\n';
  }
  return traj.status == FlowStatus::diverged ? kVerdictFalse : kOk;
}

// ---- audit ------------------------------------------------------------------

int do_audit(const Global& g, std::ostream& out) {
  require_format(g, {"json", "text"}, "audit");
  const AuditReport r = run_audit();
  Output o(g, out);
  if (g.format == "json") {
    o.stream() << json(r).dump(2) << '\n';
  } else {
    for (const auto& e : r.entries) {
      o.stream() << (e.agrees ? "agree    " : "DISAGREE ") << e.claim_id << "\n  where:    " << e.paper_location
                 << "\n  stated:   " << e.paper_value << "\n  computed: " << e.computed_value << '\n';
    }
  }
  return kOk;
}

}  // namespace

std::vector<double> parse_reals(std::string_view text, std::size_t expected) {
  return parse_list<double>(text, expected, "number");
}

std::vector<std::int64_t> parse_ints(std::string_view text, std::size_t expected) {
  return parse_list<std::int64_t>(text, expected, "integer");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Left-invariant G2-structures on solvable Lie groups: lattices, torsion, coflow."};
  app.name("g2kit");
  app.require_subcommand(1);
  app.fallthrough();

  Global g;
  bool format_given = false;
  app.add_option("--tol", g.tol, "Threshold for residual verdicts")->check(CLI::PositiveNumber);
  app.add_option_function<std::string>(
         "--format",
         [&](const std::string& f) {
           g.format = f;
           format_given = true;
         },
         "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", g.out_path, "Write output to this file");

  LatticeArgs lattice;
  auto* verify = app.add_subcommand("verify-lattice", "Certify a lattice built from units of a quartic field");
  verify->add_option("--example", lattice.example, "Built-in example")->check(CLI::IsMember(builtin_example_names()));
  verify->add_option("--poly", lattice.poly, "a0,a1,a2,a3 of t^4 + a3 t^3 + a2 t^2 + a1 t + a0");
  verify->add_option("--unit", lattice.units, "Ascending coefficients of a unit q(u); give three")->allow_extra_args(false);

  StructureArgs torsion_args;
  auto* torsion = app.add_subcommand("torsion", "Torsion forms, class, F and Ricci of a structure");
  auto* erp = app.add_subcommand("erp-check", "ERP residual of a closed structure");
  for (auto* sub : {torsion, erp}) {
    sub->add_option("--A", torsion_args.A, "Matrix literal 'r0;r1;r2;r3' or @file");
    sub->add_option("--B", torsion_args.B, "Matrix literal or @file");
    sub->add_option("--C", torsion_args.C, "Matrix literal or @file");
    sub->add_option("--closed", torsion_args.closed, "a,b,c of the closed diagonal family");
  }
  torsion->add_option("--coclosed", torsion_args.coclosed, "a1,a2,b1,b2,c1,c2 of the coclosed family");

  SolitonArgs soliton_args;
  double modified = 0.0;
  auto* soliton = app.add_subcommand("soliton", "Coflow soliton solutions and residuals");
  soliton->add_option("--base", soliton_args.base, "a1,a2,b1,b2: solve for (c1, c2)");
  soliton->add_option("--params", soliton_args.params, "a1,a2,b1,b2,c1,c2: least-squares soliton residual");
  auto* mod_opt = soliton->add_option("--modified", modified, "m of the modified coflow (requires --params)");

  FlowArgs flow_args;
  auto* flow = app.add_subcommand("flow", "Integrate the coflow on the coclosed family");
  flow->add_option("--init", flow_args.init, "a1,a2,b1,b2,c1,c2");
  flow->add_option("--sweep", flow_args.sweep, "File with one a1,...,c2 line per trajectory");
  flow->add_option("--t-max", flow_args.t_max, "Final time");
  flow->add_option("--sample-dt", flow_args.sample_dt, "Minimum spacing of recorded samples")
      ->check(CLI::NonNegativeNumber);
  flow->add_option("--threads", flow_args.threads, "Worker threads for --sweep (0: default)")
      ->check(CLI::NonNegativeNumber);

  auto* audit = app.add_subcommand("audit", "Recompute stated claims and report agreement");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "g2kit: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*verify) return do_verify_lattice(lattice, g, out);
    if (*torsion) return do_torsion(torsion_args, g, out);
    if (*erp) return do_erp_check(torsion_args, g, out);
    if (*soliton) {
      if (*mod_opt) soliton_args.modified = modified;
      return do_soliton(soliton_args, g, out);
    }
    if (*flow) {
      if (!format_given) g.format = "csv";
      return do_flow(flow_args, g, out);
    }
    if (*audit) return do_audit(g, out);
  } catch (const std::invalid_argument& e) {
    err << "g2kit: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "g2kit: " << e.what() << '\n';
    return kUsage;
  } catch (const std::overflow_error& e) {
    err << "g2kit: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace g2kit::cli
