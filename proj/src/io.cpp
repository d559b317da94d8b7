#include "g2kit/io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace g2kit {

namespace {

json real(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double real_from(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(real(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? Eigen::Index{0} : static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols) throw std::invalid_argument("ragged matrix");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = real_from(j[i][k]);
  }
  return m;
}

void to_json(json& j, const QuarticPoly& p) { j = json{{"coeffs", p.a}, {"text", p.to_string()}}; }
void from_json(const json& j, QuarticPoly& p) { j.at("coeffs").get_to(p.a); }

void to_json(json& j, const UnitSpec& u) { j = u.coeffs; }
void from_json(const json& j, UnitSpec& u) { j.get_to(u.coeffs); }

void to_json(json& j, const LatticeChecks& c) {
  j = json{{"integral", c.integral},
           {"det_one", c.det_one},
           {"commute", c.commute},
           {"diagonalize_residual", real(c.diagonalize_residual)},
           {"positive_spectra", c.positive_spectra},
           {"independence_rank", c.independence_rank},
           {"independence_sigma_min", real(c.independence_sigma_min)}};
}

void from_json(const json& j, LatticeChecks& c) {
  j.at("integral").get_to(c.integral);
  j.at("det_one").get_to(c.det_one);
  j.at("commute").get_to(c.commute);
  c.diagonalize_residual = real_from(j.at("diagonalize_residual"));
  j.at("positive_spectra").get_to(c.positive_spectra);
  j.at("independence_rank").get_to(c.independence_rank);
  c.independence_sigma_min = real_from(j.at("independence_sigma_min"));
}

void to_json(json& j, const LatticeCertificate& c) {
  json spectra = json::array();
  for (const auto& s : c.spectra) spectra.push_back(matrix_to_json(s.transpose())[0]);
  json roots = json::array();
  for (double r : c.roots) roots.push_back(real(r));
  j = json{{"poly", c.poly},
           {"units", c.units},
           {"matrices", c.matrices},
           {"determinants", c.determinants},
           {"roots", roots},
           {"vandermonde", matrix_to_json(c.vandermonde)},
           {"spectra", spectra},
           {"checks", c.checks},
           {"example", c.example ? json(*c.example) : json(nullptr)},
           {"matches_reference", c.matches_reference ? json(*c.matches_reference) : json(nullptr)},
           {"failures", c.failures},
           {"verdict", c.verdict}};
}

void from_json(const json& j, LatticeCertificate& c) {
  j.at("poly").get_to(c.poly);
  j.at("units").get_to(c.units);
  j.at("matrices").get_to(c.matrices);
  j.at("determinants").get_to(c.determinants);
  for (std::size_t i = 0; i < 4; ++i) c.roots[i] = real_from(j.at("roots").at(i));
  c.vandermonde = matrix_from_json(j.at("vandermonde"));
  for (std::size_t i = 0; i < 3; ++i) {
    const json& s = j.at("spectra").at(i);
    for (int k = 0; k < 4; ++k) c.spectra[i](k) = real_from(s.at(k));
  }
  j.at("checks").get_to(c.checks);
  c.example.reset();
  if (!j.at("example").is_null()) c.example = j.at("example").get<std::string>();
  c.matches_reference.reset();
  if (!j.at("matches_reference").is_null()) c.matches_reference = j.at("matches_reference").get<bool>();
  j.at("failures").get_to(c.failures);
  j.at("verdict").get_to(c.verdict);
}

void to_json(json& j, const CoclosedParams& p) {
  j = json{{"a1", p.a1}, {"a2", p.a2}, {"b1", p.b1}, {"b2", p.b2}, {"c1", p.c1}, {"c2", p.c2}};
}

void from_json(const json& j, CoclosedParams& p) {
  j.at("a1").get_to(p.a1);
  j.at("a2").get_to(p.a2);
  j.at("b1").get_to(p.b1);
  j.at("b2").get_to(p.b2);
  j.at("c1").get_to(p.c1);
  j.at("c2").get_to(p.c2);
}

void to_json(json& j, const SolitonSolution& s) {
  j = json{{"params", s.params},
           {"lambda", s.lambda},
           {"d", s.d},
           {"residual", real(s.residual)},
           {"compatible", s.compatible}};
}

void from_json(const json& j, SolitonSolution& s) {
  j.at("params").get_to(s.params);
  j.at("lambda").get_to(s.lambda);
  j.at("d").get_to(s.d);
  s.residual = real_from(j.at("residual"));
  j.at("compatible").get_to(s.compatible);
}

void to_json(json& j, const SolitonFit& f) {
  j = json{{"residual", real(f.residual)},
           {"best_lambda", real(f.best_lambda)},
           {"best_D", f.best_D},
           {"degenerate", f.degenerate}};
}

void from_json(const json& j, SolitonFit& f) {
  f.residual = real_from(j.at("residual"));
  f.best_lambda = real_from(j.at("best_lambda"));
  j.at("best_D").get_to(f.best_D);
  j.at("degenerate").get_to(f.degenerate);
}

void to_json(json& j, const FlowSample& s) {
  j = json{{"t", s.t}, {"params", s.p}, {"N", s.N}, {"F", real(s.F)}, {"r", s.r}, {"s", s.s}, {"tc", s.t_coef}};
}

void from_json(const json& j, FlowSample& s) {
  j.at("t").get_to(s.t);
  j.at("params").get_to(s.p);
  j.at("N").get_to(s.N);
  s.F = real_from(j.at("F"));
  j.at("r").get_to(s.r);
  j.at("s").get_to(s.s);
  j.at("tc").get_to(s.t_coef);
}

void to_json(json& j, const TorsionReport& r) {
  j = json{{"tau0", r.tau0},
           {"|tau1|", r.tau1_norm},
           {"|tau2|", r.tau2_norm},
           {"|tau3|", r.tau3_norm},
           {"class", r.torsion_class},
           {"closed", r.closed},
           {"coclosed", r.coclosed},
           {"F", r.F ? real(*r.F) : json(nullptr)},
           {"erp_residual", r.erp_residual ? real(*r.erp_residual) : json(nullptr)},
           {"scal", r.scalar_curvature},
           {"ricci", matrix_to_json(r.ricci_display)}};
}

void from_json(const json& j, TorsionReport& r) {
  j.at("tau0").get_to(r.tau0);
  j.at("|tau1|").get_to(r.tau1_norm);
  j.at("|tau2|").get_to(r.tau2_norm);
  j.at("|tau3|").get_to(r.tau3_norm);
  j.at("class").get_to(r.torsion_class);
  j.at("closed").get_to(r.closed);
  j.at("coclosed").get_to(r.coclosed);
  r.F.reset();
  if (!j.at("F").is_null()) r.F = j.at("F").get<double>();
  r.erp_residual.reset();
  if (!j.at("erp_residual").is_null()) r.erp_residual = j.at("erp_residual").get<double>();
  j.at("scal").get_to(r.scalar_curvature);
  const Eigen::MatrixXd m = matrix_from_json(j.at("ricci"));
  if (m.rows() != 7 || m.cols() != 7) throw std::invalid_argument("ricci must be 7x7");
  r.ricci_display = m;
}

void to_json(json& j, const AuditEntry& e) {
  j = json{{"claim_id", e.claim_id},
           {"paper_location", e.paper_location},
           {"computed_value", e.computed_value},
           {"paper_value", e.paper_value},
           {"agrees", e.agrees}};
}

void from_json(const json& j, AuditEntry& e) {
  j.at("claim_id").get_to(e.claim_id);
  j.at("paper_location").get_to(e.paper_location);
  j.at("computed_value").get_to(e.computed_value);
  j.at("paper_value").get_to(e.paper_value);
  j.at("agrees").get_to(e.agrees);
}

void to_json(json& j, const AuditReport& r) { j = json{{"entries", r.entries}}; }
void from_json(const json& j, AuditReport& r) { j.at("entries").get_to(r.entries); }

void write_trajectory_csv(std::ostream& os, const FlowTrajectory& traj) {
  os << "t,a1,a2,b1,b2,c1,c2,N,F,r,s,tc\n";
  for (const auto& s : traj.samples) {
    const auto& p = s.p;
    os << g17(s.t) << ',' << g17(p.a1) << ',' << g17(p.a2) << ',' << g17(p.b1) << ',' << g17(p.b2) << ','
       << g17(p.c1) << ',' << g17(p.c2) << ',' << g17(s.N) << ',' << g17(s.F) << ',' << g17(s.r) << ','
       << g17(s.s) << ',' << g17(s.t_coef) << '\n';
  }
}

void write_flow_sweep_csv(std::ostream& os, std::span<const FlowSweepRow> rows) {
  os << "index,a1_0,a2_0,b1_0,b2_0,c1_0,c2_0,status,steps,t,a1,a2,b1,b2,c1,c2,N,F,window_drift\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const auto& p0 = r.init;
    const auto& f = r.final_sample;
    os << i << ',' << g17(p0.a1) << ',' << g17(p0.a2) << ',' << g17(p0.b1) << ',' << g17(p0.b2) << ','
       << g17(p0.c1) << ',' << g17(p0.c2) << ',' << to_string(r.status) << ',' << r.steps << ',' << g17(f.t) << ','
       << g17(f.p.a1) << ',' << g17(f.p.a2) << ',' << g17(f.p.b1) << ',' << g17(f.p.b2) << ',' << g17(f.p.c1)
       << ',' << g17(f.p.c2) << ',' << g17(f.N) << ',' << g17(f.F) << ',' << g17(r.window_drift) << '\n';
  }
}

}  // namespace g2kit
