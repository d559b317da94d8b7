#include "g2kit/g2core.hpp"

#include <cmath>
#include <stdexcept>

namespace g2kit {

G2Structure::G2Structure(BracketTriple t)
    : triple(std::move(t)), phi(std_forms::phi()), psi(hodge(phi)) {}

ExteriorDerivatives exterior_derivatives(const G2Structure& s) {
  const CEDifferential d(s.triple);
  ExteriorDerivatives out;
  out.dphi = d(s.phi);
  out.star_dphi = hodge(out.dphi);
  out.star_d_star_dphi = hodge(d(out.star_dphi));
  out.dpsi = d(s.psi);
  out.star_dpsi = hodge(out.dpsi);
  out.d_star_dpsi = d(out.star_dpsi);
  return out;
}

TorsionForms torsion_forms(const G2Structure& s) {
  const CEDifferential d(s.triple);
  const KForm dphi = d(s.phi);
  const KForm dpsi = d(s.psi);
  const KForm star_dphi = hodge(dphi);

  TorsionForms t;
  t.tau0 = hodge(wedge(dphi, s.phi)).coeff(MultiIndex{}) / 7.0;
  t.tau1 = -(1.0 / 12.0) * hodge(wedge(star_dphi, s.phi));
  t.tau2 = -hodge(dpsi) + 4.0 * hodge(wedge(t.tau1, s.psi));
  t.tau3 = star_dphi - t.tau0 * s.phi - 3.0 * hodge(wedge(t.tau1, s.phi));
  t.tau_two_form = -hodge(d(hodge(s.phi)));
  t.norm_sq_tau = inner(t.tau_two_form, t.tau_two_form);
  return t;
}

double zero_threshold(const Numerics& num) { return num.form_zero_tol * std::sqrt(7.0); }

std::string TorsionClass::label() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (!on) return;
    if (!out.empty()) out += '+';
    out += name;
  };
  add(w1, "W1");
  add(w2, "W2");
  add(w3, "W3");
  add(w4, "W4");
  return out.empty() ? "0" : out;
}

TorsionClass torsion_class(const G2Structure& s, const Numerics& num) {
  const TorsionForms t = torsion_forms(s);
  const double eps = zero_threshold(num);
  TorsionClass c;
  c.w1 = std::abs(t.tau0) > eps;
  c.w2 = t.tau2.norm() > eps;
  c.w3 = t.tau3.norm() > eps;
  c.w4 = t.tau1.norm() > eps;
  return c;
}

ErpResidual erp_residual(const G2Structure& s, const Numerics& num) {
  const CEDifferential d(s.triple);
  if (d(s.phi).norm() > num.closed_tol) {
    throw std::domain_error("ERP residual requires a closed structure");
  }
  const KForm tau = -hodge(d(s.psi));
  const double tau_sq = inner(tau, tau);
  const KForm r = d(tau) - (tau_sq / 6.0) * s.phi - (1.0 / 6.0) * hodge(wedge(tau, tau));
  return {r.norm(), tau_sq};
}

Laplacians laplacians(const G2Structure& s) {
  const CEDifferential d(s.triple);
  const KForm dphi = d(s.phi);
  const KForm dpsi = d(s.psi);
  Laplacians out;
  out.phi_lap = hodge(d(hodge(dphi))) - d(hodge(dpsi));
  out.psi_lap = -hodge(d(hodge(dpsi))) + d(hodge(dphi));
  return out;
}

BracketTriple closed_triple(double a, double b, double c) {
  return BracketTriple::diagonal(a * Eigen::Vector4d(1, 1, -1, -1), b * Eigen::Vector4d(1, -1, 1, -1),
                                 c * Eigen::Vector4d(1, -1, -1, 1));
}

TorsionReport torsion_report(const BracketTriple& t, const Numerics& num) {
  const G2Structure s(t);
  const TorsionForms tf = torsion_forms(s);
  const CEDifferential d(t, num);
  TorsionReport r;
  r.tau0 = tf.tau0;
  r.tau1_norm = tf.tau1.norm();
  r.tau2_norm = tf.tau2.norm();
  r.tau3_norm = tf.tau3.norm();
  r.torsion_class = torsion_class(s, num).label();
  r.closed = d(s.phi).norm() <= num.closed_tol;
  r.coclosed = d(s.psi).norm() <= num.closed_tol;
  try {
    r.F = homothety_F(t);
  } catch (const std::domain_error&) {
  }
  if (r.closed) r.erp_residual = erp_residual(s, num).residual_norm;
  r.scalar_curvature = scalar_curvature(t);
  r.ricci_display = to_display_order(ricci(t));
  return r;
}

double trace_torsion(const G2Structure& s) { return 1.75 * torsion_forms(s).tau0; }

}  // namespace g2kit
