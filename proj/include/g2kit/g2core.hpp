#pragma once

// Left-invariant G2-structures (G_{A,B,C}, phi) with phi the standard
// positive 3-form in the orthonormal frame e1..e7.

#include <optional>
#include <string>

#include "g2kit/forms.hpp"
#include "g2kit/liealg.hpp"
#include "g2kit/numerics.hpp"

namespace g2kit {

struct G2Structure {
  explicit G2Structure(BracketTriple t);

  BracketTriple triple;
  KForm phi;
  KForm psi;
};

/// The six exterior-calculus quantities entering torsion and Laplacians.
struct ExteriorDerivatives {
  KForm dphi;
  KForm star_dphi;
  KForm star_d_star_dphi;
  KForm dpsi;
  KForm star_dpsi;
  KForm d_star_dpsi;
};

ExteriorDerivatives exterior_derivatives(const G2Structure& s);

struct TorsionForms {
  double tau0 = 0.0;
  KForm tau1{1};
  KForm tau2{2};
  KForm tau3{3};
  /// tau := - * d * phi.
  KForm tau_two_form{2};
  double norm_sq_tau = 0.0;
};

/// Torsion forms from the closed expressions
///   tau0 = 1/7 *(dphi ^ phi),   tau1 = -1/12 *(*dphi ^ phi),
///   tau2 = -*dpsi + 4 *(tau1 ^ psi),
///   tau3 = *dphi - tau0 phi - 3 *(tau1 ^ phi).
TorsionForms torsion_forms(const G2Structure& s);

struct TorsionClass {
  bool w1 = false;  // tau0
  bool w2 = false;  // tau2
  bool w3 = false;  // tau3
  bool w4 = false;  // tau1

  bool torsion_free() const { return !(w1 || w2 || w3 || w4); }
  /// "W2+W3", "W2", or "0" when torsion-free.
  std::string label() const;
};

TorsionClass torsion_class(const G2Structure& s, const Numerics& num = {});

struct ErpResidual {
  double residual_norm = 0.0;
  double tau_norm_sq = 0.0;
};

/// |d tau - 1/6 |tau|^2 phi - 1/6 *(tau ^ tau)|. Throws std::domain_error
/// unless dphi vanishes to num.closed_tol.
ErpResidual erp_residual(const G2Structure& s, const Numerics& num = {});

struct Laplacians {
  KForm phi_lap{3};
  KForm psi_lap{4};
};

/// Hodge Laplacians of phi and psi:
///   Delta phi = *d*d phi - d*d psi,   Delta psi = -*d*d psi + d*d phi.
Laplacians laplacians(const G2Structure& s);

/// A = a Diag(1,1,-1,-1), B = b Diag(1,-1,1,-1), C = c Diag(1,-1,-1,1):
/// every diagonal triple with dphi = 0 has this form.
BracketTriple closed_triple(double a, double b, double c);

/// tr T = (7/4) tau0.
double trace_torsion(const G2Structure& s);

/// Threshold below which a form counts as zero under num.
double zero_threshold(const Numerics& num);

/// Summary of one structure: torsion norms and class, curvature, and the ERP
/// residual when the structure is closed.
struct TorsionReport {
  double tau0 = 0.0;
  double tau1_norm = 0.0;
  double tau2_norm = 0.0;
  double tau3_norm = 0.0;
  std::string torsion_class;
  bool closed = false;
  bool coclosed = false;
  /// Unset on flat metrics.
  std::optional<double> F;
  std::optional<double> erp_residual;
  double scalar_curvature = 0.0;
  /// Ricci operator in the display order (e7, e1, e2, e3, ..., e6).
  Mat7 ricci_display = Mat7::Zero();

  friend bool operator==(const TorsionReport&, const TorsionReport&) = default;
};

TorsionReport torsion_report(const BracketTriple& t, const Numerics& num = {});

}  // namespace g2kit
