#pragma once

namespace g2kit {

/// Tolerances shared by the geometric checks. Passed by value so that
/// concurrent sweeps never share mutable state.
struct Numerics {
  /// A form counts as zero when its norm is below form_zero_tol * |phi|.
  double form_zero_tol = 1e-10;
  /// Closedness required before the ERP residual is evaluated.
  double closed_tol = 1e-10;
  /// ERP verdict threshold on |R|.
  double erp_tol = 1e-9;
  /// Imaginary parts below this count as real.
  double real_eig_tol = 1e-9;
  /// Singular values below rank_tol * sigma_max count as zero.
  double rank_tol = 1e-9;
  /// Commutator check for the Jacobi identity, relative to the matrix scale.
  double commute_tol = 1e-10;
  /// Solvsoliton checks (normality and scalar Ric on a).
  double soliton_tol = 1e-9;
};

}  // namespace g2kit
