#pragma once

// Lattices Lambda x| phi(Z^4) in G_J from unit groups of totally real
// quartic fields. Integer work is exact (64-bit, overflow-checked); only the
// diagonalization and the log-embedding rank test use floating point.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace g2kit {

using IntMat4 = std::array<std::array<std::int64_t, 4>, 4>;

/// Monic p(t) = t^4 + a3 t^3 + a2 t^2 + a1 t + a0, stored as {a0, a1, a2, a3}.
struct QuarticPoly {
  std::array<std::int64_t, 4> a{};

  double eval(double t) const;
  double deriv(double t) const;
  std::string to_string() const;
  friend bool operator==(const QuarticPoly&, const QuarticPoly&) = default;
};

struct PolyCheck {
  bool irreducible = false;
  bool totally_real = false;
  std::string reason;
  bool ok() const { return irreducible && totally_real; }
};

/// Irreducibility over Q (rational roots and integer quadratic factors, by
/// Gauss' lemma enough for monic integer quartics) and total reality.
PolyCheck validate(const QuarticPoly& p);

/// Element q(u) of Z[u], ascending coefficients of any length; reduced
/// modulo p before use.
struct UnitSpec {
  std::vector<std::int64_t> coeffs;
  friend bool operator==(const UnitSpec&, const UnitSpec&) = default;
};

UnitSpec poly_mul(const UnitSpec& x, const UnitSpec& y);
/// Remainder modulo p; the result has exactly four coefficients.
UnitSpec reduce(const QuarticPoly& p, const UnitSpec& q);

IntMat4 identity4();
IntMat4 multiply(const IntMat4& x, const IntMat4& y);
std::int64_t determinant(const IntMat4& m);
bool commute(const IntMat4& x, const IntMat4& y);
Eigen::Matrix4d to_real(const IntMat4& m);

/// Companion matrix with last column (-a0, -a1, -a2, -a3). Throws
/// std::invalid_argument (with the reason) for reducible or non-totally-real p.
IntMat4 companion(const QuarticPoly& p);

/// q(M) for the companion matrix M. Throws std::domain_error("not a unit")
/// unless |det| = 1.
IntMat4 unit_matrix(const QuarticPoly& p, const UnitSpec& q);

/// Real roots of p in descending order, polished by Newton iteration.
/// Throws std::invalid_argument if p is not totally real.
std::array<double, 4> real_roots(const QuarticPoly& p);

Eigen::Matrix4d vandermonde(const std::array<double, 4>& roots);

struct Diagonalization {
  std::array<double, 4> roots{};
  Eigen::Matrix4d vandermonde;
  /// Diagonal of V A_j V^{-1}, one per input matrix.
  std::vector<Eigen::Vector4d> spectra;
  /// Largest off-diagonal entry of any V A_j V^{-1}.
  double offdiag_residual = 0.0;
  /// Largest |(V A_j V^{-1})_ii - q_j(u_i)|, with q_j read off the first column of A_j.
  double eigen_residual = 0.0;
  double residual() const { return std::max(offdiag_residual, eigen_residual); }
};

/// Simultaneous diagonalization by the Vandermonde matrix of the roots.
/// Throws std::invalid_argument if the matrices do not commute exactly or
/// two roots coincide within 1e-9.
Diagonalization diagonalize(const QuarticPoly& p, std::span<const IntMat4> mats);

struct IndependenceResult {
  bool independent = false;
  int rank = 0;
  double sigma_min = 0.0;
  /// L(i, j) = log |sigma_j(eps_i)|.
  Eigen::MatrixXd log_matrix;
};

inline constexpr double kIndependenceThreshold = 1e-6;

/// Numerical multiplicative-independence test through the rank of the
/// log-embedding matrix. Units must pass unit_matrix.
IndependenceResult mult_independence(const QuarticPoly& p, std::span<const UnitSpec> units);

struct LatticeChecks {
  bool integral = false;
  bool det_one = false;
  bool commute = false;
  double diagonalize_residual = 0.0;
  bool positive_spectra = false;
  int independence_rank = 0;
  double independence_sigma_min = 0.0;
};

struct LatticeCertificate {
  QuarticPoly poly;
  std::array<UnitSpec, 3> units;
  std::array<IntMat4, 3> matrices{};
  std::array<std::int64_t, 3> determinants{};
  std::array<double, 4> roots{};
  Eigen::Matrix4d vandermonde = Eigen::Matrix4d::Zero();
  std::array<Eigen::Vector4d, 3> spectra{};
  LatticeChecks checks;
  /// Set when the certificate was built for a registered example.
  std::optional<std::string> example;
  std::optional<bool> matches_reference;
  std::vector<std::string> failures;
  bool verdict = false;
};

inline constexpr double kDiagonalizeTolerance = 1e-9;

/// Runs every check and records failures instead of throwing.
LatticeCertificate certify_lattice(const QuarticPoly& p, const std::array<UnitSpec, 3>& units);

struct LatticeExample {
  std::string name;
  QuarticPoly poly;
  /// Multiplicatively independent units before squaring.
  std::array<UnitSpec, 3> base_units;
  /// Squares of base_units; these have positive embeddings.
  std::array<UnitSpec, 3> units;
  /// The published integer matrices, stored literally.
  std::array<IntMat4, 3> reference;
};

std::vector<std::string> builtin_example_names();
/// Throws std::invalid_argument for unknown names.
const LatticeExample& builtin_example(std::string_view name);

/// certify_lattice plus an exact comparison against the stored matrices.
LatticeCertificate certify_example(std::string_view name);

}  // namespace g2kit
