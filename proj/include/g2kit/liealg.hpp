#pragma once

// Solvable Lie algebras g_{A,B,C} = a x| n with a = <e7, e1, e2> abelian,
// n = <e3, ..., e6> an abelian ideal and ad e7|n = A, ad e1|n = B,
// ad e2|n = C (matrices in the basis e3..e6, column j is the image of e_{j+3}).

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "g2kit/forms.hpp"
#include "g2kit/numerics.hpp"

namespace g2kit {

struct BracketTriple {
  Mat4 A = Mat4::Zero();
  Mat4 B = Mat4::Zero();
  Mat4 C = Mat4::Zero();

  static BracketTriple diagonal(const Eigen::Vector4d& a, const Eigen::Vector4d& b,
                                const Eigen::Vector4d& c);
  BracketTriple scaled(double s) const { return {s * A, s * B, s * C}; }
  bool is_diagonal() const;
  /// Largest entry of the three pairwise commutators.
  double commutator_defect() const;
};

/// Full structure constants: bracket(i, j)[k] is the e_k coefficient of
/// [e_i, e_j], all indices 0-based in the order e1..e7.
class LieBracket {
 public:
  explicit LieBracket(const BracketTriple& t);
  Eigen::Matrix<double, 7, 1> operator()(int i, int j) const;
  double coeff(int i, int j, int k) const { return c_[i][j][k]; }
  void set(int i, int j, int k, double v);

  /// A bracket with explicitly given structure constants (antisymmetry is
  /// the caller's business).
  static LieBracket zero();

 private:
  LieBracket() = default;
  std::array<std::array<std::array<double, 7>, 7>, 7> c_{};
};

/// Chevalley-Eilenberg differential of g_{A,B,C} acting on left-invariant
/// forms: de^k(x, y) = -e^k([x, y]), extended as an antiderivation.
class CEDifferential {
 public:
  /// Throws std::invalid_argument when A, B, C fail to commute.
  explicit CEDifferential(const BracketTriple& t, const Numerics& num = {});
  KForm operator()(const KForm& a) const;
  const KForm& of_coframe(int k) const { return de_[k - 1]; }

 private:
  std::array<KForm, 7> de_;
};

KForm ce_differential(const BracketTriple& t, const KForm& a);

struct CompatibilityReport {
  bool independent = false;
  bool simultaneously_real_diagonalizable = false;
  /// Singular values of the 3x16 stacking of A, B, C.
  Eigen::Vector3d singular_values = Eigen::Vector3d::Zero();
  /// Columns are common real eigenvectors when diagonalizable.
  std::optional<Mat4> eigenbasis;
  bool compatible() const { return independent && simultaneously_real_diagonalizable; }
};

CompatibilityReport check_compatible(const BracketTriple& t, const Numerics& num = {});

/// Ricci operator of the left-invariant metric making e1..e7 orthonormal,
/// in the internal basis order e1..e7.
Mat7 ricci(const BracketTriple& t);

/// Reorders a 7x7 operator from (e1, ..., e7) to the display order
/// (e7, e1, e2, e3, ..., e6).
Mat7 to_display_order(const Mat7& m);
/// Inverse of to_display_order.
Mat7 from_display_order(const Mat7& m);

double scalar_curvature(const BracketTriple& t);

/// scal^2 / tr Ric^2. Throws std::domain_error on flat metrics.
double homothety_F(const BracketTriple& t);

struct SolvsolitonReport {
  bool is_solvsoliton = false;
  /// Eigenvalue c of Ric|a = c I when it is scalar.
  double lambda = 0.0;
  bool flat = false;
  bool normal = false;
  bool scalar_ricci_on_a = false;
};

SolvsolitonReport solvsoliton_check(const BracketTriple& t, const Numerics& num = {});

/// Parses "r0c0,r0c1,r0c2,r0c3;r1c0,...". Whitespace is ignored. Throws
/// std::invalid_argument on malformed input.
Mat4 parse_matrix4(std::string_view text);
std::string format_matrix(const Eigen::MatrixXd& m);

}  // namespace g2kit
