#pragma once

// Exterior algebra over the fixed oriented Euclidean space R^7 with
// orthonormal coframe e^1, ..., e^7 and volume form e^{1234567}.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace g2kit {

inline constexpr int kDim = 7;

using Mat4 = Eigen::Matrix4d;
using Mat7 = Eigen::Matrix<double, 7, 7>;

/// Coefficients with magnitude below this are dropped after arithmetic.
inline constexpr double kPruneThreshold = 1e-14;

/// Strictly increasing index set drawn from 1..7. Bit (i-1) of the mask
/// marks the presence of e^i.
class MultiIndex {
 public:
  constexpr MultiIndex() = default;
  MultiIndex(std::initializer_list<int> indices);

  static MultiIndex from_mask(std::uint8_t mask);
  static MultiIndex from_indices(const std::vector<int>& indices);

  std::uint8_t mask() const { return mask_; }
  int degree() const;
  bool contains(int i) const { return (mask_ >> (i - 1)) & 1u; }
  std::vector<int> indices() const;
  std::string to_string() const;

  friend bool operator==(MultiIndex a, MultiIndex b) = default;
  /// Lexicographic on the increasing index sequences, so {1,2} < {1,3} < {2}.
  friend std::strong_ordering operator<=>(MultiIndex a, MultiIndex b);

 private:
  std::uint8_t mask_ = 0;
};

/// Homogeneous k-form stored sparsely; zero coefficients never appear in
/// the map. Sums are only defined between forms of equal degree.
class KForm {
 public:
  explicit KForm(int degree = 0);

  static KForm monomial(MultiIndex idx, double coeff = 1.0);
  static KForm basis(std::initializer_list<int> idx, double coeff = 1.0);
  static KForm scalar(double value);

  int degree() const { return degree_; }
  const std::map<MultiIndex, double>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  double coeff(MultiIndex idx) const;
  /// Accumulates c into the coefficient of idx and prunes the result.
  void add_term(MultiIndex idx, double c);

  double norm() const;

  KForm& operator+=(const KForm& other);
  KForm& operator-=(const KForm& other);
  KForm& operator*=(double s);

  friend KForm operator+(KForm a, const KForm& b) { return a += b; }
  friend KForm operator-(KForm a, const KForm& b) { return a -= b; }
  friend KForm operator*(double s, KForm a) { return a *= s; }
  friend KForm operator*(KForm a, double s) { return a *= s; }
  friend KForm operator-(KForm a) { return a *= -1.0; }

  friend bool operator==(const KForm&, const KForm&) = default;

 private:
  int degree_;
  std::map<MultiIndex, double> terms_;
};

/// Exterior product. When deg a + deg b exceeds 7 the result is the zero
/// form of degree 7.
KForm wedge(const KForm& a, const KForm& b);

/// Hodge star; *e^I = s e^{I^c} where e^I ^ e^{I^c} = s vol. On this space
/// ** is the identity in every degree.
KForm hodge(const KForm& a);

/// Contraction with the basis vector e_v (v in 1..7).
KForm interior(int v, const KForm& a);

/// Inner product induced by the orthonormal coframe. Throws
/// std::invalid_argument on a degree mismatch.
double inner(const KForm& a, const KForm& b);

/// Derivation action of a 4x4 matrix on forms: D acts on the e^3..e^6
/// slots by (theta(D) alpha)(x, ...) = -alpha(Dx, ...) - ..., so
/// theta(D) e^k = -sum_i D(k,i) e^i, and by zero on e^1, e^2, e^7.
KForm theta(const Mat4& d, const KForm& a);

/// Same rule for a 7x7 matrix acting on all indices; rows and columns are
/// in the basis order (e_1, ..., e_7).
KForm theta(const Mat7& d, const KForm& a);

/// max |a_I - b_I| over the union of supports. Degrees must agree unless
/// one side is zero.
double max_abs_diff(const KForm& a, const KForm& b);

/// Signed monomial sum, e.g. "+1.000 e^{127} -1.000 e^{146}". The zero
/// form renders as "0".
std::string to_string(const KForm& a, int precision = 3);

/// Standard forms of the G2 model on R^7.
namespace std_forms {
KForm vol();
KForm phi();
KForm psi();
KForm omega7();
KForm omega1();
KForm omega2();
KForm omegabar7();
KForm omegabar1();
KForm omegabar2();
}  // namespace std_forms

}  // namespace g2kit
