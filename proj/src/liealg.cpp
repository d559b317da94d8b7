#include "g2kit/liealg.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace g2kit {

namespace {

// Internal positions of the abelian factor a = <e7, e1, e2>.
constexpr std::array<int, 3> kAbelianSlots = {6, 0, 1};

double scale_of(const BracketTriple& t) {
  return std::max({t.A.cwiseAbs().maxCoeff(), t.B.cwiseAbs().maxCoeff(), t.C.cwiseAbs().maxCoeff()});
}

Mat4 sym(const Mat4& m) { return 0.5 * (m + m.transpose()); }

std::string trim(std::string_view s) {
  std::string out;
  for (char ch : s) {
    if (!std::isspace(static_cast<unsigned char>(ch))) out += ch;
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

BracketTriple BracketTriple::diagonal(const Eigen::Vector4d& a, const Eigen::Vector4d& b,
                                      const Eigen::Vector4d& c) {
  return {a.asDiagonal().toDenseMatrix(), b.asDiagonal().toDenseMatrix(), c.asDiagonal().toDenseMatrix()};
}

bool BracketTriple::is_diagonal() const {
  auto off = [](const Mat4& m) { return (m - Mat4(m.diagonal().asDiagonal())).cwiseAbs().maxCoeff(); };
  return off(A) == 0.0 && off(B) == 0.0 && off(C) == 0.0;
}

double BracketTriple::commutator_defect() const {
  auto comm = [](const Mat4& x, const Mat4& y) { return (x * y - y * x).cwiseAbs().maxCoeff(); };
  return std::max({comm(A, B), comm(A, C), comm(B, C)});
}

LieBracket::LieBracket(const BracketTriple& t) {
  const std::array<const Mat4*, 3> ads = {&t.A, &t.B, &t.C};
  for (int a = 0; a < 3; ++a) {
    const int x = kAbelianSlots[a];
    const Mat4& m = *ads[a];
    for (int j = 0; j < 4; ++j) {
      for (int i = 0; i < 4; ++i) {
        c_[x][j + 2][i + 2] = m(i, j);
        c_[j + 2][x][i + 2] = -m(i, j);
      }
    }
  }
}

LieBracket LieBracket::zero() { return LieBracket(); }

void LieBracket::set(int i, int j, int k, double v) { c_[i][j][k] = v; }

Eigen::Matrix<double, 7, 1> LieBracket::operator()(int i, int j) const {
  Eigen::Matrix<double, 7, 1> v;
  for (int k = 0; k < 7; ++k) v(k) = c_[i][j][k];
  return v;
}

CEDifferential::CEDifferential(const BracketTriple& t, const Numerics& num) {
  const double scale = std::max(1.0, scale_of(t));
  if (t.commutator_defect() > num.commute_tol * scale * scale) {
    throw std::invalid_argument("Jacobi identity fails: A, B, C do not pairwise commute");
  }
  const LieBracket mu(t);
  for (int k = 0; k < 7; ++k) {
    KForm f(2);
    for (int i = 0; i < 7; ++i) {
      for (int j = i + 1; j < 7; ++j) {
        const double c = mu.coeff(i, j, k);
        if (c != 0.0) f.add_term(MultiIndex{i + 1, j + 1}, -c);
      }
    }
    de_[k] = std::move(f);
  }
}

KForm CEDifferential::operator()(const KForm& a) const {
  if (a.degree() == kDim) return KForm(kDim);
  KForm out(a.degree() + 1);
  for (const auto& [idx, c] : a.terms()) {
    const std::vector<int> ind = idx.indices();
    for (std::size_t r = 0; r < ind.size(); ++r) {
      KForm left = KForm::scalar((r & 1) ? -c : c);
      for (std::size_t q = 0; q < r; ++q) left = wedge(left, KForm::basis({ind[q]}));
      KForm term = wedge(left, de_[ind[r] - 1]);
      for (std::size_t q = r + 1; q < ind.size(); ++q) term = wedge(term, KForm::basis({ind[q]}));
      out += term;
    }
  }
  return out;
}

KForm ce_differential(const BracketTriple& t, const KForm& a) { return CEDifferential(t)(a); }

CompatibilityReport check_compatible(const BracketTriple& t, const Numerics& num) {
  CompatibilityReport rep;

  Eigen::Matrix<double, 3, 16> stack;
  stack.row(0) = Eigen::Map<const Eigen::Matrix<double, 1, 16>>(t.A.data());
  stack.row(1) = Eigen::Map<const Eigen::Matrix<double, 1, 16>>(t.B.data());
  stack.row(2) = Eigen::Map<const Eigen::Matrix<double, 1, 16>>(t.C.data());
  Eigen::JacobiSVD<Eigen::Matrix<double, 3, 16>> svd(stack);
  rep.singular_values = svd.singularValues();
  const double smax = rep.singular_values(0);
  rep.independent = smax > 0.0 && rep.singular_values(2) > num.rank_tol * smax;

  // A generic combination shares its eigenvectors with every member of a
  // simultaneously diagonalizable commuting family.
  const Mat4 x = t.A + std::sqrt(2.0) * t.B + std::sqrt(3.0) * t.C;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  Eigen::EigenSolver<Mat4> es(x);
  if (es.info() != Eigen::Success) return rep;
  if (es.eigenvalues().imag().cwiseAbs().maxCoeff() > num.real_eig_tol * scale) return rep;

  const Mat4 v = es.eigenvectors().real();
  Eigen::JacobiSVD<Mat4> vsvd(v);
  const auto& sv = vsvd.singularValues();
  if (sv(3) <= 1e-7 * sv(0)) return rep;

  const Mat4 vinv = v.inverse();
  for (const Mat4* m : {&t.A, &t.B, &t.C}) {
    Mat4 conj = vinv * (*m) * v;
    conj.diagonal().setZero();
    if (conj.cwiseAbs().maxCoeff() > 1e-8 * std::max(1.0, m->cwiseAbs().maxCoeff())) return rep;
  }
  rep.simultaneously_real_diagonalizable = true;
  rep.eigenbasis = v;
  return rep;
}

Mat7 ricci(const BracketTriple& t) {
  Mat7 ric = Mat7::Zero();
  const std::array<Mat4, 3> s = {sym(t.A), sym(t.B), sym(t.C)};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ric(kAbelianSlots[i], kAbelianSlots[j]) = -(s[i] * s[j]).trace();
    }
  }
  Mat4 rn = Mat4::Zero();
  for (const Mat4* m : {&t.A, &t.B, &t.C}) {
    rn += 0.5 * ((*m) * m->transpose() - m->transpose() * (*m));
  }
  ric.block<4, 4>(2, 2) = rn;
  return ric;
}

Mat7 to_display_order(const Mat7& m) {
  static constexpr std::array<int, 7> order = {6, 0, 1, 2, 3, 4, 5};
  Mat7 out;
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) out(i, j) = m(order[i], order[j]);
  }
  return out;
}

Mat7 from_display_order(const Mat7& m) {
  static constexpr std::array<int, 7> order = {6, 0, 1, 2, 3, 4, 5};
  Mat7 out;
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) out(order[i], order[j]) = m(i, j);
  }
  return out;
}

double scalar_curvature(const BracketTriple& t) { return ricci(t).trace(); }

double homothety_F(const BracketTriple& t) {
  const Mat7 ric = ricci(t);
  const double tr2 = (ric * ric).trace();
  if (!(tr2 > 0.0)) throw std::domain_error("F undefined on flat metrics");
  const double scal = ric.trace();
  return scal * scal / tr2;
}

SolvsolitonReport solvsoliton_check(const BracketTriple& t, const Numerics& num) {
  SolvsolitonReport rep;
  const Mat7 ric = ricci(t);
  const double scale = std::max(1.0, scale_of(t));
  const double tol = num.soliton_tol * scale * scale;
  if (ric.cwiseAbs().maxCoeff() <= tol) {
    rep.flat = true;
    return rep;
  }
  rep.normal = true;
  for (const Mat4* m : {&t.A, &t.B, &t.C}) {
    if (((*m) * m->transpose() - m->transpose() * (*m)).cwiseAbs().maxCoeff() > tol) rep.normal = false;
  }
  Eigen::Matrix3d ra;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) ra(i, j) = ric(kAbelianSlots[i], kAbelianSlots[j]);
  }
  const double c = ra.trace() / 3.0;
  rep.scalar_ricci_on_a = (ra - c * Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= tol;
  rep.is_solvsoliton = rep.normal && rep.scalar_ricci_on_a;
  if (rep.scalar_ricci_on_a) rep.lambda = c;
  return rep;
}

Mat4 parse_matrix4(std::string_view text) {
  const std::string s = trim(text);
  const auto rows = split(s, ';');
  if (rows.size() != 4) throw std::invalid_argument("matrix literal needs 4 rows separated by ';'");
  Mat4 m;
  for (int i = 0; i < 4; ++i) {
    const auto cols = split(rows[i], ',');
    if (cols.size() != 4) throw std::invalid_argument("matrix row needs 4 entries separated by ','");
    for (int j = 0; j < 4; ++j) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cols[j], &used);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad matrix entry '" + cols[j] + "'");
      }
      if (used != cols[j].size()) throw std::invalid_argument("bad matrix entry '" + cols[j] + "'");
      m(i, j) = v;
    }
  }
  return m;
}

std::string format_matrix(const Eigen::MatrixXd& m) {
  std::ostringstream os;
  os.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) os << ';';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      os << m(i, j);
    }
  }
  return os.str();
}

}  // namespace g2kit
