#include "g2kit/numberlat.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace g2kit {

namespace {

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("64-bit integer overflow");
  return r;
}

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("64-bit integer overflow");
  return r;
}

__int128 det3(const IntMat4& m, int skip_row, int skip_col) {
  std::array<int, 3> rows{}, cols{};
  for (int i = 0, r = 0, c = 0; i < 4; ++i) {
    if (i != skip_row) rows[r++] = i;
    if (i != skip_col) cols[c++] = i;
  }
  auto e = [&](int i, int j) { return static_cast<__int128>(m[rows[i]][cols[j]]); };
  return e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0)) +
         e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  const std::int64_t m = n < 0 ? -n : n;
  for (std::int64_t d = 1; d * d <= m; ++d) {
    if (m % d) continue;
    for (std::int64_t x : {d, m / d}) {
      out.push_back(x);
      out.push_back(-x);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_square(__int128 n, __int128& root) {
  if (n < 0) return false;
  auto r = static_cast<__int128>(std::llround(std::sqrt(static_cast<long double>(n))));
  for (__int128 c = r - 2; c <= r + 2; ++c) {
    if (c >= 0 && c * c == n) {
      root = c;
      return true;
    }
  }
  return false;
}

// Integer quadratic factorization t^4 + a3 t^3 + a2 t^2 + a1 t + a0 =
// (t^2 + b t + c)(t^2 + d t + e).
bool has_quadratic_factor(const QuarticPoly& p) {
  const auto [a0, a1, a2, a3] = p.a;
  for (std::int64_t c : divisors(a0)) {
    const std::int64_t e = a0 / c;
    const __int128 prod = static_cast<__int128>(a2) - c - e;  // b d
    const __int128 disc = static_cast<__int128>(a3) * a3 - 4 * prod;
    __int128 s;
    if (!is_square(disc, s)) continue;
    if ((a3 + s) % 2 != 0) continue;
    for (__int128 b : {(a3 + s) / 2, (a3 - s) / 2}) {
      const __int128 d = a3 - b;
      if (b * e + c * d == a1) return true;
    }
  }
  return false;
}

std::array<std::complex<double>, 4> complex_roots(const QuarticPoly& p) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  for (int i = 1; i < 4; ++i) m(i, i - 1) = 1.0;
  for (int i = 0; i < 4; ++i) m(i, 3) = -static_cast<double>(p.a[i]);
  Eigen::EigenSolver<Eigen::Matrix4d> es(m, false);
  std::array<std::complex<double>, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = es.eigenvalues()(i);
  return out;
}

double eval_reduced(const UnitSpec& q, double x) {
  double v = 0.0;
  for (auto it = q.coeffs.rbegin(); it != q.coeffs.rend(); ++it) v = v * x + static_cast<double>(*it);
  return v;
}

IntMat4 from_rows(std::initializer_list<std::array<std::int64_t, 4>> rows) {
  IntMat4 m{};
  int i = 0;
  for (const auto& r : rows) m[i++] = r;
  return m;
}

std::vector<LatticeExample> make_registry() {
  std::vector<LatticeExample> reg;

  {
    LatticeExample ex;
    ex.name = "kl-2015";
    ex.poly = QuarticPoly{{1, 4, -4, -1}};
    // u1, u2 = u1^2 - 2, u3 = u2^2 - 2.
    ex.base_units = {UnitSpec{{0, 1}}, UnitSpec{{-2, 0, 1}}, UnitSpec{{2, 0, -4, 0, 1}}};
    ex.reference = {
        from_rows({{0, 0, -1, -1}, {0, 0, -4, -5}, {1, 0, 4, 0}, {0, 1, 1, 5}}),
        from_rows({{3, -1, -1, -1}, {-4, -1, -5, -5}, {0, 0, 3, -1}, {1, 1, 1, 4}}),
        from_rows({{4, 1, 2, 3}, {3, 8, 9, 14}, {-1, -1, 0, -3}, {-1, -2, -3, -3}}),
    };
    reg.push_back(ex);
  }
  {
    LatticeExample ex;
    ex.name = "kl-sqrt3";
    ex.poly = QuarticPoly{{1, 0, -4, 0}};
    ex.base_units = {UnitSpec{{0, 1}}, UnitSpec{{1, 2}}, UnitSpec{{1, 1, -2, -1}}};
    ex.reference = {
        from_rows({{0, 0, -1, 0}, {0, 0, 0, -1}, {1, 0, 4, 0}, {0, 1, 0, 4}}),
        from_rows({{1, 0, -4, -4}, {4, 1, 0, -4}, {4, 4, 17, 16}, {0, 4, 4, 17}}),
        from_rows({{-5, -10, -20, -38}, {-2, -5, -10, -20}, {20, 38, 75, 142}, {10, 20, 38, 75}}),
    };
    reg.push_back(ex);
  }
  for (auto& ex : reg) {
    for (int i = 0; i < 3; ++i) ex.units[i] = poly_mul(ex.base_units[i], ex.base_units[i]);
  }
  return reg;
}

const std::vector<LatticeExample>& registry() {
  static const std::vector<LatticeExample> reg = make_registry();
  return reg;
}

}  // namespace

double QuarticPoly::eval(double t) const {
  return (((t + a[3]) * t + a[2]) * t + a[1]) * t + a[0];
}

double QuarticPoly::deriv(double t) const { return ((4 * t + 3 * a[3]) * t + 2 * a[2]) * t + a[1]; }

std::string QuarticPoly::to_string() const {
  std::ostringstream os;
  os << "t^4";
  const char* powers[] = {"", " t", " t^2", " t^3"};
  for (int i = 3; i >= 0; --i) {
    if (a[i] == 0) continue;
    os << (a[i] < 0 ? " - " : " + ") << std::llabs(a[i]) << powers[i];
  }
  return os.str();
}

PolyCheck validate(const QuarticPoly& p) {
  PolyCheck c;
  c.irreducible = true;
  if (p.a[0] == 0) {
    c.irreducible = false;
    c.reason = "reducible: t divides p";
  } else {
    for (std::int64_t r : divisors(p.a[0])) {
      __int128 v = 0;
      for (int i = 4; i >= 0; --i) v = v * r + (i == 4 ? 1 : p.a[i]);
      if (v == 0) {
        c.irreducible = false;
        c.reason = "reducible: rational root " + std::to_string(r);
        break;
      }
    }
    if (c.irreducible && has_quadratic_factor(p)) {
      c.irreducible = false;
      c.reason = "reducible: product of two integer quadratics";
    }
  }

  const auto roots = complex_roots(p);
  c.totally_real = true;
  for (const auto& z : roots) {
    if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z))) c.totally_real = false;
  }
  if (!c.totally_real && c.reason.empty()) c.reason = "not totally real: p has non-real roots";
  return c;
}

UnitSpec poly_mul(const UnitSpec& x, const UnitSpec& y) {
  if (x.coeffs.empty() || y.coeffs.empty()) return UnitSpec{};
  UnitSpec out;
  out.coeffs.assign(x.coeffs.size() + y.coeffs.size() - 1, 0);
  for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
    for (std::size_t j = 0; j < y.coeffs.size(); ++j) {
      out.coeffs[i + j] = checked_add(out.coeffs[i + j], checked_mul(x.coeffs[i], y.coeffs[j]));
    }
  }
  return out;
}

UnitSpec reduce(const QuarticPoly& p, const UnitSpec& q) {
  std::vector<std::int64_t> c = q.coeffs;
  // t^4 = -(a3 t^3 + a2 t^2 + a1 t + a0), applied from the top degree down.
  for (std::size_t deg = c.size(); deg-- > 4;) {
    const std::int64_t lead = c[deg];
    c[deg] = 0;
    if (lead == 0) continue;
    for (int i = 0; i < 4; ++i) c[deg - 4 + i] = checked_add(c[deg - 4 + i], checked_mul(-lead, p.a[i]));
  }
  c.resize(4, 0);
  return UnitSpec{c};
}

IntMat4 identity4() {
  IntMat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1;
  return m;
}

IntMat4 multiply(const IntMat4& x, const IntMat4& y) {
  IntMat4 out{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      std::int64_t s = 0;
      for (int k = 0; k < 4; ++k) s = checked_add(s, checked_mul(x[i][k], y[k][j]));
      out[i][j] = s;
    }
  }
  return out;
}

std::int64_t determinant(const IntMat4& m) {
  __int128 det = 0;
  for (int j = 0; j < 4; ++j) {
    const __int128 term = static_cast<__int128>(m[0][j]) * det3(m, 0, j);
    det += (j % 2 == 0) ? term : -term;
  }
  if (det > std::numeric_limits<std::int64_t>::max() || det < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("determinant exceeds 64 bits");
  }
  return static_cast<std::int64_t>(det);
}

bool commute(const IntMat4& x, const IntMat4& y) { return multiply(x, y) == multiply(y, x); }

Eigen::Matrix4d to_real(const IntMat4& m) {
  Eigen::Matrix4d out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) = static_cast<double>(m[i][j]);
  }
  return out;
}

IntMat4 companion(const QuarticPoly& p) {
  const PolyCheck c = validate(p);
  if (!c.ok()) throw std::invalid_argument(c.reason);
  IntMat4 m{};
  for (int i = 1; i < 4; ++i) m[i][i - 1] = 1;
  for (int i = 0; i < 4; ++i) m[i][3] = -p.a[i];
  return m;
}

IntMat4 unit_matrix(const QuarticPoly& p, const UnitSpec& q) {
  const IntMat4 m = companion(p);
  const UnitSpec r = reduce(p, q);
  IntMat4 out{};
  IntMat4 power = identity4();
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) out[i][j] = checked_add(out[i][j], checked_mul(r.coeffs[k], power[i][j]));
    }
    power = multiply(power, m);
  }
  const std::int64_t det = determinant(out);
  if (det != 1 && det != -1) throw std::domain_error("not a unit (det = " + std::to_string(det) + ")");
  return out;
}

std::array<double, 4> real_roots(const QuarticPoly& p) {
  const auto z = complex_roots(p);
  std::array<double, 4> r{};
  for (int i = 0; i < 4; ++i) {
    if (std::abs(z[i].imag()) > 1e-8 * std::max(1.0, std::abs(z[i]))) {
      throw std::invalid_argument("not totally real: p has non-real roots");
    }
    double x = z[i].real();
    for (int it = 0; it < 50; ++it) {
      const double dp = p.deriv(x);
      if (dp == 0.0) break;
      const double step = p.eval(x) / dp;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    r[i] = x;
  }
  std::sort(r.begin(), r.end(), std::greater<>());
  return r;
}

Eigen::Matrix4d vandermonde(const std::array<double, 4>& roots) {
  Eigen::Matrix4d v;
  for (int i = 0; i < 4; ++i) {
    double x = 1.0;
    for (int j = 0; j < 4; ++j) {
      v(i, j) = x;
      x *= roots[i];
    }
  }
  return v;
}

Diagonalization diagonalize(const QuarticPoly& p, std::span<const IntMat4> mats) {
  for (std::size_t i = 0; i < mats.size(); ++i) {
    for (std::size_t j = i + 1; j < mats.size(); ++j) {
      if (!commute(mats[i], mats[j])) throw std::invalid_argument("matrices do not commute");
    }
  }
  Diagonalization out;
  out.roots = real_roots(p);
  for (int i = 0; i + 1 < 4; ++i) {
    if (std::abs(out.roots[i] - out.roots[i + 1]) < 1e-9) {
      throw std::invalid_argument("repeated roots: the split torus degenerates");
    }
  }
  out.vandermonde = vandermonde(out.roots);
  const Eigen::Matrix4d vinv = out.vandermonde.inverse();
  for (const IntMat4& a : mats) {
    Eigen::Matrix4d d = out.vandermonde * to_real(a) * vinv;
    Eigen::Vector4d diag = d.diagonal();
    out.spectra.push_back(diag);
    d.diagonal().setZero();
    out.offdiag_residual = std::max(out.offdiag_residual, d.cwiseAbs().maxCoeff());
    // a = q(M) with q(u) * 1 = first column of a in the basis 1, u, u^2, u^3.
    UnitSpec q{{a[0][0], a[1][0], a[2][0], a[3][0]}};
    for (int i = 0; i < 4; ++i) {
      out.eigen_residual = std::max(out.eigen_residual, std::abs(diag(i) - eval_reduced(q, out.roots[i])));
    }
  }
  return out;
}

IndependenceResult mult_independence(const QuarticPoly& p, std::span<const UnitSpec> units) {
  for (const UnitSpec& u : units) unit_matrix(p, u);
  const auto roots = real_roots(p);
  IndependenceResult res;
  res.log_matrix.resize(static_cast<Eigen::Index>(units.size()), 4);
  for (std::size_t i = 0; i < units.size(); ++i) {
    const UnitSpec r = reduce(p, units[i]);
    for (int j = 0; j < 4; ++j) {
      res.log_matrix(static_cast<Eigen::Index>(i), j) = std::log(std::abs(eval_reduced(r, roots[j])));
    }
  }
  if (units.empty()) {
    res.independent = true;
    return res;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(res.log_matrix);
  const Eigen::VectorXd sv = svd.singularValues();
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > kIndependenceThreshold) ++res.rank;
  }
  // Rows beyond the number of singular values are dependent automatically.
  res.sigma_min = static_cast<Eigen::Index>(units.size()) > sv.size() ? 0.0 : sv(sv.size() - 1);
  res.independent = res.rank == static_cast<int>(units.size());
  return res;
}

LatticeCertificate certify_lattice(const QuarticPoly& p, const std::array<UnitSpec, 3>& units) {
  LatticeCertificate cert;
  cert.poly = p;
  cert.units = units;

  const PolyCheck pc = validate(p);
  if (!pc.ok()) {
    cert.failures.push_back("polynomial: " + pc.reason);
    return cert;
  }

  cert.checks.integral = true;
  cert.checks.det_one = true;
  try {
    const IntMat4 m = companion(p);
    for (int j = 0; j < 3; ++j) {
      const UnitSpec r = reduce(p, units[j]);
      IntMat4 out{};
      IntMat4 power = identity4();
      for (int k = 0; k < 4; ++k) {
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 4; ++b) out[a][b] = checked_add(out[a][b], checked_mul(r.coeffs[k], power[a][b]));
        }
        power = multiply(power, m);
      }
      cert.matrices[j] = out;
      cert.determinants[j] = determinant(out);
      if (cert.determinants[j] != 1) {
        cert.checks.det_one = false;
        cert.failures.push_back("unit " + std::to_string(j + 1) + ": det = " + std::to_string(cert.determinants[j]));
      }
    }
  } catch (const std::overflow_error& e) {
    cert.checks.integral = false;
    cert.checks.det_one = false;
    cert.failures.push_back(std::string("integer arithmetic: ") + e.what());
    return cert;
  }

  cert.checks.commute = commute(cert.matrices[0], cert.matrices[1]) && commute(cert.matrices[0], cert.matrices[2]) &&
                        commute(cert.matrices[1], cert.matrices[2]);
  if (!cert.checks.commute) cert.failures.push_back("matrices do not commute");

  try {
    const Diagonalization d = diagonalize(p, cert.matrices);
    cert.roots = d.roots;
    cert.vandermonde = d.vandermonde;
    for (int j = 0; j < 3; ++j) cert.spectra[j] = d.spectra[j];
    cert.checks.diagonalize_residual = d.residual();
    if (d.residual() >= kDiagonalizeTolerance) cert.failures.push_back("diagonalization residual too large");
    cert.checks.positive_spectra = true;
    for (const auto& s : d.spectra) {
      if (s.minCoeff() <= 0.0) cert.checks.positive_spectra = false;
    }
    if (!cert.checks.positive_spectra) cert.failures.push_back("non-positive eigenvalue: generator not in exp(a)");
  } catch (const std::invalid_argument& e) {
    cert.checks.diagonalize_residual = std::numeric_limits<double>::infinity();
    cert.failures.push_back(std::string("diagonalization: ") + e.what());
  }

  if (cert.checks.det_one) {
    const IndependenceResult ind = mult_independence(p, units);
    cert.checks.independence_rank = ind.rank;
    cert.checks.independence_sigma_min = ind.sigma_min;
    if (!ind.independent) cert.failures.push_back("units are multiplicatively dependent");
  } else {
    cert.failures.push_back("independence not evaluated: some element is not a unit");
  }

  cert.verdict = cert.failures.empty() && cert.checks.integral && cert.checks.det_one && cert.checks.commute &&
                 cert.checks.diagonalize_residual < kDiagonalizeTolerance && cert.checks.positive_spectra &&
                 cert.checks.independence_rank == 3;
  return cert;
}

std::vector<std::string> builtin_example_names() {
  std::vector<std::string> names;
  for (const auto& ex : registry()) names.push_back(ex.name);
  return names;
}

const LatticeExample& builtin_example(std::string_view name) {
  for (const auto& ex : registry()) {
    if (ex.name == name) return ex;
  }
  throw std::invalid_argument("unknown lattice example '" + std::string(name) + "'");
}

LatticeCertificate certify_example(std::string_view name) {
  const LatticeExample& ex = builtin_example(name);
  LatticeCertificate cert = certify_lattice(ex.poly, ex.units);
  cert.example = ex.name;
  cert.matches_reference = cert.matrices == ex.reference;
  if (!*cert.matches_reference) {
    cert.failures.push_back("matrices differ from the stored reference");
    cert.verdict = false;
  }
  return cert;
}

}  // namespace g2kit
