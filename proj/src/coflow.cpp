#include "g2kit/coflow.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "g2kit/g2core.hpp"

namespace g2kit {

namespace {

constexpr int kE1 = 0, kE2 = 1, kE7 = 6;

// Degree-4 multi-indices in a fixed order, for least squares on 4-forms.
const std::vector<std::uint8_t>& four_masks() {
  static const std::vector<std::uint8_t> masks = [] {
    std::vector<std::uint8_t> m;
    for (int mask = 0; mask < 128; ++mask) {
      if (std::popcount(static_cast<unsigned>(mask)) == 4) m.push_back(static_cast<std::uint8_t>(mask));
    }
    return m;
  }();
  return masks;
}

Eigen::VectorXd flatten4(const KForm& a) {
  const auto& masks = four_masks();
  Eigen::VectorXd v(static_cast<Eigen::Index>(masks.size()));
  for (std::size_t i = 0; i < masks.size(); ++i) v(static_cast<Eigen::Index>(i)) = a.coeff(MultiIndex::from_mask(masks[i]));
  return v;
}

Mat7 n_diagonal(const std::array<double, 4>& d) {
  Mat7 m = Mat7::Zero();
  for (int i = 0; i < 4; ++i) m(i + 2, i + 2) = d[i];
  return m;
}

struct LsqResult {
  double residual = 0.0;
  Eigen::Matrix<double, 5, 1> x = Eigen::Matrix<double, 5, 1>::Zero();
};

// min over (lambda, d3..d6) of |target - lambda psi - derivation_action(D) psi|.
LsqResult fit_soliton(const KForm& target, const KForm& psi) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(four_masks().size()), 5);
  m.col(0) = flatten4(psi);
  for (int k = 0; k < 4; ++k) {
    std::array<double, 4> unit{};
    unit[k] = 1.0;
    m.col(k + 1) = flatten4(derivation_action(n_diagonal(unit), psi));
  }
  const Eigen::VectorXd b = flatten4(target);
  LsqResult out;
  out.x = m.completeOrthogonalDecomposition().solve(b);
  out.residual = (b - m * out.x).norm();
  return out;
}

double safe_F(const BracketTriple& t) {
  try {
    return homothety_F(t);
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

Vec6 rhs(const Vec6& y) { return ode_rhs(CoclosedParams::from_vec(y)).vec(); }

bool finite(const Vec6& y) { return y.allFinite(); }

Vec6 unit_direction(const CoclosedParams& p) {
  const Vec6 v = p.vec();
  const double n = v.norm();
  return n > 0.0 ? Vec6(v / n) : Vec6(Vec6::Zero());
}

double trailing_drift(const FlowTrajectory& traj, double window) {
  const auto& s = traj.samples;
  const Vec6 last = unit_direction(s.back().p);
  const double t_end = s.back().t;
  double drift = 0.0;
  for (auto it = s.rbegin(); it != s.rend() && it->t >= t_end - window; ++it) {
    drift = std::max(drift, (unit_direction(it->p) - last).norm());
  }
  return drift;
}

}  // namespace

CoclosedParams CoclosedParams::from_vec(const Vec6& v) { return {v(0), v(1), v(2), v(3), v(4), v(5)}; }

Vec6 CoclosedParams::vec() const {
  Vec6 v;
  v << a1, a2, b1, b2, c1, c2;
  return v;
}

BracketTriple CoclosedParams::triple() const {
  return BracketTriple::diagonal(Eigen::Vector4d(a1, -a1, a2, -a2), Eigen::Vector4d(b1, b2, -b1, -b2),
                                 Eigen::Vector4d(c1, c2, -c2, -c1));
}

double CoclosedParams::norm_sq() const { return vec().squaredNorm(); }

CoclosedParams family46(double a, double b, double c) { return {a, a, b, -b, c, c}; }
CoclosedParams family47(double a, double b, double c1, double c2) { return {a, a, b, b, c1, c2}; }
CoclosedParams family48(double a, double b, double c) { return {a, a, b, b, c, c}; }

RST rst(const CoclosedParams& p) {
  auto sq = [](double x) { return x * x; };
  return {sq(p.b1 + p.b2) + sq(p.c1 + p.c2), sq(p.b1 - p.b2) + sq(p.a1 - p.a2), sq(p.c1 - p.c2) + sq(p.a1 + p.a2)};
}

RST rst_from_laplacian(const CoclosedParams& p) {
  const KForm lap = laplacians(G2Structure(p.triple())).psi_lap;
  const KForm r_dir = wedge(std_forms::omega7(), KForm::basis({1, 2}));
  const KForm s_dir = wedge(std_forms::omega2(), KForm::basis({1, 7}));
  const KForm t_dir = wedge(std_forms::omega1(), KForm::basis({2, 7}));
  return {inner(lap, r_dir) / inner(r_dir, r_dir), -inner(lap, s_dir) / inner(s_dir, s_dir),
          inner(lap, t_dir) / inner(t_dir, t_dir)};
}

Mat7 q_mu(const RST& v) {
  Mat7 q = Mat7::Zero();
  q(kE7, kE7) = 0.5 * (-v.r + v.s + v.t);
  q(kE1, kE1) = 0.5 * (v.r + v.s - v.t);
  q(kE2, kE2) = 0.5 * (v.r - v.s + v.t);
  return q;
}

Mat7 q_mu(const CoclosedParams& p) { return q_mu(rst(p)); }

CoclosedParams ode_rhs(const CoclosedParams& p) {
  const double fa = -(p.a1 * p.a1 + p.a2 * p.a2) + 2 * p.b1 * p.b2 + 2 * p.c1 * p.c2;
  const double fb = -(p.b1 * p.b1 + p.b2 * p.b2) + 2 * p.a1 * p.a2 - 2 * p.c1 * p.c2;
  const double fc = -(p.c1 * p.c1 + p.c2 * p.c2) - 2 * p.a1 * p.a2 - 2 * p.b1 * p.b2;
  return {fa * p.a1, fa * p.a2, fb * p.b1, fb * p.b2, fc * p.c1, fc * p.c2};
}

BracketFlowDerivative bracket_flow_rhs(const CoclosedParams& p, const Mat7& q) {
  const LieBracket mu(p.triple());
  // (theta(Q) mu)(x, y) = Q mu(x, y) - mu(Qx, y) - mu(x, Qy).
  std::array<std::array<std::array<double, 7>, 7>, 7> dmu{};
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      for (int k = 0; k < 7; ++k) {
        double v = 0.0;
        for (int l = 0; l < 7; ++l) {
          v += q(k, l) * mu.coeff(i, j, l) - q(l, i) * mu.coeff(l, j, k) - q(l, j) * mu.coeff(i, l, k);
        }
        dmu[i][j][k] = v;
      }
    }
  }
  BracketFlowDerivative out;
  // a1 = [e7, e3]_3, a2 = [e7, e5]_5, b1 = [e1, e3]_3, b2 = [e1, e4]_4,
  // c1 = [e2, e3]_3, c2 = [e2, e4]_4.
  auto& d = out.dparams;
  d.a1 = dmu[kE7][2][2];
  d.a2 = dmu[kE7][4][4];
  d.b1 = dmu[kE1][2][2];
  d.b2 = dmu[kE1][3][3];
  d.c1 = dmu[kE2][2][2];
  d.c2 = dmu[kE2][3][3];
  const LieBracket tangent(d.triple());
  for (int i = 0; i < 7; ++i) {
    for (int j = 0; j < 7; ++j) {
      for (int k = 0; k < 7; ++k) {
        out.off_family = std::max(out.off_family, std::abs(dmu[i][j][k] - tangent.coeff(i, j, k)));
      }
    }
  }
  return out;
}

KForm derivation_action(const Mat7& d, const KForm& a) { return -theta(d, a); }

double soliton_equation_residual(const CoclosedParams& p, double lambda, double d) {
  const G2Structure s(p.triple());
  const KForm lap = laplacians(s).psi_lap;
  const KForm rest = lap - lambda * s.psi - derivation_action(n_diagonal({d, d, d, d}), s.psi);
  return rest.norm();
}

std::vector<SolitonSolution> soliton_solve(double a1, double a2, double b1, double b2, const Numerics& num) {
  const double x = (a1 - a2) * (a1 - a2) - 4 * b1 * b2;
  const double y = (b1 - b2) * (b1 - b2) - 4 * a1 * a2;
  const double scale = std::max({1.0, a1 * a1, a2 * a2, b1 * b1, b2 * b2});
  const double slack = 1e-12 * scale;
  std::vector<SolitonSolution> out;
  if (x < -slack || y < -slack) return out;
  const double sx = std::sqrt(std::max(x, 0.0));
  const double sy = std::sqrt(std::max(y, 0.0));
  const double lambda = 2 * ((a1 - a2) * (a1 - a2) + (b1 - b2) * (b1 - b2));
  for (double u : {sx, -sx}) {
    for (double v : {sy, -sy}) {
      const double c1 = 0.5 * (u + v);
      const double c2 = 0.5 * (u - v);
      const bool seen = std::any_of(out.begin(), out.end(), [&](const SolitonSolution& s) {
        return std::abs(s.params.c1 - c1) <= 1e-12 * std::sqrt(scale) &&
               std::abs(s.params.c2 - c2) <= 1e-12 * std::sqrt(scale);
      });
      if (seen) continue;
      SolitonSolution sol;
      sol.params = {a1, a2, b1, b2, c1, c2};
      sol.lambda = lambda;
      sol.d = -lambda / 4;
      sol.residual = soliton_equation_residual(sol.params, sol.lambda, sol.d);
      sol.compatible = check_compatible(sol.params.triple(), num).compatible();
      out.push_back(sol);
    }
  }
  return out;
}

SolitonFit soliton_residual(const CoclosedParams& p) {
  SolitonFit fit;
  if (p.norm_sq() == 0.0) {
    fit.degenerate = true;
    return fit;
  }
  const G2Structure s(p.triple());
  const LsqResult r = fit_soliton(laplacians(s).psi_lap, s.psi);
  fit.residual = r.residual;
  fit.best_lambda = r.x(0);
  for (int k = 0; k < 4; ++k) fit.best_D[k] = r.x(k + 1);
  return fit;
}

double modified_soliton_residual(const CoclosedParams& p, double m) {
  if (m == 0.0) throw std::invalid_argument("modified coflow needs m != 0");
  const G2Structure s(p.triple());
  const KForm dphi = ce_differential(s.triple, s.phi);
  const KForm target = laplacians(s).psi_lap + 2.0 * (m - trace_torsion(s)) * dphi;
  return fit_soliton(target, s.psi).residual;
}

std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::running: return "running";
    case FlowStatus::converged: return "converged";
    case FlowStatus::diverged: return "diverged";
    case FlowStatus::max_time: return "max_time";
  }
  return "unknown";
}

FlowSample make_sample(double t, const CoclosedParams& p) {
  FlowSample s;
  s.t = t;
  s.p = p;
  s.N = p.norm_sq();
  s.F = safe_F(p.triple());
  const RST v = rst(p);
  s.r = v.r;
  s.s = v.s;
  s.t_coef = v.t;
  return s;
}

FlowTrajectory integrate(const CoclosedParams& p0, double t_max, const FlowOptions& opts) {
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");

  // Dormand-Prince 5(4) tableau.
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
  (void)c2, (void)c3, (void)c4, (void)c5;

  FlowTrajectory traj;
  traj.samples.push_back(make_sample(0.0, p0));

  double t = 0.0;
  Vec6 y = p0.vec();
  Vec6 k1 = rhs(y);
  double h = std::min(opts.h_init, t_max);
  double last_recorded = 0.0;

  while (t < t_max) {
    if (traj.steps + traj.rejected >= opts.max_steps) {
      traj.status = FlowStatus::max_time;
      traj.message = "step limit reached";
      break;
    }
    h = std::min(h, t_max - t);
    const Vec6 k2 = rhs(y + h * a21 * k1);
    const Vec6 k3 = rhs(y + h * (a31 * k1 + a32 * k2));
    const Vec6 k4 = rhs(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec6 k5 = rhs(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec6 k6 = rhs(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec6 y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec6 k7 = rhs(y_new);
    const Vec6 err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double err = 0.0;
    for (int i = 0; i < 6; ++i) {
      const double sc = opts.atol + opts.rtol * std::max(std::abs(y(i)), std::abs(y_new(i)));
      err += (err_vec(i) / sc) * (err_vec(i) / sc);
    }
    err = std::sqrt(err / 6.0);

    if (!finite(y_new) || !std::isfinite(err)) {
      h *= 0.2;
      ++traj.rejected;
    } else if (err <= 1.0) {
      const bool final_step = (t + h >= t_max);
      t = final_step ? t_max : t + h;
      y = y_new;
      k1 = k7;
      ++traj.steps;
      if (y.squaredNorm() > opts.blowup_norm) {
        traj.samples.push_back(make_sample(t, CoclosedParams::from_vec(y)));
        traj.status = FlowStatus::diverged;
        traj.message = "blow-up: N exceeded " + std::to_string(opts.blowup_norm);
        return traj;
      }
      if (opts.sample_dt <= 0.0 || t - last_recorded >= opts.sample_dt || final_step) {
        traj.samples.push_back(make_sample(t, CoclosedParams::from_vec(y)));
        last_recorded = t;
      }
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h *= fac;
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      ++traj.rejected;
    }
    if (t < t_max && h < opts.h_min) {
      if (traj.samples.back().t != t) traj.samples.push_back(make_sample(t, CoclosedParams::from_vec(y)));
      traj.status = FlowStatus::diverged;
      traj.message = "step size underflow at t = " + std::to_string(t);
      return traj;
    }
  }

  if (traj.status == FlowStatus::running) {
    if (y.squaredNorm() == 0.0) {
      traj.status = FlowStatus::converged;
    } else if (t_max >= opts.window && trailing_drift(traj, opts.window) < opts.drift_tol) {
      traj.status = FlowStatus::converged;
    } else {
      traj.status = FlowStatus::max_time;
    }
  }
  return traj;
}

NormalizedLimit normalized_limit(const FlowTrajectory& traj, double window) {
  if (traj.status == FlowStatus::diverged) throw std::runtime_error("trajectory diverged: " + traj.message);
  if (traj.samples.empty() || traj.samples.back().t - traj.samples.front().t < window) {
    throw std::invalid_argument("trajectory shorter than the normalization window");
  }
  NormalizedLimit out;
  out.direction = unit_direction(traj.samples.back().p);
  out.window_drift = trailing_drift(traj, window);
  return out;
}

double conserved_ab(const FlowTrajectory& traj, double family_tol) {
  if (traj.samples.empty()) return 0.0;
  double drift = 0.0;
  const auto& p0 = traj.samples.front().p;
  const double ab0 = p0.a1 * p0.b1;
  for (const auto& s : traj.samples) {
    const auto& p = s.p;
    const double scale = std::max(1.0, std::sqrt(s.N));
    if (std::abs(p.a1 - p.a2) > family_tol * scale || std::abs(p.b1 - p.b2) > family_tol * scale ||
        std::abs(p.c1 - p.c2) > family_tol * scale) {
      throw std::invalid_argument("trajectory leaves the family a1 = a2, b1 = b2, c1 = c2");
    }
    drift = std::max(drift, std::abs(p.a1 * p.b1 - ab0));
  }
  return drift;
}

}  // namespace g2kit
