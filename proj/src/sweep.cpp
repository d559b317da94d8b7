#include "g2kit/sweep.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <omp.h>

#include "g2kit/g2core.hpp"

namespace g2kit {

namespace {

Eigen::Vector4d traceless(Eigen::Vector4d v) {
  v.array() -= v.mean();
  return v;
}

Mat4 traceless(const Mat4& m) { return m - (m.trace() / 4.0) * Mat4::Identity(); }

double F_or_nan(const BracketTriple& t) {
  try {
    return homothety_F(t);
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

std::mt19937_64 indexed_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

BracketTriple random_diagonal_traceless_triple(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  auto draw = [&] {
    Eigen::Vector4d v;
    for (int i = 0; i < 4; ++i) v(i) = u(rng);
    return traceless(v);
  };
  const Eigen::Vector4d a = draw();
  const Eigen::Vector4d b = draw();
  const Eigen::Vector4d c = draw();
  return BracketTriple::diagonal(a, b, c);
}

BracketTriple random_commuting_triple(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Mat4 x;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) x(i, j) = n(rng);
  }
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Mat4 x2 = x * x;
  const Mat4 x3 = x2 * x;
  auto poly = [&] {
    const double c1 = u(rng);
    const double c2 = u(rng);
    const double c3 = u(rng);
    return traceless(Mat4(c1 * x + c2 * 0.5 * x2 + c3 * 0.2 * x3));
  };
  const Mat4 a = poly();
  const Mat4 b = poly();
  const Mat4 c = poly();
  return {a, b, c};
}

TorsionSweepRow torsion_row(const BracketTriple& t) {
  const G2Structure s(t);
  const TorsionForms tf = torsion_forms(s);
  const ExteriorDerivatives ex = exterior_derivatives(s);
  TorsionSweepRow row;
  row.tau0 = tf.tau0;
  row.tau1_norm = tf.tau1.norm();
  row.tau2_defect = (tf.tau2 + ex.star_dpsi).norm();
  row.tau3_defect = (tf.tau3 - ex.star_dphi).norm();
  row.label = torsion_class(s).label();
  row.F = F_or_nan(t);
  return row;
}

std::vector<TorsionSweepRow> torsion_sweep_serial(std::size_t n, std::uint64_t seed) {
  std::vector<TorsionSweepRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = indexed_rng(seed, i);
    rows[i] = torsion_row(random_diagonal_traceless_triple(rng));
  }
  return rows;
}

std::vector<TorsionSweepRow> torsion_sweep(std::size_t n, std::uint64_t seed) {
  std::vector<TorsionSweepRow> rows(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < count; ++i) {
    auto rng = indexed_rng(seed, static_cast<std::uint64_t>(i));
    rows[i] = torsion_row(random_diagonal_traceless_triple(rng));
  }
  return rows;
}

std::array<double, 4> random_admissible_base(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (;;) {
    std::array<double, 4> b{};
    for (auto& x : b) x = u(rng);
    const double x = (b[0] - b[1]) * (b[0] - b[1]) - 4 * b[2] * b[3];
    const double y = (b[2] - b[3]) * (b[2] - b[3]) - 4 * b[0] * b[1];
    if (x >= 0.0 && y >= 0.0) return b;
  }
}

SolitonSweepRow soliton_row(const std::array<double, 4>& base) {
  SolitonSweepRow row;
  row.base = base;
  const auto sols = soliton_solve(base[0], base[1], base[2], base[3]);
  row.count = sols.size();
  const double lambda = 2 * ((base[0] - base[1]) * (base[0] - base[1]) + (base[2] - base[3]) * (base[2] - base[3]));
  row.min_modified_residual = std::numeric_limits<double>::infinity();
  for (const auto& s : sols) {
    row.max_residual = std::max(row.max_residual, s.residual);
    row.max_lambda_error = std::max(row.max_lambda_error, std::abs(s.lambda - lambda));
    row.min_modified_residual = std::min(row.min_modified_residual, modified_soliton_residual(s.params, 1.0));
  }
  return row;
}

std::vector<SolitonSweepRow> soliton_sweep_serial(std::size_t n, std::uint64_t seed) {
  std::vector<SolitonSweepRow> rows(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto rng = indexed_rng(seed, i);
    rows[i] = soliton_row(random_admissible_base(rng));
  }
  return rows;
}

std::vector<SolitonSweepRow> soliton_sweep(std::size_t n, std::uint64_t seed) {
  std::vector<SolitonSweepRow> rows(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t i = 0; i < count; ++i) {
    auto rng = indexed_rng(seed, static_cast<std::uint64_t>(i));
    rows[i] = soliton_row(random_admissible_base(rng));
  }
  return rows;
}

FlowSweepRow flow_row(const CoclosedParams& init, double t_max, const FlowOptions& opts) {
  const FlowTrajectory traj = integrate(init, t_max, opts);
  FlowSweepRow row;
  row.init = init;
  row.status = traj.status;
  row.final_sample = traj.samples.back();
  row.steps = traj.steps;
  row.window_drift = std::numeric_limits<double>::quiet_NaN();
  if (traj.status != FlowStatus::diverged && t_max >= opts.window) {
    row.window_drift = normalized_limit(traj, opts.window).window_drift;
  }
  return row;
}

std::vector<FlowSweepRow> flow_sweep_serial(std::span<const CoclosedParams> inits, double t_max,
                                            const FlowOptions& opts) {
  std::vector<FlowSweepRow> rows;
  rows.reserve(inits.size());
  for (const auto& p : inits) rows.push_back(flow_row(p, t_max, opts));
  return rows;
}

std::vector<FlowSweepRow> flow_sweep(std::span<const CoclosedParams> inits, double t_max, const FlowOptions& opts,
                                     int threads) {
  if (!(t_max > 0.0)) throw std::invalid_argument("t_max must be positive");
  std::vector<FlowSweepRow> rows(inits.size());
  const auto count = static_cast<std::int64_t>(inits.size());
  const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads)
  for (std::int64_t i = 0; i < count; ++i) rows[i] = flow_row(inits[i], t_max, opts);
  return rows;
}

}  // namespace g2kit
