#pragma once

// Laplacian coflow on the six-parameter family of coclosed structures
//   A = Diag(a1, -a1, a2, -a2), B = Diag(b1, b2, -b1, -b2), C = Diag(c1, c2, -c2, -c1).

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "g2kit/forms.hpp"
#include "g2kit/liealg.hpp"
#include "g2kit/numerics.hpp"

namespace g2kit {

using Vec6 = Eigen::Matrix<double, 6, 1>;

struct CoclosedParams {
  double a1 = 0, a2 = 0, b1 = 0, b2 = 0, c1 = 0, c2 = 0;

  static CoclosedParams from_vec(const Vec6& v);
  Vec6 vec() const;
  BracketTriple triple() const;
  /// N = a1^2 + ... + c2^2.
  double norm_sq() const;

  friend bool operator==(const CoclosedParams&, const CoclosedParams&) = default;
};

/// (a, a, b, -b, c, c): invariant family with solitons at |a| = |b| = |c|.
CoclosedParams family46(double a, double b, double c);
/// (a, a, b, b, c1, c2).
CoclosedParams family47(double a, double b, double c1, double c2);
/// (a, a, b, b, c, c).
CoclosedParams family48(double a, double b, double c);

struct RST {
  double r = 0, s = 0, t = 0;
};

/// r = (b1+b2)^2 + (c1+c2)^2, s = (b1-b2)^2 + (a1-a2)^2,
/// t = (c1-c2)^2 + (a1+a2)^2.
RST rst(const CoclosedParams& p);

/// The same three numbers read off Delta psi computed by the exterior
/// calculus engine: Delta psi = r w7^e12 - s w2^e17 + t w1^e27.
RST rst_from_laplacian(const CoclosedParams& p);

/// Q = 1/2 Diag(-r+s+t, r+s-t, r-s+t) on (e7, e1, e2), zero on n; returned
/// in the internal order e1..e7.
Mat7 q_mu(const CoclosedParams& p);
Mat7 q_mu(const RST& v);

/// Coflow generator on the parameters:
///   a_i' = (-(a1^2+a2^2) + 2 b1 b2 + 2 c1 c2) a_i,
///   b_i' = (-(b1^2+b2^2) + 2 a1 a2 - 2 c1 c2) b_i,
///   c_i' = (-(c1^2+c2^2) - 2 a1 a2 - 2 b1 b2) c_i.
CoclosedParams ode_rhs(const CoclosedParams& p);

struct BracketFlowDerivative {
  CoclosedParams dparams;
  /// Largest structure-constant derivative outside the six-parameter family.
  double off_family = 0.0;
};

/// mu' = Q mu(., .) - mu(Q ., .) - mu(., Q .) evaluated on the full
/// structure constants, then read back as parameter derivatives.
BracketFlowDerivative bracket_flow_rhs(const CoclosedParams& p, const Mat7& q);

struct SolitonSolution {
  CoclosedParams params;
  double lambda = 0.0;
  /// D = d Id on n; lambda = -4 d.
  double d = 0.0;
  double residual = 0.0;
  /// {A, B, C} independent (the structure lives on G_J).
  bool compatible = false;
};

/// The derivation term of the soliton equation acting on forms. It is the
/// negative of theta(): with this sign the soliton equation reads
/// Delta psi = lambda psi + derivation_action(D) psi, lambda = -4d.
KForm derivation_action(const Mat7& d, const KForm& a);

/// |Delta psi - lambda psi - derivation_action(D) psi| for D = d Id on n.
double soliton_equation_residual(const CoclosedParams& p, double lambda, double d);

/// Every real (c1, c2) solving
///   (c1+c2)^2 = (a1-a2)^2 - 4 b1 b2,   (c1-c2)^2 = (b1-b2)^2 - 4 a1 a2,
/// with lambda = 2((a1-a2)^2 + (b1-b2)^2). Empty when either side is negative.
std::vector<SolitonSolution> soliton_solve(double a1, double a2, double b1, double b2, const Numerics& num = {});

struct SolitonFit {
  double residual = 0.0;
  double best_lambda = 0.0;
  /// (d3, d4, d5, d6) of D = Diag(0, 0, 0, d3, d4, d5, d6) on (e7, e1, e2, e3..e6).
  std::array<double, 4> best_D{};
  /// All parameters zero: flat, every lambda fits.
  bool degenerate = false;
};

/// Least-squares minimum of |Delta psi - lambda psi - derivation_action(D) psi|
/// over lambda and diagonal D on n.
SolitonFit soliton_residual(const CoclosedParams& p);

/// Same fit for the modified coflow, whose left side gains
/// 2 d((m - tr T) phi). Throws std::invalid_argument for m = 0.
double modified_soliton_residual(const CoclosedParams& p, double m);

enum class FlowStatus { running, converged, diverged, max_time };
std::string to_string(FlowStatus s);

struct FlowOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_init = 1e-4;
  double h_min = 1e-14;
  long max_steps = 50'000'000;
  /// Minimum spacing between recorded samples; 0 records every accepted step.
  double sample_dt = 0.0;
  /// States with N above this count as blow-up.
  double blowup_norm = 1e12;
  /// Trailing window and drift threshold for the convergence verdict.
  double window = 10.0;
  double drift_tol = 1e-6;
};

struct FlowSample {
  double t = 0.0;
  CoclosedParams p;
  double N = 0.0;
  /// Homothety invariant; NaN on the flat point.
  double F = 0.0;
  double r = 0.0, s = 0.0, t_coef = 0.0;
};

struct FlowTrajectory {
  std::vector<FlowSample> samples;
  FlowStatus status = FlowStatus::running;
  std::string message;
  long steps = 0;
  long rejected = 0;
};

FlowSample make_sample(double t, const CoclosedParams& p);

/// Adaptive Dormand-Prince 5(4) integration of ode_rhs on [0, t_max].
/// Step-size underflow or blow-up ends the run with status diverged and the
/// last valid state as final sample. Throws std::invalid_argument unless
/// t_max > 0.
FlowTrajectory integrate(const CoclosedParams& p0, double t_max, const FlowOptions& opts = {});

struct NormalizedLimit {
  Vec6 direction = Vec6::Zero();
  /// Largest distance between the normalized state at any sample inside the
  /// trailing window and the final normalized state.
  double window_drift = 0.0;
};

/// Throws std::runtime_error for diverged trajectories and
/// std::invalid_argument when the trajectory is shorter than the window.
NormalizedLimit normalized_limit(const FlowTrajectory& traj, double window = 10.0);

/// max |a(t) b(t) - a(0) b(0)| along a trajectory in family48. Throws
/// std::invalid_argument if any sample leaves the family.
double conserved_ab(const FlowTrajectory& traj, double family_tol = 1e-12);

}  // namespace g2kit
