#include "g2kit/audit.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace g2kit {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// Calls f on every point of values^6.
void for_each_grid6(const std::vector<double>& values, const std::function<void(const CoclosedParams&)>& f) {
  const std::size_t n = values.size();
  std::size_t total = 1;
  for (int i = 0; i < 6; ++i) total *= n;
  for (std::size_t code = 0; code < total; ++code) {
    std::array<double, 6> v{};
    std::size_t c = code;
    for (int i = 0; i < 6; ++i) {
      v[i] = values[c % n];
      c /= n;
    }
    f({v[0], v[1], v[2], v[3], v[4], v[5]});
  }
}

AuditEntry norm_growth_claim() {
  const CoclosedParams p{0.01, 0.01, 1.0, -1.0, 2.0, -2.0};
  const double half = half_norm_derivative(p);
  // Closed form on (a, a, 1, -1, c, -c) with x = a^2:
  //   1/2 N' = -4x^2 - 8c^2 x - 4(c^2 - 1)^2.
  const double x = p.a1 * p.a1, c = p.c1;
  const double closed = -4 * x * x - 8 * c * c * x - 4 * (c * c - 1) * (c * c - 1);
  AuditEntry e;
  e.claim_id = "norm-growth-small-a";
  e.paper_location = "coflow dynamics, growth of N at (a, a, 1, -1, c, -c) with c > 1 and a small";
  e.computed_value = "1/2 N' = " + num(half) + " at (0.01, 0.01, 1, -1, 2, -2); closed form " + num(closed);
  e.paper_value = "N' > 0";
  e.agrees = half > 0.0;
  return e;
}

AuditEntry rst_identity_claim() {
  double worst = 0.0;
  for_each_grid6({-2, -1, 0, 1, 2}, [&](const CoclosedParams& p) {
    const RST v = rst(p);
    const CoclosedParams d = ode_rhs(p);
    const double fa = -(p.a1 * p.a1 + p.a2 * p.a2) + 2 * p.b1 * p.b2 + 2 * p.c1 * p.c2;
    const double fb = -(p.b1 * p.b1 + p.b2 * p.b2) + 2 * p.a1 * p.a2 - 2 * p.c1 * p.c2;
    const double fc = -(p.c1 * p.c1 + p.c2 * p.c2) - 2 * p.a1 * p.a2 - 2 * p.b1 * p.b2;
    worst = std::max({worst, std::abs(-0.5 * (-v.r + v.s + v.t) - fa), std::abs(-0.5 * (v.r + v.s - v.t) - fb),
                      std::abs(-0.5 * (v.r - v.s + v.t) - fc)});
    // The generator must be exactly -Q acting on each coordinate.
    worst = std::max({worst, std::abs(d.a1 - fa * p.a1), std::abs(d.b2 - fb * p.b2), std::abs(d.c1 - fc * p.c1)});
  });
  AuditEntry e;
  e.claim_id = "rst-ode-identity";
  e.paper_location = "coflow dynamics, Q_mu in terms of r, s, t versus the parameter ODE";
  e.computed_value = "max deviation " + num(worst) + " over {-2..2}^6";
  e.paper_value = "-1/2(-r+s+t) = -(a1^2+a2^2)+2b1b2+2c1c2 and cyclic";
  e.agrees = worst <= 1e-14;
  return e;
}

AuditEntry bracket_flow_claim() {
  double worst = 0.0;
  for_each_grid6({-1, 0, 0.5, 1}, [&](const CoclosedParams& p) {
    const BracketFlowDerivative b = bracket_flow_rhs(p, q_mu(p));
    worst = std::max({worst, (b.dparams.vec() - ode_rhs(p).vec()).cwiseAbs().maxCoeff(), b.off_family});
  });
  AuditEntry e;
  e.claim_id = "bracket-flow-ode";
  e.paper_location = "coflow dynamics, parameter ODE derived from mu' = theta(Q_mu) mu";
  e.computed_value = "max deviation " + num(worst) + " over {-1, 0, 0.5, 1}^6";
  e.paper_value = "ODE equals the bracket flow";
  e.agrees = worst <= 1e-12;
  return e;
}

AuditEntry laplacian_q_claim() {
  double worst = 0.0;
  for_each_grid6({-1, 0, 1}, [&](const CoclosedParams& p) {
    const RST a = rst(p);
    const RST b = rst_from_laplacian(p);
    worst = std::max({worst, std::abs(a.r - b.r), std::abs(a.s - b.s), std::abs(a.t - b.t)});
  });
  AuditEntry e;
  e.claim_id = "laplacian-rst";
  e.paper_location = "coflow dynamics, Delta psi written through r, s, t";
  e.computed_value = "max |rst - rst(Delta psi)| " + num(worst) + " over {-1, 0, 1}^6";
  e.paper_value = "Delta psi = r w7^e12 - s w2^e17 + t w1^e27";
  e.agrees = worst <= 1e-12;
  return e;
}

AuditEntry soliton_count_claim() {
  const SolitonCountHistogram h = soliton_count_histogram({-2, -1, 0, 1, 2});
  std::ostringstream os;
  os << "over {-2..2}^4: ";
  for (int k = 0; k <= 4; ++k) os << k << " solutions: " << h.counts[k] << (k < 4 ? ", " : "");
  os << "; (0, 0, 1, 1) has " << soliton_solve(0, 0, 1, 1).size();
  AuditEntry e;
  e.claim_id = "soliton-count";
  e.paper_location = "remark after the soliton classification, number of (c1, c2) per 4-tuple";
  e.computed_value = os.str();
  e.paper_value = "at least one and at most four";
  e.agrees = h.counts[0] == 0 && h.counts[3] == 0;
  return e;
}

AuditEntry soliton_lambda_claim() {
  double min_lambda = std::numeric_limits<double>::infinity();
  const std::vector<double> values{-2, -1, -0.5, 0, 0.5, 1, 2};
  for (double a1 : values)
    for (double a2 : values)
      for (double b1 : values)
        for (double b2 : values) {
          if (a1 == 0 && a2 == 0 && b1 == 0 && b2 == 0) continue;
          for (const auto& s : soliton_solve(a1, a2, b1, b2)) min_lambda = std::min(min_lambda, s.lambda);
        }
  AuditEntry e;
  e.claim_id = "soliton-lambda-positive";
  e.paper_location = "soliton classification, sign of lambda";
  e.computed_value = "min lambda " + num(min_lambda) + " over nonzero grid solutions";
  e.paper_value = "lambda = 2((a1-a2)^2 + (b1-b2)^2) > 0";
  e.agrees = min_lambda > 0.0;
  return e;
}

AuditEntry family46_norm_claim() {
  const double a = 1, b = 2, c = 3;
  // N = a^2 + b^2 + c^2 on (a, a, b, -b, c, c) is half the full N.
  const double computed = 0.5 * half_norm_derivative(family46(a, b, c));
  const double printed = -2 * (a * a * a * a + b * b * b * b) - 4 * c * c * c * c + 2 * c * c * (a * a - b * b) +
                         4 * c * c * (b * b - a * a);
  const double derived = -2 * (a * a * a * a + b * b * b * b + c * c * c * c);
  AuditEntry e;
  e.claim_id = "family46-norm-derivative";
  e.paper_location = "first invariant family example, expression for 1/2 N'";
  e.computed_value = "1/2 N' = " + num(computed) + " at (a, b, c) = (1, 2, 3); -2(a^4+b^4+c^4) = " + num(derived);
  e.paper_value = "-2(a^4+b^4) - 4c^4 + 2c^2(a^2-b^2) + 4c^2(b^2-a^2) = " + num(printed);
  e.agrees = std::abs(computed - printed) <= 1e-12 * std::abs(printed);
  return e;
}

AuditEntry family46_monotone_claim() {
  double worst = -std::numeric_limits<double>::infinity();
  const std::vector<double> values{-2, -1, -0.5, 0, 0.5, 1, 2};
  for (double a : values)
    for (double b : values)
      for (double c : values) {
        if (a == 0 && b == 0 && c == 0) continue;
        worst = std::max(worst, half_norm_derivative(family46(a, b, c)));
      }
  AuditEntry e;
  e.claim_id = "family46-norm-monotone";
  e.paper_location = "first invariant family example, N decreasing";
  e.computed_value = "max 1/2 N' = " + num(worst) + " over the nonzero grid";
  e.paper_value = "N' <= 0";
  e.agrees = worst < 0.0;
  return e;
}

AuditEntry family48_ab_claim() {
  double worst = 0.0;
  const std::vector<double> values{-2, -1, -0.5, 0, 0.5, 1, 2};
  for (double a : values)
    for (double b : values)
      for (double c : values) {
        const CoclosedParams d = ode_rhs(family48(a, b, c));
        worst = std::max(worst, std::abs(d.a1 * b + a * d.b1));
      }
  AuditEntry e;
  e.claim_id = "family48-ab-conserved";
  e.paper_location = "third invariant family example, ab constant in time";
  e.computed_value = "max |(ab)'| " + num(worst) + " over the grid";
  e.paper_value = "(ab)' = 0";
  e.agrees = worst <= 1e-12;
  return e;
}

}  // namespace

double half_norm_derivative(const CoclosedParams& p) { return p.vec().dot(ode_rhs(p).vec()); }

SolitonCountHistogram soliton_count_histogram(const std::vector<double>& values) {
  SolitonCountHistogram h;
  for (double a1 : values)
    for (double a2 : values)
      for (double b1 : values)
        for (double b2 : values) {
          ++h.counts[soliton_solve(a1, a2, b1, b2).size()];
          ++h.tuples;
        }
  return h;
}

AuditReport run_audit() {
  AuditReport r;
  r.entries = {norm_growth_claim(),   rst_identity_claim(),    bracket_flow_claim(),
               laplacian_q_claim(),   soliton_count_claim(),   soliton_lambda_claim(),
               family46_norm_claim(), family46_monotone_claim(), family48_ab_claim()};
  return r;
}

}  // namespace g2kit
