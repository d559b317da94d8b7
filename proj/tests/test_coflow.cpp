#include <doctest.h>

#include <cmath>
#include <random>

#include "g2kit/audit.hpp"
#include "g2kit/coflow.hpp"
#include "g2kit/g2core.hpp"

using namespace g2kit;

namespace {

CoclosedParams random_params(std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec6 v;
  for (int i = 0; i < 6; ++i) v(i) = u(rng);
  return CoclosedParams::from_vec(v);
}

double max_diff(const CoclosedParams& a, const CoclosedParams& b) {
  return (a.vec() - b.vec()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_SUITE("coflow") {
  TEST_CASE("coclosed parameters give coclosed structures") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 20; ++rep) {
      const G2Structure s(random_params(rng).triple());
      CHECK(ce_differential(s.triple, s.psi).norm() == 0.0);
    }
  }

  TEST_CASE("r, s, t examples") {
    const RST a = rst({1, 1, 1, -1, 1, 1});
    CHECK(a.r == 4.0);
    CHECK(a.s == 4.0);
    CHECK(a.t == 4.0);
    const RST b = rst({1, 1, 1, 1, 0, 0});
    CHECK(b.r == 4.0);
    CHECK(b.s == 0.0);
    CHECK(b.t == 4.0);
    const RST z = rst({});
    CHECK(z.r + z.s + z.t == 0.0);
  }

  TEST_CASE("Q_mu examples in display order") {
    Mat7 want = Mat7::Zero();
    want(0, 0) = want(1, 1) = want(2, 2) = 2.0;
    CHECK(to_display_order(q_mu(CoclosedParams{1, 1, 1, -1, 1, 1})) == want);
    want.setZero();
    want(2, 2) = 4.0;
    CHECK(to_display_order(q_mu(CoclosedParams{1, 1, 1, 1, 0, 0})) == want);
    CHECK(q_mu(CoclosedParams{}) == Mat7::Zero());
  }

  TEST_CASE("r, s, t read off Delta psi") {
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 50; ++rep) {
      const CoclosedParams p = random_params(rng);
      const RST a = rst(p);
      const RST b = rst_from_laplacian(p);
      CHECK(a.r == doctest::Approx(b.r).epsilon(1e-12));
      CHECK(a.s == doctest::Approx(b.s).epsilon(1e-12));
      CHECK(a.t == doctest::Approx(b.t).epsilon(1e-12));
    }
  }

  TEST_CASE("Delta psi = -theta(Q_mu) psi") {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 20; ++rep) {
      const CoclosedParams p = random_params(rng);
      const G2Structure s(p.triple());
      CHECK(max_abs_diff(laplacians(s).psi_lap, derivation_action(q_mu(p), s.psi)) < 1e-11);
    }
  }

  TEST_CASE("ode_rhs examples") {
    CHECK(ode_rhs({}) == CoclosedParams{});
    const CoclosedParams p{1, 1, 1, -1, 1, 1};
    CHECK(max_diff(ode_rhs(p), CoclosedParams{-2, -2, -2, 2, -2, -2}) == 0.0);
  }

  TEST_CASE("ode_rhs on the (a, a, b, -b, c, c) family") {
    std::mt19937_64 rng(44);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int rep = 0; rep < 50; ++rep) {
      const double a = u(rng), b = u(rng), c = u(rng);
      const CoclosedParams d = ode_rhs(family46(a, b, c));
      CHECK(d.a1 == doctest::Approx((-2 * a * a - 2 * b * b + 2 * c * c) * a));
      CHECK(d.b1 == doctest::Approx((-2 * b * b + 2 * a * a - 2 * c * c) * b));
      CHECK(d.c1 == doctest::Approx((-2 * c * c - 2 * a * a + 2 * b * b) * c));
    }
  }

  TEST_CASE("bracket flow oracle equals ode_rhs") {
    std::mt19937_64 rng(45);
    for (int rep = 0; rep < 1000; ++rep) {
      const CoclosedParams p = random_params(rng);
      const BracketFlowDerivative b = bracket_flow_rhs(p, q_mu(p));
      const double scale = std::max(1.0, std::pow(std::sqrt(p.norm_sq()), 3));
      CHECK(max_diff(b.dparams, ode_rhs(p)) < 1e-12 * scale);
      CHECK(b.off_family < 1e-12 * scale);
    }
  }

  TEST_CASE("Q_mu coefficients reproduce the ODE factors") {
    std::mt19937_64 rng(46);
    for (int rep = 0; rep < 200; ++rep) {
      const CoclosedParams p = random_params(rng);
      const Mat7 q = q_mu(p);
      const CoclosedParams d = ode_rhs(p);
      if (std::abs(p.a1) > 1e-3) CHECK(d.a1 / p.a1 == doctest::Approx(-q(6, 6)));
      if (std::abs(p.b2) > 1e-3) CHECK(d.b2 / p.b2 == doctest::Approx(-q(0, 0)));
      if (std::abs(p.c2) > 1e-3) CHECK(d.c2 / p.c2 == doctest::Approx(-q(1, 1)));
    }
  }

  TEST_CASE("ode_rhs is cubic-homogeneous") {
    std::mt19937_64 rng(47);
    for (double c : {-1.5, 0.3, 2.0}) {
      const CoclosedParams p = random_params(rng);
      const Vec6 lhs = ode_rhs(CoclosedParams::from_vec(c * p.vec())).vec();
      const Vec6 rhs = c * c * c * ode_rhs(p).vec();
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  TEST_CASE("the three families are invariant") {
    std::mt19937_64 rng(48);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int rep = 0; rep < 100; ++rep) {
      const double a = u(rng), b = u(rng), c = u(rng), c2 = u(rng);
      const CoclosedParams d46 = ode_rhs(family46(a, b, c));
      CHECK(d46.a1 == d46.a2);
      CHECK(d46.b1 == -d46.b2);
      CHECK(d46.c1 == d46.c2);
      const CoclosedParams d47 = ode_rhs(family47(a, b, c, c2));
      CHECK(d47.a1 == d47.a2);
      CHECK(d47.b1 == d47.b2);
      const CoclosedParams d48 = ode_rhs(family48(a, b, c));
      CHECK(d48.a1 == d48.a2);
      CHECK(d48.b1 == d48.b2);
      CHECK(d48.c1 == d48.c2);
    }
  }

  TEST_CASE("N decreases along (a, a, b, -b, c, c)") {
    std::mt19937_64 rng(49);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int rep = 0; rep < 100; ++rep) {
      const double a = u(rng), b = u(rng), c = u(rng);
      // N = a^2 + b^2 + c^2 is half of the full N.
      const double half_dn = 0.5 * half_norm_derivative(family46(a, b, c));
      CHECK(half_dn == doctest::Approx(-2 * (a * a * a * a + b * b * b * b + c * c * c * c)));
      CHECK(half_dn <= 0.0);
    }
  }

  TEST_CASE("soliton_solve examples") {
    SUBCASE("(1, 1, 1, -1)") {
      const auto sols = soliton_solve(1, 1, 1, -1);
      REQUIRE(sols.size() == 2);
      for (const auto& s : sols) {
        CHECK(std::abs(s.params.c1) == doctest::Approx(1.0));
        CHECK(s.params.c1 == doctest::Approx(s.params.c2));
        CHECK(s.lambda == 8.0);
        CHECK(s.d == -2.0);
        CHECK(s.residual < 1e-12);
      }
    }
    SUBCASE("(1, -1, 1, -1)") {
      const auto sols = soliton_solve(1, -1, 1, -1);
      REQUIRE(sols.size() == 4);
      for (const auto& s : sols) {
        CHECK(std::abs(s.params.c1 + s.params.c2) == doctest::Approx(2 * std::sqrt(2.0)));
        CHECK(std::abs(s.params.c1 - s.params.c2) == doctest::Approx(2 * std::sqrt(2.0)));
        CHECK(s.lambda == 16.0);
        CHECK(s.residual < 1e-12);
      }
    }
    SUBCASE("(0, 0, 1, 1) has no solutions") { CHECK(soliton_solve(0, 0, 1, 1).empty()); }
  }

  TEST_CASE("solitons have r = s = t and positive lambda") {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> u(-2, 2);
    int found = 0;
    for (int rep = 0; rep < 300; ++rep) {
      for (const auto& s : soliton_solve(u(rng), u(rng), u(rng), u(rng))) {
        ++found;
        const RST v = rst(s.params);
        CHECK(v.r == doctest::Approx(v.s).epsilon(1e-10));
        CHECK(v.s == doctest::Approx(v.t).epsilon(1e-10));
        CHECK(s.lambda > 0.0);
        CHECK(s.residual < 1e-9);
        CHECK(soliton_residual(s.params).residual < 1e-9);
      }
    }
    CHECK(found > 50);
  }

  TEST_CASE("r = s = t exactly when the soliton residual vanishes") {
    std::mt19937_64 rng(51);
    for (int rep = 0; rep < 300; ++rep) {
      const CoclosedParams p = random_params(rng);
      const RST v = rst(p);
      const bool equal = std::abs(v.r - v.s) < 1e-9 && std::abs(v.s - v.t) < 1e-9;
      CHECK(equal == (soliton_residual(p).residual < 1e-9));
    }
  }

  TEST_CASE("soliton_residual examples") {
    const SolitonFit f = soliton_residual({1, 1, 1, -1, 1, 1});
    CHECK(f.residual < 1e-10);
    CHECK(f.best_lambda == doctest::Approx(8.0));
    for (double d : f.best_D) CHECK(d == doctest::Approx(-2.0));
    CHECK(soliton_residual({1, 1, 2, -2, 1, 1}).residual > 0.1);
    const SolitonFit z = soliton_residual({});
    CHECK(z.degenerate);
    CHECK(z.residual == 0.0);
    CHECK(z.best_lambda == 0.0);
  }

  TEST_CASE("the modified coflow has no solitons here") {
    CHECK_THROWS_AS((void)modified_soliton_residual({1, 1, 1, -1, 1, 1}, 0.0), std::invalid_argument);
    CHECK(modified_soliton_residual({1, 1, 1, -1, 1, 1}, 1.0) > 0.01);
    for (const auto& s : soliton_solve(1, -1, 1, -1)) CHECK(modified_soliton_residual(s.params, 1.0) > 0.01);
  }

  TEST_CASE("integration of the flat point is constant") {
    const FlowTrajectory t = integrate({}, 1.0);
    CHECK(t.status == FlowStatus::converged);
    for (const auto& s : t.samples) CHECK(s.p == CoclosedParams{});
    CHECK(t.samples.back().t == 1.0);
    CHECK_THROWS_AS((void)integrate({}, 0.0), std::invalid_argument);
  }

  TEST_CASE("trajectory invariants") {
    const FlowTrajectory t = integrate({0.3, -1.2, 0.7, 0.4, -0.9, 1.5}, 5.0);
    for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].t > t.samples[i - 1].t);
    for (const auto& s : t.samples) {
      CHECK(s.N == doctest::Approx(s.p.norm_sq()).epsilon(1e-15));
      const RST v = rst(s.p);
      CHECK(s.r == v.r);
      CHECK(s.s == v.s);
      CHECK(s.t_coef == v.t);
    }
  }

  TEST_CASE("integration matches the closed-form solution on the soliton ray") {
    // On (1,1,1,-1,1,1) every coordinate obeys x' = -2 x^3 / x0^2 ... which for
    // x0 = 1 is x' = -2x^3, so x(t) = 1/sqrt(1 + 4t).
    const FlowTrajectory t = integrate({1, 1, 1, -1, 1, 1}, 3.0);
    for (const auto& s : t.samples) CHECK(s.p.a1 == doctest::Approx(1 / std::sqrt(1 + 4 * s.t)).epsilon(1e-8));
  }

  TEST_CASE("soliton start keeps its direction") {
    const FlowTrajectory t = integrate({1, 1, 1, -1, 1, 1}, 10.0);
    CHECK(normalized_limit(t).window_drift < 1e-8);
  }

  TEST_CASE("N decreases along (a, a, b, b, c1, c2)") {
    const FlowTrajectory t = integrate(family47(1.0, 0.5, 0.8, -0.3), 10.0);
    for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i].N <= t.samples[i - 1].N);
    CHECK(t.samples.back().N < t.samples.front().N);
  }

  TEST_CASE("(1, 1, 1, 1, 0, 0) is stationary") {
    CHECK(ode_rhs({1, 1, 1, 1, 0, 0}) == CoclosedParams{});
    const FlowTrajectory t = integrate({1, 1, 1, 1, 0, 0}, 12.0);
    CHECK(t.status == FlowStatus::converged);
    CHECK(normalized_limit(t).window_drift == 0.0);
  }

  TEST_CASE("ab is conserved on (a, a, b, b, c, c)") {
    const FlowTrajectory t = integrate(family48(1, 2, 1), 20.0);
    CHECK(conserved_ab(t) < 1e-8);
    CHECK(conserved_ab(integrate(family48(0, 2, 1), 5.0)) == 0.0);
    CHECK_THROWS_AS((void)conserved_ab(integrate({1, 2, 1, 1, 1, 1}, 1.0)), std::invalid_argument);
  }

  TEST_CASE("blow-up and step underflow end as diverged") {
    FlowOptions tight;
    tight.blowup_norm = 1.0;
    const FlowTrajectory a = integrate({1, 1, 1, -1, 1, 1}, 1.0, tight);
    CHECK(a.status == FlowStatus::diverged);
    CHECK_THROWS_AS((void)normalized_limit(a), std::runtime_error);

    FlowOptions tiny;
    tiny.h_init = 1e-3;
    tiny.h_min = 1.0;
    const FlowTrajectory b = integrate({1, 1, 1, -1, 1, 1}, 5.0, tiny);
    CHECK(b.status == FlowStatus::diverged);
    CHECK(std::isfinite(b.samples.back().N));
  }

  TEST_CASE("normalized_limit needs a full window") {
    const FlowTrajectory t = integrate({1, 1, 1, -1, 1, 1}, 2.0);
    CHECK_THROWS_AS((void)normalized_limit(t), std::invalid_argument);
  }

  TEST_CASE("time rescales with the parameters") {
    // p -> c p maps solutions x(t) to c x(c^2 t).
    const CoclosedParams p{0.3, -1.2, 0.7, 0.4, -0.9, 1.5};
    const double c = 2.0;
    const FlowTrajectory a = integrate(p, 4.0);
    const FlowTrajectory b = integrate(CoclosedParams::from_vec(c * p.vec()), 1.0);
    CHECK((c * a.samples.back().p.vec() - b.samples.back().p.vec()).cwiseAbs().maxCoeff() < 1e-8);
  }
}
