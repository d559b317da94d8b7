#include <doctest.h>

#include <random>

#include "g2kit/coflow.hpp"
#include "g2kit/g2core.hpp"
#include "g2kit/sweep.hpp"
#include "oracles.hpp"

using namespace g2kit;

namespace {

void check_against(const ExteriorDerivatives& ex, const Laplacians& lap, const oracle::General& o, double tol) {
  CHECK(max_abs_diff(ex.dphi, o.dphi) < tol);
  CHECK(max_abs_diff(ex.star_dphi, o.star_dphi) < tol);
  CHECK(max_abs_diff(ex.star_d_star_dphi, o.star_d_star_dphi) < tol);
  CHECK(max_abs_diff(ex.dpsi, o.dpsi) < tol);
  CHECK(max_abs_diff(ex.star_dpsi, o.star_dpsi) < tol);
  CHECK(max_abs_diff(ex.d_star_dpsi, o.d_star_dpsi) < tol);
  CHECK(max_abs_diff(lap.phi_lap, o.phi_lap) < tol);
  CHECK(max_abs_diff(lap.psi_lap, o.psi_lap) < tol);
}

}  // namespace

TEST_SUITE("g2core") {
  TEST_CASE("exterior derivatives match the closed forms for commuting triples") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 25; ++rep) {
      const BracketTriple t = random_commuting_triple(rng);
      const G2Structure s(t);
      check_against(exterior_derivatives(s), laplacians(s), oracle::general(t), 1e-11);
    }
  }

  TEST_CASE("exterior derivatives match the diagonal closed forms") {
    std::mt19937_64 rng(22);
    for (int rep = 0; rep < 25; ++rep) {
      const BracketTriple t = random_diagonal_traceless_triple(rng);
      const G2Structure s(t);
      check_against(exterior_derivatives(s), laplacians(s), oracle::diagonal(t.A.diagonal(), t.B.diagonal(),
                                                                             t.C.diagonal()),
                    1e-11);
    }
  }

  TEST_CASE("torsion forms reassemble d phi and d psi") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 20; ++rep) {
      const G2Structure s(random_commuting_triple(rng));
      const TorsionForms t = torsion_forms(s);
      const ExteriorDerivatives ex = exterior_derivatives(s);
      const KForm dphi = t.tau0 * s.psi + 3.0 * wedge(t.tau1, s.phi) + hodge(t.tau3);
      const KForm dpsi = 4.0 * wedge(t.tau1, s.psi) + wedge(t.tau2, s.phi);
      CHECK(max_abs_diff(ex.dphi, dphi) < 1e-11);
      CHECK(max_abs_diff(ex.dpsi, dpsi) < 1e-11);
      // tau2 in the 14-dimensional and tau3 in the 27-dimensional summand.
      CHECK(wedge(t.tau2, s.psi).norm() < 1e-11);
      CHECK(wedge(t.tau3, s.phi).norm() < 1e-11);
      CHECK(wedge(t.tau3, s.psi).norm() < 1e-11);
    }
  }

  TEST_CASE("traceless diagonal triples have torsion in W2 + W3") {
    std::mt19937_64 rng(24);
    for (int rep = 0; rep < 20; ++rep) {
      const G2Structure s(random_diagonal_traceless_triple(rng));
      const TorsionForms t = torsion_forms(s);
      const ExteriorDerivatives ex = exterior_derivatives(s);
      CHECK(std::abs(t.tau0) < 1e-12);
      CHECK(t.tau1.norm() < 1e-12);
      CHECK(max_abs_diff(t.tau2, -ex.star_dpsi) < 1e-11);
      CHECK(max_abs_diff(t.tau3, ex.star_dphi) < 1e-11);
      CHECK(torsion_class(s).label() == "W2+W3");
    }
  }

  TEST_CASE("closed family") {
    const G2Structure s(closed_triple(1, 2, -0.5));
    CHECK(exterior_derivatives(s).dphi.norm() < 1e-14);
    CHECK(torsion_class(s).label() == "W2");
  }

  TEST_CASE("coclosed family has torsion only in W3") {
    const G2Structure s(CoclosedParams{0.3, -1.2, 0.7, 0.4, -0.9, 1.5}.triple());
    CHECK(exterior_derivatives(s).dpsi.norm() < 1e-14);
    const TorsionClass c = torsion_class(s);
    CHECK_FALSE(c.w2);
    CHECK_FALSE(c.w4);
    CHECK(c.w3);
  }

  TEST_CASE("ERP at closed_triple(1, 1, 1)") {
    // *d psi = 2(wbar7 + wbar1 + wbar2) on this triple, so |tau|^2 = 3 * 4 * 2.
    const G2Structure s(closed_triple(1, 1, 1));
    const ErpResidual r = erp_residual(s);
    CHECK(r.residual_norm < 1e-12);
    CHECK(r.tau_norm_sq == doctest::Approx(24.0).epsilon(1e-14));
  }

  TEST_CASE("closed_triple(2, 1, 1) is not ERP") {
    CHECK(erp_residual(G2Structure(closed_triple(2, 1, 1))).residual_norm > 0.1);
  }

  TEST_CASE("ERP residual needs a closed structure") {
    const G2Structure s(CoclosedParams{1, 1, 1, -1, 1, 1}.triple());
    CHECK_THROWS_AS((void)erp_residual(s), std::domain_error);
  }

  TEST_CASE("Delta psi is the Hodge dual of Delta phi") {
    std::mt19937_64 rng(25);
    for (int rep = 0; rep < 10; ++rep) {
      const Laplacians l = laplacians(G2Structure(random_commuting_triple(rng)));
      CHECK(max_abs_diff(l.psi_lap, hodge(l.phi_lap)) < 1e-11);
    }
  }

  TEST_CASE("trace of the full torsion is 7/4 tau0") {
    std::mt19937_64 rng(26);
    const G2Structure s(random_commuting_triple(rng));
    CHECK(trace_torsion(s) == doctest::Approx(1.75 * torsion_forms(s).tau0));
  }

  TEST_CASE("torsion report") {
    const TorsionReport r = torsion_report(closed_triple(1, 1, 1));
    CHECK(r.closed);
    CHECK_FALSE(r.coclosed);
    REQUIRE(r.F.has_value());
    CHECK(*r.F == doctest::Approx(3.0));
    REQUIRE(r.erp_residual.has_value());
    CHECK(*r.erp_residual < 1e-12);
    CHECK(r.ricci_display(0, 0) == doctest::Approx(-4.0));
    CHECK(r.ricci_display(3, 3) == doctest::Approx(0.0));

    const TorsionReport flat = torsion_report(BracketTriple{});
    CHECK_FALSE(flat.F.has_value());
    CHECK(flat.torsion_class == "0");
  }
}
