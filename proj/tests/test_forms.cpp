#include <doctest.h>

#include <random>

#include "g2kit/forms.hpp"
#include "random_forms.hpp"

using namespace g2kit;
using testutil::random_form;
using testutil::random_mat7;

namespace {

KForm e(std::initializer_list<int> idx, double c = 1.0) { return KForm::basis(idx, c); }

}  // namespace

TEST_SUITE("forms") {
  TEST_CASE("multi-indices order lexicographically") {
    CHECK(MultiIndex{1, 2} < MultiIndex{1, 3});
    CHECK(MultiIndex{1, 3} < MultiIndex{2});
    CHECK(MultiIndex{1, 2, 7} < MultiIndex{1, 3, 4});
    CHECK(MultiIndex{3, 4, 5, 6}.degree() == 4);
    CHECK(MultiIndex{1, 2, 7}.to_string() == "127");
    CHECK(MultiIndex::from_indices({1, 2, 7}) == MultiIndex{1, 2, 7});
    CHECK_THROWS_AS((void)MultiIndex::from_indices({7, 1, 2}), std::invalid_argument);
  }

  TEST_CASE("wedge signs on basis forms") {
    CHECK(wedge(e({1}), e({2})) == e({1, 2}));
    CHECK(wedge(e({2}), e({1})) == e({1, 2}, -1.0));
    CHECK(wedge(e({1}), e({1})).is_zero());
    CHECK(wedge(e({3, 4}), e({1, 2})) == e({1, 2, 3, 4}));
    CHECK(wedge(e({2, 7}), e({1})) == e({1, 2, 7}));
    CHECK(wedge(e({1, 2, 3, 4}), e({4, 5, 6, 7})).degree() == 7);
    CHECK(wedge(e({1, 2, 3, 4}), e({4, 5, 6, 7})).is_zero());
  }

  TEST_CASE("arithmetic prunes cancelled terms") {
    KForm f = e({1, 2}) + e({3, 4});
    f -= e({1, 2});
    CHECK(f.size() == 1);
    CHECK(f.coeff(MultiIndex{1, 2}) == 0.0);
    KForm g = e({1}, 1e-15);
    CHECK(g.is_zero());
    CHECK(to_string(KForm(3)) == "0");
    CHECK(to_string(e({1, 2, 7})) == "+1.000 e^{127}");
  }

  TEST_CASE("hodge star on basis forms") {
    CHECK(hodge(KForm::scalar(1.0)) == std_forms::vol());
    CHECK(hodge(e({1})) == e({2, 3, 4, 5, 6, 7}));
    CHECK(hodge(e({2})) == e({1, 3, 4, 5, 6, 7}, -1.0));
    CHECK(hodge(e({1, 2, 7})) == e({3, 4, 5, 6}));
  }

  TEST_CASE("psi matches its explicit expansion") {
    using namespace std_forms;
    const KForm expected = wedge(omega7(), e({1, 2})) + wedge(omega1(), e({2, 7})) - wedge(omega2(), e({1, 7})) +
                           e({3, 4, 5, 6});
    CHECK(max_abs_diff(psi(), expected) == 0.0);
  }

  TEST_CASE("phi wedge psi is seven times the volume form") {
    CHECK(max_abs_diff(wedge(std_forms::phi(), std_forms::psi()), 7.0 * std_forms::vol()) < 1e-15);
  }

  TEST_CASE("omega and omega-bar wedge to zero") {
    using namespace std_forms;
    for (const KForm& w : {omega7(), omega1(), omega2()}) {
      for (const KForm& v : {omegabar7(), omegabar1(), omegabar2()}) CHECK(wedge(w, v).is_zero());
    }
  }

  TEST_CASE("star star is the identity") {
    std::mt19937_64 rng(11);
    for (int k = 0; k <= 7; ++k) {
      const KForm a = random_form(rng, k);
      CHECK(max_abs_diff(hodge(hodge(a)), a) < 1e-15);
    }
  }

  TEST_CASE("a wedge *b equals <a, b> vol") {
    std::mt19937_64 rng(12);
    for (int k = 0; k <= 7; ++k) {
      for (int rep = 0; rep < 5; ++rep) {
        const KForm a = random_form(rng, k);
        const KForm b = random_form(rng, k);
        CHECK(max_abs_diff(wedge(a, hodge(b)), inner(a, b) * std_forms::vol()) < 1e-12);
      }
    }
  }

  TEST_CASE("graded commutativity") {
    std::mt19937_64 rng(13);
    for (int p = 0; p <= 4; ++p) {
      for (int q = 0; p + q <= 7; ++q) {
        const KForm a = random_form(rng, p);
        const KForm b = random_form(rng, q);
        const double sign = (p * q) % 2 ? -1.0 : 1.0;
        CHECK(max_abs_diff(wedge(a, b), sign * wedge(b, a)) < 1e-12);
      }
    }
  }

  TEST_CASE("interior product is an antiderivation") {
    std::mt19937_64 rng(14);
    for (int v = 1; v <= 7; ++v) {
      const KForm a = random_form(rng, 2);
      const KForm b = random_form(rng, 3);
      const KForm lhs = interior(v, wedge(a, b));
      const KForm rhs = wedge(interior(v, a), b) + wedge(a, interior(v, b));
      CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
    CHECK(interior(1, e({1, 2})) == e({2}));
    CHECK(interior(2, e({1, 2})) == e({1}, -1.0));
  }

  TEST_CASE("inner rejects mixed degrees") { CHECK_THROWS_AS((void)inner(e({1}), e({1, 2})), std::invalid_argument); }

  TEST_CASE("theta acts on the coframe by minus the transpose") {
    Mat4 d = Mat4::Zero();
    d(0, 1) = 1.0;  // e3 row, e4 column
    CHECK(theta(d, e({3})) == e({4}, -1.0));
    CHECK(theta(d, e({4})).is_zero());
    CHECK(theta(d, e({1, 2, 7})).is_zero());

    Mat7 m = Mat7::Zero();
    m(6, 0) = 2.0;
    CHECK(theta(m, e({7})) == e({1}, -2.0));
  }

  TEST_CASE("theta is a derivation") {
    std::mt19937_64 rng(15);
    const Mat7 d = random_mat7(rng);
    for (int p = 1; p <= 3; ++p) {
      const KForm a = random_form(rng, p);
      const KForm b = random_form(rng, 3);
      const KForm lhs = theta(d, wedge(a, b));
      const KForm rhs = wedge(theta(d, a), b) + wedge(a, theta(d, b));
      CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
  }

  TEST_CASE("theta is a Lie algebra representation") {
    std::mt19937_64 rng(16);
    const Mat7 d = random_mat7(rng);
    const Mat7 f = random_mat7(rng);
    for (int k = 1; k <= 4; ++k) {
      const KForm a = random_form(rng, k);
      const KForm lhs = theta(Mat7(d * f - f * d), a);
      const KForm rhs = theta(d, theta(f, a)) - theta(f, theta(d, a));
      CHECK(max_abs_diff(lhs, rhs) < 1e-12);
    }
  }

  TEST_CASE("theta of the identity on n scales by minus the n-degree") {
    const Mat4 id = Mat4::Identity();
    CHECK(max_abs_diff(theta(id, e({3, 4, 5, 6})), e({3, 4, 5, 6}, -4.0)) == 0.0);
    CHECK(max_abs_diff(theta(id, e({1, 3, 7})), e({1, 3, 7}, -1.0)) == 0.0);
  }

  TEST_CASE("the rotation generated by e^34 - e^56 fixes phi") {
    Mat7 x = Mat7::Zero();
    x(3, 2) = 1.0;
    x(2, 3) = -1.0;
    x(4, 5) = 1.0;
    x(5, 4) = -1.0;
    CHECK(theta(x, std_forms::phi()).norm() < 1e-15);
  }
}
