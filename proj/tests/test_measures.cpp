#include <doctest.h>

#include <cmath>

#include "gaussent/errors.hpp"
#include "gaussent/measures.hpp"
#include "test_support.hpp"

using namespace gaussent;
using gaussent::testing::draw;
using gaussent::testing::entangled_only;

namespace {

// Dense route: eigenvalues of i Omega sigma~ for the partial transpose.
double nu_tilde_minus_dense(const StandardForm& sf) {
  Mat4 pt = sf.dense().matrix();
  const Eigen::Vector4d flip(1, 1, 1, -1);
  pt = flip.asDiagonal() * pt * flip.asDiagonal();
  const Mat4 m = symplectic_form() * pt;
  const auto ev = m.eigenvalues();
  double lo = INFINITY;
  for (int i = 0; i < 4; ++i) lo = std::min(lo, std::abs(ev(i).imag()));
  return lo;
}

}  // namespace

TEST_CASE("known values") {
  CHECK(log_negativity(StandardForm::vacuum()) == 0.0);
  CHECK(eof_lower_bound(StandardForm::vacuum()) == 0.0);
  CHECK(is_separable(StandardForm::vacuum()));

  const auto t1 = tmsv(1.0);
  CHECK(log_negativity(t1) == doctest::Approx(2.885390081778).epsilon(1e-12));
  CHECK(eof_lower_bound(t1) == doctest::Approx(2.336909300546).epsilon(1e-12));
  CHECK(nu_tilde_minus(t1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  CHECK_FALSE(is_separable(t1));
}

TEST_CASE("pure-state entropy") {
  CHECK(eof_from_squeezing(0.0) == 0.0);
  CHECK(eof_from_squeezing(1.0) == doctest::Approx(2.336909300546).epsilon(1e-12));
  CHECK(std::isinf(eof_from_squeezing(INFINITY)));
  CHECK_THROWS_AS(eof_from_squeezing(-1e-3), InvalidArgument);
  // tiny r: cosh^2 log cosh^2 - sinh^2 log sinh^2 ~ r^2 (1 - 2 ln r) / ln 2
  const double r = 1e-6;
  CHECK(eof_from_squeezing(r) == doctest::Approx(r * r * (1 - 2 * std::log(r)) / std::log(2.0)).epsilon(1e-6));
  double prev = 0.0;
  for (int k = 1; k <= 60; ++k) {
    const double e = eof_from_squeezing(0.05 * k);
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("spectrum agrees with the dense eigenvalue route") {
  for (const auto& sf : draw(1, 300)) {
    CHECK(nu_tilde_minus(sf) == doctest::Approx(nu_tilde_minus_dense(sf)).epsilon(1e-9));
    const auto sp = symplectic_spectrum(sf);
    CHECK(sp.nu_minus >= 1.0 - 1e-10);
    CHECK(sp.nu_plus >= sp.nu_minus);
    CHECK(sp.nu_minus * sp.nu_plus == doctest::Approx(std::sqrt(sf.invariants().det_sigma)).epsilon(1e-10));
    CHECK(nu_tilde_minus(sf.dense()) == doctest::Approx(nu_tilde_minus(sf)).epsilon(1e-9));
  }
}

TEST_CASE("disentangling interval") {
  SUBCASE("boundary states have nu_tilde_minus = 1") {
    for (const auto& sf : draw(2, 200, entangled_only())) {
      const auto iv = r_tilde_interval(sf);
      REQUIRE(iv.r_minus <= iv.r_plus);
      for (double r : {iv.r_minus, iv.r_plus}) {
        const auto moved = to_standard_form(apply(two_mode_squeezer(-r), sf.dense()));
        CHECK(nu_tilde_minus(moved) == doctest::Approx(1.0).epsilon(1e-9));
      }
      const double mid = 0.5 * (iv.r_minus + iv.r_plus);
      CHECK(is_separable(to_standard_form(apply(two_mode_squeezer(-mid), sf.dense()))));
    }
  }
  SUBCASE("separable states need no squeezing") {
    for (const auto& sf : draw(3, 300)) {
      if (!is_separable(sf)) continue;
      CHECK(r_tilde_interval(sf).r_minus <= 1e-12);
      CHECK(eof_lower_bound(sf) == 0.0);
    }
  }
  SUBCASE("entangled states need positive squeezing") {
    for (const auto& sf : draw(4, 200, entangled_only())) {
      const auto lb = lower_bound(sf);
      CHECK(lb.interval.r_minus > 0.0);
      CHECK(lb.eof > 0.0);
    }
  }
  SUBCASE("tmsv interval is a single point") {
    for (double r : {0.1, 0.7, 1.5}) {
      const auto iv = r_tilde_interval(tmsv(r));
      CHECK(iv.r_minus == doctest::Approx(r).epsilon(1e-12));
      CHECK(iv.r_plus == doctest::Approx(r).epsilon(1e-12));
    }
  }
  SUBCASE("terms are consistent") {
    const auto sf = StandardForm::make(3, 2, 1.5, -1.0);
    const auto t = r_tilde_terms(sf);
    const auto inv = sf.invariants();
    const double lp = inv.det_a + inv.det_b - 2 * inv.det_c + 2 * ((3 * 2 - 1.5 * -1.0) + 2.5 * 5);
    const double lm = inv.det_a + inv.det_b - 2 * inv.det_c + 2 * ((3 * 2 - 1.5 * -1.0) - 2.5 * 5);
    CHECK(t.lambda_plus == doctest::Approx(lp));
    CHECK(t.lambda_minus == doctest::Approx(lm));
    CHECK(t.kappa == doctest::Approx(2 * (inv.det_sigma + 1) - 1));
    CHECK(t.lambda_minus * t.x_minus * t.x_minus - 2 * t.kappa * t.x_minus + t.lambda_plus ==
          doctest::Approx(0.0).epsilon(1e-12).scale(t.kappa));
  }
}
