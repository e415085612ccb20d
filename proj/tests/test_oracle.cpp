#include <doctest.h>

#include <cmath>

#include "gaussent/decomp.hpp"
#include "gaussent/errors.hpp"
#include "gaussent/measures.hpp"
#include "gaussent/oracle.hpp"
#include "test_support.hpp"

using namespace gaussent;
using gaussent::testing::draw;
using gaussent::testing::entangled_only;

TEST_CASE("exact EoF of two-mode squeezed vacua") {
  for (double r : {0.05, 0.2, 0.5, 1.0, 2.0}) {
    const auto res = exact_eof(tmsv(r));
    CHECK(res.r_o == doctest::Approx(r).epsilon(1e-9));
    CHECK(res.eof == doctest::Approx(eof_from_squeezing(r)).epsilon(1e-9));
    CHECK(res.certified_gap <= 1e-6);
  }
}

TEST_CASE("exact EoF on the symmetric example") {
  const auto sf = StandardForm::make(2, 2, 1.2, -0.8);
  const auto res = exact_eof(sf);
  CHECK(res.r_o == doctest::Approx(r_tilde_interval(sf).r_minus).epsilon(1e-8));
  CHECK(res.r1_o == doctest::Approx(res.r2_o).epsilon(1e-4).scale(1.0));
  CHECK(res.residual_margin >= -1e-9);
}

TEST_CASE("separable states have zero EoF with a classical witness") {
  for (const auto& sf : draw(1, 200)) {
    if (!is_separable(sf)) continue;
    const auto res = exact_eof(sf);
    CHECK(res.r_o == 0.0);
    CHECK(res.eof == 0.0);
    CHECK(is_classical(classical_residual(sf, {0.0, res.r1_o, res.r2_o}, DecompositionKind::SqueezeThenLocal)));
  }
}

TEST_CASE("exact EoF lies between the closed-form bound and the sweep") {
  for (const auto& sf : draw(2, 100, entangled_only())) {
    const auto iv = r_tilde_interval(sf);
    const auto res = exact_eof(sf);
    CHECK(res.r_o >= iv.r_minus - 1e-9);
    CHECK(res.r_o <= iv.r_plus + 1e-9);
    CHECK(res.residual_margin >= -1e-9);
    const auto sweep = appendix_sweep(sf, 101);
    CHECK(sweep.r_prime_min >= res.r_o - 1e-7);
    CHECK(sweep.eof >= eof_lower_bound(sf) - 1e-12);
    CHECK(sweep.evaluated > 0);
  }
}

TEST_CASE("search strategies agree") {
  EofOptions penalized;
  penalized.strategy = EofStrategy::Simplex3;
  penalized.max_outer_iterations = 2000;
  for (const auto& sf : draw(3, 20, entangled_only())) {
    double r3 = 0.0;
    try {
      r3 = exact_eof(sf, penalized).r_o;
    } catch (const EofBudgetExceeded& e) {
      r3 = e.best_so_far().r_o;
    }
    // The penalized run is a feasible upper estimate; it can only be worse.
    CHECK(r3 >= exact_eof(sf).r_o - 1e-9);
    CHECK(r3 <= exact_eof(sf).r_o + 1e-3);
  }
}

TEST_CASE("random restarts are seeded") {
  EofOptions opt;
  opt.random_restarts = 3;
  opt.seed = 11;
  const auto sf = StandardForm::make(4, 1.5, 1.7, -1.2);
  const auto x = exact_eof(sf, opt), y = exact_eof(sf, opt);
  CHECK(x.r_o == y.r_o);
  CHECK(x.iterations == y.iterations);
}

TEST_CASE("exact EoF error contract") {
  const auto sf = StandardForm::make(4, 1.5, 1.7, -1.2);
  EofOptions opt;
  opt.tol = 0.0;
  CHECK_THROWS_AS(exact_eof(sf, opt), InvalidArgument);

  opt = {};
  opt.max_outer_iterations = 2;
  opt.use_default_seeds = true;
  try {
    exact_eof(sf, opt);
    FAIL("expected a budget error");
  } catch (const EofBudgetExceeded& e) {
    CHECK(e.best_so_far().r_o >= r_tilde_interval(sf).r_minus - 1e-9);
    CHECK(e.best_so_far().iterations > 0);
  }
}

TEST_CASE("grid sweep over local squeezings") {
  CHECK_THROWS_AS(appendix_sweep(StandardForm::vacuum()), InvalidArgument);
  CHECK_THROWS_AS(appendix_sweep(tmsv(0.5), 0), InvalidArgument);
  const auto t = appendix_sweep(tmsv(0.5), 11);
  CHECK(t.r_prime_min == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(appendix_sweep_eof(tmsv(0.5)) == doctest::Approx(eof_from_squeezing(0.5)));
}

TEST_CASE("EPR product") {
  const double r = 0.7;
  CHECK(epr_beta(tmsv(r), 1.0, 1.0) == doctest::Approx(std::exp(-4 * r)));
  CHECK_THROWS_AS(epr_beta(tmsv(r), 1.0, -1.0), DomainError);

  SUBCASE("minimum equals nu_tilde_minus squared") {
    for (const auto& sf : draw(4, 100)) {
      const double nu = nu_tilde_minus(sf);
      const auto res = min_beta(sf);
      CHECK(res.beta_min == doctest::Approx(nu * nu).epsilon(1e-6));
      if (std::isfinite(res.gx) && std::isfinite(res.gp) && std::abs(1 + res.gx * res.gp) > 1e-6)
        CHECK(epr_beta(sf, res.gx, res.gp) == doctest::Approx(res.beta_min).epsilon(1e-6));
    }
  }
  SUBCASE("budget") {
    EprOptions opt;
    opt.grid_points = 2;
    opt.max_iterations = 1;
    opt.rel_tol = 1e-12;
    CHECK_THROWS_AS(min_beta(StandardForm::make(4, 1.5, 1.7, -1.2), opt), EprBudgetExceeded);
    opt = {};
    opt.grid_points = 1;
    CHECK_THROWS_AS(min_beta(tmsv(r), opt), InvalidArgument);
  }
}
