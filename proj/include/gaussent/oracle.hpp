#pragma once

#include <cstdint>

#include "gaussent/errors.hpp"
#include "gaussent/gstate.hpp"

namespace gaussent {

enum class EofStrategy {
  Nested,    // simplex over (r1, r2), scan-then-bisect on r
  Simplex3,  // penalized simplex over (r, r1, r2)
};

struct EofOptions {
  double tol = 1e-6;  // bracket width on r_o
  int max_outer_iterations = 200;
  int max_bisection_steps = 80;
  int scan_points = 64;
  double scan_margin = 0.1;        // scan starts at max(0, r_minus - margin)
  double feasibility_tol = 1e-12;  // lambda_min(residual) >= 1 - feasibility_tol
  int grid_points = 9;             // coarse restart grid per axis
  double grid_half_width = 1.5;    // over [-w, w]^2 in (r1, r2)
  bool use_default_seeds = true;   // start from (0,0) and the best grid node
  int random_restarts = 0;         // extra simplex runs from random seeds
  std::uint64_t seed = 0;
  EofStrategy strategy = EofStrategy::Nested;
};

struct EofResult {
  double r_o = 0.0;
  double eof = 0.0;  // ebits
  double r1_o = 0.0;
  double r2_o = 0.0;
  int iterations = 0;
  double certified_gap = 0.0;    // width of the feasible/infeasible bracket on r_o
  double residual_margin = 0.0;  // lambda_min(classical residual) - 1, dense check
};

class EofBudgetExceeded : public BudgetExceeded {
 public:
  EofBudgetExceeded(const std::string& what, EofResult best)
      : BudgetExceeded(what), best_(best) {}
  const EofResult& best_so_far() const { return best_; }

 private:
  EofResult best_;
};

/// Entanglement of formation by direct search for the least two-mode
/// squeezing r over squeeze-then-local decompositions with a classical
/// residual. Throws EofBudgetExceeded if a simplex run does not converge,
/// InternalError if no feasible decomposition exists below r_plus.
EofResult exact_eof(const StandardForm& sf, const EofOptions& options = {});

struct SweepResult {
  double eof = 0.0;          // ebits, min over the grid
  double r_prime_min = 0.0;  // squeezing of the best pure equivalent
  double r_tilde_at_min = 0.0;
  int evaluated = 0;
  int skipped = 0;  // grid points with domain errors
};

/// Upper bound on the entanglement of formation: sweeps r_tilde over
/// [r_minus, r_plus], maps the closed-form local-then-squeeze decomposition
/// to its squeeze-then-local pure equivalent and keeps the least squeezing.
/// Requires an entangled state.
SweepResult appendix_sweep(const StandardForm& sf, int n_grid = 201);
double appendix_sweep_eof(const StandardForm& sf, int n_grid = 201);

/// EPR product criterion beta = Vx Vp / (1 + gx gp)^2 with
/// Vx = <(x1 - gx x2)^2>, Vp = <(p1 + gp p2)^2>. Throws DomainError when
/// 1 + gx gp = 0.
double epr_beta(const StandardForm& sf, double gx, double gp);

struct EprOptions {
  int grid_points = 21;  // seeding grid per axis, in gain angle
  int max_iterations = 2000;
  double rel_tol = 1e-6;  // required agreement of beta_min with nu_tilde_minus^2
};

struct EprResult {
  double beta_min = 0.0;
  double gx = 0.0;  // may be +-inf when the infimum sits at infinite gain
  double gp = 0.0;
  int iterations = 0;
};

class EprBudgetExceeded : public BudgetExceeded {
 public:
  EprBudgetExceeded(const std::string& what, EprResult best)
      : BudgetExceeded(what), best_(best) {}
  const EprResult& best_so_far() const { return best_; }

 private:
  EprResult best_;
};

/// Minimizes beta over gains g = tan(theta), so the search domain covers
/// infinite gains. Throws EprBudgetExceeded when the minimum does not reach
/// nu_tilde_minus^2 within options.rel_tol.
EprResult min_beta(const StandardForm& sf, const EprOptions& options = {});

}  // namespace gaussent
