#include "gaussent/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "gaussent/decomp.hpp"
#include "gaussent/measures.hpp"

namespace gaussent {

namespace {

// ---------------------------------------------------------------------------
// Nelder-Mead over R^N, backed by GSL's nmsimplex2.

template <std::size_t N>
struct SimplexRun {
  std::array<double, N> x{};
  double f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

void disable_gsl_abort() {
  static const bool once = [] {
    gsl_set_error_handler_off();
    return true;
  }();
  (void)once;
}

struct SimplexStop {
  double size_tol;  // converged once the simplex is this small
  double f_tol;     // or once the best value improves by less than this
  int window;       // over this many iterations
  double floor = -std::numeric_limits<double>::infinity();  // known global minimum
};

// Runs until one of the SimplexStop tests passes. The nested objective is
// piecewise flat at the bisection resolution, so the simplex can stall
// without shrinking; the value test covers that case.
template <std::size_t N>
SimplexRun<N> nelder_mead(const std::function<double(const std::array<double, N>&)>& objective,
                          const std::array<double, N>& start, double step,
                          const SimplexStop& stop, int max_iterations) {
  disable_gsl_abort();
  struct Ctx {
    const std::function<double(const std::array<double, N>&)>* f;
  } ctx{&objective};

  gsl_multimin_function fn;
  fn.n = N;
  fn.params = &ctx;
  fn.f = [](const gsl_vector* v, void* p) -> double {
    std::array<double, N> x;
    for (std::size_t i = 0; i < N; ++i) x[i] = gsl_vector_get(v, i);
    const double value = (*static_cast<Ctx*>(p)->f)(x);
    return std::isfinite(value) ? value : 1e300;
  };

  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x0(gsl_vector_alloc(N), gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> steps(gsl_vector_alloc(N),
                                                                gsl_vector_free);
  for (std::size_t i = 0; i < N; ++i) gsl_vector_set(x0.get(), i, start[i]);
  gsl_vector_set_all(steps.get(), step);

  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> solver(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, N),
      gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(solver.get(), &fn, x0.get(), steps.get());

  // fminimizer_set does not fill solver->fval, so evaluate the start here.
  SimplexRun<N> run;
  const double f0 = objective(start);
  std::vector<double> history{f0};
  if (f0 <= stop.floor) {
    run.converged = true;
    run.x = start;
    run.f = f0;
    return run;
  }
  {
    for (run.iterations = 1; run.iterations <= max_iterations; ++run.iterations) {
      const int status = gsl_multimin_fminimizer_iterate(solver.get());
      if (status == GSL_ENOPROG) {
        run.converged = true;  // stalled at machine precision
        break;
      }
      if (status != GSL_SUCCESS) break;
      history.push_back(solver->fval);
      const bool small = gsl_multimin_test_size(gsl_multimin_fminimizer_size(solver.get()),
                                                stop.size_tol) == GSL_SUCCESS;
      const bool stalled =
          run.iterations >= stop.window &&
          history[run.iterations - stop.window] - solver->fval <= stop.f_tol;
      if (small || stalled || solver->fval <= stop.floor) {
        run.converged = true;
        break;
      }
    }
  }
  run.iterations = std::min(run.iterations, max_iterations);
  for (std::size_t i = 0; i < N; ++i) run.x[i] = gsl_vector_get(solver->x, i);
  run.f = solver->fval;
  return run;
}

// ---------------------------------------------------------------------------
// Feasibility of the squeeze-then-local residual
//   S2(-r) L(-r1,-r2) sigma L^T S2^T(-r) >= 1.
// Every factor is block diagonal in (x1,x2) | (p1,p2), so the residual's
// smallest eigenvalue is the smaller of two 2x2 closed forms.

double min_eig2(double p, double q, double off) {
  const double half_diff = 0.5 * (p - q);
  return 0.5 * (p + q) - std::sqrt(half_diff * half_diff + off * off);
}

class FeasibilityProbe {
 public:
  FeasibilityProbe(const StandardForm& sf, double r1, double r2) {
    const double e1 = std::exp(2.0 * r1), e2 = std::exp(2.0 * r2), e12 = std::exp(r1 + r2);
    // L(-r1,-r2) = diag(e^{r1}, e^{-r1}, e^{r2}, e^{-r2})
    xa_ = sf.a() * e1;
    xb_ = sf.b() * e2;
    xc_ = sf.c1() * e12;
    pa_ = sf.a() / e1;
    pb_ = sf.b() / e2;
    pc_ = sf.c2() / e12;
  }

  // lambda_min(residual) - 1
  double operator()(double r) const {
    const double ch = std::cosh(r), sh = std::sinh(r);
    // x block: T = [[ch, -sh], [-sh, ch]]; p block: T = [[ch, sh], [sh, ch]]
    const double xp = ch * ch * xa_ - 2.0 * ch * sh * xc_ + sh * sh * xb_;
    const double xq = sh * sh * xa_ - 2.0 * ch * sh * xc_ + ch * ch * xb_;
    const double xo = -ch * sh * (xa_ + xb_) + (ch * ch + sh * sh) * xc_;
    const double pp = ch * ch * pa_ + 2.0 * ch * sh * pc_ + sh * sh * pb_;
    const double pq = sh * sh * pa_ + 2.0 * ch * sh * pc_ + ch * ch * pb_;
    const double po = ch * sh * (pa_ + pb_) + (ch * ch + sh * sh) * pc_;
    return std::min(min_eig2(xp, xq, xo), min_eig2(pp, pq, po)) - 1.0;
  }

 private:
  double xa_, xb_, xc_, pa_, pb_, pc_;
};

struct InnerResult {
  bool feasible = false;
  double r = 0.0;    // least feasible r (upper end of the bracket)
  double gap = 0.0;  // bracket width
  double best_phi = -std::numeric_limits<double>::infinity();
};

class NestedSearch {
 public:
  NestedSearch(const StandardForm& sf, const EofOptions& opt, double lo, double hi)
      : sf_(sf), opt_(opt), lo_(lo), hi_(hi) {}

  double ceiling() const { return hi_; }

  InnerResult least_feasible_r(double r1, double r2) const {
    const FeasibilityProbe phi(sf_, r1, r2);
    const double tol = opt_.feasibility_tol;
    auto feasible = [&](double r) { return phi(r) >= -tol; };

    const int n = std::max(2, opt_.scan_points);
    const double h = (hi_ - lo_) / (n - 1);
    auto node = [&](int k) { return k == n - 1 ? hi_ : lo_ + k * h; };

    InnerResult out;
    int best_k = 0;
    for (int k = 0; k < n; ++k) {
      const double r = node(k);
      const double value = phi(r);
      if (value >= -tol) {
        if (k == 0) {
          out.feasible = true;
          out.r = r;
          out.best_phi = value;
          return out;
        }
        return bisect(phi, node(k - 1), r, value);
      }
      if (value > out.best_phi) {
        out.best_phi = value;
        best_k = k;
      }
    }

    // No scan node is feasible; the feasible set may be narrower than the
    // scan step, so maximize the indicator around the best node.
    const double left = node(std::max(0, best_k - 1));
    const double right = node(std::min(n - 1, best_k + 1));
    if (right > left) {
      const auto peak = boost::math::tools::brent_find_minima(
          [&](double r) { return -phi(r); }, left, right, std::numeric_limits<double>::digits);
      const double value = -peak.second;
      if (value > out.best_phi) out.best_phi = value;
      if (feasible(peak.first)) {
        if (peak.first <= lo_) {
          out.feasible = true;
          out.r = lo_;
          return out;
        }
        return bisect(phi, left, peak.first, value);
      }
    }
    return out;
  }

  // Objective for the outer simplex: least feasible r, or a barrier value
  // above the ceiling that decreases as the indicator approaches feasibility.
  double objective(double r1, double r2) const {
    const InnerResult inner = least_feasible_r(r1, r2);
    if (inner.feasible) return inner.r;
    return hi_ + 1.0 - inner.best_phi;
  }

 private:
  InnerResult bisect(const FeasibilityProbe& phi, double infeasible, double feasible_r,
                     double phi_at_feasible) const {
    double a = infeasible, b = feasible_r;
    for (int step = 0; step < opt_.max_bisection_steps; ++step) {
      if (b - a <= 1e-14 * std::max(1.0, b)) break;
      const double mid = 0.5 * (a + b);
      if (phi(mid) >= -opt_.feasibility_tol)
        b = mid;
      else
        a = mid;
    }
    InnerResult out;
    out.feasible = true;
    out.r = b;
    out.gap = b - a;
    out.best_phi = phi_at_feasible;
    return out;
  }

  const StandardForm& sf_;
  const EofOptions& opt_;
  double lo_, hi_;
};

void validate(const EofOptions& opt) {
  if (!(opt.tol > 0.0)) throw InvalidArgument("exact_eof: tol must be > 0");
  if (opt.max_outer_iterations < 1 || opt.max_bisection_steps < 1 || opt.scan_points < 2)
    throw InvalidArgument("exact_eof: iteration budgets must be positive");
  if (!(opt.feasibility_tol >= 0.0)) throw InvalidArgument("exact_eof: feasibility_tol < 0");
}

EofResult finish(const StandardForm& sf, double r, double r1, double r2, double gap,
                 int iterations) {
  EofResult res;
  res.r_o = std::max(r, 0.0);
  res.eof = eof_from_squeezing(res.r_o);
  res.r1_o = r1;
  res.r2_o = r2;
  res.iterations = iterations;
  res.certified_gap = gap;
  res.residual_margin = classical_margin(
      classical_residual(sf, {res.r_o, r1, r2}, DecompositionKind::SqueezeThenLocal));
  return res;
}

std::string describe(const StandardForm& sf) {
  std::ostringstream os;
  os.precision(12);
  os << "(a=" << sf.a() << " b=" << sf.b() << " c1=" << sf.c1() << " c2=" << sf.c2() << ")";
  return os.str();
}

}  // namespace

EofResult exact_eof(const StandardForm& sf, const EofOptions& opt) {
  validate(opt);
  const RTildeInterval interval = r_tilde_interval(sf);
  double lo = std::max(0.0, interval.r_minus - opt.scan_margin);
  const double hi = std::max(interval.r_plus, lo);

  // A feasible point at the bottom of the scan window means the window
  // started too high; widen it down to zero.
  {
    const NestedSearch probe(sf, opt, lo, hi);
    const InnerResult at_origin = probe.least_feasible_r(0.0, 0.0);
    if (lo > 0.0 && at_origin.feasible && at_origin.r <= lo) lo = 0.0;
  }
  const NestedSearch search(sf, opt, lo, hi);

  struct Candidate {
    double r1, r2, f;
    int iterations;
    bool converged;
  };
  std::vector<Candidate> runs;
  int total_iterations = 0;
  SimplexStop stop;
  stop.size_tol = std::min(1e-8, 1e-2 * opt.tol);
  stop.f_tol = 1e-2 * opt.tol;
  stop.window = 30;
  if (lo == 0.0) stop.floor = 0.0;  // r >= 0, so reaching zero is optimal

  if (opt.strategy == EofStrategy::Nested) {
    std::vector<std::array<double, 2>> seeds;
    if (opt.use_default_seeds) {
      seeds.push_back({0.0, 0.0});
      if (opt.grid_points >= 2) {
        std::array<double, 2> best{0.0, 0.0};
        double best_f = search.objective(0.0, 0.0);
        const double w = opt.grid_half_width;
        for (int i = 0; i < opt.grid_points; ++i)
          for (int j = 0; j < opt.grid_points; ++j) {
            const double r1 = -w + 2.0 * w * i / (opt.grid_points - 1);
            const double r2 = -w + 2.0 * w * j / (opt.grid_points - 1);
            const double f = search.objective(r1, r2);
            if (f < best_f) {
              best_f = f;
              best = {r1, r2};
            }
          }
        if (best[0] != 0.0 || best[1] != 0.0) seeds.push_back(best);
      }
    }
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(-opt.grid_half_width, opt.grid_half_width);
    for (int k = 0; k < opt.random_restarts; ++k) seeds.push_back({unit(rng), unit(rng)});
    if (seeds.empty()) throw InvalidArgument("exact_eof: no simplex seeds configured");

    const std::function<double(const std::array<double, 2>&)> objective =
        [&](const std::array<double, 2>& x) { return search.objective(x[0], x[1]); };
    for (const auto& seed : seeds) {
      const SimplexRun<2> run =
          nelder_mead<2>(objective, seed, 0.25, stop, opt.max_outer_iterations);
      total_iterations += run.iterations;
      runs.push_back({run.x[0], run.x[1], run.f, run.iterations, run.converged});
    }
  } else {
    // Penalized simplex over (r, r1, r2); the locals are then polished by
    // the certified inner search. The penalty weight is raised in stages so
    // that early stages can slide along the feasibility wall instead of
    // stalling against a steep ridge.
    auto penalized = [&](double weight) {
      return std::function<double(const std::array<double, 3>&)>(
          [&sf, &opt, weight](const std::array<double, 3>& x) {
            const double phi = FeasibilityProbe(sf, x[1], x[2])(x[0]);
            const double violation = std::max(0.0, -phi - opt.feasibility_tol);
            return x[0] + weight * violation + (x[0] < 0.0 ? weight * -x[0] : 0.0);
          });
    };
    SimplexStop stop3 = stop;
    stop3.window = 40;
    stop3.floor = -std::numeric_limits<double>::infinity();
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> unit(-opt.grid_half_width, opt.grid_half_width);
    std::vector<std::array<double, 3>> seeds;
    if (opt.use_default_seeds) seeds.push_back({hi, 0.0, 0.0});
    for (int k = 0; k < opt.random_restarts; ++k) seeds.push_back({hi, unit(rng), unit(rng)});
    if (seeds.empty()) throw InvalidArgument("exact_eof: no simplex seeds configured");
    for (const auto& seed : seeds) {
      std::array<double, 3> x = seed;
      int iterations = 0;
      bool converged = true;
      double step = 0.25;
      for (double weight : {1.0, 10.0, 100.0, 1e3}) {
        const SimplexRun<3> run = nelder_mead<3>(penalized(weight), x, step, stop3,
                                                 opt.max_outer_iterations - iterations);
        iterations += run.iterations;
        converged = run.converged;
        x = run.x;
        step = std::max(0.3 * step, 1e-3);
        if (!converged || iterations >= opt.max_outer_iterations) break;
      }
      total_iterations += iterations;
      runs.push_back({x[1], x[2], search.objective(x[1], x[2]), iterations, converged});
    }
  }

  const auto best = std::min_element(runs.begin(), runs.end(), [](const auto& x, const auto& y) {
    return x.f < y.f;
  });
  const InnerResult inner = search.least_feasible_r(best->r1, best->r2);
  if (!inner.feasible) {
    throw InternalError("exact_eof: no classical residual found below r_plus = " +
                        std::to_string(hi) + " for " + describe(sf));
  }
  EofResult res = finish(sf, inner.r, best->r1, best->r2, inner.gap, total_iterations);
  if (!best->converged) {
    throw EofBudgetExceeded("exact_eof: simplex did not converge within " +
                                std::to_string(opt.max_outer_iterations) + " iterations for " +
                                describe(sf),
                            res);
  }
  if (res.certified_gap > opt.tol) {
    throw EofBudgetExceeded("exact_eof: bisection bracket wider than tol for " + describe(sf),
                            res);
  }
  return res;
}

SweepResult appendix_sweep(const StandardForm& sf, int n_grid) {
  if (n_grid < 1) throw InvalidArgument("appendix_sweep: n_grid must be >= 1");
  if (is_separable(sf)) throw InvalidArgument("appendix_sweep: state is separable");
  const RTildeInterval interval = r_tilde_interval(sf);
  SweepResult out;
  out.r_prime_min = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n_grid; ++k) {
    const double r_tilde =
        n_grid == 1 ? interval.r_minus
                    : interval.r_minus + (interval.r_plus - interval.r_minus) * k / (n_grid - 1);
    try {
      const LocalSqueezing locals = local_squeeze_params(sf, r_tilde);
      const double rp = pure_equivalent(r_tilde, locals.r1, locals.r2).r_prime;
      ++out.evaluated;
      if (rp < out.r_prime_min) {
        out.r_prime_min = rp;
        out.r_tilde_at_min = r_tilde;
      }
    } catch (const DomainError&) {
      ++out.skipped;
    }
  }
  if (out.evaluated == 0) throw DomainError("appendix_sweep: every grid point failed");
  out.eof = eof_from_squeezing(out.r_prime_min);
  return out;
}

double appendix_sweep_eof(const StandardForm& sf, int n_grid) {
  return appendix_sweep(sf, n_grid).eof;
}

double epr_beta(const StandardForm& sf, double gx, double gp) {
  const double den = 1.0 + gx * gp;
  if (std::abs(den) <= 1e-15 * std::max(1.0, std::abs(gx * gp)))
    throw DomainError("epr_beta: singular gains, 1 + gx*gp = 0");
  const double vx = sf.a() + gx * gx * sf.b() - 2.0 * gx * sf.c1();
  const double vp = sf.a() + gp * gp * sf.b() + 2.0 * gp * sf.c2();
  return vx * vp / (den * den);
}

namespace {

// beta with gains tan(theta), tan(phi); the factors cos^2 cancel, which
// keeps infinite gains (theta = +-pi/2) in the domain.
double beta_by_angle(const StandardForm& sf, double theta, double phi) {
  const double cx = std::cos(theta), sx = std::sin(theta);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double den = std::cos(theta - phi);
  if (den * den < 1e-300) return std::numeric_limits<double>::infinity();
  const double vx = sf.a() * cx * cx + sf.b() * sx * sx - 2.0 * sf.c1() * sx * cx;
  const double vp = sf.a() * cp * cp + sf.b() * sp * sp + 2.0 * sf.c2() * sp * cp;
  return vx * vp / (den * den);
}

double gain_from_angle(double angle) {
  // Fold into [-pi/2, pi/2); beta has period pi in each angle.
  double t = std::remainder(angle, std::numbers::pi);
  if (t >= 0.5 * std::numbers::pi) t -= std::numbers::pi;
  if (std::abs(std::abs(t) - 0.5 * std::numbers::pi) < 1e-15)
    return -std::numeric_limits<double>::infinity();
  return std::tan(t);
}

}  // namespace

EprResult min_beta(const StandardForm& sf, const EprOptions& opt) {
  if (opt.grid_points < 2 || opt.max_iterations < 1 || !(opt.rel_tol > 0.0))
    throw InvalidArgument("min_beta: invalid options");
  const double half_pi = 0.5 * std::numbers::pi;
  std::array<double, 2> seed{0.0, 0.0};
  double best = beta_by_angle(sf, 0.0, 0.0);
  for (int i = 0; i < opt.grid_points; ++i)
    for (int j = 0; j < opt.grid_points; ++j) {
      const double th = -half_pi + std::numbers::pi * i / (opt.grid_points - 1);
      const double ph = -half_pi + std::numbers::pi * j / (opt.grid_points - 1);
      const double value = beta_by_angle(sf, th, ph);
      if (value < best) {
        best = value;
        seed = {th, ph};
      }
    }
  const std::function<double(const std::array<double, 2>&)> objective =
      [&](const std::array<double, 2>& x) { return beta_by_angle(sf, x[0], x[1]); };
  const double step = std::numbers::pi / (opt.grid_points - 1);
  const SimplexStop stop{1e-10, 1e-3 * opt.rel_tol * best, 30};
  const SimplexRun<2> run = nelder_mead<2>(objective, seed, 0.5 * step, stop, opt.max_iterations);

  EprResult res;
  res.beta_min = run.f;
  res.gx = gain_from_angle(run.x[0]);
  res.gp = gain_from_angle(run.x[1]);
  res.iterations = run.iterations;
  const double nu = nu_tilde_minus(sf);
  const double target = nu * nu;
  if (!run.converged || std::abs(res.beta_min - target) > opt.rel_tol * target) {
    std::ostringstream os;
    os.precision(12);
    os << "min_beta: beta_min=" << res.beta_min << " differs from nu_tilde_minus^2=" << target
       << " after " << run.iterations << " iterations for " << describe(sf);
    throw EprBudgetExceeded(os.str(), res);
  }
  return res;
}

}  // namespace gaussent
