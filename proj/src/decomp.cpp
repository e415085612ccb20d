#include "gaussent/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "gaussent/errors.hpp"
#include "gaussent/measures.hpp"

namespace gaussent {

std::string_view to_string(DecompositionKind kind) {
  switch (kind) {
    case DecompositionKind::SqueezeThenLocal:
      return "squeeze-then-local";
    case DecompositionKind::LocalThenSqueeze:
      return "local-then-squeeze";
  }
  return "unknown";
}

DecompositionKind decomposition_kind_from_string(std::string_view s) {
  if (s == "squeeze-then-local") return DecompositionKind::SqueezeThenLocal;
  if (s == "local-then-squeeze") return DecompositionKind::LocalThenSqueeze;
  throw InvalidArgument("unknown decomposition kind '" + std::string(s) + "'");
}

CovMatrix Decomposition::reconstruct() const {
  const SymplecticOp s2 = two_mode_squeezer(params.r);
  const SymplecticOp l = local_squeezer(params.r1, params.r2);
  return kind == DecompositionKind::SqueezeThenLocal ? apply(l * s2, classical_part)
                                                     : apply(s2 * l, classical_part);
}

CovMatrix classical_residual(const CovMatrix& sigma, const SqueezeParams& params,
                             DecompositionKind kind) {
  const SymplecticOp s2_inv = two_mode_squeezer(-params.r);
  const SymplecticOp l_inv = local_squeezer(-params.r1, -params.r2);
  return kind == DecompositionKind::SqueezeThenLocal ? apply(s2_inv * l_inv, sigma)
                                                     : apply(l_inv * s2_inv, sigma);
}

CovMatrix classical_residual(const StandardForm& sf, const SqueezeParams& params,
                             DecompositionKind kind) {
  return classical_residual(sf.dense(), params, kind);
}

Decomposition decompose(const StandardForm& sf, const SqueezeParams& params,
                        DecompositionKind kind) {
  return {kind, params, classical_residual(sf, params, kind)};
}

double classical_margin(const CovMatrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Mat4> es(sigma.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) - 1.0;
}

bool is_classical(const CovMatrix& sigma) { return classical_margin(sigma) >= -kPhysicalTol; }

namespace {

[[noreturn]] void domain_fail(const char* what, double value, const StandardForm& sf,
                              double r_tilde) {
  std::ostringstream os;
  os.precision(12);
  os << "local_squeeze_params: " << what << " = " << value << " (a=" << sf.a() << " b=" << sf.b()
     << " c1=" << sf.c1() << " c2=" << sf.c2() << " r_tilde=" << r_tilde << ")";
  throw DomainError(os.str());
}

}  // namespace

LocalSqueezing local_squeeze_params(const StandardForm& sf, double r_tilde) {
  const double a = sf.a(), b = sf.b(), c1 = sf.c1(), c2 = sf.c2();
  const RTildeTerms terms = r_tilde_terms(sf);

  // Second radicand, a^2(2b^2-1) - 2ab(c1^2+c2^2-1) + 2(a+b)(c1-c2) sinh 4r
  //   - cosh 4r ((a+b)^2 - 4c1c2) - b^2 + 2c1^2c2^2 + 2,
  // equals lambda_minus (x - x_minus)(x_plus - x) / (2x) with x = e^{4r}.
  // It vanishes at both interval endpoints, so it is evaluated factored.
  const double x = std::exp(4.0 * r_tilde);
  double below = x - terms.x_minus;
  double above = terms.x_plus - x;
  if (std::abs(below) <= 1e-12 * terms.x_minus) below = 0.0;
  if (std::abs(above) <= 1e-12 * terms.x_plus) above = 0.0;
  double q2 = terms.lambda_minus * below * above / (2.0 * x);
  if (q2 < -1e-10 * std::max(1.0, terms.kappa))
    domain_fail("r_tilde outside [r_minus, r_plus]; second radicand", q2, sf, r_tilde);
  q2 = std::max(q2, 0.0);

  // 2(det sigma - Delta + 1) >= 0 for physical states.
  double q1 = 2.0 * (a * a * (b * b - 1.0) - a * b * (c1 * c1 + c2 * c2) - b * b +
                     c1 * c2 * (c1 * c2 - 2.0) + 1.0);
  if (q1 < -1e-10 * std::max(1.0, terms.kappa)) domain_fail("first radicand", q1, sf, r_tilde);
  q1 = std::max(q1, 0.0);

  const double ch2 = std::cosh(2.0 * r_tilde);
  const double sh2 = std::sinh(2.0 * r_tilde);
  const double common = 2.0 * sh2 * (a * b * c2 - c2 * c1 * c1 + c1) +
                        (a + b) * ch2 * (a * b - c1 * c1 - 1.0);
  const double skew = (a - b) * (a * b - c1 * c1 + 1.0);
  const double den1 = 2.0 * (common - skew);
  const double den2 = 2.0 * (common + skew);
  const double purity = -2.0 + 2.0 * (a * b - c1 * c1) * (a * b - c2 * c2);
  const double shift = 2.0 * (a - b) * ((a + b) * ch2 + (c2 - c1) * sh2);
  const double root = std::sqrt(q1) * std::sqrt(q2);
  const double ratio1 = (purity - shift - root) / den1;
  const double ratio2 = (purity + shift + root) / den2;
  if (!(ratio1 > 0.0) || !std::isfinite(ratio1)) domain_fail("log argument (r1)", ratio1, sf, r_tilde);
  if (!(ratio2 > 0.0) || !std::isfinite(ratio2)) domain_fail("log argument (r2)", ratio2, sf, r_tilde);
  return {0.5 * std::log(ratio1), 0.5 * std::log(ratio2)};
}

Decomposition decompose_local_then_squeeze(const StandardForm& sf, double r_tilde) {
  const LocalSqueezing locals = local_squeeze_params(sf, r_tilde);
  return decompose(sf, {r_tilde, locals.r1, locals.r2}, DecompositionKind::LocalThenSqueeze);
}

double r_prime(double r_tilde, double r1, double r2) {
  const double e1 = std::exp(2.0 * r1);
  const double e2 = std::exp(2.0 * r2);
  const double ch = std::cosh(2.0 * r_tilde);
  const double inner = std::exp(-r1 - r2) * std::sqrt(ch * (e1 + e2) + e1 - e2) *
                       std::sqrt(ch * (e1 + e2) - e1 + e2);
  return std::acosh(std::max(1.0, 0.5 * std::sqrt(inner + 2.0)));
}

PureEquivalent pure_equivalent(double r_tilde, double r1, double r2) {
  if (!std::isfinite(r_tilde) || !std::isfinite(r1) || !std::isfinite(r2))
    throw InvalidArgument("pure_equivalent: parameters must be finite");
  const double ch2 = std::cosh(r_tilde) * std::cosh(r_tilde);
  const double sh2 = std::sinh(r_tilde) * std::sinh(r_tilde);
  const double e1 = std::exp(2.0 * r1);
  const double e2 = std::exp(2.0 * r2);
  const double p = e1 * ch2 + e2 * sh2;
  const double q = e1 * sh2 + e2 * ch2;
  const double mean = 0.5 * (r1 + r2);
  // r2' is the printed expression with csch(r) sech(r) sqrt(w-1) sqrt(w+1)
  // = 2 cosh(r1 - r2) cancelled against (e^{2r1} + e^{2r2}); finite at r = 0.
  return {r_prime(r_tilde, r1, r2), mean + 0.25 * std::log(p / q), mean + 0.25 * std::log(q / p)};
}

bool r_prime_convexity_check(double r_tilde, const LocalGrid& grid) {
  if (!(r_tilde > 0.0)) throw InvalidArgument("r_prime_convexity_check: r_tilde must be > 0");
  if (grid.points < 3 || !(grid.hi > grid.lo))
    throw InvalidArgument("r_prime_convexity_check: grid needs >= 3 points and hi > lo");
  const int n = grid.points;
  const double h = (grid.hi - grid.lo) / (n - 1);
  std::vector<double> v(static_cast<std::size_t>(n) * n);
  auto at = [&](int i, int j) -> double& { return v[static_cast<std::size_t>(i) * n + j]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) at(i, j) = r_prime(r_tilde, grid.lo + i * h, grid.lo + j * h);

  double diag_min = at(0, 0);
  for (int i = 1; i < n; ++i) diag_min = std::min(diag_min, at(i, i));
  for (double value : v)
    if (value < diag_min - 1e-12) return false;

  const double h2 = h * h;
  for (int i = 1; i + 1 < n; ++i)
    for (int j = 0; j < n; ++j) {
      if ((at(i + 1, j) - 2.0 * at(i, j) + at(i - 1, j)) / h2 < -1e-8) return false;
      if ((at(j, i + 1) - 2.0 * at(j, i) + at(j, i - 1)) / h2 < -1e-8) return false;
    }
  return true;
}

}  // namespace gaussent
