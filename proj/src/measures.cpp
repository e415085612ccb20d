#include "gaussent/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gaussent/errors.hpp"

namespace gaussent {

namespace {

SymplecticSpectrum spectrum_from(double delta, double det_sigma) {
  double disc = delta * delta - 4.0 * det_sigma;
  if (disc < -1e-12 * std::max(1.0, delta * delta) || !(det_sigma > 0.0) || !(delta > 0.0)) {
    std::ostringstream os;
    os.precision(12);
    os << "malformed state: Delta=" << delta << " det(sigma)=" << det_sigma;
    throw DomainError(os.str());
  }
  disc = std::max(disc, 0.0);
  const double big = 0.5 * (delta + std::sqrt(disc));
  // nu_minus^2 * nu_plus^2 = det sigma; avoids cancellation in Delta - sqrt(disc).
  return {std::sqrt(det_sigma / big), std::sqrt(big)};
}

}  // namespace

SymplecticSpectrum symplectic_spectrum(const StandardForm& sf, bool partial_transpose) {
  const Invariants inv = sf.invariants();
  const double sign = partial_transpose ? -1.0 : 1.0;
  return spectrum_from(inv.det_a + inv.det_b + sign * 2.0 * inv.det_c, inv.det_sigma);
}

SymplecticSpectrum symplectic_spectrum(const CovMatrix& sigma, bool partial_transpose) {
  const Invariants inv = sigma.invariants();
  const double sign = partial_transpose ? -1.0 : 1.0;
  return spectrum_from(inv.det_a + inv.det_b + sign * 2.0 * inv.det_c, inv.det_sigma);
}

double nu_tilde_minus(const StandardForm& sf) { return symplectic_spectrum(sf, true).nu_minus; }

double nu_tilde_minus(const CovMatrix& sigma) {
  return symplectic_spectrum(sigma, true).nu_minus;
}

bool is_separable(const StandardForm& sf) { return nu_tilde_minus(sf) >= 1.0 - kPhysicalTol; }

double log_negativity(const StandardForm& sf) {
  return std::max(0.0, -std::log2(nu_tilde_minus(sf)));
}

double eof_from_squeezing(double r_o) {
  if (!(r_o >= 0.0)) throw InvalidArgument("eof_from_squeezing: squeezing must be >= 0");
  if (r_o == 0.0) return 0.0;
  if (std::isinf(r_o)) return std::numeric_limits<double>::infinity();
  const double s2 = std::sinh(r_o) * std::sinh(r_o);
  // (1+s2) log2(1+s2) - s2 log2 s2, rearranged to stay accurate for large r.
  return (std::log1p(s2) + s2 * std::log1p(1.0 / s2)) / std::numbers::ln2;
}

RTildeTerms r_tilde_terms(const StandardForm& sf) {
  const double a = sf.a(), b = sf.b(), c1 = sf.c1(), c2 = sf.c2();
  const double det_sigma = (a * b - c1 * c1) * (a * b - c2 * c2);
  const double kappa = 2.0 * (det_sigma + 1.0) - (a - b) * (a - b);
  // det A + det B - 2 det C + 2[(ab - c1c2) +- (c1 - c2)(a + b)], factored.
  const double lambda_plus = (a + b + 2.0 * c1) * (a + b - 2.0 * c2);
  const double lambda_minus = (a + b - 2.0 * c1) * (a + b + 2.0 * c2);
  if (!(lambda_minus > 0.0)) throw DomainError("r_tilde: lambda_minus <= 0");
  const double lp_lm = lambda_plus * lambda_minus;
  double disc = kappa * kappa - lp_lm;
  if (lp_lm > 0.0) {
    // disc = (kappa - s)(kappa + s) with s = sqrt(lp_lm). The roots depend on
    // sqrt(disc), so near a double root they are only as good as kappa - s.
    // Snap it to zero when it lies within the rounding already carried by
    // a, b, c1, c2, propagated to first order.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double ab = a * b, apb = a + b;
    const double f1 = ab - c1 * c1, f2 = ab - c2 * c2;
    const double err_det =
        2.0 * (std::abs(f2) * (ab + c1 * c1) + std::abs(f1) * (ab + c2 * c2));
    const double err_kappa = 2.0 * err_det + 2.0 * std::abs(a - b) * apb +
                             2.0 * (std::abs(det_sigma) + 1.0) + (a - b) * (a - b);
    const double s = std::sqrt(lp_lm);
    auto rel = [&](double c, double factor) { return (apb + 2.0 * std::abs(c)) / std::abs(factor); };
    const double err_s = 0.5 * s *
                         (rel(c1, apb + 2.0 * c1) + rel(c2, apb - 2.0 * c2) +
                          rel(c1, apb - 2.0 * c1) + rel(c2, apb + 2.0 * c2) + 4.0);
    const double gap = kappa - s;
    disc = std::abs(gap) <= 16.0 * eps * (err_kappa + err_s) ? 0.0 : gap * (kappa + s);
  }
  if (disc < -1e-10 * std::max(1.0, kappa * kappa)) {
    std::ostringstream os;
    os.precision(12);
    os << "r_tilde: kappa^2 - lambda_plus*lambda_minus = " << disc << " < 0 (kappa=" << kappa
       << ")";
    throw DomainError(os.str());
  }
  disc = std::max(disc, 0.0);
  const double big = kappa + std::sqrt(disc);
  if (!(big > 0.0)) throw DomainError("r_tilde: kappa <= 0");
  // Roots of lambda_minus x^2 - 2 kappa x + lambda_plus = 0 in x = e^{4r}.
  return {kappa, lambda_plus, lambda_minus, disc, lambda_plus / big, big / lambda_minus};
}

RTildeInterval r_tilde_interval(const StandardForm& sf) {
  const RTildeTerms t = r_tilde_terms(sf);
  // (1/2) ln sqrt(x) = ln(x) / 4
  return {0.25 * std::log(t.x_minus), 0.25 * std::log(t.x_plus)};
}

LowerBound lower_bound(const StandardForm& sf) {
  const RTildeInterval interval = r_tilde_interval(sf);
  const double clamped = std::max(interval.r_minus, 0.0);
  return {interval, clamped, eof_from_squeezing(clamped)};
}

double eof_lower_bound(const StandardForm& sf) { return lower_bound(sf).eof; }

}  // namespace gaussent
