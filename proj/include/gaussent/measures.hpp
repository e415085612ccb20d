#pragma once

#include "gaussent/gstate.hpp"

namespace gaussent {

struct SymplecticSpectrum {
  double nu_minus;
  double nu_plus;
};

/// Symplectic eigenvalues from the invariants Delta = det A + det B +- 2 det C
/// (minus sign for the partial transpose) and det sigma. Throws DomainError
/// when Delta^2 - 4 det sigma is negative beyond -1e-12 (relative).
SymplecticSpectrum symplectic_spectrum(const StandardForm& sf, bool partial_transpose = false);
SymplecticSpectrum symplectic_spectrum(const CovMatrix& sigma, bool partial_transpose = false);

/// Smallest symplectic eigenvalue of the partial transpose.
double nu_tilde_minus(const StandardForm& sf);
double nu_tilde_minus(const CovMatrix& sigma);

/// PPT criterion: nu_tilde_minus >= 1 - kPhysicalTol.
bool is_separable(const StandardForm& sf);

/// max(0, -log2 nu_tilde_minus), in ebits.
double log_negativity(const StandardForm& sf);

/// Entropy of the pure state built with two-mode squeezing r_o, in ebits:
/// cosh^2 r log2 cosh^2 r - sinh^2 r log2 sinh^2 r. Throws InvalidArgument
/// for r_o < 0.
double eof_from_squeezing(double r_o);

/// Range [r_minus, r_plus] of two-mode anti-squeezing after which the state
/// has a positive partial transpose.
struct RTildeInterval {
  double r_minus;
  double r_plus;
};

/// Intermediate quantities of the disentangling-squeezing bound.
struct RTildeTerms {
  double kappa;
  double lambda_plus;
  double lambda_minus;
  double discriminant;  // kappa^2 - lambda_plus * lambda_minus, clamped at 0
  // e^{4 r_minus} and e^{4 r_plus}, evaluated without cancellation
  double x_minus;
  double x_plus;
};

RTildeTerms r_tilde_terms(const StandardForm& sf);

/// Throws DomainError when the discriminant is below -1e-10 (relative to
/// kappa^2) or lambda_minus <= 0.
RTildeInterval r_tilde_interval(const StandardForm& sf);

struct LowerBound {
  RTildeInterval interval;  // unclamped
  double r_minus_clamped;   // max(r_minus, 0)
  double eof;               // ebits
};

LowerBound lower_bound(const StandardForm& sf);

/// eof_from_squeezing(max(r_minus, 0)); a lower bound on the entanglement of
/// formation, tight for symmetric states and balanced correlations.
double eof_lower_bound(const StandardForm& sf);

}  // namespace gaussent
