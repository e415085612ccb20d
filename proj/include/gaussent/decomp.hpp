#pragma once

#include <string_view>

#include "gaussent/gstate.hpp"

namespace gaussent {

// Order in which squeezers act on the classical state.
enum class DecompositionKind {
  SqueezeThenLocal,  // sigma = L(r1,r2) S2(r) sigma_c S2^T(r) L^T(r1,r2)
  LocalThenSqueeze,  // sigma = S2(r) L(r1,r2) sigma_c L^T(r1,r2) S2^T(r)
};

std::string_view to_string(DecompositionKind kind);
DecompositionKind decomposition_kind_from_string(std::string_view s);

struct Decomposition {
  DecompositionKind kind;
  SqueezeParams params;
  CovMatrix classical_part;

  /// Re-applies the squeezers to classical_part.
  CovMatrix reconstruct() const;
};

/// Undoes the squeezers of the given decomposition order on sigma. The
/// result is classical only for admissible parameters; check with
/// is_classical().
CovMatrix classical_residual(const CovMatrix& sigma, const SqueezeParams& params,
                             DecompositionKind kind);
CovMatrix classical_residual(const StandardForm& sf, const SqueezeParams& params,
                             DecompositionKind kind);

Decomposition decompose(const StandardForm& sf, const SqueezeParams& params,
                        DecompositionKind kind);

/// Smallest ordinary eigenvalue minus one.
double classical_margin(const CovMatrix& sigma);

/// sigma >= 1 to within kPhysicalTol.
bool is_classical(const CovMatrix& sigma);

struct LocalSqueezing {
  double r1;
  double r2;
};

/// Local squeezings that make S2(-r_tilde) sigma S2^T(-r_tilde) classical,
/// by the closed-form expressions for the local-then-squeeze decomposition.
/// Requires r_tilde in [r_minus, r_plus] of sf; throws DomainError (with the
/// offending radicand in the message) otherwise.
LocalSqueezing local_squeeze_params(const StandardForm& sf, double r_tilde);

/// Local-then-squeeze decomposition at r_tilde with the closed-form locals.
Decomposition decompose_local_then_squeeze(const StandardForm& sf, double r_tilde);

/// Parameters of the squeeze-then-local pure state that equals
/// S2(r) L(r1,r2) 1 L^T S2^T.
struct PureEquivalent {
  double r_prime;
  double r1_prime;
  double r2_prime;
};

double r_prime(double r_tilde, double r1, double r2);
PureEquivalent pure_equivalent(double r_tilde, double r1, double r2);

/// Square grid [lo, hi]^2 with `points` nodes per axis.
struct LocalGrid {
  double lo = -1.0;
  double hi = 1.0;
  int points = 41;
};

/// Checks on the grid that r'(r_tilde, r1, r2) >= r'(r_tilde, t, t) at the
/// best diagonal point t, and that the finite-difference second derivatives
/// in r1 and r2 are >= -1e-8. Requires r_tilde > 0.
bool r_prime_convexity_check(double r_tilde, const LocalGrid& grid = {});

}  // namespace gaussent
