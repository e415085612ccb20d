#pragma once

#include <cstdint>
#include <optional>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Dense>

namespace gaussent {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;

// Slack on nu_minus >= 1 absorbing rounding in constructed states.
inline constexpr double kPhysicalTol = 1e-10;

// kPhysicalTol widened by the rounding of ab - c^2 for states of scale ab;
// strongly squeezed states cannot be resolved more finely in double.
inline double physical_slack(double ab) {
  return kPhysicalTol + 16.0 * std::numeric_limits<double>::epsilon() * ab;
}

// Local symplectic invariants of a two-mode covariance matrix.
struct Invariants {
  double det_a;
  double det_b;
  double det_c;
  double det_sigma;
};

class StandardForm;

/// Real symmetric 4x4 covariance matrix in quadrature order (x1, p1, x2, p2),
/// vacuum variance 1. Intermediate matrices (residuals, noise terms) are
/// allowed; use is_physical() to check that it describes a state.
class CovMatrix {
 public:
  /// Throws DomainError if `m` is not symmetric to 1e-12 relative.
  explicit CovMatrix(const Mat4& m);

  static CovMatrix identity() { return CovMatrix(Mat4::Identity()); }

  const Mat4& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  Mat2 block_a() const { return m_.block<2, 2>(0, 0); }
  Mat2 block_b() const { return m_.block<2, 2>(2, 2); }
  Mat2 block_c() const { return m_.block<2, 2>(0, 2); }

  Invariants invariants() const;

 private:
  Mat4 m_;
};

/// Standard-form parameters: A = diag(a,a), B = diag(b,b), C = diag(c1,c2).
///
/// Instances always describe a physical state and are normalized so that
/// c1 >= |c2| (hence c1 >= 0). The maps (c1,c2) -> (c2,c1) and
/// (c1,c2) -> (-c1,-c2) are local rotations, so normalization never changes
/// the state up to local unitaries.
class StandardForm {
 public:
  /// Validates and normalizes. Throws DomainError for non-physical input.
  static StandardForm make(double a, double b, double c1, double c2);
  /// Same as make() but returns nullopt instead of throwing.
  static std::optional<StandardForm> try_make(double a, double b, double c1, double c2);

  static StandardForm vacuum() { return make(1.0, 1.0, 0.0, 0.0); }

  double a() const { return a_; }
  double b() const { return b_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }

  Invariants invariants() const;
  CovMatrix dense() const;

  bool symmetric(double tol = 1e-12) const;
  bool balanced(double tol = 1e-12) const;

  friend bool operator==(const StandardForm&, const StandardForm&) = default;

 private:
  StandardForm(double a, double b, double c1, double c2) : a_(a), b_(b), c1_(c1), c2_(c2) {}
  double a_, b_, c1_, c2_;
};

/// 4x4 symplectic matrix acting on (x1, p1, x2, p2).
class SymplecticOp {
 public:
  explicit SymplecticOp(const Mat4& m) : m_(m) {}
  static SymplecticOp identity() { return SymplecticOp(Mat4::Identity()); }

  const Mat4& matrix() const { return m_; }

  // Composition: (S * T) applies T first.
  friend SymplecticOp operator*(const SymplecticOp& s, const SymplecticOp& t) {
    return SymplecticOp(s.m_ * t.m_);
  }

  /// Max entrywise deviation of S Omega S^T from Omega.
  double symplectic_defect() const;
  bool is_symplectic(double tol = 1e-12) const { return symplectic_defect() <= tol; }

 private:
  Mat4 m_;
};

/// Two-mode symplectic form, block diagonal with [[0,1],[-1,0]].
Mat4 symplectic_form();

struct SqueezeParams {
  double r = 0.0;   // two-mode squeezing
  double r1 = 0.0;  // local squeezing on mode 1
  double r2 = 0.0;  // local squeezing on mode 2
};

/// Two-mode squeezed vacuum: a = b = cosh 2r, c1 = -c2 = sinh 2r.
/// Throws InvalidArgument for r < 0.
StandardForm tmsv(double r);

/// S2(r): diagonal blocks cosh(r) 1, off-diagonal blocks sinh(r) diag(1,-1).
SymplecticOp two_mode_squeezer(double r);

/// L(r1,r2) = S(r1) + S(r2) with S(r) = diag(e^{-r}, e^{r}), i.e. squeezing
/// of the x quadrature for r > 0.
SymplecticOp local_squeezer(double r1, double r2);

/// Congruence sigma -> S sigma S^T.
CovMatrix apply(const SymplecticOp& s, const CovMatrix& sigma);

/// Reduces a physical covariance matrix to its normalized standard form by
/// local normalization of the diagonal blocks and an SVD of the correlation
/// block. Throws DomainError for non-physical input.
StandardForm to_standard_form(const CovMatrix& sigma);

/// Positive definite, and its standard form has nu_minus >= 1 - physical_slack(ab).
bool is_physical(const CovMatrix& sigma);

// ---------------------------------------------------------------------------
// Random states

/// a, b ~ U[1, a_max]; c1 ~ U[0, span * sqrt(ab)); c2 ~ U(-c1, c1];
/// candidates that are not physical (or, with the filters, not entangled)
/// are rejected. `symmetric` forces b = a, `balanced` forces c2 = -c1.
struct SamplerConfig {
  double a_max = 5.0;
  double correlation_span = 1.0;
  bool entangled_only = false;
  bool symmetric = false;
  bool balanced = false;
  std::uint64_t max_attempts = 100000;
};

/// Seeded rejection sampler. Deterministic for a fixed (seed, config); not
/// thread-safe, use one instance per thread.
class StateSampler {
 public:
  StateSampler(std::uint64_t seed, SamplerConfig config);

  /// Throws BudgetExceeded after config.max_attempts rejected candidates.
  StandardForm next();

  const SamplerConfig& config() const { return config_; }
  /// One-line description of the sampling distribution for metadata.
  std::string describe() const;

 private:
  SamplerConfig config_;
  std::mt19937_64 rng_;
};

StandardForm random_state(std::uint64_t seed, const SamplerConfig& config = {});

}  // namespace gaussent
