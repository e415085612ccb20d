#include "gaussent/gstate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gaussent/errors.hpp"
#include "gaussent/measures.hpp"

namespace gaussent {

namespace {

double det2(const Mat2& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

}  // namespace

CovMatrix::CovMatrix(const Mat4& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (!m.allFinite()) throw DomainError("covariance matrix has non-finite entries");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw DomainError("covariance matrix is not symmetric");
  m_ = 0.5 * (m + m.transpose());
}

Invariants CovMatrix::invariants() const {
  return {det2(block_a()), det2(block_b()), det2(block_c()), m_.determinant()};
}

std::optional<StandardForm> StandardForm::try_make(double a, double b, double c1, double c2) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c1) || !std::isfinite(c2))
    return std::nullopt;
  // Local rotations map (c1,c2) to (c2,c1) and (-c1,-c2); pick c1 >= |c2|.
  if (std::abs(c2) > std::abs(c1)) std::swap(c1, c2);
  if (c1 < 0.0) {
    c1 = -c1;
    c2 = -c2;
  }
  if (c1 == 0.0) c1 = 0.0;  // drop the sign of -0
  if (c2 == 0.0) c2 = 0.0;
  if (a < 1.0 - kPhysicalTol || b < 1.0 - kPhysicalTol) return std::nullopt;
  if (a * b - c1 * c1 <= 0.0 || a * b - c2 * c2 <= 0.0) return std::nullopt;
  const StandardForm sf(a, b, c1, c2);
  try {
    if (symplectic_spectrum(sf).nu_minus < 1.0 - physical_slack(a * b)) return std::nullopt;
  } catch (const DomainError&) {
    return std::nullopt;
  }
  return sf;
}

StandardForm StandardForm::make(double a, double b, double c1, double c2) {
  if (auto sf = try_make(a, b, c1, c2)) return *sf;
  std::ostringstream os;
  os.precision(12);
  os << "not a physical standard form: a=" << a << " b=" << b << " c1=" << c1 << " c2=" << c2;
  throw DomainError(os.str());
}

Invariants StandardForm::invariants() const {
  return {a_ * a_, b_ * b_, c1_ * c2_, (a_ * b_ - c1_ * c1_) * (a_ * b_ - c2_ * c2_)};
}

CovMatrix StandardForm::dense() const {
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = a_;
  m(2, 2) = m(3, 3) = b_;
  m(0, 2) = m(2, 0) = c1_;
  m(1, 3) = m(3, 1) = c2_;
  return CovMatrix(m);
}

bool StandardForm::symmetric(double tol) const {
  return std::abs(a_ - b_) <= tol * std::max(1.0, a_);
}

bool StandardForm::balanced(double tol) const {
  return std::abs(c1_ + c2_) <= tol * std::max(1.0, c1_);
}

Mat4 symplectic_form() {
  Mat4 omega = Mat4::Zero();
  omega(0, 1) = omega(2, 3) = 1.0;
  omega(1, 0) = omega(3, 2) = -1.0;
  return omega;
}

double SymplecticOp::symplectic_defect() const {
  const Mat4 omega = symplectic_form();
  return (m_ * omega * m_.transpose() - omega).cwiseAbs().maxCoeff();
}

StandardForm tmsv(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("tmsv: squeezing must be finite and >= 0");
  // (1+chi^2)/(1-chi^2) = cosh 2r and 2chi/(1-chi^2) = sinh 2r with
  // chi = tanh r; the hyperbolic forms avoid cancellation at large r.
  return StandardForm::make(std::cosh(2.0 * r), std::cosh(2.0 * r), std::sinh(2.0 * r),
                            -std::sinh(2.0 * r));
}

SymplecticOp two_mode_squeezer(double r) {
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = ch;
  m(0, 2) = m(2, 0) = sh;
  m(1, 3) = m(3, 1) = -sh;
  return SymplecticOp(m);
}

SymplecticOp local_squeezer(double r1, double r2) {
  Mat4 m = Mat4::Zero();
  m(0, 0) = std::exp(-r1);
  m(1, 1) = std::exp(r1);
  m(2, 2) = std::exp(-r2);
  m(3, 3) = std::exp(r2);
  return SymplecticOp(m);
}

CovMatrix apply(const SymplecticOp& s, const CovMatrix& sigma) {
  const Mat4 out = s.matrix() * sigma.matrix() * s.matrix().transpose();
  return CovMatrix(0.5 * (out + out.transpose()));
}

namespace {

// sqrt(det M) M^{-1/2}: a single-mode symplectic map taking M to sqrt(det M) 1.
Mat2 local_normalizer(const Mat2& m) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(m);
  const Eigen::Vector2d ev = es.eigenvalues();
  const double scale = std::sqrt(std::sqrt(ev(0) * ev(1)));
  return es.eigenvectors() *
         Eigen::Vector2d(scale / std::sqrt(ev(0)), scale / std::sqrt(ev(1))).asDiagonal() *
         es.eigenvectors().transpose();
}

struct ReducedParams {
  double a, b, c1, c2;
};

// Bring both local blocks to multiples of the identity, then remove the
// remaining local rotations with an SVD of the correlation block. Working on
// the matrix (rather than its invariants) keeps c1 and c2 accurate when
// c1 + c2 or c1 - c2 is small. Requires positive definite diagonal blocks.
ReducedParams reduce(const CovMatrix& sigma) {
  const Mat2 na = local_normalizer(sigma.block_a());
  const Mat2 nb = local_normalizer(sigma.block_b());
  const Mat2 c = na * sigma.block_c() * nb.transpose();
  Eigen::JacobiSVD<Mat2> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const double sign = svd.matrixU().determinant() * svd.matrixV().determinant() < 0.0 ? -1.0 : 1.0;
  return {std::sqrt(sigma.block_a().determinant()), std::sqrt(sigma.block_b().determinant()),
          svd.singularValues()(0), sign * svd.singularValues()(1)};
}

bool positive_definite(const CovMatrix& sigma) {
  return Eigen::LLT<Mat4>(sigma.matrix()).info() == Eigen::Success;
}

}  // namespace

StandardForm to_standard_form(const CovMatrix& sigma) {
  if (!positive_definite(sigma))
    throw DomainError("to_standard_form: covariance matrix is not positive definite");
  const ReducedParams p = reduce(sigma);
  if (auto sf = StandardForm::try_make(p.a, p.b, p.c1, p.c2)) return *sf;
  throw DomainError("to_standard_form: covariance matrix is not physical");
}

bool is_physical(const CovMatrix& sigma) {
  if (!positive_definite(sigma)) return false;
  const ReducedParams p = reduce(sigma);
  return StandardForm::try_make(p.a, p.b, p.c1, p.c2).has_value();
}

}  // namespace gaussent
