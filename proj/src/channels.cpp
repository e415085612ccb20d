#include "gaussent/channels.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gaussent/errors.hpp"
#include "gaussent/measures.hpp"

namespace gaussent {

std::string_view to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::Lossy:
      return "lossy";
    case ChannelKind::Amplifier:
      return "amplifier";
    case ChannelKind::ClassicalNoise:
      return "classical-noise";
  }
  return "unknown";
}

ChannelKind channel_kind_from_string(std::string_view s) {
  if (s == "lossy") return ChannelKind::Lossy;
  if (s == "amplifier") return ChannelKind::Amplifier;
  if (s == "classical-noise") return ChannelKind::ClassicalNoise;
  throw InvalidArgument("unknown channel kind '" + std::string(s) + "'");
}

void ChannelSpec::validate() const {
  const double p = parameter;
  bool ok = std::isfinite(p);
  switch (kind) {
    case ChannelKind::Lossy:
      ok = ok && p >= 0.0 && p <= 1.0;
      break;
    case ChannelKind::Amplifier:
      ok = ok && p >= 1.0;
      break;
    case ChannelKind::ClassicalNoise:
      ok = ok && p >= 0.0;
      break;
  }
  if (!ok)
    throw InvalidArgument("invalid " + std::string(to_string(kind)) +
                          " channel parameter " + std::to_string(p));
}

double ChannelSpec::gain() const {
  return kind == ChannelKind::ClassicalNoise ? 1.0 : std::sqrt(parameter);
}

double ChannelSpec::noise() const {
  switch (kind) {
    case ChannelKind::Lossy:
      return 1.0 - parameter;
    case ChannelKind::Amplifier:
      return parameter - 1.0;
    case ChannelKind::ClassicalNoise:
      return parameter;
  }
  return 0.0;
}

bool ChannelSpec::is_identity() const {
  return kind == ChannelKind::ClassicalNoise ? parameter == 0.0 : parameter == 1.0;
}

namespace {

void check_mode(int mode) {
  if (mode != 1 && mode != 2) throw InvalidArgument("channel mode must be 1 or 2");
}

}  // namespace

CovMatrix apply_channel(const CovMatrix& sigma, const ChannelSpec& ch, int mode) {
  ch.validate();
  check_mode(mode);
  const int off = mode == 1 ? 0 : 2;
  Mat4 u = Mat4::Identity();
  Mat4 v = Mat4::Zero();
  u(off, off) = u(off + 1, off + 1) = ch.gain();
  v(off, off) = v(off + 1, off + 1) = ch.noise();
  return CovMatrix(u * sigma.matrix() * u.transpose() + v);
}

StandardForm apply_channel(const StandardForm& sf, const ChannelSpec& ch, int mode) {
  ch.validate();
  check_mode(mode);
  const double g = ch.gain();
  const double n = ch.noise();
  // Phase-insensitive channels keep A, B, C diagonal.
  const double a = mode == 1 ? g * g * sf.a() + n : sf.a();
  const double b = mode == 2 ? g * g * sf.b() + n : sf.b();
  return StandardForm::make(a, b, g * sf.c1(), g * sf.c2());
}

double closed_form_r_o(double chi, const ChannelSpec& ch) {
  ch.validate();
  if (!(chi >= 0.0 && chi < 1.0)) throw InvalidArgument("closed_form_r_o: chi must be in [0, 1)");
  const double p = ch.parameter;
  auto half_log_ratio = [](double num, double den) { return 0.5 * std::log(num / den); };
  switch (ch.kind) {
    case ChannelKind::Lossy:
      return half_log_ratio(1.0 + chi * std::sqrt(p), 1.0 - chi * std::sqrt(p));
    case ChannelKind::Amplifier:
      return half_log_ratio(std::sqrt(p) + chi, std::sqrt(p) - chi);
    case ChannelKind::ClassicalNoise:
      if (p > 2.0) return 0.0;  // entanglement breaking
      return half_log_ratio(2.0 + p + chi * (2.0 - p), 2.0 + p + chi * (p - 2.0));
  }
  return 0.0;
}

namespace {

// chi -> 1 limit of closed_form_r_o.
double limiting_r_o(const ChannelSpec& ch) {
  const double p = ch.parameter;
  switch (ch.kind) {
    case ChannelKind::Lossy:
      return 0.5 * std::log((1.0 + std::sqrt(p)) / (1.0 - std::sqrt(p)));
    case ChannelKind::Amplifier:
      return 0.5 * std::log((std::sqrt(p) + 1.0) / (std::sqrt(p) - 1.0));
    case ChannelKind::ClassicalNoise:
      return p > 2.0 ? 0.0 : 0.5 * std::log(4.0 / (2.0 * p));
  }
  return 0.0;
}

// nu_tilde_minus of the channel output for chi -> 1. With U = g 1 and
// V = n 1 on one mode of a TMSV (a = cosh 2r, c = sinh 2r),
//   nu = 2 (g^2 + n a) / (a + b' + sqrt((a - b')^2 + 4 g^2 c^2)),
// b' = g^2 a + n, which tends to n / (1 + g^2) as a -> infinity. The TMSV is
// symmetric, so the limit does not depend on the mode.
double limiting_nu_tilde_minus(const ChannelSpec& ch) {
  const double g = ch.gain();
  return ch.noise() / (1.0 + g * g);
}

}  // namespace

DeterministicBound deterministic_bound(const ChannelSpec& ch, int mode) {
  ch.validate();
  check_mode(mode);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (ch.is_identity()) return {inf, inf};
  const double nu = limiting_nu_tilde_minus(ch);
  const double en = nu > 0.0 ? std::max(0.0, -std::log2(nu)) : inf;
  return {eof_from_squeezing(limiting_r_o(ch)), en};
}

}  // namespace gaussent
