#pragma once

#include <string_view>

#include "gaussent/gstate.hpp"

namespace gaussent {

enum class ChannelKind { Lossy, Amplifier, ClassicalNoise };

std::string_view to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(std::string_view s);

/// One-mode phase-insensitive Gaussian channel gamma -> U gamma U^T + V.
///   lossy(tau):           U = sqrt(tau) 1, V = (1 - tau) 1, 0 <= tau <= 1
///   amplifier(tau):       U = sqrt(tau) 1, V = (tau - 1) 1, tau >= 1
///   classical_noise(v):   U = 1,           V = v 1,         v >= 0
struct ChannelSpec {
  ChannelKind kind;
  double parameter;

  static ChannelSpec lossy(double tau) { return {ChannelKind::Lossy, tau}; }
  static ChannelSpec amplifier(double tau) { return {ChannelKind::Amplifier, tau}; }
  static ChannelSpec classical_noise(double v) { return {ChannelKind::ClassicalNoise, v}; }

  /// Throws InvalidArgument when the parameter is out of range.
  void validate() const;
  double gain() const;   // U = gain * 1
  double noise() const;  // V = noise * 1
  /// True when the channel is the identity (tau = 1 or v = 0).
  bool is_identity() const;
};

/// Applies the channel to mode 1 or 2 of the dense matrix.
CovMatrix apply_channel(const CovMatrix& sigma, const ChannelSpec& ch, int mode = 2);

/// Applies the channel and renormalizes to standard form.
StandardForm apply_channel(const StandardForm& sf, const ChannelSpec& ch, int mode = 2);

/// Optimal two-mode squeezing of a TMSV with chi = tanh r after one mode
/// passes through the channel. Classical noise above v = 2 breaks
/// entanglement and returns 0. Requires 0 <= chi < 1.
double closed_form_r_o(double chi, const ChannelSpec& ch);

/// Entanglement left by the channel for an infinitely squeezed input
/// (chi -> 1). Infinite for identity channels.
struct DeterministicBound {
  double eof;             // ebits
  double log_negativity;  // ebits
};

DeterministicBound deterministic_bound(const ChannelSpec& ch, int mode = 2);

}  // namespace gaussent
