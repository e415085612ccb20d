#pragma once

#include <cstdint>
#include <vector>

#include "gaussent/gstate.hpp"

namespace gaussent::testing {

inline std::vector<StandardForm> draw(std::uint64_t seed, int n, SamplerConfig cfg = {}) {
  StateSampler sampler(seed, cfg);
  std::vector<StandardForm> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(sampler.next());
  return out;
}

inline SamplerConfig entangled_only() {
  SamplerConfig cfg;
  cfg.entangled_only = true;
  return cfg;
}

inline double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace gaussent::testing
