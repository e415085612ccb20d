#include <cmath>
#include <sstream>

#include "gaussent/errors.hpp"
#include "gaussent/gstate.hpp"
#include "gaussent/measures.hpp"

namespace gaussent {

StateSampler::StateSampler(std::uint64_t seed, SamplerConfig config)
    : config_(config), rng_(seed) {
  if (!(config_.a_max >= 1.0)) throw InvalidArgument("sampler: a_max must be >= 1");
  if (!(config_.correlation_span > 0.0 && config_.correlation_span <= 1.0))
    throw InvalidArgument("sampler: correlation span must be in (0, 1]");
  if (config_.max_attempts == 0) throw InvalidArgument("sampler: rejection budget must be positive");
}

StandardForm StateSampler::next() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t attempt = 0; attempt < config_.max_attempts; ++attempt) {
    const double a = 1.0 + (config_.a_max - 1.0) * unit(rng_);
    const double b = config_.symmetric ? a : 1.0 + (config_.a_max - 1.0) * unit(rng_);
    const double c1 = config_.correlation_span * std::sqrt(a * b) * unit(rng_);
    // c2 in (-c1, c1]
    const double c2 = config_.balanced ? -c1 : c1 * (1.0 - 2.0 * unit(rng_));
    auto sf = StandardForm::try_make(a, b, c1, c2);
    if (!sf) continue;
    if (config_.entangled_only && nu_tilde_minus(*sf) >= 1.0) continue;
    return *sf;
  }
  throw BudgetExceeded("sampler: rejection budget of " + std::to_string(config_.max_attempts) +
                       " attempts exhausted");
}

std::string StateSampler::describe() const {
  std::ostringstream os;
  os.precision(12);
  os << "a~U[1," << config_.a_max << "]";
  if (config_.symmetric)
    os << "; b=a";
  else
    os << "; b~U[1," << config_.a_max << "]";
  os << "; c1~U[0," << config_.correlation_span << "*sqrt(ab))";
  os << (config_.balanced ? "; c2=-c1" : "; c2~U(-c1,c1]");
  os << "; reject non-physical";
  if (config_.entangled_only) os << "; reject nu_tilde_minus>=1";
  return os.str();
}

StandardForm random_state(std::uint64_t seed, const SamplerConfig& config) {
  return StateSampler(seed, config).next();
}

}  // namespace gaussent
