#include <doctest.h>

#include <cmath>
#include <random>

#include "gaussent/channels.hpp"
#include "gaussent/errors.hpp"
#include "gaussent/measures.hpp"
#include "test_support.hpp"

using namespace gaussent;
using gaussent::testing::draw;
using gaussent::testing::max_abs;

namespace {

ChannelSpec random_channel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (static_cast<int>(3 * u(rng))) {
    case 0:
      return ChannelSpec::lossy(u(rng));
    case 1:
      return ChannelSpec::amplifier(1.0 + 4.0 * u(rng));
    default:
      return ChannelSpec::classical_noise(5.0 * u(rng));
  }
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(ChannelSpec::lossy(0.0).validate());
  CHECK_NOTHROW(ChannelSpec::lossy(1.0).validate());
  CHECK_THROWS_AS(ChannelSpec::lossy(1.1).validate(), InvalidArgument);
  CHECK_THROWS_AS(ChannelSpec::lossy(-0.1).validate(), InvalidArgument);
  CHECK_THROWS_AS(ChannelSpec::amplifier(0.9).validate(), InvalidArgument);
  CHECK_THROWS_AS(ChannelSpec::classical_noise(-1).validate(), InvalidArgument);
  CHECK_THROWS_AS(ChannelSpec::classical_noise(NAN).validate(), InvalidArgument);
  CHECK_THROWS_AS(apply_channel(tmsv(0.3), ChannelSpec::lossy(0.5), 3), InvalidArgument);
  for (auto k : {ChannelKind::Lossy, ChannelKind::Amplifier, ChannelKind::ClassicalNoise})
    CHECK(channel_kind_from_string(to_string(k)) == k);
  CHECK_THROWS_AS(channel_kind_from_string("phase-flip"), InvalidArgument);
}

TEST_CASE("identity channels") {
  const auto sf = StandardForm::make(3, 2, 1.5, -1.0);
  CHECK(ChannelSpec::lossy(1.0).is_identity());
  CHECK(ChannelSpec::amplifier(1.0).is_identity());
  CHECK(ChannelSpec::classical_noise(0.0).is_identity());
  CHECK(apply_channel(sf, ChannelSpec::lossy(1.0)) == sf);
  CHECK(max_abs(apply_channel(sf.dense(), ChannelSpec::classical_noise(0.0)).matrix() - sf.dense().matrix()) == 0.0);
}

TEST_CASE("complete loss leaves vacuum on the channeled mode") {
  const auto out = apply_channel(tmsv(1.0).dense(), ChannelSpec::lossy(0.0), 2).matrix();
  CHECK(out(2, 2) == doctest::Approx(1.0));
  CHECK(out(3, 3) == doctest::Approx(1.0));
  CHECK(out(0, 2) == doctest::Approx(0.0));
  CHECK(out(0, 0) == doctest::Approx(std::cosh(2.0)));
}

TEST_CASE("dense and standard-form channels agree and stay physical") {
  std::mt19937_64 rng(3);
  for (const auto& sf : draw(4, 200)) {
    const ChannelSpec ch = random_channel(rng);
    for (int mode : {1, 2}) {
      const CovMatrix dense = apply_channel(sf.dense(), ch, mode);
      CHECK(is_physical(dense));
      const StandardForm direct = apply_channel(sf, ch, mode);
      const StandardForm reduced = to_standard_form(dense);
      const double scale = std::max(1.0, direct.a() + direct.b());
      CHECK(std::abs(direct.a() - reduced.a()) <= 1e-10 * scale);
      CHECK(std::abs(direct.b() - reduced.b()) <= 1e-10 * scale);
      CHECK(std::abs(direct.c1() - reduced.c1()) <= 1e-10 * scale);
      CHECK(std::abs(direct.c2() - reduced.c2()) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("channels never increase entanglement") {
  std::mt19937_64 rng(5);
  for (const auto& sf : draw(6, 200, gaussent::testing::entangled_only())) {
    const ChannelSpec ch = random_channel(rng);
    CHECK(log_negativity(apply_channel(sf, ch)) <= log_negativity(sf) + 1e-12);
  }
}

TEST_CASE("closed-form optimal squeezing") {
  CHECK(closed_form_r_o(0.0, ChannelSpec::lossy(0.5)) == 0.0);
  CHECK(closed_form_r_o(std::tanh(0.8), ChannelSpec::lossy(1.0)) == doctest::Approx(0.8).epsilon(1e-13));
  CHECK(closed_form_r_o(std::tanh(1.0), ChannelSpec::lossy(0.5)) == doctest::Approx(0.602080559269).epsilon(1e-11));
  CHECK(closed_form_r_o(0.9, ChannelSpec::classical_noise(2.5)) == 0.0);
  CHECK_THROWS_AS(closed_form_r_o(1.0, ChannelSpec::lossy(0.5)), InvalidArgument);
  CHECK_THROWS_AS(closed_form_r_o(-0.1, ChannelSpec::lossy(0.5)), InvalidArgument);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 0.995);
  for (int k = 0; k < 300; ++k) {
    const double chi = u(rng);
    const ChannelSpec ch = random_channel(rng);
    for (int mode : {1, 2}) {
      const auto out = to_standard_form(apply_channel(tmsv(std::atanh(chi)).dense(), ch, mode));
      CHECK(closed_form_r_o(chi, ch) == doctest::Approx(lower_bound(out).r_minus_clamped).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("deterministic bounds") {
  const auto id = deterministic_bound(ChannelSpec::lossy(1.0));
  CHECK(std::isinf(id.eof));
  CHECK(std::isinf(id.log_negativity));

  const auto broken = deterministic_bound(ChannelSpec::classical_noise(3.0));
  CHECK(broken.eof == 0.0);
  CHECK(broken.log_negativity == 0.0);

  for (double tau : {0.1, 0.5, 0.9}) {
    const auto b = deterministic_bound(ChannelSpec::lossy(tau));
    CHECK(b.log_negativity == doctest::Approx(-std::log2((1 - tau) / (1 + tau))).epsilon(1e-13));
    CHECK(b.eof == doctest::Approx(eof_from_squeezing(0.5 * std::log((1 + std::sqrt(tau)) / (1 - std::sqrt(tau))))));
  }

  // The bounds are the large-squeezing limits of the channeled TMSV.
  std::mt19937_64 rng(9);
  for (int k = 0; k < 30; ++k) {
    const ChannelSpec ch = random_channel(rng);
    if (ch.is_identity()) continue;
    const auto b = deterministic_bound(ch);
    const double chi = 1.0 - 1e-7;
    const auto out = apply_channel(tmsv(std::atanh(chi)), ch);
    CHECK(log_negativity(out) == doctest::Approx(b.log_negativity).epsilon(1e-5).scale(1.0));
    CHECK(eof_from_squeezing(closed_form_r_o(chi, ch)) <= b.eof + 1e-12);
    CHECK(eof_from_squeezing(closed_form_r_o(chi, ch)) == doctest::Approx(b.eof).epsilon(1e-5).scale(1.0));
  }
}
