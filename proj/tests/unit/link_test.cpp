#include <doctest.h>

#include <bit>
#include <cmath>

#include "tq/link.hpp"
#include "tq/rng.hpp"

using namespace tq;

TEST_CASE("bpsk mapping") {
  const std::uint8_t bits[3] = {0, 1, 0};
  CHECK(map_symbols(Modulation::bpsk, bits) ==
        std::vector<Complex>{{1, 0}, {-1, 0}, {1, 0}});
  const std::uint8_t odd[3] = {0, 1, 0};
  CHECK_THROWS_AS(map_symbols(Modulation::qam16_gray, odd),
                  std::invalid_argument);
}

TEST_CASE("16qam constellation: unit energy and Gray neighbors") {
  const std::vector<Complex> pts = constellation_points(Modulation::qam16_gray);
  REQUIRE(pts.size() == 16);
  double energy = 0.0;
  for (const Complex& p : pts) energy += std::norm(p);
  CHECK(energy / 16.0 == doctest::Approx(1.0).epsilon(1e-13));

  const double step = 2.0 / std::sqrt(10.0);
  int neighbor_pairs = 0;
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = a + 1; b < 16; ++b) {
      if (std::abs(std::abs(pts[a] - pts[b]) - step) > 1e-9) continue;
      ++neighbor_pairs;
      CHECK(std::popcount(a ^ b) == 1);
    }
  }
  CHECK(neighbor_pairs == 24);  // 2 * 3 * 4 grid edges
}

TEST_CASE("channel examples") {
  {
    ChannelSpec spec = make_channel({Complex{1.0}}, Modulation::bpsk, 1e-28);
    const std::vector<Complex> sy{{1, 0}, {-1, 0}};
    const std::vector<Complex> out = apply_channel(spec, sy, 5);
    REQUIRE(out.size() == 2);
    CHECK(std::abs(out[0] - sy[0]) < 1e-12);
    CHECK(std::abs(out[1] - sy[1]) < 1e-12);
  }
  {
    ChannelSpec spec = make_channel({Complex{1.0}, Complex{1.0}},
                                    Modulation::bpsk, 1e-28);
    const std::vector<Complex> sy{{1, 0}, {-1, 0}};
    const std::vector<Complex> out = apply_channel(spec, sy, 6);
    REQUIRE(out.size() == 3);
    CHECK(std::abs(out[0] - Complex{1, 0}) < 1e-12);
    CHECK(std::abs(out[1] - Complex{0, 0}) < 1e-12);
    CHECK(std::abs(out[2] - Complex{-1, 0}) < 1e-12);
  }
}

TEST_CASE("channel output matches a direct convolution") {
  GaussianSampler rng(0xD0);
  ChannelSpec spec;
  spec.taps = {Complex{1.2, 0.1}, Complex{-0.4, 0.3}, Complex{0.2, -0.6}};
  spec.noise_variance = 1e-28;
  spec.bits_per_symbol = 1;
  spec.constellation = constellation_points(Modulation::bpsk);
  std::vector<Complex> sy(40);
  for (Complex& x : sy) x = Complex{rng.next(), rng.next()};
  const std::vector<Complex> out = apply_channel(spec, sy, 7);
  REQUIRE(out.size() == sy.size() + 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    Complex direct{0.0, 0.0};
    for (std::size_t j = 0; j < spec.taps.size(); ++j)
      if (i >= j && i - j < sy.size()) direct += spec.taps[j] * sy[i - j];
    CHECK(std::abs(out[i] - direct) < 1e-12);
  }
}

TEST_CASE("injected noise power matches sigma^2") {
  ChannelSpec spec = make_channel({Complex{1.0}}, Modulation::bpsk, 1.3);
  const std::vector<Complex> zeros(1000000, Complex{0.0, 0.0});
  const std::vector<Complex> out = apply_channel(spec, zeros, 0xD1);
  double moment = 0.0;
  for (const Complex& y : out) moment += std::norm(y);
  moment /= static_cast<double>(out.size());
  CHECK(moment == doctest::Approx(1.3).epsilon(0.01));
}

TEST_CASE("noise variance accounting") {
  const ScenarioSpec sc = scenario1();
  CHECK(noise_variance_for(0.0, sc) ==
        doctest::Approx(1024.0 / 1014.0).epsilon(1e-14));

  ScenarioSpec doubled = sc;
  for (Complex& h : doubled.taps) h *= std::sqrt(2.0);
  CHECK(noise_variance_for(4.0, doubled) ==
        doctest::Approx(2.0 * noise_variance_for(4.0, sc)).epsilon(1e-13));

  CHECK(noise_variance_for(3.0102999566398120, sc) ==
        doctest::Approx(noise_variance_for(0.0, sc) / 2.0).epsilon(1e-6));

  const ScenarioSpec sc2 = scenario2();
  CHECK(sc2.channel_gain() == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(sc2.coded_bits() == 4096);
  CHECK(sc2.symbols_per_block() == 1024);
  CHECK(sc.coded_bits() == 1024);
}

TEST_CASE("scenario validation") {
  ScenarioSpec sc = scenario1();
  sc.info_bits = 0;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  sc = scenario1();
  sc.taps.clear();
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  CHECK_THROWS_AS(builtin_scenario("nope"), std::invalid_argument);
}
