#include <doctest.h>

#include <sstream>

#include "tq/interleaver.hpp"
#include "tq/link.hpp"
#include "tq/rng.hpp"

using namespace tq;

TEST_CASE("drp composition: identity and pure relative-prime map") {
  const std::uint32_t id1[1] = {0};
  const Permutation ident = make_drp(8, id1, id1, 1, 0);
  for (std::uint32_t i = 0; i < 8; ++i) CHECK(ident.forward[i] == i);

  const Permutation rp = make_drp(8, id1, id1, 3, 0);
  CHECK(rp.forward == std::vector<std::uint32_t>{0, 3, 6, 1, 4, 7, 2, 5});
}

TEST_CASE("drp parameter validation") {
  const std::uint32_t id1[1] = {0};
  CHECK_THROWS_AS(make_drp(8, id1, id1, 2, 0), std::invalid_argument);
  const std::uint32_t not_perm[2] = {0, 0};
  CHECK_THROWS_AS(make_drp(8, not_perm, id1, 3, 0), std::invalid_argument);
  const std::uint32_t window3[3] = {2, 0, 1};
  CHECK_THROWS_AS(make_drp(8, window3, id1, 3, 0), std::invalid_argument);
}

TEST_CASE("swap permutation reverses a pair") {
  Permutation swap2;
  swap2.forward = {1, 0};
  const double seq[2] = {3.5, -1.25};
  CHECK(interleave<double>(swap2, seq) == std::vector<double>{-1.25, 3.5});
}

TEST_CASE("interleave then deinterleave is the identity") {
  GaussianSampler rng(0xC0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t size = 2 + rng.raw() % 200;
    const Permutation p = make_random_permutation(size, rng.raw());
    p.validate();
    std::vector<double> seq(size);
    for (double& v : seq) v = rng.next();
    CHECK(deinterleave<double>(p, interleave<double>(p, seq)) == seq);
  }
}

TEST_CASE("length mismatches are rejected") {
  const Permutation p = make_random_permutation(16, 1);
  const std::vector<double> wrong(15, 0.0);
  CHECK_THROWS_AS(interleave<double>(p, wrong), std::invalid_argument);
  CHECK_THROWS_AS(deinterleave<double>(p, wrong), std::invalid_argument);
}

TEST_CASE("default scenario interleavers are bijective with spread >= 2") {
  for (const ScenarioSpec& sc : {scenario1(), scenario2()}) {
    const Permutation p = sc.interleaver.build(sc.coded_bits());
    CHECK(p.size() == static_cast<std::size_t>(sc.coded_bits()));
    CHECK_NOTHROW(p.validate());
    CHECK(spread(p) >= 2);
  }
}

TEST_CASE("permutation files round trip and reject garbage") {
  const Permutation p = make_random_permutation(64, 9);
  std::stringstream ss;
  save_permutation(ss, p);
  const Permutation back = load_permutation(ss);
  CHECK(back.forward == p.forward);

  std::stringstream bad("0 1 1 3");
  CHECK_THROWS_AS(load_permutation(bad), std::invalid_argument);
  std::stringstream empty("");
  CHECK_THROWS_AS(load_permutation(empty), std::invalid_argument);
}

TEST_CASE("inverse composes to the identity") {
  const Permutation p = make_random_permutation(128, 17);
  const Permutation inv = p.inverse();
  for (std::uint32_t i = 0; i < 128; ++i)
    CHECK(inv.forward[p.forward[i]] == i);
}
