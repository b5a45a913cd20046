#include <doctest.h>

#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "fpp/parallel.hpp"
#include "fpp/rng.hpp"
#include "fpp/stats.hpp"

using namespace fpp;

TEST_CASE("philox matches the published known-answer vectors") {
  // Random123 KAT for philox4x32-10.
  auto zero = Philox4x32::block({0, 0, 0, 0}, {0, 0});
  CHECK(zero == Philox4x32::Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  auto ones = Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(ones == Philox4x32::Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  auto pi = Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  CHECK(pi == Philox4x32::Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("same (seed, cell) gives the same stream") {
  auto a = seed_stream(17, 5), b = seed_stream(17, 5);
  for (int i = 0; i < 1000; ++i) CHECK(a() == b());
}

TEST_CASE("distinct cells give different streams") {
  auto a = seed_stream(17, 0), b = seed_stream(17, 1);
  int equal = 0;
  for (int i = 0; i < 1000; ++i) equal += a() == b();
  CHECK(equal == 0);
}

TEST_CASE("cells 0 and 1 are uncorrelated over 1e4 draws") {
  auto a = seed_stream(2024, 0), b = seed_stream(2024, 1);
  std::vector<double> x, y;
  for (int i = 0; i < 10000; ++i) {
    x.push_back(a.uniform());
    y.push_back(b.uniform());
  }
  const auto sx = summarize(x), sy = summarize(y);
  double cov = 0;
  for (int i = 0; i < 10000; ++i) cov += (x[i] - sx.mean) * (y[i] - sy.mean);
  cov /= 9999;
  const double rho = cov / std::sqrt(sx.variance * sy.variance);
  CHECK(std::abs(rho) < 0.05);
  CHECK(std::abs(sx.mean - 0.5) < 0.01);
}

TEST_CASE("uniforms lie in their half-open ranges") {
  auto s = seed_stream(3, 3);
  for (int i = 0; i < 10000; ++i) {
    const double u = s.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    const double v = s.uniform_pos();
    CHECK((v > 0.0 && v <= 1.0));
  }
}

TEST_CASE("keyed draws depend on key, index and tag") {
  CHECK(keyed_draw(1, 2, 3) == keyed_draw(1, 2, 3));
  CHECK(keyed_draw(1, 2, 3) != keyed_draw(1, 2, 4));
  CHECK(keyed_draw(1, 2, 3) != keyed_draw(1, 3, 3));
  CHECK(keyed_draw(1, 2, 3) != keyed_draw(2, 2, 3));
  std::set<std::uint64_t> keys;
  for (std::uint64_t c = 0; c < 1000; ++c) keys.insert(derive_key(9, c));
  CHECK(keys.size() == 1000);
}

TEST_CASE("cell ids keep stage, slot and replication apart") {
  CHECK(cell_id(0, 0, 1) != cell_id(0, 1, 0));
  CHECK(cell_id(1, 0, 0) != cell_id(0, 0, 0));
  CHECK(cell_id(0, 1, 0) != cell_id(0, 0, 1u << 20));
}

TEST_CASE("replicate is independent of thread count and schedule") {
  auto work = [](std::size_t i) {
    auto s = seed_stream(77, i);
    double acc = 0;
    for (int k = 0; k < 100; ++k) acc += s.uniform();
    return acc;
  };
  const auto serial = successful(replicate<double>(64, work, RunOptions{1, false}));
  const auto par1 = successful(replicate<double>(64, work, RunOptions{1, true}));
  const auto par4 = successful(replicate<double>(64, work, RunOptions{4, true}));
  CHECK(serial == par1);
  CHECK(serial == par4);
}

TEST_CASE("a throwing cell is marked failed and the run continues") {
  auto cells = replicate<int>(
      8, [](std::size_t i) -> int {
        if (i == 3) throw std::runtime_error("boom");
        return static_cast<int>(i);
      });
  std::size_t failed = 0;
  const auto ok = successful(cells, &failed);
  CHECK(failed == 1);
  CHECK(ok.size() == 7);
  CHECK(cells[3].error == "boom");
}
