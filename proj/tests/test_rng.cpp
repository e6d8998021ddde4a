#include <doctest.h>

#include <cmath>
#include <set>

#include "palsgd/rng.hpp"

using namespace palsgd;

// Known-answer vectors of the Random123 reference implementation.
TEST_CASE("philox4x32-10 known answers") {
  using B = std::array<std::uint32_t, 4>;
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == B{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        B{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        B{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("draws are a pure function of (seed, worker, purpose, counter)") {
  RngStream a(42, 3, StreamPurpose::data, 17), b(42, 3, StreamPurpose::data, 17);
  CHECK(draw_uniform(a) == draw_uniform(b));
  CHECK(a.counter() == 18);
  CHECK(draw_gaussian(a, 1.5) == draw_gaussian(b, 1.5));
  RngStream c(42, 3, StreamPurpose::data, 17);
  const double first = draw_uniform(c);
  RngStream d(42, 3, StreamPurpose::data, 17);
  CHECK(draw_uniform(d) == first);
}

TEST_CASE("sigma zero gives exactly zero and still advances") {
  RngStream s(1, 0, StreamPurpose::data);
  CHECK(draw_gaussian(s, 0.0) == 0.0);
  CHECK(s.counter() == 1);
}

TEST_CASE("uniform draws lie in [0,1) with mean near 1/2") {
  RngStream s(2024, 0, StreamPurpose::data);
  double sum = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i) {
    const double u = draw_uniform(s);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  const double mean = sum / n;
  CHECK(mean >= 0.498);
  CHECK(mean <= 0.502);
}

TEST_CASE("gaussian draws have the requested variance") {
  RngStream s(7, 1, StreamPurpose::data);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double g = draw_gaussian(s, 2.0);
    sum += g;
    sq += g * g;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sq / n - 4.0) < 0.06);
}

TEST_CASE("different purposes and workers give different sequences") {
  RngStream data(5, 0, StreamPurpose::data), bern(5, 0, StreamPurpose::bernoulli),
      other(5, 1, StreamPurpose::data), seed2(6, 0, StreamPurpose::data);
  const auto d = data.next_block();
  CHECK(d != bern.next_block());
  CHECK(d != other.next_block());
  CHECK(d != seed2.next_block());
}

TEST_CASE("consuming one stream never shifts another") {
  RngStream data1(9, 2, StreamPurpose::data), data2(9, 2, StreamPurpose::data);
  RngStream bern(9, 2, StreamPurpose::bernoulli);
  for (int i = 0; i < 100; ++i) draw_uniform(bern);
  for (int i = 0; i < 10; ++i) CHECK(draw_uniform(data1) == draw_uniform(data2));
}

TEST_CASE("draw_index covers [0, n) uniformly") {
  RngStream s(3, 0, StreamPurpose::shard);
  std::array<int, 7> counts{};
  for (int i = 0; i < 70000; ++i) {
    const auto k = draw_index(s, 7);
    REQUIRE(k < 7);
    ++counts[k];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
  RngStream one(3, 0, StreamPurpose::shard);
  CHECK(draw_index(one, 1) == 0);
}
