#pragma once

#include <array>
#include <cstdint>

namespace palsgd {

/// What a stream's draws are used for. Worker k's Bernoulli stream and data
/// stream are disjoint, so skipping a branch's draws never shifts the other.
enum class StreamPurpose : std::uint32_t {
  data = 1,
  bernoulli = 2,
  init = 3,
  dataset = 4,
  shard = 5,
  jitter = 6,
  probe = 7,
};

/// Philox4x32-10 block function: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Counter-based random stream. Every draw is a pure function of
/// (seed, worker, purpose, counter) and consumes exactly one Philox block, so
/// replaying a run reproduces every value bit for bit.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t seed, std::uint32_t worker, StreamPurpose purpose,
            std::uint64_t counter = 0) noexcept
      : seed_(seed), worker_(worker), purpose_(static_cast<std::uint32_t>(purpose)),
        counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint32_t worker() const noexcept { return worker_; }
  StreamPurpose purpose() const noexcept { return static_cast<StreamPurpose>(purpose_); }
  std::uint64_t counter() const noexcept { return counter_; }

  /// Raw block at the current counter; advances by one.
  std::array<std::uint32_t, 4> next_block() noexcept;

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_ = 0;
  std::uint32_t worker_ = 0;
  std::uint32_t purpose_ = 0;
  std::uint64_t counter_ = 0;
};

/// Uniform on [0, 1) with 53 random bits. Advances the counter by 1.
double draw_uniform(RngStream& stream) noexcept;

/// N(0, sigma^2) by Box-Muller from one block. Advances the counter by 1;
/// sigma == 0 returns exactly 0.0 (the counter still advances).
double draw_gaussian(RngStream& stream, double sigma) noexcept;

/// Uniform integer in [0, n), n >= 1. Advances the counter by 1.
std::uint64_t draw_index(RngStream& stream, std::uint64_t n) noexcept;

}  // namespace palsgd
