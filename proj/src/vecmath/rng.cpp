#include "palsgd/rng.hpp"

#include <cmath>
#include <numbers>

namespace palsgd {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return static_cast<double>(bits) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::array<std::uint32_t, 4> RngStream::next_block() noexcept {
  const std::array<std::uint32_t, 4> ctr{static_cast<std::uint32_t>(counter_),
                                         static_cast<std::uint32_t>(counter_ >> 32), worker_,
                                         purpose_};
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed_),
                                         static_cast<std::uint32_t>(seed_ >> 32)};
  ++counter_;
  return philox4x32(ctr, key);
}

double draw_uniform(RngStream& stream) noexcept {
  const auto b = stream.next_block();
  return to_unit(b[0], b[1]);
}

double draw_gaussian(RngStream& stream, double sigma) noexcept {
  const auto b = stream.next_block();
  if (sigma == 0.0) return 0.0;
  // u1 in (0, 1] keeps the log finite.
  const double u1 = 1.0 - to_unit(b[0], b[1]);
  const double u2 = to_unit(b[2], b[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return sigma * r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t draw_index(RngStream& stream, std::uint64_t n) noexcept {
  const auto b = stream.next_block();
  const std::uint64_t bits = (static_cast<std::uint64_t>(b[0]) << 32) | b[1];
  // Lemire's multiply-shift; bias is below 2^-32 for any n we use.
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits) * n) >> 64);
}

}  // namespace palsgd
