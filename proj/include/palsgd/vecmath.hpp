#pragma once

#include <cstddef>
#include <initializer_list>
#include <iterator>
#include <stdexcept>
#include <span>
#include <vector>

#include "palsgd/errors.hpp"
#include "palsgd/kernels.hpp"

namespace palsgd {

/// Flat parameter / gradient vector. A constructed vector always has dim >= 1;
/// a default-constructed one is an empty placeholder that every operation
/// rejects through the usual dimension check.
class ParamVector {
 public:
  ParamVector() = default;
  explicit ParamVector(std::size_t dim, double fill = 0.0);
  explicit ParamVector(std::vector<double> values);
  ParamVector(std::initializer_list<double> values);

  std::size_t dim() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator[](std::size_t i) noexcept { return data_[i]; }
  double operator[](std::size_t i) const noexcept { return data_[i]; }

  double* data() noexcept { return data_.data(); }
  const double* data() const noexcept { return data_.data(); }
  std::span<double> span() noexcept { return data_; }
  std::span<const double> span() const noexcept { return data_; }
  const std::vector<double>& values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  bool all_finite() const noexcept;

  // Bitwise-value equality (0.0 == -0.0, NaN != NaN), as std::vector.
  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  std::vector<double> data_;
};

void require_same_dim(const char* op, std::size_t a, std::size_t b);

/// a*x + y
ParamVector axpy(double a, const ParamVector& x, const ParamVector& y);

/// (1-beta)*x + beta*anchor; the exponential-moving-average form of a
/// pseudo-synchronization step.
ParamVector mix(const ParamVector& x, const ParamVector& anchor, double beta);

/// x <- x - c*(x - anchor), in place. The proximal-gradient form of the same
/// step; x == anchor is an exact fixed point.
void pull_toward(ParamVector& x, const ParamVector& anchor, double c);

ParamVector operator-(const ParamVector& x, const ParamVector& y);

/// Elementwise mean. Sums in the given order and divides once, so a fixed
/// input order gives a bit-reproducible result.
ParamVector mean_of(std::span<const ParamVector> vectors);

/// Same as mean_of over `proj(item)` for each item of `range`.
template <class Range, class Proj>
ParamVector mean_by(const Range& range, Proj proj) {
  auto it = std::begin(range);
  const auto last = std::end(range);
  if (it == last) throw std::invalid_argument("mean_of: empty list");
  const auto& k = kernels::active_kernels();
  ParamVector acc = proj(*it);
  std::size_t count = 1;
  for (++it; it != last; ++it, ++count) {
    const ParamVector& v = proj(*it);
    require_same_dim("mean_of", acc.dim(), v.dim());
    k.accumulate(acc.data(), v.data(), acc.dim());
  }
  if (acc.empty()) throw DimensionMismatch("mean_of", 0, 1);
  k.divide(acc.data(), static_cast<double>(count), acc.dim());
  return acc;
}

double l2_norm_sq(const ParamVector& x);
double distance_sq(const ParamVector& x, const ParamVector& y);
double dot(const ParamVector& x, const ParamVector& y);

}  // namespace palsgd
