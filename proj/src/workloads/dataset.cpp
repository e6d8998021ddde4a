#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "palsgd/workloads.hpp"

namespace palsgd {
namespace {

constexpr std::uint32_t kCentreStream = 0xFFFFu;

void shuffle(std::vector<std::size_t>& v, RngStream& stream) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = draw_index(stream, i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

Dataset generate_synthetic_classification(const ClassificationSpec& spec, std::uint64_t seed,
                                          std::uint32_t split) {
  if (spec.classes < 2) throw ConfigError("classes", "must be >= 2");
  if (spec.dim == 0) throw ConfigError("dim", "must be >= 1");
  if (spec.samples_per_class == 0) throw ConfigError("samples_per_class", "must be >= 1");
  if (spec.clusters_per_class < 1) throw ConfigError("clusters_per_class", "must be >= 1");

  const std::size_t n_centres = static_cast<std::size_t>(spec.classes * spec.clusters_per_class);
  std::vector<double> centres(n_centres * spec.dim);
  RngStream centre_rng(seed, kCentreStream, StreamPurpose::dataset);
  for (double& c : centres) c = draw_gaussian(centre_rng, spec.separation);

  Dataset out;
  out.dim = spec.dim;
  out.classes = spec.classes;
  out.features.reserve(static_cast<std::size_t>(spec.classes) * spec.samples_per_class * spec.dim);
  RngStream rng(seed, split, StreamPurpose::dataset);
  for (int c = 0; c < spec.classes; ++c) {
    for (std::size_t s = 0; s < spec.samples_per_class; ++s) {
      const std::size_t cluster = static_cast<std::size_t>(c * spec.clusters_per_class) +
                                  draw_index(rng, static_cast<std::uint64_t>(spec.clusters_per_class));
      const double* centre = centres.data() + cluster * spec.dim;
      for (std::size_t j = 0; j < spec.dim; ++j)
        out.features.push_back(centre[j] + draw_gaussian(rng, spec.cluster_std));
      out.labels.push_back(c);
    }
  }
  return out;
}

void write_dataset_csv(const Dataset& data, std::ostream& out) {
  for (std::size_t j = 0; j < data.dim; ++j) out << 'f' << j << ',';
  out << "label\n";
  const auto old_precision = out.precision(17);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.row(i)) out << v << ',';
    out << data.labels[i] << '\n';
  }
  out.precision(old_precision);
}

std::vector<Shard> shard_dataset(std::size_t n, std::size_t workers, std::uint64_t seed) {
  if (workers == 0) throw std::invalid_argument("shard_dataset: K must be >= 1");
  if (n == 0) throw std::invalid_argument("shard_dataset: dataset is empty");
  if (workers > n)
    throw std::invalid_argument("shard_dataset: K=" + std::to_string(workers) +
                                " exceeds sample count " + std::to_string(n));
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  RngStream rng(seed, 0, StreamPurpose::shard);
  shuffle(perm, rng);

  std::vector<Shard> shards(workers);
  const std::size_t base = n / workers;
  const std::size_t extra = n % workers;
  std::size_t pos = 0;
  for (std::size_t k = 0; k < workers; ++k) {
    const std::size_t len = base + (k < extra ? 1 : 0);
    shards[k].worker = static_cast<std::uint32_t>(k);
    shards[k].indices.assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                             perm.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return shards;
}

std::vector<std::size_t> ShardSampler::next_batch(RngStream& stream, std::size_t batch) {
  const auto& idx = shard_.indices;
  if (idx.empty()) throw std::logic_error("ShardSampler: empty shard");
  std::vector<std::size_t> out;
  out.reserve(batch);
  if (policy_ == DrawPolicy::with_replacement) {
    for (std::size_t b = 0; b < batch; ++b) out.push_back(idx[draw_index(stream, idx.size())]);
    return out;
  }
  for (std::size_t b = 0; b < batch; ++b) {
    if (cursor_ == order_.size()) {
      order_ = idx;
      shuffle(order_, stream);
      cursor_ = 0;
    }
    out.push_back(order_[cursor_++]);
  }
  return out;
}

}  // namespace palsgd
