#include "klvq/divergence.hpp"

#include <cmath>
#include <string>

#include "klvq/error.hpp"

namespace klvq {

double kl_divergence(const LabelDistribution& p, const LabelDistribution& q) {
  if (p.size() != q.size()) {
    throw ParameterError("distributions have different lengths (" + std::to_string(p.size()) +
                         " vs " + std::to_string(q.size()) + ")");
  }
  double acc = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const double pc = p.probs[c];
    if (pc <= 0.0) continue;
    const double qc = q.probs[c];
    if (qc <= 0.0) {
      throw DomainError("unsmoothed zero in reference distribution (class " +
                        std::to_string(c) + ")");
    }
    acc += pc * std::log(pc / qc);
  }
  return acc;
}

LabelDistribution smooth(std::span<const double> weights, const SmoothingConfig& config) {
  if (!(config.epsilon >= 0.0) || !std::isfinite(config.epsilon)) {
    throw ParameterError("smoothing epsilon must be a finite value >= 0");
  }
  if (weights.empty()) throw ParameterError("cannot smooth over zero classes");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ParameterError("smoothing weights must be nonnegative");
    total += w;
  }
  const double denom = total + config.epsilon * static_cast<double>(weights.size());
  if (total == 0.0 && config.epsilon == 0.0) {
    throw DomainError("empty subset with no smoothing");
  }
  LabelDistribution out;
  out.probs.resize(weights.size());
  for (std::size_t c = 0; c < weights.size(); ++c) {
    out.probs[c] = (weights[c] + config.epsilon) / denom;
  }
  return out;
}

LabelDistribution smooth(std::span<const std::uint64_t> counts, const SmoothingConfig& config) {
  std::vector<double> weights(counts.begin(), counts.end());
  return smooth(std::span<const double>(weights), config);
}

double objective(std::span<const LabelDistribution> point_dists, const Partition& partition,
                 std::span<const LabelDistribution> subset_dists) {
  if (point_dists.size() != partition.size()) {
    throw ParameterError("objective: " + std::to_string(point_dists.size()) +
                         " point distributions but partition covers " +
                         std::to_string(partition.size()) + " points");
  }
  if (subset_dists.size() != partition.num_subsets) {
    throw ParameterError("objective: " + std::to_string(subset_dists.size()) +
                         " subset distributions for " +
                         std::to_string(partition.num_subsets) + " subsets");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < point_dists.size(); ++i) {
    const std::size_t m = partition.assignment[i];
    if (m >= subset_dists.size()) {
      throw ParameterError("point " + std::to_string(i) + " assigned to missing subset " +
                           std::to_string(m));
    }
    total += kl_divergence(point_dists[i], subset_dists[m]);
  }
  return total;
}

}  // namespace klvq
