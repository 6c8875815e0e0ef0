#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "klvq/dataset.hpp"
#include "klvq/partition.hpp"

namespace klvq {

struct SmoothingConfig {
  /// Pseudo-count added to every class before normalizing. Must be >= 0.
  double epsilon = 1e-6;
};


/// KL(p || q) in nats. Terms with p[c] == 0 contribute zero. Throws
/// DomainError if p[c] > 0 where q[c] == 0.
double kl_divergence(const LabelDistribution& p, const LabelDistribution& q);

/// (count_c + eps) / (total + eps * C). Uniform when total == 0 and eps > 0.
LabelDistribution smooth(std::span<const std::uint64_t> counts, const SmoothingConfig& config);

/// Same rule over real-valued (soft) counts.
LabelDistribution smooth(std::span<const double> weights, const SmoothingConfig& config);

/// Sum over subsets m and members i of KL(point_dists[i] || subset_dists[m]).
double objective(std::span<const LabelDistribution> point_dists, const Partition& partition,
                 std::span<const LabelDistribution> subset_dists);

}  // namespace klvq
