#include "klvq/bof.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "klvq/error.hpp"

namespace klvq {
namespace {

double histogram_distance(const std::vector<double>& a, const std::vector<double>& b,
                          HistogramDistance distance) {
  double acc = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) {
    const double diff = a[m] - b[m];
    acc += distance == HistogramDistance::l1 ? std::abs(diff) : diff * diff;
  }
  // Squared L2 orders neighbors the same as L2.
  return acc;
}

// Mode centers: class modes spread on a circle (a line when d == 1) so that
// neighboring modes are `separation` apart; background modes sit at the
// origin or on a circle of half the class radius.
void place_modes(const SyntheticConfig& config, Matrix& class_modes, Matrix& background) {
  const std::size_t total = config.classes * config.modes_per_class;
  class_modes = Matrix(total, config.dim);
  background = Matrix(config.background_modes, config.dim);
  if (config.dim == 1) {
    const double offset = 0.5 * config.mode_separation * static_cast<double>(total - 1);
    for (std::size_t j = 0; j < total; ++j) {
      class_modes(j, 0) = config.mode_separation * static_cast<double>(j) - offset;
    }
    for (std::size_t b = 0; b < config.background_modes; ++b) {
      background(b, 0) = config.mode_separation * (static_cast<double>(b) + 0.5) - offset;
    }
    return;
  }
  const double pi = std::numbers::pi;
  const double radius =
      total < 2 ? 0.0 : config.mode_separation / (2.0 * std::sin(pi / static_cast<double>(total)));
  for (std::size_t j = 0; j < total; ++j) {
    const double angle = 2.0 * pi * static_cast<double>(j) / static_cast<double>(total);
    class_modes(j, 0) = radius * std::cos(angle);
    class_modes(j, 1) = radius * std::sin(angle);
  }
  if (config.background_modes == 1) return;
  for (std::size_t b = 0; b < config.background_modes; ++b) {
    const double angle = 2.0 * pi * (static_cast<double>(b) + 0.5) /
                         static_cast<double>(config.background_modes);
    background(b, 0) = 0.5 * radius * std::cos(angle);
    background(b, 1) = 0.5 * radius * std::sin(angle);
  }
}

}  // namespace

BofHistogram build_histogram(const FeatureBag& bag, const QuantizeFn& quantize_fn,
                             std::size_t num_subsets) {
  if (num_subsets == 0) throw ParameterError("histogram needs at least one subset");
  if (bag.descriptors.rows() == 0) {
    throw ParameterError("bag '" + bag.item_id + "' has no descriptors");
  }
  BofHistogram hist;
  hist.counts.assign(num_subsets, 0);
  for (std::size_t p = 0; p < bag.descriptors.rows(); ++p) {
    const std::size_t m = quantize_fn(bag.descriptors.row(p));
    if (m >= num_subsets) {
      throw ParameterError("quantizer returned subset " + std::to_string(m) + " for M = " +
                           std::to_string(num_subsets));
    }
    ++hist.counts[m];
  }
  const double total = static_cast<double>(bag.descriptors.rows());
  hist.normalized.resize(num_subsets);
  for (std::size_t m = 0; m < num_subsets; ++m) {
    hist.normalized[m] = static_cast<double>(hist.counts[m]) / total;
  }
  return hist;
}

ClassIndex classify_1nn(std::span<const LabeledHistogram> train, const BofHistogram& query,
                        HistogramDistance distance) {
  if (train.empty()) throw ParameterError("1-NN classifier needs at least one training item");
  std::size_t best = 0;
  double best_d = 0.0;
  for (std::size_t t = 0; t < train.size(); ++t) {
    const auto& h = train[t].histogram;
    if (h.normalized.size() != query.normalized.size()) {
      throw ParameterError("histogram size mismatch: training item has M = " +
                           std::to_string(h.normalized.size()) + ", query has M = " +
                           std::to_string(query.normalized.size()));
    }
    const double d = histogram_distance(h.normalized, query.normalized, distance);
    if (t == 0 || d < best_d) {
      best_d = d;
      best = t;
    }
  }
  return train[best].label;
}

EvalReport evaluate(std::span<const FeatureBag> train_bags, std::span<const FeatureBag> test_bags,
                    const std::string& quantizer_tag, const QuantizeFn& quantize_fn,
                    std::size_t num_subsets, HistogramDistance distance,
                    const std::vector<std::string>& class_names) {
  if (train_bags.empty() || test_bags.empty()) {
    throw ParameterError("evaluation needs nonempty train and test sets");
  }
  const std::size_t num_classes = class_names.size();
  auto checked_label = [&](const FeatureBag& bag) {
    if (!bag.label) throw ParameterError("bag '" + bag.item_id + "' has no label");
    if (*bag.label >= num_classes) {
      throw ParameterError("bag '" + bag.item_id + "' has out-of-range label");
    }
    return *bag.label;
  };

  std::vector<LabeledHistogram> train;
  train.reserve(train_bags.size());
  for (const auto& bag : train_bags) {
    train.push_back({build_histogram(bag, quantize_fn, num_subsets), checked_label(bag)});
  }

  EvalReport report;
  report.quantizer_tag = quantizer_tag;
  report.class_names = class_names;
  report.confusion.assign(num_classes, std::vector<std::uint64_t>(num_classes, 0));
  for (const auto& bag : test_bags) {
    const ClassIndex truth = checked_label(bag);
    const auto hist = build_histogram(bag, quantize_fn, num_subsets);
    ++report.confusion[truth][classify_1nn(train, hist, distance)];
  }

  std::uint64_t correct = 0;
  std::uint64_t total = 0;
  report.per_class_accuracy.assign(num_classes, 0.0);
  for (std::size_t c = 0; c < num_classes; ++c) {
    std::uint64_t row = 0;
    for (auto v : report.confusion[c]) row += v;
    correct += report.confusion[c][c];
    total += row;
    if (row > 0) {
      report.per_class_accuracy[c] =
          static_cast<double>(report.confusion[c][c]) / static_cast<double>(row);
    }
  }
  report.overall_accuracy = static_cast<double>(correct) / static_cast<double>(total);
  return report;
}

SyntheticBenchmark generate_synthetic(const SyntheticConfig& config) {
  if (config.classes < 1 || config.items_per_class < 1 || config.descriptors_per_item < 1 ||
      config.dim < 1 || config.modes_per_class < 1) {
    throw ParameterError("synthetic benchmark counts must all be >= 1");
  }
  if (!(config.noise >= 0.0) || !(config.mode_separation >= 0.0) ||
      !(config.background_spread >= 0.0)) {
    throw ParameterError("noise, spread and mode separation must be >= 0");
  }
  if (!(config.background_weight >= 0.0 && config.background_weight <= 1.0)) {
    throw ParameterError("background weight must lie in [0, 1]");
  }
  if (config.background_weight > 0.0 && config.background_modes == 0) {
    throw ParameterError("background weight > 0 needs at least one background mode");
  }

  SyntheticBenchmark out;
  place_modes(config, out.class_modes, out.background_modes);
  for (std::size_t c = 0; c < config.classes; ++c) {
    out.class_names.push_back("class" + std::to_string(c));
  }
  out.descriptors.class_names = out.class_names;

  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> point(config.dim);

  auto make_bag = [&](const std::string& id, ClassIndex label) {
    FeatureBag bag{id, Matrix(config.descriptors_per_item, config.dim), label};
    for (std::size_t p = 0; p < config.descriptors_per_item; ++p) {
      std::span<const double> center;
      double spread = config.noise;
      if (unit(rng) < config.background_weight) {
        spread *= config.background_spread;
        std::uniform_int_distribution<std::size_t> pick(0, config.background_modes - 1);
        center = out.background_modes.row(pick(rng));
      } else {
        std::uniform_int_distribution<std::size_t> pick(0, config.modes_per_class - 1);
        center = out.class_modes.row(label * config.modes_per_class + pick(rng));
      }
      auto row = bag.descriptors.row(p);
      for (std::size_t j = 0; j < config.dim; ++j) row[j] = center[j] + spread * gauss(rng);
    }
    return bag;
  };

  for (std::size_t c = 0; c < config.classes; ++c) {
    for (std::size_t i = 0; i < config.items_per_class; ++i) {
      out.train.push_back(make_bag("train_c" + std::to_string(c) + "_" + std::to_string(i), c));
    }
  }
  for (std::size_t c = 0; c < config.classes; ++c) {
    for (std::size_t i = 0; i < config.items_per_class; ++i) {
      out.test.push_back(make_bag("test_c" + std::to_string(c) + "_" + std::to_string(i), c));
    }
  }
  for (const auto& bag : out.train) {
    for (std::size_t p = 0; p < bag.descriptors.rows(); ++p) {
      out.descriptors.features.append_row(bag.descriptors.row(p));
      out.descriptors.labels.push_back(*bag.label);
    }
  }
  return out;
}

HistogramDistance parse_distance(const std::string& text) {
  if (text == "l1" || text == "L1") return HistogramDistance::l1;
  if (text == "l2" || text == "L2") return HistogramDistance::l2;
  throw ParameterError("unknown histogram distance '" + text + "' (expected l1|l2)");
}

const char* to_string(HistogramDistance distance) noexcept {
  return distance == HistogramDistance::l1 ? "l1" : "l2";
}

}  // namespace klvq
