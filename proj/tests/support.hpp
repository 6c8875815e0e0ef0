#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "klvq/dataset.hpp"

namespace testing {

inline klvq::LabeledDataset make_dataset(std::vector<std::vector<double>> rows,
                                         std::vector<std::size_t> labels,
                                         std::size_t num_classes) {
  klvq::LabeledDataset ds;
  for (const auto& r : rows) ds.features.append_row(r);
  ds.labels = std::move(labels);
  for (std::size_t c = 0; c < num_classes; ++c) ds.class_names.push_back("c" + std::to_string(c));
  return ds;
}

/// n points in d dimensions, uniform in [-1, 1), labels uniform over C.
inline klvq::LabeledDataset random_dataset(std::mt19937_64& rng, std::size_t n, std::size_t d,
                                           std::size_t num_classes) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> label(0, num_classes - 1);
  klvq::LabeledDataset ds;
  std::vector<double> row(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (auto& v : row) v = coord(rng);
    ds.features.append_row(row);
    ds.labels.push_back(label(rng));
  }
  for (std::size_t c = 0; c < num_classes; ++c) ds.class_names.push_back("c" + std::to_string(c));
  return ds;
}

/// Random probability vector; with `zero_prob` > 0 some entries are zeroed
/// (at least one entry stays positive).
inline klvq::LabelDistribution random_distribution(std::mt19937_64& rng, std::size_t num_classes,
                                                   double zero_prob = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(num_classes);
  double total = 0.0;
  for (auto& v : w) {
    v = u(rng) < zero_prob ? 0.0 : 0.05 + u(rng);
    total += v;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (auto& v : w) v /= total;
  return {w};
}

inline std::vector<std::vector<double>> raw(const std::vector<klvq::LabelDistribution>& d) {
  std::vector<std::vector<double>> out;
  for (const auto& x : d) out.push_back(x.probs);
  return out;
}

/// Temporary directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("klvq_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing
