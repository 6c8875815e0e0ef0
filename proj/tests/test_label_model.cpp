#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "klvq/error.hpp"
#include "klvq/label_model.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace klvq;
using testing::make_dataset;

namespace {

LabeledDataset four_points() {
  return make_dataset({{0, 0}, {0.1, 0}, {5, 0}, {5.1, 0}}, {0, 0, 1, 1}, 2);
}

const std::vector<double> origin{0.0, 0.0};

}  // namespace

TEST_CASE("knn_indices returns nearest rows in distance order") {
  const auto ds = four_points();
  CHECK(knn_indices(ds, origin, {2, true}) == std::vector<std::size_t>{0, 1});
  CHECK(knn_indices(ds, origin, {4, true}) == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("knn_indices breaks distance ties by lower row index") {
  const auto ds = make_dataset({{1, 0}, {-1, 0}}, {0, 1}, 2);
  CHECK(knn_indices(ds, origin, {1, true}) == std::vector<std::size_t>{0});
  const auto dup = make_dataset({{2, 2}, {1, 1}, {1, 1}, {1, 1}}, {0, 0, 0, 0}, 1);
  CHECK(knn_indices(dup, std::vector<double>{1, 1}, {2, true}) ==
        std::vector<std::size_t>{1, 2});
}

TEST_CASE("knn_indices honors exclude_index only when self is excluded") {
  const auto ds = four_points();
  CHECK(knn_indices(ds, origin, {1, false}, 0) == std::vector<std::size_t>{1});
  CHECK(knn_indices(ds, origin, {1, true}, 0) == std::vector<std::size_t>{0});
  CHECK(knn_indices(ds, origin, {3, false}, 0) == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("knn_indices rejects k beyond the candidate count") {
  const auto ds = four_points();
  CHECK_THROWS_AS(knn_indices(ds, origin, {5, true}), ParameterError);
  CHECK_THROWS_AS(knn_indices(ds, origin, {4, false}, 2), ParameterError);
  CHECK_THROWS_AS(knn_indices(ds, origin, {0, true}), ParameterError);
  try {
    knn_indices(ds, origin, {5, true});
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("[1, 4]") != std::string::npos);
  }
}

TEST_CASE("knn_indices rejects bad queries") {
  const auto ds = four_points();
  CHECK_THROWS_AS(knn_indices(ds, std::vector<double>{0.0}, {1, true}), ParameterError);
  CHECK_THROWS_AS(knn_indices(ds, std::vector<double>{0.0, NAN}, {1, true}), ParameterError);
  CHECK_THROWS_AS(knn_indices(ds, origin, {1, false}, 9), ParameterError);
}

TEST_CASE("estimate_label_distribution votes over neighbors") {
  const auto ds = four_points();
  CHECK(estimate_label_distribution(ds, origin, {2, true}).probs == std::vector<double>{1.0, 0.0});
  CHECK(estimate_label_distribution(ds, origin, {4, true}).probs == std::vector<double>{0.5, 0.5});

  const auto single = make_dataset({{0, 1}, {3, 2}, {7, 7}}, {0, 0, 0}, 1);
  for (std::size_t k = 1; k <= 3; ++k) {
    CHECK(estimate_label_distribution(single, std::vector<double>{2, 2}, {k, true}).probs ==
          std::vector<double>{1.0});
  }
}

TEST_CASE("estimate_all applies the per-row estimate") {
  const auto ds = four_points();
  const auto all = estimate_all(ds, {2, true});
  REQUIRE(all.size() == 4);
  CHECK(all[0].probs == std::vector<double>{1, 0});
  CHECK(all[1].probs == std::vector<double>{1, 0});
  CHECK(all[2].probs == std::vector<double>{0, 1});
  CHECK(all[3].probs == std::vector<double>{0, 1});

  // Leaving self out: row 1's nearest other row is row 0.
  const auto loo = estimate_all(ds, {1, false});
  CHECK(loo[1].probs == std::vector<double>{1, 0});

  const auto one = make_dataset({{3, 4}}, {0}, 2);
  CHECK(estimate_all(one, {1, true})[0].probs == std::vector<double>{1, 0});
}

TEST_CASE("estimate_all with k = N gives the global label frequency") {
  std::mt19937_64 rng(5);
  const auto ds = testing::random_dataset(rng, 37, 3, 4);
  std::vector<double> freq(4, 0.0);
  for (auto l : ds.labels) freq[l] += 1.0 / 37.0;
  for (const auto& d : estimate_all(ds, {37, true})) {
    for (std::size_t c = 0; c < 4; ++c) CHECK(d[c] == doctest::Approx(freq[c]).epsilon(1e-14));
  }
}

TEST_CASE("property: knn matches brute-force sort and distributions are valid") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 200;
    const std::size_t d = 1 + rng() % 8;
    auto ds = testing::random_dataset(rng, n, d, 1 + rng() % 5);
    // Duplicate some rows to exercise ties.
    if (n > 3) {
      auto src = oracle::row_of(ds.features, 0);
      std::copy(src.begin(), src.end(), ds.features.row(n - 1).begin());
    }
    const std::size_t k = 1 + rng() % n;
    const std::size_t qi = rng() % n;
    const auto q = oracle::row_of(ds.features, qi);
    CHECK(knn_indices(ds, q, {k, true}) == oracle::knn(ds.features, q, k));
    if (n > 1) {
      const std::size_t k2 = 1 + rng() % (n - 1);
      CHECK(knn_indices(ds, q, {k2, false}, qi) ==
            oracle::knn(ds.features, q, k2, static_cast<long>(qi)));
    }
    const auto dist = estimate_label_distribution(ds, q, {k, true});
    CHECK(dist.is_valid(1e-9));
  }
}

TEST_CASE("property: row permutation leaves the label distribution unchanged") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + rng() % 80;
    const auto ds = testing::random_dataset(rng, n, 3, 3);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    LabeledDataset shuffled;
    shuffled.class_names = ds.class_names;
    for (auto i : perm) {
      shuffled.features.append_row(ds.features.row(i));
      shuffled.labels.push_back(ds.labels[i]);
    }
    const std::vector<double> q{0.123, -0.456, 0.789};
    const std::size_t k = 1 + rng() % n;
    CHECK(estimate_label_distribution(ds, q, {k, true}) ==
          estimate_label_distribution(shuffled, q, {k, true}));
  }
}

TEST_CASE("property: scaling features leaves neighbor indices unchanged") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 100;
    const auto ds = testing::random_dataset(rng, n, 4, 2);
    const double s = scale(rng);
    auto scaled = ds;
    for (std::size_t i = 0; i < n; ++i)
      for (auto& v : scaled.features.row(i)) v *= s;
    std::vector<double> q{0.3, 0.1, -0.7, 0.2};
    std::vector<double> qs = q;
    for (auto& v : qs) v *= s;
    const std::size_t k = 1 + rng() % n;
    CHECK(knn_indices(ds, q, {k, true}) == knn_indices(scaled, qs, {k, true}));
  }
}

TEST_CASE("KnnConfig::clipped stays within the legal bound") {
  CHECK(KnnConfig{10, true}.clipped(4).k == 4);
  CHECK(KnnConfig{10, false}.clipped(4).k == 3);
  CHECK(KnnConfig{10, true}.clipped(50).k == 10);
  CHECK(KnnConfig{10, false}.clipped(1).k == 1);
}
