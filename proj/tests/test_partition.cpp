#include "doctest.h"
#include "klvq/error.hpp"
#include "klvq/partition.hpp"

using namespace klvq;

TEST_CASE("repair moves the largest-cost point into each empty subset") {
  Partition p{{0, 0, 0, 1, 1}, 4};
  const std::vector<double> cost{0.5, 3.0, 1.0, 3.0, 0.1};
  CHECK(repair_empty_subsets(p, cost) == 2);
  // Empty subsets 2 and 3 take points 1 and 3 (cost tie, lower index first).
  CHECK(p.assignment == std::vector<std::size_t>{0, 2, 0, 3, 1});
  CHECK(p.covers_all_subsets());
}

TEST_CASE("repair never empties a singleton donor") {
  Partition p{{0, 1, 1, 1}, 3};
  const std::vector<double> cost{9.0, 1.0, 2.0, 0.5};
  repair_empty_subsets(p, cost);
  CHECK(p.assignment == std::vector<std::size_t>{0, 1, 2, 1});
}

TEST_CASE("repair with M = N yields singletons") {
  Partition p{{0, 0, 0, 0}, 4};
  repair_empty_subsets(p, std::vector<double>(4, 0.0));
  // Equal costs: the lowest-index points move first, point 3 keeps subset 0.
  CHECK(p.assignment == std::vector<std::size_t>{1, 2, 3, 0});
}

TEST_CASE("repair leaves full partitions alone and checks sizes") {
  Partition p{{1, 0}, 2};
  CHECK(repair_empty_subsets(p, std::vector<double>{1, 1}) == 0);
  CHECK(p.assignment == std::vector<std::size_t>{1, 0});
  Partition bad{{0}, 2};
  CHECK_THROWS_AS(repair_empty_subsets(bad, std::vector<double>{0.0}), ParameterError);
  CHECK_THROWS_AS(repair_empty_subsets(p, std::vector<double>{0.0}), ParameterError);
}
