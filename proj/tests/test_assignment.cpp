#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "catq/assignment.hpp"
#include "catq/search.hpp"

using catq::optimal_assignment;

TEST_CASE("hungarian matches brute force") {
  catq::CounterRng rng(42, 0);
  for (int n = 1; n <= 7; ++n) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<std::vector<double>> cost(n, std::vector<double>(n));
      for (auto& row : cost)
        for (auto& c : row) c = rng.uniform(0.0, 10.0);
      const auto got = optimal_assignment(cost);
      double got_cost = 0.0;
      for (int i = 0; i < n; ++i) got_cost += cost[i][got[i]];

      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      double best = 1e300;
      do {
        double c = 0.0;
        for (int i = 0; i < n; ++i) c += cost[i][perm[i]];
        best = std::min(best, c);
      } while (std::next_permutation(perm.begin(), perm.end()));
      CHECK(got_cost == doctest::Approx(best).epsilon(1e-12));
      auto sorted = got;
      std::sort(sorted.begin(), sorted.end());
      for (int i = 0; i < n; ++i) CHECK(sorted[i] == i);
    }
  }
}
