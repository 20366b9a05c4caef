#include <doctest.h>

#include <algorithm>

#include "catq/polynomial.hpp"

using namespace catq;

TEST_CASE("polynomial roots") {
  // (x - 1)(x + 2)(x - i) expanded by hand.
  const std::vector<cplx> roots_in{1.0, -2.0, cplx{0.0, 1.0}};
  const auto coeffs = monic_from_roots(roots_in);
  REQUIRE(coeffs.size() == 4);
  CHECK(std::abs(coeffs[3] - 1.0) < 1e-15);
  CHECK(std::abs(coeffs[0] - cplx{0.0, 2.0}) < 1e-14);  // (-1)(2)(-i)
  const auto roots = polynomial_roots(coeffs);
  REQUIRE(roots.size() == 3);
  for (const auto& r : roots_in) {
    double best = 1e9;
    for (const auto& q : roots) best = std::min(best, std::abs(r - q));
    CHECK(best < 1e-12);
  }
  for (const auto& q : roots) CHECK(std::abs(evaluate_polynomial(coeffs, q)) < 1e-12);

  // Low-order zeros deflate exactly.
  const std::vector<cplx> x2{0.0, 0.0, 3.0, 1.0};
  auto z = polynomial_roots(x2);
  std::sort(z.begin(), z.end(), [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
  CHECK(z[0] == cplx{0.0, 0.0});
  CHECK(z[1] == cplx{0.0, 0.0});
  CHECK(std::abs(z[2] + 3.0) < 1e-13);

  CHECK_THROWS_AS(polynomial_roots(std::vector<cplx>{1.0, 0.0}), DegreeDeficient);
}

TEST_CASE("clustered roots of degree twelve") {
  std::vector<cplx> roots_in;
  for (int k = 0; k < 12; ++k) roots_in.push_back(std::polar(1.0 + 0.01 * k, 0.5 * k));
  const auto roots = polynomial_roots(monic_from_roots(roots_in));
  const auto back = monic_from_roots(roots);
  const auto ref = monic_from_roots(roots_in);
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(back[i] - ref[i]) < 1e-10);
}

TEST_CASE("linear factor expansion") {
  const std::vector<cplx> u{2.0, cplx{0.0, 1.0}};
  const std::vector<cplx> v{1.0, 3.0};
  // (2x + 1)(ix + 3) = 2i x^2 + (6 + i) x + 3
  const auto c = expand_linear_factors(u, v);
  REQUIRE(c.size() == 3);
  CHECK(std::abs(c[0] - 3.0) < 1e-15);
  CHECK(std::abs(c[1] - cplx{6.0, 1.0}) < 1e-15);
  CHECK(std::abs(c[2] - cplx{0.0, 2.0}) < 1e-15);
}
