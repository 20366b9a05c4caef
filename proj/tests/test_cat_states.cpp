#include <doctest.h>

#include <cmath>
#include <numbers>

#include "catq/cat_states.hpp"
#include "oracles.hpp"

using namespace catq;

namespace {

double lgamma_fact(int k) { return std::lgamma(k + 1.0); }

}  // namespace

TEST_CASE("parity parsing") {
  CHECK(parse_parity("even") == Parity::even);
  CHECK(parse_parity("+") == Parity::even);
  CHECK(parse_parity("minus") == Parity::odd);
  CHECK_THROWS_AS(parse_parity("sideways"), DomainError);
}

TEST_CASE("cat normalization") {
  CHECK(scs_normalization(Parity::even, 0.0) == doctest::Approx(0.5));
  CHECK(scs_normalization(Parity::even, 30.0) == doctest::Approx(1.0 / std::numbers::sqrt2));
  CHECK(scs_normalization(Parity::odd, 30.0) == doctest::Approx(1.0 / std::numbers::sqrt2));
  CHECK(scs_normalization(Parity::even, 2.0) ==
        doctest::Approx(1.0 / std::sqrt(2.0 * (1.0 + std::exp(-8.0)))).epsilon(1e-14));
  CHECK_THROWS_AS(scs_normalization(Parity::odd, 0.0), DomainError);
  CHECK_THROWS_AS((CatSpec{Parity::odd, 0.0, 0.3, 3}.validate()), DomainError);
}

TEST_CASE("cat vectors") {
  for (bool even : {true, false}) {
    const auto lib = scs_vector(even ? Parity::even : Parity::odd, 1.7, 40);
    const auto ref = oracle::cat(even, 1.7, 40);
    CHECK(lib.norm2() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(inner(lib, ref) - 1.0) < 1e-12);
    for (int n = even ? 1 : 0; n <= 40; n += 2) CHECK(lib[n] == cplx{0.0, 0.0});
  }
  CHECK(std::abs(inner(scs_vector(Parity::odd, 1.7, 40), scs_vector(Parity::even, 1.7, 40))) < 1e-15);
  const auto vac = scs_vector(Parity::even, 0.0, 5);
  CHECK(std::abs(vac[0] - 1.0) < 1e-15);
}

TEST_CASE("expansion coefficients") {
  const auto zero = alpha_rep_coeffs({Parity::even, 0.0, 0.0, 5}).coeffs;
  CHECK(std::abs(zero[0] - 2.0) < 1e-15);
  for (int k = 1; k <= 5; ++k) CHECK(std::abs(zero[k]) < 1e-15);

  // At alpha = 0 the even coefficients live on even k with magnitude 2 beta^k / sqrt(k!).
  const double beta = 1.3;
  const auto even = alpha_rep_coeffs({Parity::even, beta, 0.0, 9}).coeffs;
  for (int k = 0; k <= 9; ++k) {
    const double mag = 2.0 * std::exp(k * std::log(beta) - 0.5 * lgamma_fact(k));
    CHECK(std::abs(even[k]) == doctest::Approx(k % 2 == 0 ? mag : 0.0).epsilon(1e-12));
  }

  // General complex form vs polar form for imaginary displacement.
  for (double a : {-1.4, -0.2, 0.0, 0.35, 1.9})
    for (double b : {0.4, 1.1, 2.3}) {
      const auto pe = alpha_rep_coeffs({Parity::even, b, a, 12}).coeffs;
      const auto po = alpha_rep_coeffs({Parity::odd, b, a, 12}).coeffs;
      const auto ge = alpha_rep_coeffs_general(Parity::even, cplx{0.0, a}, b, 12).coeffs;
      const auto go = alpha_rep_coeffs_general(Parity::odd, cplx{0.0, a}, b, 12).coeffs;
      for (int k = 0; k <= 12; ++k) {
        CHECK(std::abs(pe[k] - ge[k]) < 1e-12 * std::max(1.0, std::abs(pe[k])));
        CHECK(std::abs(cplx{0.0, 1.0} * po[k] - go[k]) < 1e-12 * std::max(1.0, std::abs(po[k])));
      }
      // Odd magnitudes follow the sine branch of the same phase.
      const double r = std::hypot(a, b);
      const double phi = std::atan(a / b);
      for (int k = 0; k <= 12; ++k) {
        const double theta = a * b + k * (phi + std::numbers::pi / 2);
        const double mag = 2.0 * std::exp(k * std::log(r) - 0.5 * lgamma_fact(k));
        CHECK(std::abs(po[k]) == doctest::Approx(mag * std::abs(std::sin(theta))).epsilon(1e-12));
      }
    }

  // Partial sums of the normalized expansion approach one.
  const CatSpec spec{Parity::even, 1.5, 0.3, 60};
  const auto c = alpha_rep_coeffs(spec).coeffs;
  const double n2 = std::pow(scs_normalization(Parity::even, 1.5), 2);
  double partial = 0.0, prev_gap = 1.0;
  for (int k = 0; k <= 60; ++k) {
    partial += std::norm(c[k]);
    const double gap = std::abs(1.0 - n2 * std::exp(-spec.radius() * spec.radius()) * partial);
    if (k >= 20) CHECK(gap <= prev_gap + 1e-15);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-12);
}

TEST_CASE("qudit vectors") {
  const auto big = scq_vector({Parity::even, 1.0, 0.0, 20}, 40);
  CHECK(fidelity(big, oracle::cat(true, 1.0, 40)) > 1.0 - 1e-8);

  const auto small = scq_vector({Parity::even, 0.7, 0.0, 2}, 10);
  for (int n = 0; n <= 10; ++n)
    if (n != 0 && n != 2) CHECK(std::abs(small[n]) < 1e-15);

  const auto nine = scq_vector({Parity::even, 2.12, 0.23, 9});
  CHECK(nine.norm2() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("closed-form fidelity against vectors") {
  double worst = 0.0;
  for (int n : {2, 5, 9})
    for (int i = 0; i < 20; ++i)
      for (int j = 0; j < 20; ++j) {
        const double a = -2.0 + 4.0 * i / 19.0;
        const double b = 0.1 + 2.4 * (j + 1) / 20.0;
        for (auto p : {Parity::even, Parity::odd}) {
          const CatSpec spec{p, b, a, n};
          const auto q = scq_vector(spec, 70);
          const auto ref = oracle::cat(p == Parity::even, b, 70);
          worst = std::max(worst, std::abs(fidelity_scq(spec) - fidelity(q, ref)));
        }
      }
  CHECK(worst < 1e-8);
}

TEST_CASE("tabulated fidelities") {
  CHECK(fidelity_scq({Parity::even, 2.1131, 0.2301, 9}) > 0.99);
  CHECK(fidelity_scq({Parity::even, 0.8615, 0.0, 2}) == doctest::Approx(0.99).epsilon(1e-4));
  CHECK(fidelity_scq({Parity::odd, 1.044, 0.0, 3}) == doctest::Approx(0.99).epsilon(1e-4));
}

TEST_CASE("scalar product") {
  for (int n = 1; n <= 12; ++n)
    for (double b : {0.3, 1.0, 2.2}) CHECK(scalar_product_scq(n, 0.0, b) == cplx{0.0, 0.0});

  auto grid_max = [](int n) {
    double m = 0.0;
    for (int i = 0; i <= 40; ++i)
      for (int j = 1; j <= 20; ++j)
        m = std::max(m, std::abs(scalar_product_scq(n, -2.0 + 0.1 * i, 0.1 * j)));
    return m;
  };
  const double m9 = grid_max(9), m2 = grid_max(2);
  CHECK(m9 < m2);
  // A 0.01-step scan of the same box peaks at 0.0991 for n = 9 and 0.968 for n = 2.
  CHECK(m9 < 0.1);
}

TEST_CASE("alpha optimum") {
  CHECK(max_fidelity_over_alpha(4, Parity::even, 0.8).alpha == 0.0);
  CHECK(max_fidelity_over_alpha(3, Parity::odd, 1.044).alpha == 0.0);
  const CatSpec s{Parity::odd, 1.3, 0.47, 5};
  auto flipped = s;
  flipped.alpha = -s.alpha;
  CHECK(fidelity_scq(s) == doctest::Approx(fidelity_scq(flipped)).epsilon(1e-14));

  // Even n: the even-cat maximum and the odd-cat minimum both sit at alpha = 0.
  for (int n : {2, 4}) {
    const double h = 0.02;
    const double fp0 = fidelity_scq({Parity::even, 1.5, 0.0, n});
    const double fm0 = fidelity_scq({Parity::odd, 1.5, 0.0, n});
    CHECK(fp0 > fidelity_scq({Parity::even, 1.5, h, n}));
    CHECK(fm0 < fidelity_scq({Parity::odd, 1.5, h, n}));
  }
}

TEST_CASE("table search") {
  const auto r9 = table1_search(9, Parity::even);
  CHECK(r9.beta_max == doctest::Approx(2.1131).epsilon(0.01 / 2.1131));
  CHECK(std::abs(r9.alpha - 0.2301) < 0.01);
  const auto r8 = table1_search(8, Parity::odd);
  CHECK(std::abs(r8.beta_max - 1.9571) < 0.01);
  CHECK(std::abs(r8.alpha - 0.2404) < 0.01);
  for (auto p : {Parity::even, Parity::odd}) {
    double prev = 0.0;
    for (int n = 2; n <= 9; ++n) {
      const double b = table1_search(n, p).beta_max;
      CHECK(b > prev);
      prev = b;
    }
  }
}
