#include <doctest.h>

#include <cmath>
#include <numbers>

#include "catq/entangled.hpp"
#include "catq/search.hpp"

using namespace catq;

namespace {

EntangledInput random_input(int n, CounterRng& rng) {
  EntangledInput in;
  in.n = n;
  in.d.resize(n + 1);
  double s = 0.0;
  for (auto& x : in.d) {
    x = {rng.normal(), rng.normal()};
    s += std::norm(x);
  }
  for (auto& x : in.d) x /= std::sqrt(s);
  return in;
}

const CatSpec kTable2First{Parity::even, 1.03, 0.328, 3};

}  // namespace

TEST_CASE("input coefficients") {
  const auto in = dm_coefficients(kTable2First, 0, 1.426);
  double s = 0.0;
  for (auto x : in.d) s += std::norm(x);
  CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_NOTHROW(in.validate());

  // Heralding on zero photons uses the coherent row (-alpha'^*)^j / sqrt(j!).
  const cplx ap{0.8, -0.3};
  for (int j = 0; j <= 6; ++j) {
    const cplx expect = std::pow(-std::conj(ap), j) / std::sqrt(std::tgamma(j + 1.0));
    CHECK(std::abs(displacement_coeff(j, 0, ap) - expect) < 1e-13);
  }

  try {
    dm_coefficients(kTable2First, 0, 0.0);
    FAIL("expected DegenerateDisplacement");
  } catch (const DegenerateDisplacement& e) {
    CHECK(e.index() == 0);
  }
}

TEST_CASE("heralded state reproduces the qudit") {
  const struct {
    CatSpec spec;
    double alpha_prime;
  } cases[] = {{kTable2First, 1.426},
               {{Parity::even, 1.64, 0.0, 6}, 1.805},
               {{Parity::odd, 1.04, 0.0, 3}, 1.265},
               {{Parity::odd, 2.1252, 0.0, 9}, 2.2}};
  for (const auto& c : cases) {
    REQUIRE(fidelity_scq(c.spec) > 0.99);
    for (int k : {0, 1, 2}) {
      const auto in = dm_coefficients(c.spec, k, c.alpha_prime);
      const auto out = heralded_state(in, c.spec.alpha, c.alpha_prime, k);
      REQUIRE(out.possible);
      const auto target = scq_vector(c.spec, out.state.cutoff());
      CHECK(fidelity(out.state, target) > 1.0 - 1e-8);
      CHECK(out.probability ==
            doctest::Approx(success_probability_scq(c.spec, k, c.alpha_prime)).epsilon(1e-10));
      CHECK(success_probability_closed_form(c.spec, k, c.alpha_prime) ==
            doctest::Approx(out.probability).epsilon(1e-10));
    }
  }
}

TEST_CASE("tabulated success probabilities") {
  CHECK(std::abs(success_probability_scq(kTable2First, 0, 1.426) - 0.20) <= 0.01);
  CHECK(std::abs(success_probability_scq({Parity::even, 1.64, 0.0, 6}, 0, 1.805) - 0.12) <= 0.01);
  CHECK(std::abs(success_probability_scq({Parity::odd, 1.04, 0.0, 3}, 0, 1.265) - 0.25) <= 0.01);

  const auto opt = maximize_probability_over_alpha_prime(kTable2First, 0);
  CHECK(std::abs(opt.probability - 0.20) <= 0.01);
  CHECK(std::abs(opt.alpha_prime - 1.426) < 0.05);
  CHECK(opt.probability <= 1.0);

  double prev = 1.0;
  for (int n : {2, 3, 4, 6, 8}) {
    const double p = maximize_probability_over_alpha_prime({Parity::even, 1.0, 0.3, n}, 0).probability;
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("outcome probabilities sum to one") {
  CounterRng rng(5, 1);
  for (int n = 1; n <= 6; ++n)
    for (double ap : {0.5, 1.4, 2.0}) {
      const auto in = random_input(n, rng);
      double total = 0.0;
      for (int k = 0; k < 200; ++k) {
        total += heralded_state(in, 0.4, ap, k).probability;
        if (k > n + 4 && 1.0 - total < 1e-12) break;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("closed form agrees with the two-mode oracle") {
  CounterRng rng(9, 2);
  for (int n = 1; n <= 6; ++n)
    for (int k : {0, 1, 2}) {
      const auto in = random_input(n, rng);
      const double alpha = rng.uniform(-1.0, 1.0);
      const cplx ap{rng.uniform(0.2, 1.5), rng.uniform(-0.5, 0.5)};
      const auto fast = heralded_state(in, alpha, ap, k, 40);
      const auto slow = oracle_scheme_entangled(in, alpha, ap, k, {40, 40});
      CHECK(std::abs(fast.probability - slow.probability) < 1e-8);
      if (fast.possible) CHECK(fidelity(fast.state, slow.state) > 1.0 - 1e-8);
    }

  // Without displacements, counting k keeps the single term d_{n-k}.
  const auto in = random_input(4, rng);
  for (int k = 0; k <= 4; ++k) {
    const auto out = oracle_scheme_entangled(in, 0.0, 0.0, k, {6, 6});
    CHECK(out.probability == doctest::Approx(std::norm(in.d[4 - k])).epsilon(1e-12));
    CHECK(std::abs(std::abs(out.state[4 - k]) - 1.0) < 1e-12);
  }
}

TEST_CASE("beam-splitter decomposition") {
  CounterRng rng(3, 0);
  for (int n = 1; n <= 12; ++n)
    for (int trial = 0; trial < 5; ++trial) {
      const auto in = random_input(n, rng);
      const auto dec = bs_decomposition(in);
      REQUIRE(static_cast<int>(dec.bs_list.size()) == n);
      CHECK(input_fidelity(in, reconstruct_input(dec)) > 1.0 - 1e-10);
      for (int i = 0; i < n; ++i) {
        const auto& bs = dec.bs_list[i];
        const double t = 1.0 / std::sqrt(1.0 + std::norm(dec.roots[i]));
        CHECK(std::abs(bs.t - t) < 1e-10);
        CHECK(std::abs(bs.r + dec.roots[i] * t) < 1e-10);
        CHECK(std::abs(std::norm(bs.t) + std::norm(bs.r) - 1.0) < 1e-12);
      }
    }

  // Single photon in mode 1: the trivial splitter.
  EntangledInput one{1, {0.0, 1.0}};
  const auto dec = bs_decomposition(one);
  CHECK(std::abs(dec.bs_list[0].t - 1.0) < 1e-15);
  CHECK(std::abs(dec.bs_list[0].r) < 1e-15);
  CHECK_THROWS_AS(bs_decomposition(EntangledInput{1, {1.0, 0.0}}), DegreeDeficient);

  // Two balanced splitters: (a1^+ + a2^+)^2 |00> / 2.
  BSDecomposition balanced;
  balanced.bs_list = {BeamSplitter::balanced(), BeamSplitter::balanced()};
  const auto d = reconstruct_input(balanced).d;
  const double phase_ref = std::arg(d[1]);
  const cplx undo = std::polar(1.0, -phase_ref);
  CHECK(std::abs(d[0] * undo - 0.5) < 1e-14);
  CHECK(std::abs(d[1] * undo - 1.0 / std::numbers::sqrt2) < 1e-14);
  CHECK(std::abs(d[2] * undo - 0.5) < 1e-14);

  BSDecomposition trivial;
  trivial.bs_list.assign(4, BeamSplitter{});
  const auto all_one = reconstruct_input(trivial).d;
  for (int m = 0; m < 4; ++m) CHECK(std::abs(all_one[m]) < 1e-15);
  CHECK(std::abs(std::abs(all_one[4]) - 1.0) < 1e-15);
}
