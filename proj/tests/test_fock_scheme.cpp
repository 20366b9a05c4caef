#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "catq/fock_scheme.hpp"
#include "catq/search.hpp"
#include "oracles.hpp"

using namespace catq;

namespace {

CascadeConfig random_config(CounterRng& rng, int m, int n) {
  CascadeConfig c;
  c.photons.assign(m + 1, 0);
  for (int p = 0; p < n; ++p) c.photons[static_cast<int>(rng.uniform() * (m + 1)) % (m + 1)]++;
  if (c.photons[0] == 0 && n > 0) {
    c.photons[0] = 1;
    for (int j = 1; j <= m; ++j)
      if (c.photons[j] > 0) {
        --c.photons[j];
        break;
      }
  }
  for (int j = 0; j < m; ++j) {
    c.bs.push_back(BeamSplitter::from_angles(rng.uniform(0.2, 1.35), rng.uniform(-3.0, 3.0),
                                             rng.uniform(-3.0, 3.0)));
    c.disp.push_back({rng.uniform(-0.8, 0.8), rng.uniform(-0.8, 0.8)});
  }
  c.final_alpha = rng.uniform(-0.7, 0.7);
  return c;
}

// Ascending coefficients of prod (p_f x + q_f), computed by plain convolution.
std::vector<cplx> expand(const std::vector<std::pair<cplx, cplx>>& factors) {
  std::vector<cplx> c{1.0};
  for (const auto& [p, q] : factors) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += q * c[i];
      next[i + 1] += p * c[i];
    }
    c = std::move(next);
  }
  return c;
}

double fact(int k) { return std::tgamma(k + 1.0); }

double probability_from(const std::vector<cplx>& mk, double disp_norm, const std::vector<int>& photons) {
  double s = 0.0;
  for (std::size_t k = 0; k < mk.size(); ++k) s += std::norm(mk[k]) * fact(static_cast<int>(k));
  double denom = 1.0;
  for (int k : photons) denom *= fact(k);
  return std::exp(-disp_norm) * s / denom;
}

void check_betas(const FactorRoots& fr, const std::vector<cplx>& per_mode) {
  for (std::size_t i = 0; i < fr.betas.size(); ++i)
    CHECK(std::abs(fr.betas[i] - per_mode[fr.source[i]]) < 1e-12);
}

}  // namespace

TEST_CASE("single splitter closed form") {
  CounterRng rng(11, 0);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = random_config(rng, 1, 2 + trial % 4);
    if (c.photons[1] == 0) c.photons = {c.photons[0] - 1, 1};
    const cplx t = c.bs[0].t, r = c.bs[0].r, a1 = c.disp[0];
    const std::vector<cplx> betas{r / t * std::conj(a1), -std::conj(t) / std::conj(r) * std::conj(a1)};
    const auto fr = cascade_factors(c);
    REQUIRE(static_cast<int>(fr.betas.size()) == c.n());
    check_betas(fr, betas);

    std::vector<std::pair<cplx, cplx>> factors;
    for (int i = 0; i < c.photons[0]; ++i) factors.push_back({t, -r * std::conj(a1)});
    for (int i = 0; i < c.photons[1]; ++i)
      factors.push_back({-std::conj(r), -std::conj(t) * std::conj(a1)});
    const double p = probability_from(expand(factors), std::norm(a1), c.photons);
    CHECK(fr.probability == doctest::Approx(p).epsilon(1e-12));
    CHECK(cascade_output_state(c).probability == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("two splitter closed form") {
  CounterRng rng(12, 0);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = random_config(rng, 2, 3 + trial % 3);
    c.photons = {1 + trial % 2, 1, 1 + trial % 3};
    const cplx t1 = c.bs[0].t, r1 = c.bs[0].r, t2 = c.bs[1].t, r2 = c.bs[1].r;
    const cplx a1 = std::conj(c.disp[0]), a2 = std::conj(c.disp[1]);  // alpha_j^*
    const std::vector<cplx> betas{(t1 * r2 * a2 + r1 * a1) / (t1 * t2),
                                  (std::conj(r1) * r2 * a2 - std::conj(t1) * a1) / (std::conj(r1) * t2),
                                  std::conj(t2) * a2 / -std::conj(r2)};
    const auto fr = cascade_factors(c);
    check_betas(fr, betas);

    std::vector<std::pair<cplx, cplx>> factors;
    for (int i = 0; i < c.photons[0]; ++i) factors.push_back({t1 * t2, -t1 * r2 * a2 - r1 * a1});
    for (int i = 0; i < c.photons[1]; ++i)
      factors.push_back({-std::conj(r1) * t2, std::conj(r1) * r2 * a2 - std::conj(t1) * a1});
    for (int i = 0; i < c.photons[2]; ++i) factors.push_back({-std::conj(r2), -std::conj(t2) * a2});
    const double p = probability_from(expand(factors), std::norm(a1) + std::norm(a2), c.photons);
    CHECK(fr.probability == doctest::Approx(p).epsilon(1e-12));

    // Output equals N D(i alpha) prod (a^+ - beta)|0>.
    const auto out = cascade_output_state(c, 40);
    const auto ref = state_from_roots(fr.betas, c.final_alpha, 40);
    CHECK(fidelity(out.state, ref) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("root multiplicities follow the photon numbers") {
  CounterRng rng(13, 0);
  for (int m = 1; m <= 4; ++m) {
    auto c = random_config(rng, m, 0);
    c.photons.assign(m + 1, 0);
    for (int j = 0; j <= m; ++j) c.photons[j] = 1 + (j % 3);
    const auto fr = cascade_factors(c);
    std::vector<cplx> distinct;
    std::vector<int> count;
    for (auto b : fr.betas) {
      auto it = std::find_if(distinct.begin(), distinct.end(),
                             [&](cplx d) { return std::abs(d - b) < 1e-9; });
      if (it == distinct.end()) {
        distinct.push_back(b);
        count.push_back(1);
      } else {
        ++count[it - distinct.begin()];
      }
    }
    REQUIRE(static_cast<int>(distinct.size()) == m + 1);
    for (int j = 0; j <= m; ++j) CHECK(count[j] == c.photons[j]);
  }
}

TEST_CASE("linear forms agree with the multimode oracle") {
  CounterRng rng(14, 0);
  int checked = 0;
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 6; ++n)
      for (int trial = 0; trial < 3; ++trial) {
        const auto c = random_config(rng, m, n);
        const auto fast = cascade_output_state(c, 40);
        const auto slow = oracle_cascade(c, 40);
        CHECK(fidelity(fast.state, slow.state) > 1.0 - 1e-8);
        CHECK(std::abs(fast.probability - slow.probability) < 1e-8);
        ++checked;
      }
  CHECK(checked == 54);
}

TEST_CASE("cascade sanity cases") {
  const auto bs = BeamSplitter::from_angles(0.7, 0.2, -0.4);
  CascadeConfig c{{1, 0}, {bs}, {0.0}, 0.0};
  auto out = oracle_cascade(c, 4);
  CHECK(std::abs(std::abs(out.state[1]) - 1.0) < 1e-12);
  CHECK(out.probability == doctest::Approx(std::norm(bs.t)).epsilon(1e-12));

  c.photons = {0, 1};
  out = oracle_cascade(c, 4);
  CHECK(std::abs(std::abs(out.state[1]) - 1.0) < 1e-12);
  CHECK(out.probability == doctest::Approx(std::norm(bs.r)).epsilon(1e-12));

  c.photons = {3, 2};
  const auto fr = cascade_factors(c);
  for (auto b : fr.betas) CHECK(std::abs(b) < 1e-15);
  out = cascade_output_state(c, 10);
  CHECK(std::abs(std::abs(out.state[5]) - 1.0) < 1e-12);
  const double p = std::pow(std::norm(bs.t), 3) * std::pow(std::norm(bs.r), 2) * fact(5) / (fact(3) * fact(2));
  CHECK(out.probability == doctest::Approx(p).epsilon(1e-12));

  CascadeConfig blocked{{1, 1}, {BeamSplitter{}}, {0.3}, 0.0};
  CHECK_THROWS_AS(cascade_factors(blocked), UntransmittedPhoton);
}

TEST_CASE("analytic cat overlap matches the vector path") {
  CounterRng rng(15, 0);
  for (int trial = 0; trial < 6; ++trial) {
    const auto c = random_config(rng, 2, 5);
    const auto und = cascade_undisplaced(c);
    for (auto p : {Parity::even, Parity::odd}) {
      const auto out = cascade_output_state(c, 60);
      const auto cat = oracle::cat(p == Parity::even, 1.6, 60);
      const double vec = fidelity(out.state, cat);
      CHECK(cat_overlap_fidelity(und.state.amps(), c.final_alpha, p, 1.6) ==
            doctest::Approx(vec).epsilon(1e-10));
    }
  }
}

TEST_CASE("target roots") {
  const auto single = target_roots({Parity::odd, 1.0, 0.0, 1});
  REQUIRE(single.size() == 1);
  CHECK(std::abs(single[0]) < 1e-14);

  const CatSpec ten{Parity::even, 2.0, -0.35, 10};
  const auto roots = target_roots(ten);
  REQUIRE(roots.size() == 10);
  CHECK(fidelity(state_from_roots(roots, ten.alpha, 60), scq_vector(ten, 60)) > 1.0 - 1e-10);

  // With alpha = 0 the coefficients are i^k times reals, so roots pair as gamma, -gamma^*.
  for (auto p : {Parity::even, Parity::odd}) {
    const auto r = target_roots({p, 1.7, 0.0, p == Parity::even ? 8 : 9});
    for (auto g : r) {
      double best = 1e9;
      for (auto h : r) best = std::min(best, std::abs(h + std::conj(g)));
      CHECK(best < 1e-8);
    }
  }
}

TEST_CASE("fit is deterministic and self-consistent") {
  const CatSpec target{Parity::even, 1.2, 0.0, 4};
  FitOptions fo;
  fo.restarts = 4;
  fo.budget = 3000;
  fo.seed = 3;
  const auto a = fit_cascade(target, 1, {2, 2}, fo);
  const auto b = fit_cascade(target, 1, {2, 2}, fo);
  CHECK(a.fidelity == b.fidelity);
  CHECK(a.best_restart == b.best_restart);
  CHECK(a.restart_fidelities.size() == 4);
  const auto out = cascade_output_state(a.config, 60);
  const double f = fidelity(out.state, oracle::cat(true, 1.2, 60));
  CHECK(f == doctest::Approx(a.fidelity).epsilon(1e-8));
  CHECK(out.probability == doctest::Approx(a.probability).epsilon(1e-8));
  CHECK(a.fidelity > 0.9);
}

TEST_CASE("larger cascades reach the tabulated fidelity floor") {
  const double alpha = max_fidelity_over_alpha(10, Parity::odd, 2.0).alpha;
  const auto four = fit_cascade({Parity::odd, 2.0, alpha, 10}, 4, {2, 2, 2, 2, 2});
  CHECK(four.fidelity >= 0.96);
  const double alpha_even = max_fidelity_over_alpha(10, Parity::even, 2.0).alpha;
  const auto five = fit_cascade({Parity::even, 2.0, alpha_even, 10}, 5, {0, 2, 2, 2, 2, 2});
  CHECK(five.fidelity >= 0.96);
}
