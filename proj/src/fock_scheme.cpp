#include "catq/fock_scheme.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "catq/polynomial.hpp"
#include "catq/search.hpp"

namespace catq {

namespace {

constexpr double kUntransmitted = 1e-14;

// Unnormalized output amplitudes before D_0(i alpha); their squared norm is the probability.
std::vector<cplx> raw_output(const CascadeConfig& config) {
  const auto forms = cascade_linear_forms(config);
  std::vector<cplx> u(forms.size()), v(forms.size());
  for (std::size_t f = 0; f < forms.size(); ++f) {
    u[f] = forms[f].u;
    v[f] = forms[f].v;
  }
  auto amps = expand_linear_factors(u, v);
  double log_prefactor = 0.0;
  for (const auto& a : config.disp) log_prefactor -= 0.5 * std::norm(a);
  for (int k : config.photons) log_prefactor -= 0.5 * log_factorial(k);
  for (std::size_t k = 0; k < amps.size(); ++k)
    amps[k] *= std::exp(log_prefactor + 0.5 * log_factorial(static_cast<int>(k)));
  return amps;
}

int output_cutoff_for(std::span<const cplx> amps, double alpha) {
  double mean = 0.0, norm = 0.0;
  for (std::size_t k = 0; k < amps.size(); ++k) {
    mean += static_cast<double>(k) * std::norm(amps[k]);
    norm += std::norm(amps[k]);
  }
  if (norm > 0.0) mean /= norm;
  const double mu = std::pow(std::sqrt(mean) + std::abs(alpha), 2);
  return std::max(default_cutoff(mu), static_cast<int>(amps.size()) - 1);
}

// Parameter layout: (theta_j, phi_t_j, phi_r_j) for each splitter, then (re, im) of each
// auxiliary displacement, then the final alpha.
SearchSpace fit_space(int m, std::uint64_t seed, std::size_t budget) {
  SearchSpace space;
  space.seed = seed;
  space.budget = budget;
  const double pi = std::numbers::pi;
  for (int j = 1; j <= m; ++j) {
    const auto s = std::to_string(j);
    space.dims.push_back({"theta" + s, 0.0, pi / 2, DimKind::linear});
    space.dims.push_back({"phi_t" + s, -pi, pi, DimKind::angular});
    space.dims.push_back({"phi_r" + s, -pi, pi, DimKind::angular});
  }
  for (int j = 1; j <= m; ++j) {
    const auto s = std::to_string(j);
    space.dims.push_back({"re_alpha" + s, -3.0, 3.0, DimKind::linear});
    space.dims.push_back({"im_alpha" + s, -3.0, 3.0, DimKind::linear});
  }
  space.dims.push_back({"alpha", -1.5, 1.5, DimKind::linear});
  return space;
}

CascadeConfig decode(std::span<const double> x, const std::vector<int>& photons, int m) {
  CascadeConfig config;
  config.photons = photons;
  for (int j = 0; j < m; ++j)
    config.bs.push_back(BeamSplitter::from_angles(x[3 * j], x[3 * j + 1], x[3 * j + 2]));
  for (int j = 0; j < m; ++j) config.disp.emplace_back(x[3 * m + 2 * j], x[3 * m + 2 * j + 1]);
  config.final_alpha = x[5 * m];
  return config;
}

// Negative squared distance between the cascade's factor roots and `gammas` under a greedy
// nearest-pair assignment. Photons from one input mode share a root.
double root_match_score(const CascadeConfig& config, std::span<const cplx> gammas) {
  const auto forms = cascade_linear_forms(config);
  std::vector<cplx> values;
  std::vector<int> mult;
  for (int j = 0; j <= config.m(); ++j) {
    if (config.photons[j] == 0) continue;
    const auto it = std::find_if(forms.begin(), forms.end(),
                                 [j](const LinearForm& f) { return f.source == j; });
    if (std::abs(it->u) < 1e-9) return -std::numeric_limits<double>::infinity();
    values.push_back(-it->v / it->u);
    mult.push_back(config.photons[j]);
  }
  struct Pair {
    double dist;
    std::size_t value, gamma;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (std::size_t g = 0; g < gammas.size(); ++g)
      pairs.push_back({std::norm(values[i] - gammas[g]), i, g});
  std::stable_sort(pairs.begin(), pairs.end(),
                   [](const Pair& a, const Pair& b) { return a.dist < b.dist; });
  std::vector<bool> used(gammas.size(), false);
  double score = 0.0;
  for (const auto& p : pairs) {
    if (used[p.gamma] || mult[p.value] == 0) continue;
    used[p.gamma] = true;
    --mult[p.value];
    score -= p.dist;
  }
  return score;
}

struct RestartOutcome {
  std::vector<double> point;
  double value = -std::numeric_limits<double>::infinity();
  std::size_t evaluations = 0;
};

// Repeated Nelder-Mead passes until a pass stops improving or the budget is spent.
RestartOutcome polish(const Objective& objective, std::vector<double> start, SearchSpace space,
                      double tol, std::size_t budget) {
  RestartOutcome out;
  out.point = std::move(start);
  double step = 0.1;
  while (out.evaluations < budget) {
    space.budget = budget - out.evaluations;
    const auto r = refine(objective, out.point, space, tol, step);
    out.evaluations += r.evaluations;
    const bool improved = r.value > out.value + 1e-12;
    if (r.value >= out.value) {
      out.point = r.point;
      out.value = r.value;
    }
    if (!improved || r.budget_exhausted) break;
    step = 0.05;
  }
  return out;
}

}  // namespace

int CascadeConfig::n() const {
  int total = 0;
  for (int k : photons) total += k;
  return total;
}

void CascadeConfig::validate() const {
  if (bs.empty()) throw DomainError("CascadeConfig: need at least one beam splitter");
  if (static_cast<int>(photons.size()) != m() + 1)
    throw DomainError("CascadeConfig: need m + 1 photon numbers");
  if (static_cast<int>(disp.size()) != m())
    throw DomainError("CascadeConfig: need m auxiliary displacements");
  for (int k : photons)
    if (k < 0) throw DomainError("CascadeConfig: negative photon number");
  if (n() < 1) throw DomainError("CascadeConfig: total photon number must be >= 1");
  for (const auto& b : bs)
    if (std::abs(std::norm(b.t) + std::norm(b.r) - 1.0) > 1e-12)
      throw DomainError("CascadeConfig: beam splitter not unitary");
  if (!std::isfinite(final_alpha)) throw DomainError("CascadeConfig: final alpha not finite");
}

std::vector<LinearForm> cascade_linear_forms(const CascadeConfig& config) {
  config.validate();
  const int m = config.m();
  std::vector<LinearForm> forms;
  forms.reserve(config.n());
  std::vector<cplx> coef(m + 1);
  for (int j = 0; j <= m; ++j) {
    if (config.photons[j] == 0) continue;
    std::fill(coef.begin(), coef.end(), cplx{0.0, 0.0});
    coef[j] = 1.0;
    for (int b = 1; b <= m; ++b) {
      const auto& bs = config.bs[b - 1];
      const cplx a0 = coef[0], aj = coef[b];
      coef[0] = bs.t * a0 - std::conj(bs.r) * aj;
      coef[b] = bs.r * a0 + std::conj(bs.t) * aj;
    }
    // <0|D(alpha) a^+ = -alpha^* <0|D(alpha)
    cplx v{0.0, 0.0};
    for (int b = 1; b <= m; ++b) v -= coef[b] * std::conj(config.disp[b - 1]);
    for (int p = 0; p < config.photons[j]; ++p) forms.push_back({coef[0], v, j});
  }
  return forms;
}

FactorRoots cascade_factors(const CascadeConfig& config) {
  const auto forms = cascade_linear_forms(config);
  FactorRoots out;
  cplx prod_u{1.0, 0.0};
  for (const auto& f : forms) {
    if (std::abs(f.u) < kUntransmitted)
      throw UntransmittedPhoton("cascade_factors: photon from mode " + std::to_string(f.source) +
                                " never reaches the output mode");
    out.betas.push_back(-f.v / f.u);
    out.source.push_back(f.source);
    prod_u *= f.u;
  }
  const auto amps = raw_output(config);
  for (const auto& a : amps) out.probability += std::norm(a);
  double log_scale = 0.0;
  for (const auto& a : config.disp) log_scale -= 0.5 * std::norm(a);
  for (int k : config.photons) log_scale -= 0.5 * log_factorial(k);
  out.leading = out.probability > 0.0
                    ? prod_u * std::exp(log_scale) / std::sqrt(out.probability)
                    : cplx{0.0, 0.0};
  return out;
}

CascadeOutput cascade_undisplaced(const CascadeConfig& config) {
  auto amps = raw_output(config);
  CascadeOutput out;
  for (const auto& a : amps) out.probability += std::norm(a);
  out.state = FockVector(std::move(amps));
  if (out.probability > 0.0) out.state = out.state.normalized();
  return out;
}

CascadeOutput cascade_output_state(const CascadeConfig& config, int cutoff, double tail_tol) {
  auto out = cascade_undisplaced(config);
  if (cutoff < 0) cutoff = output_cutoff_for(out.state.amps(), config.final_alpha);
  out.state = displace(out.state, cplx{0.0, config.final_alpha}, cutoff, tail_tol);
  return out;
}

CascadeOutput oracle_cascade(const CascadeConfig& config, int output_cutoff, int aux_cutoff,
                             double tail_tol) {
  config.validate();
  const int m = config.m();
  if (m > MultiModeState::kMaxModes - 1) throw DomainError("oracle_cascade: m must be <= 3");
  const int n = config.n();
  const std::vector<int> cutoffs(m + 1, n);
  auto state = MultiModeState::product(config.photons, cutoffs);
  for (int j = 1; j <= m; ++j) state = apply_beamsplitter(state, 0, j, config.bs[j - 1], tail_tol);

  CascadeOutput out;
  out.probability = 1.0;
  for (int j = m; j >= 1; --j) {
    const cplx a = config.disp[j - 1];
    const int cut = aux_cutoff >= 0 ? aux_cutoff : default_cutoff(std::norm(a), n);
    state = apply_displacement_mode(state, j, a, cut, tail_tol);
    const double before = state.norm2();
    auto projected = project_mode(state, j, 0);
    out.probability *= projected.probability / before;
    if (!projected.possible) {
      out.probability = 0.0;
      out.state = FockVector(std::vector<cplx>(output_cutoff + 1, cplx{0.0, 0.0}));
      return out;
    }
    state = std::move(projected.state);
  }
  auto psi = FockVector(std::vector<cplx>(state.amps().begin(), state.amps().end()));
  out.state = displace(psi, cplx{0.0, config.final_alpha}, output_cutoff, tail_tol);
  return out;
}

double cat_overlap_fidelity(std::span<const cplx> amps, double alpha, Parity parity, double beta) {
  auto overlap = [&](cplx gamma) {
    cplx acc{0.0, 0.0};
    cplx pw{1.0, 0.0};
    const cplx gc = std::conj(gamma);
    for (std::size_t k = 0; k < amps.size(); ++k) {
      acc += pw * amps[k];
      pw *= gc / std::sqrt(static_cast<double>(k + 1));
    }
    return std::exp(-0.5 * std::norm(gamma)) * acc;
  };
  double norm2 = 0.0;
  for (const auto& a : amps) norm2 += std::norm(a);
  if (norm2 <= 0.0) return 0.0;
  const double norm = scs_normalization(parity, beta);
  const cplx phase = std::polar(1.0, alpha * beta);
  // <beta| D(i alpha) = e^{i alpha beta} <beta - i alpha|, <-beta| D(i alpha) = e^{-i alpha beta} <-beta - i alpha|
  const cplx plus = phase * overlap(cplx{beta, -alpha});
  const cplx minus = std::conj(phase) * overlap(cplx{-beta, -alpha});
  const cplx amp = norm * (parity == Parity::even ? minus + plus : minus - plus);
  return std::norm(amp) / norm2;
}

std::vector<cplx> target_roots(const CatSpec& spec) {
  const auto c = scq_coefficients(spec);
  const int n = spec.n;
  if (std::abs(c[n]) < 1e-12) throw DegreeDeficient("target_roots: top qudit coefficient vanishes");
  std::vector<cplx> p(n + 1);
  for (int k = 0; k <= n; ++k)
    p[k] = c[k] / c[n] * std::exp(0.5 * (log_factorial(n) - log_factorial(k)));
  return polynomial_roots(p);
}

FockVector state_from_roots(std::span<const cplx> roots, double alpha, int cutoff,
                            double tail_tol) {
  const std::vector<cplx> u(roots.size(), cplx{1.0, 0.0});
  std::vector<cplx> v(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) v[i] = -roots[i];
  auto amps = expand_linear_factors(u, v);
  for (std::size_t k = 0; k < amps.size(); ++k)
    amps[k] *= std::exp(0.5 * log_factorial(static_cast<int>(k)));
  const auto psi = FockVector(std::move(amps)).normalized();
  return displace(psi, cplx{0.0, alpha}, cutoff, tail_tol);
}

FitResult fit_cascade(const CatSpec& target, int m, const std::vector<int>& photons,
                      const FitOptions& options) {
  target.validate();
  if (m < 1) throw DomainError("fit_cascade: m must be >= 1");
  if (static_cast<int>(photons.size()) != m + 1)
    throw DomainError("fit_cascade: need m + 1 photon numbers");
  int total = 0;
  for (int k : photons) total += k;
  if (total != target.n) throw DomainError("fit_cascade: photon numbers must sum to n");
  if (options.restarts < 1) throw DomainError("fit_cascade: need at least one restart");

  const auto space = fit_space(m, options.seed, options.budget);
  const std::size_t dim = space.size();
  const Objective fidelity_objective = [&](std::span<const double> x) {
    const auto config = decode(x, photons, m);
    const auto amps = raw_output(config);
    return cat_overlap_fidelity(amps, config.final_alpha, target.parity, target.beta);
  };

  std::vector<cplx> gammas;
  try {
    gammas = target_roots(target);
  } catch (const std::exception&) {
    gammas.clear();
  }
  const Objective root_objective = [&](std::span<const double> x) {
    return root_match_score(decode(x, photons, m), gammas);
  };

  std::vector<RestartOutcome> outcomes(options.restarts);
  auto run = [&](int r) {
    CounterRng rng(options.seed, static_cast<std::uint64_t>(r));
    std::vector<double> x(dim);
    for (int j = 0; j < m; ++j) {
      x[3 * j] = rng.uniform(0.0, std::numbers::pi / 2);
      x[3 * j + 1] = rng.uniform(-std::numbers::pi, std::numbers::pi);
      x[3 * j + 2] = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    for (int j = 0; j < 2 * m; ++j) x[3 * m + j] = std::clamp(rng.normal(), -3.0, 3.0);
    x[5 * m] = rng.uniform(-1.0, 1.0);

    std::size_t spent = 0;
    if (r % 2 == 0 && !gammas.empty()) {
      x[5 * m] = target.alpha;
      const auto seeded = polish(root_objective, x, space, options.tol, options.budget / 3);
      spent = seeded.evaluations;
      x = seeded.point;
    }
    auto result = polish(fidelity_objective, x, space, options.tol, options.budget - spent);
    result.evaluations += spent;
    outcomes[r] = std::move(result);
  };

  int threads = options.threads > 0 ? options.threads
                                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, options.restarts);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int r = next++; r < options.restarts; r = next++) run(r);
    });
  for (auto& th : pool) th.join();

  FitResult fit;
  for (int r = 0; r < options.restarts; ++r) {
    fit.evaluations += outcomes[r].evaluations;
    fit.restart_fidelities.push_back(outcomes[r].value);
    if (outcomes[r].value > fit.fidelity || fit.best_restart < 0) {
      fit.fidelity = outcomes[r].value;
      fit.best_restart = r;
    }
  }
  fit.config = decode(outcomes[fit.best_restart].point, photons, m);
  fit.probability = cascade_undisplaced(fit.config).probability;
  return fit;
}

}  // namespace catq
