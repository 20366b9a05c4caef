#include "catq/entangled.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "catq/polynomial.hpp"
#include "catq/search.hpp"

namespace catq {

namespace {

// |<k| D(alpha') |n - m>|^2 weights share the factor exp(-|alpha'|^2); this returns c only.
std::vector<cplx> herald_row(int n, int k, cplx alpha_prime) {
  std::vector<cplx> c(n + 1);
  for (int m = 0; m <= n; ++m) c[m] = displacement_coeff(n - m, k, alpha_prime);
  return c;
}

double sum_norm(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return s;
}

}  // namespace

void EntangledInput::validate() const {
  if (n < 0 || static_cast<int>(d.size()) != n + 1)
    throw DomainError("EntangledInput: expected n + 1 coefficients");
  if (std::abs(sum_norm(d) - 1.0) > 1e-10) throw DomainError("EntangledInput: not normalized");
}

EntangledInput dm_coefficients(const CatSpec& spec, int k, cplx alpha_prime) {
  if (k < 0) throw DomainError("dm_coefficients: negative k");
  const auto a = alpha_rep_coeffs(spec).coeffs;
  const auto c = herald_row(spec.n, k, alpha_prime);
  EntangledInput out;
  out.n = spec.n;
  out.d.resize(spec.n + 1);
  for (int m = 0; m <= spec.n; ++m) {
    if (std::abs(c[m]) < kDegenerateThreshold)
      throw DegenerateDisplacement(
          "dm_coefficients: c_{n-m,k}(alpha') vanishes at m = " + std::to_string(m), m);
    out.d[m] = 0.5 * a[m] / c[m];
  }
  const double norm2 = sum_norm(out.d);
  if (norm2 <= 0.0) throw DomainError("dm_coefficients: all coefficients vanish");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& x : out.d) x *= scale;
  return out;
}

HeraldedResult heralded_state(const EntangledInput& input, double alpha, cplx alpha_prime, int k,
                              int cutoff, double tail_tol) {
  input.validate();
  if (k < 0) throw DomainError("heralded_state: negative k");
  const int n = input.n;
  const auto c = herald_row(n, k, alpha_prime);

  HeraldedResult out;
  out.displaced.resize(n + 1);
  for (int m = 0; m <= n; ++m) out.displaced[m] = input.d[m] * c[m];
  const double weight = sum_norm(out.displaced);
  out.probability = std::exp(-std::norm(alpha_prime)) * weight;
  out.possible = out.probability > kImpossibleProbability;

  if (cutoff < 0) cutoff = default_cutoff(alpha * alpha, n);
  std::vector<cplx> amps(cutoff + 1, cplx{0.0, 0.0});
  if (out.possible) {
    out.norm_factor = 1.0 / std::sqrt(weight);
    for (auto& x : out.displaced) x *= out.norm_factor;
  }
  double tail = 0.0;
  for (int m = 0; m <= n; ++m) {
    if (out.displaced[m] == cplx{0.0, 0.0}) continue;
    const auto basis = displaced_number_state(m, cplx{0.0, alpha}, cutoff, tail_tol);
    tail = std::max(tail, basis.tail());
    for (int j = 0; j <= cutoff; ++j) amps[j] += out.displaced[m] * basis[j];
  }
  out.state = FockVector(std::move(amps), tail);
  if (out.possible) out.state = out.state.normalized();
  return out;
}

double success_probability_scq(const CatSpec& spec, int k, cplx alpha_prime) {
  const auto input = dm_coefficients(spec, k, alpha_prime);
  const auto c = herald_row(input.n, k, alpha_prime);
  double weight = 0.0;
  for (int m = 0; m <= input.n; ++m) weight += std::norm(input.d[m] * c[m]);
  return std::exp(-std::norm(alpha_prime)) * weight;
}

double success_probability_closed_form(const CatSpec& spec, int k, cplx alpha_prime) {
  const auto a = alpha_rep_coeffs(spec).coeffs;
  const auto c = herald_row(spec.n, k, alpha_prime);
  double inv_n_prime2 = 0.0;
  double inv_n2 = 0.0;
  for (int m = 0; m <= spec.n; ++m) {
    if (std::abs(c[m]) < kDegenerateThreshold)
      throw DegenerateDisplacement(
          "success_probability_closed_form: c_{n-m,k}(alpha') vanishes at m = " +
              std::to_string(m),
          m);
    const double b2 = std::norm(0.5 * a[m]);
    inv_n_prime2 += b2 / std::norm(c[m]);
    inv_n2 += b2;
  }
  // N'^2 / N_n^2 = inv_n2 / inv_n_prime2
  return std::exp(-std::norm(alpha_prime)) * inv_n2 / inv_n_prime2;
}

ProbabilityOptimum maximize_probability_over_alpha_prime(const CatSpec& spec, int k) {
  auto p = [&](double ap) {
    try {
      return success_probability_scq(spec, k, cplx{ap, 0.0});
    } catch (const DegenerateDisplacement&) {
      return -1.0;
    }
  };
  constexpr double kStep = 0.01;
  constexpr double kUpper = 4.0;
  SearchSpace space{{{"alpha_prime", kStep, kUpper, DimKind::linear}}, 1000, 0};
  const std::array<int, 1> resolution{static_cast<int>(std::lround(kUpper / kStep))};
  const auto best =
      grid_scan([&](std::span<const double> x) { return p(x[0]); }, space, resolution, 1).front();
  const double lo = std::max(1e-6, best.point[0] - kStep);
  const double hi = std::min(kUpper, best.point[0] + kStep);
  auto [ap, value] = golden_section_max(p, lo, hi, 1e-6);
  if (best.value > value) return {best.point[0], best.value};
  return {ap, value};
}

BSDecomposition bs_decomposition(const EntangledInput& input) {
  input.validate();
  const int n = input.n;
  if (std::abs(input.d[n]) <= kDegenerateThreshold)
    throw DegreeDeficient("bs_decomposition: d_n vanishes, polynomial has degree < n");

  std::vector<cplx> f(n + 1);
  for (int m = 0; m <= n; ++m)
    f[m] = input.d[m] * std::exp(-0.5 * (log_factorial(m) + log_factorial(n - m)));

  BSDecomposition out;
  out.leading = input.d[n] * std::exp(-0.5 * log_factorial(n));
  out.roots = polynomial_roots(f);
  out.bs_list.reserve(n);
  for (const auto& z : out.roots) {
    const double t = 1.0 / std::sqrt(1.0 + std::norm(z));
    out.bs_list.emplace_back(cplx{t, 0.0}, -z * t);
  }
  return out;
}

EntangledInput reconstruct_input(const BSDecomposition& decomp) {
  const int n = static_cast<int>(decomp.bs_list.size());
  std::vector<cplx> u(n), v(n);
  for (int i = 0; i < n; ++i) {
    u[i] = decomp.bs_list[i].t;
    v[i] = decomp.bs_list[i].r;
  }
  // prod (t x + r) = sum_j e_j x^j, x^j <-> a_1^{+j} a_2^{+(n-j)}
  const auto e = expand_linear_factors(u, v);
  EntangledInput out;
  out.n = n;
  out.d.resize(n + 1);
  for (int j = 0; j <= n; ++j)
    out.d[j] = e[j] * std::exp(0.5 * (log_factorial(j) + log_factorial(n - j)));
  const double scale = 1.0 / std::sqrt(sum_norm(out.d));
  for (auto& x : out.d) x *= scale;
  return out;
}

double input_fidelity(const EntangledInput& a, const EntangledInput& b) {
  if (a.n != b.n) throw DomainError("input_fidelity: photon numbers differ");
  cplx acc{0.0, 0.0};
  for (int m = 0; m <= a.n; ++m) acc += std::conj(a.d[m]) * b.d[m];
  return std::norm(acc) / (sum_norm(a.d) * sum_norm(b.d));
}

HeraldedResult oracle_scheme_entangled(const EntangledInput& input, double alpha, cplx alpha_prime,
                                       int k, std::array<int, 2> cutoffs, double tail_tol) {
  input.validate();
  const int n = input.n;
  auto state = MultiModeState::zero({n, n});
  for (int m = 0; m <= n; ++m) {
    const std::array<int, 2> occ{m, n - m};
    state.at(occ) = input.d[m];
  }
  state = apply_displacement_mode(state, 0, cplx{0.0, alpha}, cutoffs[0], tail_tol);
  state = apply_displacement_mode(state, 1, alpha_prime, cutoffs[1], tail_tol);
  if (k > cutoffs[1]) throw DomainError("oracle_scheme_entangled: k outside mode-2 cutoff");
  const auto projected = project_mode(state, 1, k);

  HeraldedResult out;
  out.probability = projected.probability;
  out.possible = projected.possible;
  out.state = projected.state.to_fock();
  if (out.possible) out.norm_factor = std::sqrt(std::exp(-std::norm(alpha_prime)) / out.probability);
  return out;
}

}  // namespace catq
