#include "catq/cat_states.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "catq/search.hpp"

namespace catq {

namespace {

constexpr std::array<cplx, 4> kIPowers{cplx{1, 0}, cplx{0, 1}, cplx{-1, 0}, cplx{0, -1}};

// cos(theta + k pi/2) for even parity, sin(theta + k pi/2) for odd, with the quarter turns
// applied exactly so that theta = 0 gives exact zeros.
double rotated_trig(Parity parity, double theta, int k) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  switch (((k % 4) + 4) % 4) {
    case 0:
      return parity == Parity::even ? c : s;
    case 1:
      return parity == Parity::even ? -s : c;
    case 2:
      return parity == Parity::even ? -c : -s;
    default:
      return parity == Parity::even ? s : -c;
  }
}

// |a_k|^2 / 4 for k = 0..n, i.e. R^{2k}/k! trig^2.
std::vector<double> half_weights(const CatSpec& spec) {
  const double r2 = spec.radius() * spec.radius();
  const double phi = spec.phase();
  std::vector<double> w(spec.n + 1);
  double pw = 1.0;  // R^{2k}/k!
  for (int k = 0; k <= spec.n; ++k) {
    if (k > 0) pw *= r2 / k;
    const double trig = rotated_trig(spec.parity, spec.alpha * spec.beta + k * phi, k);
    w[k] = pw * trig * trig;
  }
  return w;
}

}  // namespace

std::string_view to_string(Parity p) { return p == Parity::even ? "even" : "odd"; }

Parity parse_parity(std::string_view text) {
  if (text == "even" || text == "+" || text == "plus") return Parity::even;
  if (text == "odd" || text == "-" || text == "minus") return Parity::odd;
  throw DomainError("unknown parity '" + std::string(text) + "'");
}

double CatSpec::radius() const { return std::hypot(alpha, beta); }

double CatSpec::phase() const { return std::atan2(alpha, beta); }

void CatSpec::validate() const {
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("CatSpec: beta must be >= 0");
  if (parity == Parity::odd && beta <= 0.0) throw DomainError("CatSpec: odd cat needs beta > 0");
  if (!std::isfinite(alpha)) throw DomainError("CatSpec: alpha must be finite");
  if (n < 0) throw DomainError("CatSpec: n must be >= 0");
}

double scs_normalization(Parity parity, double beta) {
  if (!(beta >= 0.0)) throw DomainError("scs_normalization: beta must be >= 0");
  const double x = -2.0 * beta * beta;
  if (parity == Parity::even) return 1.0 / std::sqrt(2.0 * (1.0 + std::exp(x)));
  if (beta == 0.0) throw DomainError("scs_normalization: odd cat undefined at beta = 0");
  return 1.0 / std::sqrt(2.0 * -std::expm1(x));
}

AlphaRepCoeffs alpha_rep_coeffs(const CatSpec& spec) {
  spec.validate();
  const double radius = spec.radius();
  const double phi = spec.phase();
  AlphaRepCoeffs out;
  out.coeffs.resize(spec.n + 1);
  double pw = 1.0;  // R^k / sqrt(k!)
  for (int k = 0; k <= spec.n; ++k) {
    if (k > 0) pw *= radius / std::sqrt(static_cast<double>(k));
    const double trig = rotated_trig(spec.parity, spec.alpha * spec.beta + k * phi, k);
    out.coeffs[k] = 2.0 * kIPowers[k % 4] * pw * trig;
  }
  return out;
}

AlphaRepCoeffs alpha_rep_coeffs_general(Parity parity, cplx displacement, double beta, int n) {
  if (n < 0) throw DomainError("alpha_rep_coeffs_general: n must be >= 0");
  const double sign = parity == Parity::even ? 1.0 : -1.0;
  const cplx e_minus = std::exp(-std::conj(displacement) * beta);
  const cplx e_plus = std::exp(std::conj(displacement) * beta);
  const cplx base_minus = -displacement - beta;
  const cplx base_plus = -displacement + beta;
  AlphaRepCoeffs out;
  out.coeffs.resize(n + 1);
  cplx p_minus{1.0, 0.0};
  cplx p_plus{1.0, 0.0};
  double inv_sqrt_fact = 1.0;
  for (int k = 0; k <= n; ++k) {
    if (k > 0) {
      p_minus *= base_minus;
      p_plus *= base_plus;
      inv_sqrt_fact /= std::sqrt(static_cast<double>(k));
    }
    out.coeffs[k] = inv_sqrt_fact * (e_minus * p_minus + sign * e_plus * p_plus);
  }
  return out;
}

std::vector<cplx> scq_coefficients(const CatSpec& spec) {
  auto coeffs = alpha_rep_coeffs(spec).coeffs;
  double norm2 = 0.0;
  for (auto& c : coeffs) {
    c *= 0.5;
    norm2 += std::norm(c);
  }
  if (norm2 <= 0.0) throw DomainError("scq_coefficients: all truncated coefficients vanish");
  const double scale = 1.0 / std::sqrt(norm2);
  for (auto& c : coeffs) c *= scale;
  return coeffs;
}

FockVector scs_vector(Parity parity, double beta, int cutoff, double tail_tol) {
  const double norm = scs_normalization(parity, beta);
  if (cutoff < 0) throw DomainError("scs_vector: negative cutoff");
  std::vector<cplx> amps(cutoff + 1, cplx{0.0, 0.0});
  const double log_beta = beta > 0.0 ? std::log(beta) : 0.0;
  double kept = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    const bool even_n = n % 2 == 0;
    if (even_n != (parity == Parity::even)) continue;
    double mag;
    if (beta == 0.0) {
      mag = n == 0 ? 1.0 : 0.0;
    } else {
      mag = std::exp(-0.5 * beta * beta + n * log_beta - 0.5 * log_factorial(n));
    }
    // N (|-beta> +- |beta>): factor (-1)^n +- 1
    amps[n] = 2.0 * norm * mag * (parity == Parity::even ? 1.0 : -1.0);
    kept += std::norm(amps[n]);
  }
  const double tail = std::max(0.0, 1.0 - kept);
  if (tail > tail_tol) throw CutoffError("scs_vector: truncation tail exceeds tolerance", tail);
  return FockVector(std::move(amps), tail).normalized();
}

FockVector scq_vector(const CatSpec& spec, int cutoff, double tail_tol) {
  const auto coeffs = scq_coefficients(spec);
  if (cutoff < 0) cutoff = default_cutoff(spec.radius() * spec.radius(), spec.n);
  std::vector<cplx> amps(cutoff + 1, cplx{0.0, 0.0});
  const cplx shift{0.0, spec.alpha};
  double tail = 0.0;
  for (int k = 0; k <= spec.n; ++k) {
    if (coeffs[k] == cplx{0.0, 0.0}) continue;
    const auto basis = displaced_number_state(k, shift, cutoff, tail_tol);
    tail = std::max(tail, basis.tail());
    for (int j = 0; j <= cutoff; ++j) amps[j] += coeffs[k] * basis[j];
  }
  return FockVector(std::move(amps), tail).normalized();
}

double fidelity_scq(const CatSpec& spec) {
  spec.validate();
  const double norm = scs_normalization(spec.parity, spec.beta);
  const auto w = half_weights(spec);
  double sum = 0.0;
  for (double x : w) sum += 4.0 * x;
  const double r2 = spec.radius() * spec.radius();
  return norm * norm * std::exp(-r2) * sum;
}

cplx scalar_product_scq(int n, double alpha, double beta) {
  if (!(beta > 0.0)) throw DomainError("scalar_product_scq: beta must be > 0");
  const auto even = scq_coefficients({Parity::even, beta, alpha, n});
  const auto odd = scq_coefficients({Parity::odd, beta, alpha, n});
  cplx acc{0.0, 0.0};
  for (int k = 0; k <= n; ++k) acc += std::conj(odd[k]) * even[k];
  return acc;
}

AlphaOptimum max_fidelity_over_alpha(int n, Parity parity, double beta) {
  if (!(beta > 0.0)) throw DomainError("max_fidelity_over_alpha: beta must be > 0");
  auto f = [&](double a) { return fidelity_scq({parity, beta, a, n}); };

  constexpr double kLimit = 2.0;
  constexpr double kStep = 0.01;
  SearchSpace space{{{"alpha", -kLimit, kLimit, DimKind::linear}}, 1000, 0};
  const int points = static_cast<int>(std::lround(2.0 * kLimit / kStep)) + 1;
  const std::array<int, 1> resolution{points};
  const auto best = grid_scan([&](std::span<const double> x) { return f(x[0]); }, space,
                              resolution, 1)
                        .front();

  const double lo = std::max(-kLimit, best.point[0] - kStep);
  const double hi = std::min(kLimit, best.point[0] + kStep);
  auto [a_opt, f_opt] = golden_section_max(f, lo, hi, 1e-5);
  if (best.value > f_opt) {
    a_opt = best.point[0];
    f_opt = best.value;
  }
  // The fidelity is even in alpha; prefer the exact symmetric point when it is as good.
  const double f_zero = f(0.0);
  if (f_zero >= f_opt) return {0.0, f_zero};
  return {std::abs(a_opt), f_opt};
}

Table1Row table1_search(int n, Parity parity, double threshold, double beta_tol) {
  if (n < 1) throw DomainError("table1_search: n must be >= 1");
  constexpr double kBetaMax = 4.0;
  constexpr double kScanStep = 0.02;
  auto fmax = [&](double b) { return max_fidelity_over_alpha(n, parity, b).fidelity; };

  // Largest grid beta that still clears the threshold, scanning down from the bracket top.
  double lo = 0.0;
  double hi = kBetaMax;
  if (fmax(kBetaMax) >= threshold) {
    lo = kBetaMax;
  } else {
    for (double b = kBetaMax - kScanStep; b > 0.0; b -= kScanStep) {
      if (fmax(b) >= threshold) {
        lo = b;
        hi = b + kScanStep;
        break;
      }
      hi = b;
    }
    while (hi - lo > beta_tol) {
      const double mid = 0.5 * (lo + hi);
      if (mid > 0.0 && fmax(mid) >= threshold) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }

  Table1Row row;
  row.n = n;
  row.parity = parity;
  row.beta_max = lo;
  if (lo > 0.0) {
    const auto opt = max_fidelity_over_alpha(n, parity, lo);
    row.alpha = opt.alpha;
    row.fidelity = opt.fidelity;
  }
  return row;
}

}  // namespace catq
