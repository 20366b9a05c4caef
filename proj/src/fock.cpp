#include "catq/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace catq {

namespace {

// |alpha|^p e^{i p arg(alpha)} * exp(log_scale), evaluated in log space.
cplx scaled_power(cplx alpha, int p, double log_scale) {
  if (p == 0) return {std::exp(log_scale), 0.0};
  const double mag = std::abs(alpha);
  if (mag == 0.0) return {0.0, 0.0};
  return std::polar(std::exp(log_scale + p * std::log(mag)), p * std::arg(alpha));
}

void check_tail(double tail, double tol, const char* what) {
  if (tail > tol) {
    std::ostringstream msg;
    msg << what << ": truncation tail " << tail << " exceeds tolerance " << tol;
    throw CutoffError(msg.str(), tail);
  }
}

}  // namespace

double log_factorial(int n) {
  if (n < 0) throw DomainError("log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double laguerre(int k, double a, double x) {
  if (k < 0) throw DomainError("laguerre: negative degree");
  if (k == 0) return 1.0;
  double prev = 1.0;
  double cur = 1.0 + a - x;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0 + a - x) * cur - (j + a) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

int default_cutoff(double mean_photons, int n_extra) {
  const double mu = std::max(0.0, mean_photons);
  return static_cast<int>(std::ceil(mu + 10.0 * std::sqrt(mu + 1.0))) + n_extra;
}

// ---------------------------------------------------------------------------
// FockVector

FockVector::FockVector(std::vector<cplx> amps, double tail) : amps_(std::move(amps)), tail_(tail) {
  if (amps_.empty()) throw DomainError("FockVector: empty amplitude list");
  for (const auto& a : amps_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
      throw DomainError("FockVector: non-finite amplitude");
  }
}

FockVector FockVector::number(int n, int cutoff) {
  if (n < 0 || cutoff < n) throw DomainError("FockVector::number: need 0 <= n <= cutoff");
  std::vector<cplx> amps(static_cast<std::size_t>(cutoff) + 1, cplx{0.0, 0.0});
  amps[n] = 1.0;
  return FockVector(std::move(amps));
}

cplx FockVector::operator[](int n) const {
  if (n < 0 || n > cutoff()) return {0.0, 0.0};
  return amps_[n];
}

double FockVector::norm2() const {
  return std::accumulate(amps_.begin(), amps_.end(), 0.0,
                         [](double acc, cplx a) { return acc + std::norm(a); });
}

bool FockVector::is_normalized(double tol) const { return std::abs(norm2() - 1.0) < tol; }

FockVector FockVector::normalized() const {
  const double n2 = norm2();
  if (n2 <= 0.0) throw DomainError("FockVector::normalized: zero vector");
  const double s = 1.0 / std::sqrt(n2);
  std::vector<cplx> out(amps_);
  for (auto& a : out) a *= s;
  return FockVector(std::move(out), tail_);
}

cplx inner(const FockVector& a, const FockVector& b) {
  const int n = std::min(a.cutoff(), b.cutoff());
  cplx acc{0.0, 0.0};
  for (int j = 0; j <= n; ++j) acc += std::conj(a[j]) * b[j];
  return acc;
}

double fidelity(const FockVector& a, const FockVector& b) {
  return std::norm(inner(a, b)) / (a.norm2() * b.norm2());
}

// ---------------------------------------------------------------------------
// BeamSplitter

BeamSplitter::BeamSplitter(cplx transmission, cplx reflection) : t(transmission), r(reflection) {
  if (std::abs(std::norm(t) + std::norm(r) - 1.0) > 1e-12)
    throw DomainError("BeamSplitter: |t|^2 + |r|^2 must equal 1");
}

BeamSplitter BeamSplitter::from_angles(double theta, double phi_t, double phi_r) {
  BeamSplitter bs;
  bs.t = std::polar(std::cos(theta), phi_t);
  bs.r = std::polar(std::sin(theta), phi_r);
  return bs;
}

BeamSplitter BeamSplitter::balanced() {
  const double h = std::sqrt(0.5);
  return BeamSplitter(cplx{h, 0.0}, cplx{h, 0.0});
}

// ---------------------------------------------------------------------------
// Single-mode states

FockVector coherent_state(cplx alpha, int cutoff, double tail_tol) {
  if (cutoff < 0) throw DomainError("coherent_state: negative cutoff");
  const double half = -0.5 * std::norm(alpha);
  std::vector<cplx> amps(static_cast<std::size_t>(cutoff) + 1);
  double kept = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    amps[n] = scaled_power(alpha, n, half - 0.5 * log_factorial(n));
    kept += std::norm(amps[n]);
  }
  const double tail = std::max(0.0, 1.0 - kept);
  check_tail(tail, tail_tol, "coherent_state");
  return FockVector(std::move(amps), tail);
}

cplx displacement_coeff(int k, int n, cplx alpha) {
  if (k < 0 || n < 0) throw DomainError("displacement_coeff: negative index");
  const double x = std::norm(alpha);
  if (n >= k) {
    const int d = n - k;
    return scaled_power(alpha, d, 0.5 * (log_factorial(k) - log_factorial(n))) *
           laguerre(k, d, x);
  }
  const int d = k - n;
  return scaled_power(-std::conj(alpha), d, 0.5 * (log_factorial(n) - log_factorial(k))) *
         laguerre(n, d, x);
}

FockVector displaced_number_state(int k, cplx alpha, int cutoff, double tail_tol) {
  if (k < 0 || cutoff < k) throw DomainError("displaced_number_state: need 0 <= k <= cutoff");
  const double f = std::exp(-0.5 * std::norm(alpha));
  std::vector<cplx> amps(static_cast<std::size_t>(cutoff) + 1);
  double kept = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    amps[n] = f * displacement_coeff(k, n, alpha);
    kept += std::norm(amps[n]);
  }
  const double tail = std::max(0.0, 1.0 - kept);
  check_tail(tail, tail_tol, "displaced_number_state");
  return FockVector(std::move(amps), tail).normalized();
}

FockVector displace(const FockVector& psi, cplx alpha, int out_cutoff, double tail_tol) {
  if (out_cutoff < 0) out_cutoff = default_cutoff(std::norm(alpha), psi.cutoff());
  const double f = std::exp(-0.5 * std::norm(alpha));
  std::vector<cplx> out(static_cast<std::size_t>(out_cutoff) + 1, cplx{0.0, 0.0});
  for (int q = 0; q <= psi.cutoff(); ++q) {
    const cplx a = psi[q];
    if (a == cplx{0.0, 0.0}) continue;
    for (int p = 0; p <= out_cutoff; ++p) out[p] += f * displacement_coeff(q, p, alpha) * a;
  }
  double kept = 0.0;
  for (const auto& a : out) kept += std::norm(a);
  const double n_in = psi.norm2();
  const double tail = std::max(0.0, n_in - kept);
  check_tail(tail, tail_tol * std::max(1.0, n_in), "displace");
  return FockVector(std::move(out), psi.tail() + tail);
}

ComposedDisplacement compose_displacements(cplx a, cplx b) {
  return {a + b, std::exp(0.5 * (a * std::conj(b) - std::conj(a) * b))};
}

// ---------------------------------------------------------------------------
// MultiModeState

namespace {

std::size_t tensor_size(const std::vector<int>& cutoffs) {
  std::size_t s = 1;
  for (int c : cutoffs) s *= static_cast<std::size_t>(c) + 1;
  return s;
}

void check_modes(const std::vector<int>& cutoffs) {
  if (cutoffs.empty() || static_cast<int>(cutoffs.size()) > MultiModeState::kMaxModes)
    throw DomainError("MultiModeState: between 1 and 4 modes supported");
  for (int c : cutoffs)
    if (c < 0) throw DomainError("MultiModeState: negative cutoff");
}

// Decodes a flat index into occupations (mode 0 slowest).
void decode(std::size_t flat, const std::vector<int>& cutoffs, std::vector<int>& occ) {
  for (int m = static_cast<int>(cutoffs.size()) - 1; m >= 0; --m) {
    const auto dim = static_cast<std::size_t>(cutoffs[m]) + 1;
    occ[m] = static_cast<int>(flat % dim);
    flat /= dim;
  }
}

}  // namespace

MultiModeState::MultiModeState(std::vector<int> cutoffs, std::vector<cplx> amps)
    : cutoffs_(std::move(cutoffs)), amps_(std::move(amps)) {
  check_modes(cutoffs_);
  if (amps_.size() != tensor_size(cutoffs_))
    throw DomainError("MultiModeState: amplitude count does not match cutoffs");
}

MultiModeState MultiModeState::zero(std::vector<int> cutoffs) {
  check_modes(cutoffs);
  const std::size_t size = tensor_size(cutoffs);
  return MultiModeState(std::move(cutoffs), std::vector<cplx>(size, cplx{0.0, 0.0}));
}

MultiModeState MultiModeState::product(std::span<const int> photons, std::span<const int> cutoffs) {
  if (photons.size() != cutoffs.size())
    throw DomainError("MultiModeState::product: photons and cutoffs differ in length");
  for (std::size_t m = 0; m < photons.size(); ++m) {
    if (photons[m] < 0 || photons[m] > cutoffs[m])
      throw DomainError("MultiModeState::product: photon number outside cutoff");
  }
  auto state = zero(std::vector<int>(cutoffs.begin(), cutoffs.end()));
  state.at(photons) = 1.0;
  return state;
}

std::size_t MultiModeState::index(std::span<const int> occupation) const {
  if (occupation.size() != cutoffs_.size())
    throw DomainError("MultiModeState::index: wrong number of modes");
  std::size_t flat = 0;
  for (std::size_t m = 0; m < cutoffs_.size(); ++m) {
    if (occupation[m] < 0 || occupation[m] > cutoffs_[m])
      throw DomainError("MultiModeState::index: occupation outside cutoff");
    flat = flat * (static_cast<std::size_t>(cutoffs_[m]) + 1) + occupation[m];
  }
  return flat;
}

double MultiModeState::norm2() const {
  return std::accumulate(amps_.begin(), amps_.end(), 0.0,
                         [](double acc, cplx a) { return acc + std::norm(a); });
}

MultiModeState MultiModeState::normalized() const {
  const double n2 = norm2();
  if (n2 <= 0.0) throw DomainError("MultiModeState::normalized: zero state");
  std::vector<cplx> out(amps_);
  for (auto& a : out) a /= std::sqrt(n2);
  return MultiModeState(cutoffs_, std::move(out));
}

FockVector MultiModeState::to_fock() const {
  if (modes() != 1) throw DomainError("MultiModeState::to_fock: state has more than one mode");
  return FockVector(amps_);
}

MultiModeState apply_beamsplitter(const MultiModeState& state, int mode_i, int mode_j,
                                  const BeamSplitter& bs, double tail_tol) {
  const int modes = state.modes();
  if (mode_i < 0 || mode_j < 0 || mode_i >= modes || mode_j >= modes || mode_i == mode_j)
    throw DomainError("apply_beamsplitter: invalid mode pair");

  const int ci = state.cutoff(mode_i);
  const int cj = state.cutoff(mode_j);
  const cplx t = bs.t;
  const cplx r = bs.r;
  const cplx rc = -std::conj(bs.r);
  const cplx tc = std::conj(bs.t);

  auto binom = [](int n, int k) {
    return std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
  };
  auto ipow = [](cplx z, int p) {
    cplx acc{1.0, 0.0};
    for (int e = 0; e < p; ++e) acc *= z;
    return acc;
  };

  // out_coeff[p][q][a]: amplitude of |a, p+q-a> produced by |p, q>.
  std::vector<std::vector<std::vector<cplx>>> coeff(ci + 1, std::vector<std::vector<cplx>>(cj + 1));
  for (int p = 0; p <= ci; ++p) {
    for (int q = 0; q <= cj; ++q) {
      const int total = p + q;
      auto& row = coeff[p][q];
      row.assign(total + 1, cplx{0.0, 0.0});
      for (int i1 = 0; i1 <= p; ++i1) {
        const cplx f1 = binom(p, i1) * ipow(t, i1) * ipow(r, p - i1);
        for (int i2 = 0; i2 <= q; ++i2) {
          const cplx f2 = binom(q, i2) * ipow(rc, i2) * ipow(tc, q - i2);
          row[i1 + i2] += f1 * f2;
        }
      }
      const double base = -0.5 * (log_factorial(p) + log_factorial(q));
      for (int a = 0; a <= total; ++a)
        row[a] *= std::exp(base + 0.5 * (log_factorial(a) + log_factorial(total - a)));
    }
  }

  auto out = MultiModeState::zero(state.cutoffs());
  std::vector<int> occ(modes);
  const auto amps = state.amps();
  for (std::size_t flat = 0; flat < amps.size(); ++flat) {
    const cplx amp = amps[flat];
    if (amp == cplx{0.0, 0.0}) continue;
    decode(flat, state.cutoffs(), occ);
    const int p = occ[mode_i];
    const int q = occ[mode_j];
    const int total = p + q;
    const auto& row = coeff[p][q];
    for (int a = std::max(0, total - cj); a <= std::min(total, ci); ++a) {
      occ[mode_i] = a;
      occ[mode_j] = total - a;
      out.at(occ) += row[a] * amp;
    }
  }

  const double n_in = state.norm2();
  const double tail = std::max(0.0, n_in - out.norm2());
  check_tail(tail, tail_tol * std::max(1.0, n_in), "apply_beamsplitter");
  return out;
}

MultiModeState apply_displacement_mode(const MultiModeState& state, int mode, cplx alpha,
                                       int out_cutoff, double tail_tol) {
  if (mode < 0 || mode >= state.modes()) throw DomainError("apply_displacement_mode: bad mode");
  const int in_cutoff = state.cutoff(mode);
  if (out_cutoff < 0) out_cutoff = default_cutoff(std::norm(alpha), in_cutoff);

  const double f = std::exp(-0.5 * std::norm(alpha));
  // matrix[p][q] = <p|D(alpha)|q>
  std::vector<std::vector<cplx>> matrix(out_cutoff + 1, std::vector<cplx>(in_cutoff + 1));
  for (int p = 0; p <= out_cutoff; ++p)
    for (int q = 0; q <= in_cutoff; ++q) matrix[p][q] = f * displacement_coeff(q, p, alpha);

  auto cutoffs = state.cutoffs();
  cutoffs[mode] = out_cutoff;
  auto out = MultiModeState::zero(cutoffs);

  std::vector<int> occ(state.modes());
  const auto amps = state.amps();
  for (std::size_t flat = 0; flat < amps.size(); ++flat) {
    const cplx amp = amps[flat];
    if (amp == cplx{0.0, 0.0}) continue;
    decode(flat, state.cutoffs(), occ);
    const int q = occ[mode];
    for (int p = 0; p <= out_cutoff; ++p) {
      occ[mode] = p;
      out.at(occ) += matrix[p][q] * amp;
    }
  }

  const double n_in = state.norm2();
  const double tail = std::max(0.0, n_in - out.norm2());
  check_tail(tail, tail_tol * std::max(1.0, n_in), "apply_displacement_mode");
  return out;
}

Projection project_mode(const MultiModeState& state, int mode, int k) {
  const int modes = state.modes();
  if (modes < 2) throw DomainError("project_mode: need at least two modes");
  if (mode < 0 || mode >= modes) throw DomainError("project_mode: bad mode");
  if (k < 0 || k > state.cutoff(mode)) throw DomainError("project_mode: k outside cutoff");

  std::vector<int> reduced_cutoffs;
  for (int m = 0; m < modes; ++m)
    if (m != mode) reduced_cutoffs.push_back(state.cutoff(m));
  auto reduced = MultiModeState::zero(reduced_cutoffs);

  std::vector<int> occ(modes);
  std::vector<int> rocc(modes - 1);
  const auto amps = state.amps();
  for (std::size_t flat = 0; flat < amps.size(); ++flat) {
    decode(flat, state.cutoffs(), occ);
    if (occ[mode] != k) continue;
    for (int m = 0, j = 0; m < modes; ++m)
      if (m != mode) rocc[j++] = occ[m];
    reduced.at(rocc) = amps[flat];
  }

  Projection result;
  result.probability = reduced.norm2();
  result.possible = result.probability > kImpossibleProbability;
  result.state = result.possible ? reduced.normalized() : MultiModeState::zero(reduced_cutoffs);
  return result;
}

}  // namespace catq
