#pragma once

// Truncated single- and multi-mode Fock space primitives.
//
// Conventions used throughout the library:
//   D(alpha) = exp(alpha a^+ - alpha^* a)
//   |k, alpha> = D(alpha)|k> = F(alpha) sum_n c_kn(alpha) |n>,  F(alpha) = exp(-|alpha|^2 / 2)
//   beam splitter on modes (i, j):  a_i^+ -> t a_i^+ + r a_j^+,  a_j^+ -> -r^* a_i^+ + t^* a_j^+

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "catq/errors.hpp"

namespace catq {

using cplx = std::complex<double>;

inline constexpr double kDefaultTailTol = 1e-9;
inline constexpr double kImpossibleProbability = 1e-14;

double log_factorial(int n);

// Generalized Laguerre polynomial L_k^{(a)}(x) by upward recurrence in k.
double laguerre(int k, double a, double x);

// Cutoff large enough for a state of mean photon number `mean_photons`:
// ceil(mu + 10 sqrt(mu + 1)) + n_extra.
int default_cutoff(double mean_photons, int n_extra = 0);

class FockVector {
 public:
  FockVector() = default;
  explicit FockVector(std::vector<cplx> amps, double tail = 0.0);

  static FockVector number(int n, int cutoff);
  static FockVector vacuum(int cutoff) { return number(0, cutoff); }

  int cutoff() const { return static_cast<int>(amps_.size()) - 1; }
  std::size_t size() const { return amps_.size(); }
  std::span<const cplx> amps() const { return amps_; }
  // Zero beyond the cutoff.
  cplx operator[](int n) const;

  double norm2() const;
  bool is_normalized(double tol = 1e-10) const;
  FockVector normalized() const;

  // Probability weight that the producing operation could not represent below the cutoff.
  double tail() const { return tail_; }

 private:
  std::vector<cplx> amps_;
  double tail_ = 0.0;
};

// <a|b>; vectors of different cutoffs are zero-padded.
cplx inner(const FockVector& a, const FockVector& b);
// |<a|b>|^2 / (<a|a><b|b>)
double fidelity(const FockVector& a, const FockVector& b);

struct BeamSplitter {
  cplx t{1.0, 0.0};
  cplx r{0.0, 0.0};

  BeamSplitter() = default;
  // Throws DomainError unless |t|^2 + |r|^2 = 1 within 1e-12.
  BeamSplitter(cplx transmission, cplx reflection);

  // t = cos(theta) e^{i phi_t}, r = sin(theta) e^{i phi_r}
  static BeamSplitter from_angles(double theta, double phi_t, double phi_r);
  static BeamSplitter balanced();
};

FockVector coherent_state(cplx alpha, int cutoff, double tail_tol = kDefaultTailTol);

// c_kn(alpha) with the F(alpha) factor removed, so that <n|D(alpha)|k> = F(alpha) c_kn(alpha).
cplx displacement_coeff(int k, int n, cplx alpha);

FockVector displaced_number_state(int k, cplx alpha, int cutoff,
                                  double tail_tol = kDefaultTailTol);

// D(psi_in) truncated to out_cutoff; out_cutoff < 0 selects default_cutoff.
FockVector displace(const FockVector& psi, cplx alpha, int out_cutoff = -1,
                    double tail_tol = kDefaultTailTol);

struct ComposedDisplacement {
  cplx amplitude;
  cplx phase;  // D(a) D(b) = phase * D(a + b)
};
ComposedDisplacement compose_displacements(cplx a, cplx b);

// Dense amplitude tensor over at most four truncated modes; mode 0 is the slowest index.
class MultiModeState {
 public:
  static constexpr int kMaxModes = 4;

  MultiModeState() = default;
  MultiModeState(std::vector<int> cutoffs, std::vector<cplx> amps);

  static MultiModeState product(std::span<const int> photons, std::span<const int> cutoffs);
  static MultiModeState zero(std::vector<int> cutoffs);

  int modes() const { return static_cast<int>(cutoffs_.size()); }
  int cutoff(int mode) const { return cutoffs_.at(mode); }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  std::span<const cplx> amps() const { return amps_; }

  std::size_t index(std::span<const int> occupation) const;
  cplx at(std::span<const int> occupation) const { return amps_[index(occupation)]; }
  cplx& at(std::span<const int> occupation) { return amps_[index(occupation)]; }

  double norm2() const;
  MultiModeState normalized() const;
  // Single-mode state as a FockVector.
  FockVector to_fock() const;

 private:
  std::vector<int> cutoffs_;
  std::vector<cplx> amps_;
};

MultiModeState apply_beamsplitter(const MultiModeState& state, int mode_i, int mode_j,
                                  const BeamSplitter& bs, double tail_tol = kDefaultTailTol);

MultiModeState apply_displacement_mode(const MultiModeState& state, int mode, cplx alpha,
                                       int out_cutoff = -1, double tail_tol = kDefaultTailTol);

struct Projection {
  MultiModeState state;  // one mode fewer; renormalized when possible
  double probability = 0.0;
  bool possible = false;  // probability above kImpossibleProbability
};

Projection project_mode(const MultiModeState& state, int mode, int k);

}  // namespace catq
