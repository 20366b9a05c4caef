#pragma once

// Fock-state cascade: inputs |k_0>|k_1>...|k_m>, beam splitters BS_0j (j = 1..m, in order),
// displacements D_j(alpha_j) on the auxiliary modes, vacuum post-selection on every auxiliary
// mode, and a final D_0(i alpha) on the output mode.
//
// Each input photon is tracked as a linear form over the creation operators. After the vacuum
// projections it reduces to u a_0^+ + v, so the output is D_0(i alpha) prod_f (u_f a^+ + v_f)|0>.

#include <cstdint>
#include <vector>

#include "catq/cat_states.hpp"
#include "catq/fock.hpp"

namespace catq {

struct CascadeConfig {
  std::vector<int> photons;        // k_0 .. k_m
  std::vector<BeamSplitter> bs;    // BS_01 .. BS_0m
  std::vector<cplx> disp;          // alpha_1 .. alpha_m, as in D_j(alpha_j)
  double final_alpha = 0.0;        // output displacement D_0(i final_alpha)

  int m() const { return static_cast<int>(bs.size()); }
  int n() const;
  // Throws DomainError on inconsistent sizes, negative photon numbers, or n < 1.
  void validate() const;
};

struct LinearForm {
  cplx u;  // coefficient of a_0^+
  cplx v;  // constant left by the auxiliary vacuum projections
  int source = 0;
};

struct FactorRoots {
  std::vector<cplx> betas;  // one per photon: u (a^+ - beta)
  std::vector<int> source;  // input mode of each photon
  cplx leading;             // N with output = N D(i alpha) prod (a^+ - beta_k)|0>
  double probability = 0.0;
};

// One linear form per input photon, in input-mode order.
std::vector<LinearForm> cascade_linear_forms(const CascadeConfig& config);

// Throws UntransmittedPhoton when some u vanishes.
FactorRoots cascade_factors(const CascadeConfig& config);

struct CascadeOutput {
  FockVector state;
  double probability = 0.0;
};

// Output before D_0(i alpha): normalized Fock amplitudes 0..n, plus the no-click probability.
CascadeOutput cascade_undisplaced(const CascadeConfig& config);

// cutoff < 0 picks a cutoff from the mean photon number of the displaced output.
CascadeOutput cascade_output_state(const CascadeConfig& config, int cutoff = -1,
                                   double tail_tol = kDefaultTailTol);

// Dense multimode simulation of the same circuit (m <= 3). aux_cutoff < 0 picks per-mode
// cutoffs from the displacement sizes.
CascadeOutput oracle_cascade(const CascadeConfig& config, int output_cutoff, int aux_cutoff = -1,
                             double tail_tol = kDefaultTailTol);

// |<beta_par| D(i alpha) |psi>|^2 for psi given by Fock amplitudes, without a cutoff.
double cat_overlap_fidelity(std::span<const cplx> amps, double alpha, Parity parity, double beta);

// Roots gamma_k of sum_k c_k sqrt(n!) / (c_n sqrt(k!)) gamma^k for the qudit coefficients c_k.
// Throws DegreeDeficient when |c_n| < 1e-12.
std::vector<cplx> target_roots(const CatSpec& spec);

// D(i alpha) prod_k (a^+ - roots_k)|0>, normalized.
FockVector state_from_roots(std::span<const cplx> roots, double alpha, int cutoff,
                            double tail_tol = kDefaultTailTol);

struct FitOptions {
  int restarts = 64;
  std::uint64_t seed = 0;
  std::size_t budget = 60000;  // objective evaluations per restart
  double tol = 1e-7;
  int threads = 0;  // 0 selects hardware concurrency
};

struct FitResult {
  CascadeConfig config;
  double fidelity = 0.0;
  double probability = 0.0;
  int best_restart = -1;
  std::size_t evaluations = 0;
  std::vector<double> restart_fidelities;
};

// Searches beam splitters, auxiliary displacements and the final displacement for the best
// fidelity with the cat of (target.parity, target.beta). Even restarts start from a config whose
// factor roots are pulled toward target_roots(target); odd restarts start uniformly at random.
// Never throws on poor convergence: the achieved fidelity is reported.
FitResult fit_cascade(const CatSpec& target, int m, const std::vector<int>& photons,
                      const FitOptions& options = {});

}  // namespace catq
