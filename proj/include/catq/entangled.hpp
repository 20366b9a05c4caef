#pragma once

// Heralded generation from the two-mode input sum_m d_m |m>_1 |n - m>_2: displace mode 1 by
// i*alpha and mode 2 by alpha', count k photons in mode 2. Also the factorization of that input
// into n beam-splitter factors prod_m (t_m a_1^+ + r_m a_2^+)|0, 0>.

#include <array>
#include <vector>

#include "catq/cat_states.hpp"
#include "catq/fock.hpp"

namespace catq {

inline constexpr double kDegenerateThreshold = 1e-12;

struct EntangledInput {
  int n = 0;
  std::vector<cplx> d;  // n + 1 coefficients, normalized

  // Throws DomainError unless d has n + 1 entries with unit norm (1e-10).
  void validate() const;
};

struct HeraldedResult {
  FockVector state;             // mode 1 after D(i alpha); normalized when possible
  std::vector<cplx> displaced;  // coefficients over |m, i alpha>, normalized when possible
  double norm_factor = 0.0;     // (sum_m |d_m c_{n-m,k}(alpha')|^2)^{-1/2}
  double probability = 0.0;
  bool possible = false;
};

struct BSDecomposition {
  std::vector<cplx> roots;
  std::vector<BeamSplitter> bs_list;
  cplx leading;  // d_n / sqrt(n!)
};

// d_m proportional to (a_m / 2) / c_{n-m,k}(alpha'). Throws DegenerateDisplacement naming the
// first m whose |c_{n-m,k}(alpha')| falls below kDegenerateThreshold.
EntangledInput dm_coefficients(const CatSpec& spec, int k, cplx alpha_prime);

// cutoff < 0 selects default_cutoff for the displaced mode.
HeraldedResult heralded_state(const EntangledInput& input, double alpha, cplx alpha_prime, int k,
                              int cutoff = -1, double tail_tol = kDefaultTailTol);

// Probability of outcome k when the input is tuned to the cat qudit `spec`.
double success_probability_scq(const CatSpec& spec, int k, cplx alpha_prime);

// Same probability as exp(-|alpha'|^2) N'^2 / N_n^2 with N' = (sum_m |a_m/2|^2 / |c|^2)^{-1/2}.
double success_probability_closed_form(const CatSpec& spec, int k, cplx alpha_prime);

struct ProbabilityOptimum {
  double alpha_prime = 0.0;
  double probability = 0.0;
};

// Max over real alpha' in (0, 4]: grid step 0.01, then golden section to 1e-6.
ProbabilityOptimum maximize_probability_over_alpha_prime(const CatSpec& spec, int k);

// Roots of f(z) = sum_m d_m z^m / sqrt(m!(n-m)!), mapped to t = 1/sqrt(1+|z|^2), r = -z t.
// Throws DegreeDeficient when |d_n| <= kDegenerateThreshold.
BSDecomposition bs_decomposition(const EntangledInput& input);

// Expands prod_m (t_m a_1^+ + r_m a_2^+)|0, 0> back into normalized d coefficients.
EntangledInput reconstruct_input(const BSDecomposition& decomp);

// |<a|b>|^2 for two inputs of equal n.
double input_fidelity(const EntangledInput& a, const EntangledInput& b);

// Brute-force two-mode simulation of the same heralding step.
HeraldedResult oracle_scheme_entangled(const EntangledInput& input, double alpha, cplx alpha_prime,
                                       int k, std::array<int, 2> cutoffs,
                                       double tail_tol = kDefaultTailTol);

}  // namespace catq
