#pragma once

// Even/odd cat states N(|-beta> +- |beta>), their expansion over displaced number states
// |k, i alpha>, and the (n+1)-term truncations ("cat qudits") built from that expansion.

#include <string_view>
#include <vector>

#include "catq/fock.hpp"

namespace catq {

enum class Parity { even, odd };

std::string_view to_string(Parity p);
Parity parse_parity(std::string_view text);

// One cat qudit: parity, real cat size beta, basis displacement i*alpha (alpha real), and
// truncation order n (dimension n + 1).
struct CatSpec {
  Parity parity = Parity::even;
  double beta = 1.0;
  double alpha = 0.0;
  int n = 1;

  // sqrt(alpha^2 + beta^2)
  double radius() const;
  // arctan(alpha / beta)
  double phase() const;
  // Throws DomainError for odd parity at beta <= 0, negative beta, or n < 0.
  void validate() const;
};

// Expansion coefficients a_k for k = 0..n, before the global N exp(-radius^2/2) factor.
struct AlphaRepCoeffs {
  std::vector<cplx> coeffs;
};

double scs_normalization(Parity parity, double beta);

// Polar form 2 (i R)^k / sqrt(k!) cos|sin(alpha beta + k(phi + pi/2)).
AlphaRepCoeffs alpha_rep_coeffs(const CatSpec& spec);

// Direct form for an arbitrary complex basis displacement:
// (exp(-d^* beta)(-d - beta)^k +- exp(d^* beta)(-d + beta)^k) / sqrt(k!).
// For d = i alpha the odd branch equals i times the polar form.
AlphaRepCoeffs alpha_rep_coeffs_general(Parity parity, cplx displacement, double beta, int n);

// Coefficients c_k = N a_k / 2 of the normalized qudit in the displaced basis |k, i alpha>.
std::vector<cplx> scq_coefficients(const CatSpec& spec);

FockVector scs_vector(Parity parity, double beta, int cutoff, double tail_tol = kDefaultTailTol);

// Cat qudit assembled in the Fock basis. cutoff < 0 selects default_cutoff.
FockVector scq_vector(const CatSpec& spec, int cutoff = -1, double tail_tol = kDefaultTailTol);

// |<cat|qudit>|^2 in closed form: N^2 exp(-R^2) sum_{k<=n} |a_k|^2.
double fidelity_scq(const CatSpec& spec);

// <odd qudit | even qudit> for the same (n, alpha, beta).
cplx scalar_product_scq(int n, double alpha, double beta);

struct AlphaOptimum {
  double alpha = 0.0;  // reported as |alpha|; the fidelity is even in alpha
  double fidelity = 0.0;
};

// Max over alpha in [-2, 2]: grid step 0.01 followed by golden section to 1e-5.
AlphaOptimum max_fidelity_over_alpha(int n, Parity parity, double beta);

struct Table1Row {
  int n = 0;
  Parity parity = Parity::even;
  double alpha = 0.0;
  double beta_max = 0.0;
  double fidelity = 0.0;  // max-over-alpha fidelity at beta_max
};

// Largest beta in (0, 4] whose max-over-alpha fidelity is at least `threshold`,
// bisected to `beta_tol`.
Table1Row table1_search(int n, Parity parity, double threshold = 0.99, double beta_tol = 1e-4);

}  // namespace catq
