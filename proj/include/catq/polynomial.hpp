#pragma once

#include <span>
#include <vector>

#include "catq/fock.hpp"

namespace catq {

// Roots of sum_k coeffs[k] x^k (ascending order) from the eigenvalues of the balanced
// companion matrix, followed by a Newton polish on the original coefficients.
// Vanishing low-order coefficients are deflated into exact zero roots.
// Throws DegreeDeficient when |coeffs.back()| <= leading_tol.
std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs, double leading_tol = 0.0);

// Ascending coefficients of prod_f (u_f x + v_f).
std::vector<cplx> expand_linear_factors(std::span<const cplx> u, std::span<const cplx> v);

// Ascending coefficients of the monic prod_k (x - roots_k).
std::vector<cplx> monic_from_roots(std::span<const cplx> roots);

cplx evaluate_polynomial(std::span<const cplx> coeffs, cplx x);

}  // namespace catq
