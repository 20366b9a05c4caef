#include "catq/polynomial.hpp"

#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>

namespace catq {

cplx evaluate_polynomial(std::span<const cplx> coeffs, cplx x) {
  cplx acc{0.0, 0.0};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

namespace {

cplx evaluate_derivative(std::span<const cplx> coeffs, cplx x) {
  cplx acc{0.0, 0.0};
  for (std::size_t k = coeffs.size() - 1; k >= 1; --k) acc = acc * x + static_cast<double>(k) * coeffs[k];
  return acc;
}

cplx polish(std::span<const cplx> coeffs, cplx root) {
  cplx best = root;
  double best_res = std::abs(evaluate_polynomial(coeffs, root));
  for (int iter = 0; iter < 3 && best_res > 0.0; ++iter) {
    const cplx d = evaluate_derivative(coeffs, best);
    if (std::abs(d) == 0.0) break;
    const cplx next = best - evaluate_polynomial(coeffs, best) / d;
    const double res = std::abs(evaluate_polynomial(coeffs, next));
    if (!(res < best_res)) break;
    best = next;
    best_res = res;
  }
  return best;
}

}  // namespace

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs, double leading_tol) {
  if (coeffs.empty() || std::abs(coeffs.back()) <= leading_tol || coeffs.back() == cplx{0.0, 0.0})
    throw DegreeDeficient("polynomial_roots: leading coefficient vanishes");

  std::size_t zeros = 0;
  while (zeros + 1 < coeffs.size() && coeffs[zeros] == cplx{0.0, 0.0}) ++zeros;

  std::vector<cplx> roots(zeros, cplx{0.0, 0.0});
  const auto reduced = coeffs.subspan(zeros);
  const auto degree = static_cast<Eigen::Index>(reduced.size()) - 1;
  if (degree == 1) {
    roots.push_back(-reduced[0] / reduced[1]);
  } else if (degree > 1) {
    Eigen::VectorXcd poly(degree + 1);
    for (Eigen::Index k = 0; k <= degree; ++k) poly[k] = reduced[k];
    Eigen::PolynomialSolver<cplx, Eigen::Dynamic> solver(poly);
    for (Eigen::Index k = 0; k < degree; ++k) roots.push_back(polish(reduced, solver.roots()[k]));
  }
  return roots;
}

std::vector<cplx> expand_linear_factors(std::span<const cplx> u, std::span<const cplx> v) {
  std::vector<cplx> poly{cplx{1.0, 0.0}};
  const std::size_t count = std::min(u.size(), v.size());
  for (std::size_t f = 0; f < count; ++f) {
    std::vector<cplx> next(poly.size() + 1, cplx{0.0, 0.0});
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += v[f] * poly[k];
      next[k + 1] += u[f] * poly[k];
    }
    poly = std::move(next);
  }
  return poly;
}

std::vector<cplx> monic_from_roots(std::span<const cplx> roots) {
  std::vector<cplx> u(roots.size(), cplx{1.0, 0.0});
  std::vector<cplx> v(roots.size());
  for (std::size_t k = 0; k < roots.size(); ++k) v[k] = -roots[k];
  return expand_linear_factors(u, v);
}

}  // namespace catq
