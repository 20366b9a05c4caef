#include "catq/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

namespace catq {

namespace {

// W(a) = (1/pi) sum_{m,n} psi_m^* psi_n (-1)^n <m|D(2a)|n>, evaluated per diagonal offset d with
// the Laguerre sequence L_j^(d)(|2a|^2), j = 0..N-d.
class Kernel {
 public:
  explicit Kernel(const FockVector& state) {
    const auto amps = state.amps();
    int top = static_cast<int>(amps.size()) - 1;
    while (top > 0 && std::abs(amps[top]) < 1e-16) --top;
    psi_.assign(amps.begin(), amps.begin() + top + 1);
    const int n = top + 1;
    lf_.resize(n);
    for (int j = 0; j < n; ++j) lf_[j] = log_factorial(j);
    lag_.resize(n);
  }

  double operator()(double x, double p) {
    const cplx beta = std::numbers::sqrt2 * cplx{x, p};
    const double r2 = std::norm(beta);
    const double log_r = r2 > 0.0 ? 0.5 * std::log(r2) : 0.0;
    const cplx unit = r2 > 0.0 ? beta / std::sqrt(r2) : cplx{1.0, 0.0};
    const int n = static_cast<int>(psi_.size());

    double total = 0.0;
    cplx phase{1.0, 0.0};  // unit^d
    for (int d = 0; d < n; ++d) {
      const int len = n - d;
      lag_[0] = 1.0;
      if (len > 1) lag_[1] = 1.0 + d - r2;
      for (int j = 1; j + 1 < len; ++j)
        lag_[j + 1] = ((2.0 * j + 1.0 + d - r2) * lag_[j] - (j + d) * lag_[j - 1]) / (j + 1.0);

      const double dpow = d == 0 ? 0.0 : d * log_r;
      if (d > 0 && r2 == 0.0) break;  // every off-diagonal kernel vanishes at the origin
      cplx acc_lower{0.0, 0.0};        // m = j + d, n = j
      cplx acc_upper{0.0, 0.0};        // m = j, n = j + d
      for (int j = 0; j < len; ++j) {
        const double mag =
            std::exp(-0.5 * r2 + dpow + 0.5 * (lf_[j] - lf_[j + d])) * lag_[j];
        const double sign_j = (j % 2 == 0) ? 1.0 : -1.0;
        acc_lower += sign_j * mag * std::conj(psi_[j + d]) * psi_[j];
        if (d > 0) {
          const double sign_n = ((j + d) % 2 == 0) ? 1.0 : -1.0;
          acc_upper += sign_n * mag * std::conj(psi_[j]) * psi_[j + d];
        }
      }
      // <j+d|D(b)|j> carries b^d; <j|D(b)|j+d> carries (-b^*)^d.
      const cplx up_phase = (d % 2 == 0 ? 1.0 : -1.0) * std::conj(phase);
      total += std::real(phase * acc_lower + up_phase * acc_upper);
      phase *= unit;
    }
    return total / std::numbers::pi;
  }

 private:
  std::vector<cplx> psi_;
  std::vector<double> lf_;
  std::vector<double> lag_;
};

std::vector<double> trapezoid_weights(int n, double h) {
  std::vector<double> w(n, h);
  if (n > 1) {
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  return w;
}

double weighted_sum(const GridSpec& g, const std::vector<double>& f) {
  const double hx = g.resolution > 1 ? (g.x_max - g.x_min) / (g.resolution - 1) : 0.0;
  const double hp = g.resolution > 1 ? (g.p_max - g.p_min) / (g.resolution - 1) : 0.0;
  const auto wx = trapezoid_weights(g.resolution, hx);
  const auto wp = trapezoid_weights(g.resolution, hp);
  double sum = 0.0;
  for (int i = 0; i < g.resolution; ++i) {
    double row = 0.0;
    for (int j = 0; j < g.resolution; ++j) row += wp[j] * f[static_cast<std::size_t>(i) * g.resolution + j];
    sum += wx[i] * row;
  }
  return sum;
}

}  // namespace

GridSpec GridSpec::covering(double radius, int resolution) {
  const double half = std::max(6.0, radius + 4.0);
  return {-half, half, -half, half, resolution};
}

double GridSpec::x(int i) const {
  return resolution > 1 ? x_min + (x_max - x_min) * i / (resolution - 1) : 0.5 * (x_min + x_max);
}

double GridSpec::p(int j) const {
  return resolution > 1 ? p_min + (p_max - p_min) * j / (resolution - 1) : 0.5 * (p_min + p_max);
}

double wigner_at(const FockVector& state, double x, double p) { return Kernel(state)(x, p); }

WignerGrid wigner_of(const FockVector& state, const GridSpec& grid) {
  if (grid.resolution < 2) throw DomainError("wigner_of: need at least two points per axis");
  if (!(grid.x_min < grid.x_max) || !(grid.p_min < grid.p_max))
    throw DomainError("wigner_of: empty grid");
  WignerGrid out;
  out.grid = grid;
  out.values.assign(static_cast<std::size_t>(grid.resolution) * grid.resolution, 0.0);

  const int threads =
      std::clamp(static_cast<int>(std::thread::hardware_concurrency()), 1, grid.resolution);
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      Kernel kernel(state);
      for (int i = t; i < grid.resolution; i += threads)
        for (int j = 0; j < grid.resolution; ++j)
          out.values[static_cast<std::size_t>(i) * grid.resolution + j] =
              kernel(grid.x(i), grid.p(j));
    });
  }
  for (auto& th : pool) th.join();

  out.integral = weighted_sum(grid, out.values);
  out.normalization_ok = std::abs(out.integral - 1.0) < 1e-4;
  return out;
}

double wigner_fidelity(const WignerGrid& a, const WignerGrid& b) {
  if (!(a.grid == b.grid)) throw DomainError("wigner_fidelity: grids differ");
  std::vector<double> prod(a.values.size());
  for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a.values[i] * b.values[i];
  return 2.0 * std::numbers::pi * weighted_sum(a.grid, prod);
}

double wigner_purity(const WignerGrid& w) { return wigner_fidelity(w, w); }

Negativity negativity_summary(const WignerGrid& w) {
  Negativity out;
  out.min_value = *std::min_element(w.values.begin(), w.values.end());
  std::vector<double> neg(w.values.size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = std::max(-w.values[i], 0.0);
  out.negative_volume = weighted_sum(w.grid, neg);
  return out;
}

void write_wigner_csv(std::ostream& out, const WignerGrid& w) {
  out.precision(10);
  for (int i = 0; i < w.grid.resolution; ++i)
    for (int j = 0; j < w.grid.resolution; ++j)
      out << w.grid.x(i) << ',' << w.grid.p(j) << ',' << w.at(i, j) << '\n';
}

}  // namespace catq
