#pragma once

// Wigner functions of pure single-mode states on a rectangular (x, p) grid.
// Convention: hbar = 1, a = (x + i p)/sqrt(2), integral of W over dx dp is 1, W_vacuum(0, 0) = 1/pi.

#include <iosfwd>
#include <vector>

#include "catq/fock.hpp"

namespace catq {

struct GridSpec {
  double x_min = -6.0;
  double x_max = 6.0;
  double p_min = -6.0;
  double p_max = 6.0;
  int resolution = 256;  // points per axis, ends included

  // Symmetric square grid [-L, L]^2 with L = max(6, radius + 4).
  static GridSpec covering(double radius, int resolution = 256);
  double x(int i) const;
  double p(int j) const;
  bool operator==(const GridSpec&) const = default;
};

struct WignerGrid {
  GridSpec grid;
  std::vector<double> values;  // values[i * resolution + j] = W(x_i, p_j)
  double integral = 0.0;       // trapezoid estimate of the integral of W
  bool normalization_ok = false;  // |integral - 1| < 1e-4

  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.resolution + j]; }
};

WignerGrid wigner_of(const FockVector& state, const GridSpec& grid = {});

// Single point, same kernel as wigner_of.
double wigner_at(const FockVector& state, double x, double p);

// Trapezoid integral of f(W1, W2) over the shared grid.
double wigner_fidelity(const WignerGrid& a, const WignerGrid& b);
double wigner_purity(const WignerGrid& w);

struct Negativity {
  double min_value = 0.0;
  double negative_volume = 0.0;  // integral of max(-W, 0)
};
Negativity negativity_summary(const WignerGrid& w);

// "x,p,W" rows, one per grid point.
void write_wigner_csv(std::ostream& out, const WignerGrid& w);

}  // namespace catq
