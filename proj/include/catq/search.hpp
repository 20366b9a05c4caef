#pragma once

// Deterministic grid scans and derivative-free local refinement. All objectives are
// maximized; an objective that throws scores -infinity.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace catq {

enum class DimKind { linear, angular };

struct Dim {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
  DimKind kind = DimKind::linear;
};

struct SearchSpace {
  std::vector<Dim> dims;
  std::size_t budget = 20000;  // max objective evaluations per refine call
  std::uint64_t seed = 0;

  void validate() const;
  std::size_t size() const { return dims.size(); }
  // Clamps linear coordinates into [lower, upper] and wraps angular ones into [lower, upper).
  std::vector<double> map_into(std::span<const double> x) const;
};

using Objective = std::function<double(std::span<const double>)>;

struct Candidate {
  std::vector<double> point;
  double value;
};

// Evaluates the objective on a tensor grid (linear dims include both ends, angular dims omit the
// upper end) and returns the top_k cells, best first; ties keep row-major order.
std::vector<Candidate> grid_scan(const Objective& objective, const SearchSpace& space,
                                 std::span<const int> resolution, std::size_t top_k = 1);

struct RefineResult {
  std::vector<double> point;
  double value = 0.0;
  std::size_t evaluations = 0;
  bool budget_exhausted = false;
};

// Nelder-Mead on the box until the simplex diameter (relative to each dim's range) drops below
// tol, restarting once from the best vertex. initial_step is the relative simplex edge.
RefineResult refine(const Objective& objective, std::span<const double> start,
                    const SearchSpace& space, double tol, double initial_step = 0.1);

// Golden-section maximization of a 1-D function on [lo, hi].
std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double lo,
                                             double hi, double tol);

// Counter-based generator: value i of stream s is a pure function of (seed, s, i).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace catq
