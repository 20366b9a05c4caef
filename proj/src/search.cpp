#include "catq/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace catq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double safe_eval(const Objective& objective, std::span<const double> x) {
  try {
    const double v = objective(x);
    return std::isnan(v) ? kNegInf : v;
  } catch (const std::exception&) {
    return kNegInf;
  }
}

}  // namespace

void SearchSpace::validate() const {
  if (dims.empty()) throw std::invalid_argument("SearchSpace: no dimensions");
  for (const auto& d : dims) {
    if (!(d.lower < d.upper)) throw std::invalid_argument("SearchSpace: lower >= upper for " + d.name);
  }
  if (budget == 0) throw std::invalid_argument("SearchSpace: zero budget");
}

std::vector<double> SearchSpace::map_into(std::span<const double> x) const {
  std::vector<double> out(x.begin(), x.end());
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const auto& d = dims[i];
    if (d.kind == DimKind::angular) {
      const double period = d.upper - d.lower;
      out[i] = d.lower + std::fmod(std::fmod(out[i] - d.lower, period) + period, period);
      if (out[i] >= d.upper) out[i] = d.lower;
    } else {
      out[i] = std::clamp(out[i], d.lower, d.upper);
    }
  }
  return out;
}

std::vector<Candidate> grid_scan(const Objective& objective, const SearchSpace& space,
                                 std::span<const int> resolution, std::size_t top_k) {
  space.validate();
  const std::size_t n = space.size();
  if (resolution.size() != n) throw std::invalid_argument("grid_scan: resolution rank mismatch");
  std::size_t cells = 1;
  for (int r : resolution) {
    if (r < 1) throw std::invalid_argument("grid_scan: resolution must be positive");
    cells *= static_cast<std::size_t>(r);
  }

  auto coordinate = [&](std::size_t dim, int idx) {
    const auto& d = space.dims[dim];
    const int r = resolution[dim];
    if (r == 1) return 0.5 * (d.lower + d.upper);
    const double span = d.upper - d.lower;
    return d.kind == DimKind::angular ? d.lower + span * idx / r : d.lower + span * idx / (r - 1);
  };

  std::vector<Candidate> all;
  all.reserve(cells);
  std::vector<int> idx(n, 0);
  std::vector<double> point(n);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    std::size_t rest = cell;
    for (std::size_t dd = n; dd-- > 0;) {
      idx[dd] = static_cast<int>(rest % resolution[dd]);
      rest /= resolution[dd];
    }
    for (std::size_t dd = 0; dd < n; ++dd) point[dd] = coordinate(dd, idx[dd]);
    all.push_back({point, safe_eval(objective, point)});
  }

  std::stable_sort(all.begin(), all.end(),
                   [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
  all.resize(std::min(top_k, all.size()));
  return all;
}

RefineResult refine(const Objective& objective, std::span<const double> start,
                    const SearchSpace& space, double tol, double initial_step) {
  space.validate();
  const std::size_t n = space.size();
  if (start.size() != n) throw std::invalid_argument("refine: start has wrong dimension");

  RefineResult result;
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    const auto mapped = space.map_into(x);
    return safe_eval(objective, mapped);
  };

  std::vector<double> range(n);
  for (std::size_t i = 0; i < n; ++i) range[i] = space.dims[i].upper - space.dims[i].lower;

  // Adaptive coefficients for higher dimensions.
  const double dn = static_cast<double>(n);
  const double c_reflect = 1.0;
  const double c_expand = 1.0 + 2.0 / dn;
  const double c_contract = 0.75 - 0.5 / dn;
  const double c_shrink = 1.0 - 1.0 / dn;

  std::vector<double> best_x = space.map_into(start);
  double best_f = eval(best_x);

  for (int pass = 0; pass < 2; ++pass) {
    // Vertices are stored with their (maximized) values.
    std::vector<std::vector<double>> xs(n + 1, best_x);
    std::vector<double> fs(n + 1, best_f);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i + 1][i] += initial_step * range[i];
      fs[i + 1] = eval(xs[i + 1]);
    }

    std::vector<std::size_t> order(n + 1);
    std::vector<double> centroid(n), trial(n), trial2(n);
    while (true) {
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return fs[a] > fs[b]; });
      const std::size_t ib = order.front();
      const std::size_t iw = order.back();
      const std::size_t is = order[n - 1];

      double diameter = 0.0;
      for (std::size_t v = 0; v <= n; ++v)
        for (std::size_t i = 0; i < n; ++i)
          diameter = std::max(diameter, std::abs(xs[v][i] - xs[ib][i]) / range[i]);
      if (diameter < tol) break;
      if (result.evaluations >= space.budget) {
        result.budget_exhausted = true;
        break;
      }

      std::fill(centroid.begin(), centroid.end(), 0.0);
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == iw) continue;
        for (std::size_t i = 0; i < n; ++i) centroid[i] += xs[v][i] / dn;
      }
      for (std::size_t i = 0; i < n; ++i)
        trial[i] = centroid[i] + c_reflect * (centroid[i] - xs[iw][i]);
      const double fr = eval(trial);

      if (fr > fs[ib]) {
        for (std::size_t i = 0; i < n; ++i)
          trial2[i] = centroid[i] + c_expand * (trial[i] - centroid[i]);
        const double fe = eval(trial2);
        if (fe > fr) {
          xs[iw] = trial2;
          fs[iw] = fe;
        } else {
          xs[iw] = trial;
          fs[iw] = fr;
        }
        continue;
      }
      if (fr > fs[is]) {
        xs[iw] = trial;
        fs[iw] = fr;
        continue;
      }
      const bool outside = fr > fs[iw];
      for (std::size_t i = 0; i < n; ++i) {
        const double toward = outside ? trial[i] : xs[iw][i];
        trial2[i] = centroid[i] + c_contract * (toward - centroid[i]);
      }
      const double fc = eval(trial2);
      if (fc > (outside ? fr : fs[iw])) {
        xs[iw] = trial2;
        fs[iw] = fc;
        continue;
      }
      for (std::size_t v = 0; v <= n; ++v) {
        if (v == ib) continue;
        for (std::size_t i = 0; i < n; ++i)
          xs[v][i] = xs[ib][i] + c_shrink * (xs[v][i] - xs[ib][i]);
        fs[v] = eval(xs[v]);
      }
    }

    const auto it = std::max_element(fs.begin(), fs.end());
    const auto iv = static_cast<std::size_t>(std::distance(fs.begin(), it));
    if (*it > best_f) {
      best_f = *it;
      best_x = space.map_into(xs[iv]);
    }
    if (result.budget_exhausted) break;
  }

  result.point = best_x;
  result.value = best_f;
  return result;
}

std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double lo,
                                             double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

std::uint64_t CounterRng::next() {
  const std::uint64_t key = mix64(seed_ ^ mix64(stream_ + 0x632BE59BD9B4E019ULL));
  return mix64(key + (++counter_) * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace catq
