#ifndef COSKIT_QUANTILE_HPP
#define COSKIT_QUANTILE_HPP

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace coskit {

// Quantile by linear interpolation between order statistics at plotting
// position p*(n-1), the convention most software defaults to.  For sorted
// x[0..n-1] and h = p*(n-1) = k + g:
//
//   q = (1-g)*x[k] + g*x[k+1]        (q = x[k] when g == 0)
//
// Requires 0 <= p <= 1 and non-empty sorted input.
inline double quantile_sorted(std::span<const double> sorted, double p) {
  assert(!sorted.empty());
  assert(p >= 0.0 && p <= 1.0);
  const std::size_t n = sorted.size();
  const double h = p * static_cast<double>(n - 1);
  const std::size_t k = static_cast<std::size_t>(h);
  const double g = h - static_cast<double>(k);
  if (g == 0.0 || k + 1 >= n) return sorted[k];
  return (1.0 - g) * sorted[k] + g * sorted[k + 1];
}

// Sorts a copy of `values` once and evaluates every level against it.
inline std::vector<double> quantiles(std::vector<double> values,
                                     std::span<const double> levels) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  out.reserve(levels.size());
  for (double p : levels) out.push_back(quantile_sorted(values, p));
  return out;
}

}  // namespace coskit

#endif  // COSKIT_QUANTILE_HPP
