#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "haar.hpp"
#include "step_function.hpp"

namespace dyadic {

/// A step function with strictly positive, finite leaf values.
class Weight {
 public:
  Weight() = default;

  explicit Weight(StepFunction f) : f_(std::move(f)) {
    for (std::size_t k = 0; k < f_.size(); ++k)
      if (!(f_[k] > 0.0) || !std::isfinite(f_[k]))
        throw std::invalid_argument("weight must be strictly positive and finite (leaf " + std::to_string(k) +
                                    " = " + std::to_string(f_[k]) + ")");
  }

  Weight(DyadicGrid grid, std::vector<double> leaves) : Weight(StepFunction(grid, std::move(leaves))) {}

  static Weight lebesgue(DyadicGrid grid) { return Weight(StepFunction::constant(grid, 1.0)); }

  const StepFunction& function() const { return f_; }
  const DyadicGrid& grid() const { return f_.grid(); }
  int depth() const { return f_.depth(); }
  std::span<const double> leaves() const { return f_.leaves(); }
  double operator[](std::size_t k) const { return f_[k]; }

  /// w^s, leafwise.
  Weight pow(double s) const { return Weight(f_.pow(s)); }
  Weight inverse() const {
    return Weight(f_.map([](double x) { return 1.0 / x; }));
  }

  /// v(I), the v-measure of I.
  double measure(const IntervalId& I) const { return I.length() * average(f_, I); }

  friend bool operator==(const Weight&, const Weight&) = default;

 private:
  StepFunction f_;
};

inline StepFunction weighted_haar(const Weight& v, const IntervalId& I) { return weighted_haar(v.function(), I); }
inline WeightedHaarDecomposition decompose_haar(const Weight& v, const IntervalId& I) {
  return decompose_haar(v.function(), I);
}
inline double weighted_average(const StepFunction& f, const Weight& v, const IntervalId& I) {
  return weighted_average(f, v.function(), I);
}

/// Supremum of a characteristic together with an interval attaining it.
struct CharacteristicReport {
  double value = 0.0;
  IntervalId witness;
};

namespace detail {

/// Max of quotient(p) over heap positions [first, last). Ties keep the first position.
template <class Fn>
CharacteristicReport scan_max(std::size_t first, std::size_t last, Fn&& quotient) {
  CharacteristicReport best{-std::numeric_limits<double>::infinity(), IntervalId::from_heap(first)};
  std::size_t best_pos = first;
  for (std::size_t p = first; p < last; ++p) {
    const double q = quotient(p);
    if (q > best.value) {
      best.value = q;
      best_pos = p;
    }
  }
  best.witness = IntervalId::from_heap(best_pos);
  return best;
}

}  // namespace detail

/// Per-interval A_p quotient (m_I w)(m_I w^{-1/(p-1)})^{p-1}.
inline double ap_quotient(const Weight& w, double p, const IntervalId& I) {
  const double dual = average(w.function().pow(-1.0 / (p - 1.0)), I);
  return average(w.function(), I) * std::pow(dual, p - 1.0);
}

/// [w]_{A_p}: exact supremum over every interval of the grid.
inline CharacteristicReport ap_characteristic(const Weight& w, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("A_p characteristic needs p > 1");
  const std::vector<double> a = node_averages(w.function());
  const std::vector<double> b = node_averages(w.function().pow(-1.0 / (p - 1.0)));
  return detail::scan_max(1, w.grid().table_size(),
                          [&](std::size_t q) { return a[q] * std::pow(b[q], p - 1.0); });
}

/// [w]_{RH_p} = sup (m_I w^p)^{1/p} / m_I w.
inline CharacteristicReport rh_characteristic(const Weight& w, double p) {
  if (!(p > 1.0)) throw std::invalid_argument("RH_p characteristic needs p > 1");
  const std::vector<double> a = node_averages(w.function().pow(p));
  const std::vector<double> b = node_averages(w.function());
  return detail::scan_max(1, w.grid().table_size(),
                          [&](std::size_t q) { return std::pow(a[q], 1.0 / p) / b[q]; });
}

/// Per-interval C_s quotient (m_I w^s)(m_I w)^{-s}.
inline double cs_quotient(const Weight& w, double s, const IntervalId& I) {
  return average(w.function().pow(s), I) / std::pow(average(w.function(), I), s);
}

/// [w]_{C_s} = sup (m_I w^s)(m_I w)^{-s}. For s in [0, 1] Hoelder gives exactly 1,
/// attained on the leaves.
inline CharacteristicReport cs_characteristic(const Weight& w, double s) {
  if (s >= 0.0 && s <= 1.0) return {1.0, w.grid().leaf(0)};
  const std::vector<double> a = node_averages(w.function().pow(s));
  const std::vector<double> b = node_averages(w.function());
  return detail::scan_max(1, w.grid().table_size(), [&](std::size_t q) { return a[q] / std::pow(b[q], s); });
}

/// Same as cs_characteristic but restricted to levels 0..max_level.
inline CharacteristicReport cs_characteristic_to_level(const Weight& w, double s, int max_level) {
  const std::vector<double> a = node_averages(w.function().pow(s));
  const std::vector<double> b = node_averages(w.function());
  return detail::scan_max(1, std::size_t{2} << max_level, [&](std::size_t q) { return a[q] / std::pow(b[q], s); });
}

/// D(w) = sup over non-root I of w(parent I) / w(I).
inline CharacteristicReport doubling_constant(const Weight& w) {
  const std::vector<double> a = node_averages(w.function());
  return detail::scan_max(2, w.grid().table_size(), [&](std::size_t q) { return 2.0 * a[q / 2] / a[q]; });
}

/// ||b||_{BMO} with the interval J attaining the supremum of (1/|J|) sum_{I in D(J)} b_I^2.
inline CharacteristicReport bmo_norm_report(const StepFunction& b) {
  const DyadicGrid& grid = b.grid();
  const HaarSpectrum s = haar_transform(b);
  const std::size_t n = grid.leaf_count();
  std::vector<double> subtree(grid.table_size(), 0.0);
  for (std::size_t p = n - 1; p >= 1; --p)
    subtree[p] = s.coeffs[p] * s.coeffs[p] + subtree[2 * p] + subtree[2 * p + 1];
  CharacteristicReport r =
      detail::scan_max(1, n, [&](std::size_t q) { return subtree[q] / IntervalId::from_heap(q).length(); });
  r.value = std::sqrt(r.value);
  return r;
}

inline double bmo_norm(const StepFunction& b) { return bmo_norm_report(b).value; }

/// Dyadic weighted maximal function (M_v f)(x) = max over dyadic I containing x of m_I^v |f|.
inline StepFunction weighted_maximal(const StepFunction& f, const Weight& v) {
  require_same_grid(f.grid(), v.grid(), "weighted maximal function");
  const DyadicGrid& grid = f.grid();
  const std::vector<double> num = node_averages(f.abs() * v.function());
  const std::vector<double> den = node_averages(v.function());
  std::vector<double> best(grid.table_size(), 0.0);
  best[1] = num[1] / den[1];
  for (std::size_t p = 2; p < grid.table_size(); ++p) best[p] = std::max(best[p / 2], num[p] / den[p]);
  const std::size_t n = grid.leaf_count();
  return StepFunction(grid, std::vector<double>(best.begin() + static_cast<std::ptrdiff_t>(n), best.end()));
}

/// L^q(v) norm.
inline double weighted_lq_norm(const StepFunction& f, const Weight& v, double q) {
  return std::pow((f.abs().pow(q) * v.function()).integral(), 1.0 / q);
}

}  // namespace dyadic
