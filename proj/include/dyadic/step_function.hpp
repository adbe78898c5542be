#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "grid.hpp"

namespace dyadic {

/// Real function on [0, 1) that is constant on each leaf of a dyadic grid.
/// Leaf values are stored left to right.
class StepFunction {
 public:
  StepFunction() = default;

  StepFunction(DyadicGrid grid, std::vector<double> leaves) : grid_(grid), leaves_(std::move(leaves)) {
    if (leaves_.size() != grid_.leaf_count())
      throw std::invalid_argument("step function needs " + std::to_string(grid_.leaf_count()) +
                                  " leaf values, got " + std::to_string(leaves_.size()));
  }

  static StepFunction constant(DyadicGrid grid, double c) {
    return StepFunction(grid, std::vector<double>(grid.leaf_count(), c));
  }

  /// Indicator of I.
  static StepFunction indicator(DyadicGrid grid, const IntervalId& I) {
    grid.require(I);
    std::vector<double> v(grid.leaf_count(), 0.0);
    std::fill_n(v.begin() + static_cast<std::ptrdiff_t>(grid.first_leaf(I)), grid.leaf_span(I), 1.0);
    return StepFunction(grid, std::move(v));
  }

  /// The unweighted Haar function h_I = |I|^{-1/2} (chi_{I+} - chi_{I-}).
  static StepFunction haar(DyadicGrid grid, const IntervalId& I) {
    grid.require(I);
    if (grid.is_leaf(I)) throw std::invalid_argument("interval has no children");
    std::vector<double> v(grid.leaf_count(), 0.0);
    const double amp = 1.0 / std::sqrt(I.length());
    const std::size_t first = grid.first_leaf(I);
    const std::size_t half = grid.leaf_span(I) / 2;
    for (std::size_t k = 0; k < half; ++k) {
      v[first + k] = -amp;
      v[first + half + k] = amp;
    }
    return StepFunction(grid, std::move(v));
  }

  const DyadicGrid& grid() const { return grid_; }
  int depth() const { return grid_.depth(); }
  std::span<const double> leaves() const { return leaves_; }
  std::vector<double>& mutable_leaves() { return leaves_; }
  double operator[](std::size_t k) const { return leaves_[k]; }
  std::size_t size() const { return leaves_.size(); }

  /// Integral over [0, 1), i.e. the mean of the leaves.
  double integral() const {
    double s = 0.0;
    for (double x : leaves_) s += x;
    return s / static_cast<double>(leaves_.size());
  }

  template <class Fn>
  StepFunction map(Fn&& fn) const {
    std::vector<double> out(leaves_.size());
    std::transform(leaves_.begin(), leaves_.end(), out.begin(), std::forward<Fn>(fn));
    return StepFunction(grid_, std::move(out));
  }

  template <class Fn>
  StepFunction zip(const StepFunction& other, Fn&& fn) const {
    require_same_grid(grid_, other.grid_, "step function");
    std::vector<double> out(leaves_.size());
    std::transform(leaves_.begin(), leaves_.end(), other.leaves_.begin(), out.begin(),
                   std::forward<Fn>(fn));
    return StepFunction(grid_, std::move(out));
  }

  StepFunction abs() const {
    return map([](double x) { return std::abs(x); });
  }

  StepFunction pow(double s) const {
    return map([s](double x) { return std::pow(x, s); });
  }

  friend StepFunction operator+(const StepFunction& a, const StepFunction& b) {
    return a.zip(b, std::plus<>{});
  }
  friend StepFunction operator-(const StepFunction& a, const StepFunction& b) {
    return a.zip(b, std::minus<>{});
  }
  /// Pointwise product.
  friend StepFunction operator*(const StepFunction& a, const StepFunction& b) {
    return a.zip(b, std::multiplies<>{});
  }
  friend StepFunction operator*(double c, const StepFunction& a) {
    return a.map([c](double x) { return c * x; });
  }

  friend bool operator==(const StepFunction&, const StepFunction&) = default;

 private:
  DyadicGrid grid_;
  std::vector<double> leaves_;
};

/// Unweighted L^2 pairing, integral of f * g over [0, 1).
inline double inner(const StepFunction& f, const StepFunction& g) {
  require_same_grid(f.grid(), g.grid(), "inner product");
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * g[k];
  return s / static_cast<double>(f.size());
}

/// L^p norm to the p-th power, integral of |f|^p over [0, 1). Zero leaves are skipped.
inline double lp_norm_pow(const StepFunction& f, double p) {
  double s = 0.0;
  for (double x : f.leaves())
    if (x != 0.0) s += std::pow(std::abs(x), p);
  return s / static_cast<double>(f.size());
}

/// Averages m_I f for every node, heap indexed (position 0 unused).
inline std::vector<double> node_averages(const DyadicGrid& grid, std::span<const double> leaves) {
  const std::size_t n = grid.leaf_count();
  std::vector<double> avg(grid.table_size(), 0.0);
  std::copy(leaves.begin(), leaves.end(), avg.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t p = n - 1; p >= 1; --p) avg[p] = 0.5 * (avg[2 * p] + avg[2 * p + 1]);
  return avg;
}

inline std::vector<double> node_averages(const StepFunction& f) {
  return node_averages(f.grid(), f.leaves());
}

/// m_I f, the average of f over I.
inline double average(const StepFunction& f, const IntervalId& I) {
  f.grid().require(I);
  const std::size_t first = f.grid().first_leaf(I);
  const std::size_t span = f.grid().leaf_span(I);
  double s = 0.0;
  for (std::size_t k = first; k < first + span; ++k) s += f[k];
  return s / static_cast<double>(span);
}

/// m_I^v f = (integral over I of f v) / v(I).
inline double weighted_average(const StepFunction& f, const StepFunction& v, const IntervalId& I) {
  require_same_grid(f.grid(), v.grid(), "weighted average");
  f.grid().require(I);
  const std::size_t first = f.grid().first_leaf(I);
  const std::size_t span = f.grid().leaf_span(I);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = first; k < first + span; ++k) {
    num += f[k] * v[k];
    den += v[k];
  }
  return num / den;
}

/// sqrt(|I|) for each level 0..depth.
inline std::vector<double> sqrt_lengths(int depth) {
  std::vector<double> out(static_cast<std::size_t>(depth) + 1);
  for (int l = 0; l <= depth; ++l) out[static_cast<std::size_t>(l)] = std::sqrt(std::ldexp(1.0, -l));
  return out;
}

}  // namespace dyadic
