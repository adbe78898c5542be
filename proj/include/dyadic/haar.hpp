#pragma once

#include <cmath>
#include <vector>

#include "step_function.hpp"

namespace dyadic {

/// Global mean plus one Haar coefficient <f, h_I> per internal node.
/// `coeffs` is heap indexed over positions 1 .. 2^D - 1; position 0 is unused.
struct HaarSpectrum {
  DyadicGrid grid;
  double mean = 0.0;
  std::vector<double> coeffs;

  static HaarSpectrum zero(DyadicGrid grid) { return {grid, 0.0, std::vector<double>(grid.leaf_count(), 0.0)}; }

  double coeff(const IntervalId& I) const { return coeffs[I.heap()]; }
  double& coeff(const IntervalId& I) { return coeffs[I.heap()]; }
};

/// Forward transform by bottom-up reduction, O(2^D).
/// <f, h_I> = sqrt|I| / 2 * (m_{I+} f - m_{I-} f).
inline HaarSpectrum haar_transform(const StepFunction& f) {
  const DyadicGrid& grid = f.grid();
  const std::vector<double> avg = node_averages(f);
  const std::vector<double> root_len = sqrt_lengths(grid.depth());
  HaarSpectrum out = HaarSpectrum::zero(grid);
  out.mean = avg[1];
  for (int l = 0; l < grid.depth(); ++l) {
    const double scale = 0.5 * root_len[static_cast<std::size_t>(l)];
    const std::size_t lo = std::size_t{1} << l;
    for (std::size_t p = lo; p < 2 * lo; ++p) out.coeffs[p] = scale * (avg[2 * p + 1] - avg[2 * p]);
  }
  return out;
}

/// Exact inverse of haar_transform: pushes averages down the tree.
inline StepFunction inverse_haar_transform(const HaarSpectrum& s) {
  const DyadicGrid& grid = s.grid;
  if (s.coeffs.size() != grid.leaf_count())
    throw std::invalid_argument("Haar spectrum has the wrong number of coefficients");
  const std::vector<double> root_len = sqrt_lengths(grid.depth());
  std::vector<double> avg(grid.table_size(), 0.0);
  avg[1] = s.mean;
  for (int l = 0; l < grid.depth(); ++l) {
    const double inv = 1.0 / root_len[static_cast<std::size_t>(l)];
    const std::size_t lo = std::size_t{1} << l;
    for (std::size_t p = lo; p < 2 * lo; ++p) {
      const double half_jump = s.coeffs[p] * inv;
      avg[2 * p] = avg[p] - half_jump;
      avg[2 * p + 1] = avg[p] + half_jump;
    }
  }
  const std::size_t n = grid.leaf_count();
  return StepFunction(grid, std::vector<double>(avg.begin() + static_cast<std::ptrdiff_t>(n), avg.end()));
}

/// Values of the weighted Haar function h_I^v on the two halves of I.
struct WeightedHaarValues {
  double plus = 0.0;   // on I_+
  double minus = 0.0;  // on I_-
};

/// h_I^v from precomputed node averages of v. The prefactor is 1/sqrt(v(I)),
/// which makes {h_I^v} orthonormal in L^2(v).
inline WeightedHaarValues weighted_haar_values(std::span<const double> v_avg, const IntervalId& I) {
  const double len = I.length();
  const double v_total = len * v_avg[I.heap()];
  const double v_minus = 0.5 * len * v_avg[2 * I.heap()];
  const double v_plus = 0.5 * len * v_avg[2 * I.heap() + 1];
  const double pre = 1.0 / std::sqrt(v_total);
  return {pre * std::sqrt(v_minus / v_plus), -pre * std::sqrt(v_plus / v_minus)};
}

/// The weighted Haar function h_I^v as a step function supported on I.
inline StepFunction weighted_haar(const StepFunction& v, const IntervalId& I) {
  const DyadicGrid& grid = v.grid();
  grid.require(I);
  if (grid.is_leaf(I)) throw std::invalid_argument("interval has no children");
  for (double x : v.leaves())
    if (!(x > 0.0)) throw std::invalid_argument("weighted Haar function needs a positive weight");
  const std::vector<double> avg = node_averages(v);
  const WeightedHaarValues h = weighted_haar_values(avg, I);
  std::vector<double> out(grid.leaf_count(), 0.0);
  const std::size_t first = grid.first_leaf(I);
  const std::size_t half = grid.leaf_span(I) / 2;
  for (std::size_t k = 0; k < half; ++k) {
    out[first + k] = h.minus;
    out[first + half + k] = h.plus;
  }
  return StepFunction(grid, std::move(out));
}

/// h_I = alpha * h_I^v + beta * chi_I / sqrt|I|.
struct WeightedHaarDecomposition {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Solves the 2x2 system matching both sides on I_+ and I_-.
inline WeightedHaarDecomposition decompose_haar(std::span<const double> v_avg, const IntervalId& I) {
  const WeightedHaarValues h = weighted_haar_values(v_avg, I);
  const double root_len = std::sqrt(I.length());
  const double alpha = 2.0 / (root_len * (h.plus - h.minus));
  const double beta = 1.0 - alpha * h.plus * root_len;
  return {alpha, beta};
}

inline WeightedHaarDecomposition decompose_haar(const StepFunction& v, const IntervalId& I) {
  v.grid().require(I);
  if (v.grid().is_leaf(I)) throw std::invalid_argument("interval has no children");
  return decompose_haar(node_averages(v), I);
}

}  // namespace dyadic
