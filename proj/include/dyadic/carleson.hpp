#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

#include "weight.hpp"

namespace dyadic {

/// Nonnegative sequence indexed by the internal nodes (levels 0..D-1) of a grid.
/// Leaves carry no entries; reading one returns 0.
class IndexedSequence {
 public:
  IndexedSequence() = default;
  explicit IndexedSequence(DyadicGrid grid) : grid_(grid), values_(grid.leaf_count(), 0.0) {}

  /// `values` is heap indexed, size 2^D, position 0 ignored.
  IndexedSequence(DyadicGrid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.leaf_count())
      throw std::invalid_argument("sequence needs " + std::to_string(grid_.leaf_count()) + " heap slots");
    values_[0] = 0.0;
    for (std::size_t p = 1; p < values_.size(); ++p)
      if (!(values_[p] >= 0.0) || !std::isfinite(values_[p]))
        throw std::invalid_argument("sequence entries must be finite and nonnegative");
  }

  const DyadicGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }

  double operator[](const IntervalId& I) const { return grid_.is_leaf(I) ? 0.0 : values_[I.heap()]; }

  void set(const IntervalId& I, double value) {
    grid_.require(I);
    if (grid_.is_leaf(I)) throw std::invalid_argument("sequences have no entries on leaves");
    if (!(value >= 0.0) || !std::isfinite(value))
      throw std::invalid_argument("sequence entries must be finite and nonnegative");
    values_[I.heap()] = value;
  }

  double total() const {
    double s = 0.0;
    for (std::size_t p = 1; p < values_.size(); ++p) s += values_[p];
    return s;
  }

  IndexedSequence scaled(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return IndexedSequence(grid_, std::move(v));
  }

 private:
  DyadicGrid grid_;
  std::vector<double> values_;
};

struct IntensityReport {
  double intensity = 0.0;
  IntervalId witness;
};

/// Sum of the sequence over D(J) for every J, heap indexed over the whole table.
inline std::vector<double> subtree_sums(const IndexedSequence& seq) {
  const DyadicGrid& grid = seq.grid();
  std::vector<double> s(grid.table_size(), 0.0);
  for (std::size_t p = grid.leaf_count() - 1; p >= 1; --p) s[p] = seq.values()[p] + s[2 * p] + s[2 * p + 1];
  return s;
}

/// Carleson quotient at J: (sum over D(J) of lambda_I) / v(J).
inline double carleson_quotient(const IndexedSequence& seq, const Weight& v, const IntervalId& J) {
  const DyadicGrid& grid = seq.grid();
  double sum = 0.0;
  for (int l = J.level; l < grid.depth(); ++l) {
    const int k = l - J.level;
    for (std::size_t i = J.index << k; i < (J.index + 1) << k; ++i) sum += seq[{l, i}];
  }
  return sum / v.measure(J);
}

/// Smallest B with sum_{I in D(J)} lambda_I <= B v(J) for every J.
inline IntensityReport intensity(const IndexedSequence& seq, const Weight& v) {
  require_same_grid(seq.grid(), v.grid(), "intensity");
  const std::vector<double> sums = subtree_sums(seq);
  const std::vector<double> avg = node_averages(v.function());
  const CharacteristicReport r = detail::scan_max(1, seq.grid().leaf_count(), [&](std::size_t q) {
    return sums[q] / (IntervalId::from_heap(q).length() * avg[q]);
  });
  return {r.value, r.witness};
}

/// Unweighted intensity (v = 1).
inline IntensityReport intensity(const IndexedSequence& seq) { return intensity(seq, Weight::lebesgue(seq.grid())); }

struct Linear {
  double c = 1.0;
  double d = 1.0;
};
struct GeometricMean {};
struct SquareSum {
  double c = 1.0;
  double d = 1.0;
};
using CombineMode = std::variant<Linear, GeometricMean, SquareSum>;

/// Pointwise c*a + d*b, sqrt(a*b) or (c sqrt(a) + d sqrt(b))^2.
inline IndexedSequence combine(const IndexedSequence& a, const IndexedSequence& b, const CombineMode& mode) {
  require_same_grid(a.grid(), b.grid(), "combine");
  std::vector<double> out(a.grid().leaf_count(), 0.0);
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (!std::is_same_v<M, GeometricMean>) {
          if (!(m.c >= 0.0 && m.d >= 0.0)) throw std::invalid_argument("combine needs nonnegative c and d");
        }
        for (std::size_t p = 1; p < out.size(); ++p) {
          const double x = a.values()[p];
          const double y = b.values()[p];
          if constexpr (std::is_same_v<M, Linear>)
            out[p] = m.c * x + m.d * y;
          else if constexpr (std::is_same_v<M, GeometricMean>)
            out[p] = std::sqrt(x * y);
          else {
            const double r = m.c * std::sqrt(x) + m.d * std::sqrt(y);
            out[p] = r * r;
          }
        }
      },
      mode);
  return IndexedSequence(a.grid(), std::move(out));
}

namespace detail {

/// |I| (m_I w m_I w^{-1})^s ((Delta_I w / m_I w)^2 + (Delta_I w^{-1} / m_I w^{-1})^2).
inline IndexedSequence oscillation_sequence(const Weight& w, double s) {
  const DyadicGrid& grid = w.grid();
  const std::vector<double> a = node_averages(w.function());
  const std::vector<double> b = node_averages(w.inverse().function());
  std::vector<double> out(grid.leaf_count(), 0.0);
  for (std::size_t p = 1; p < out.size(); ++p) {
    const double da = (a[2 * p + 1] - a[2 * p]) / a[p];
    const double db = (b[2 * p + 1] - b[2 * p]) / b[p];
    out[p] = IntervalId::from_heap(p).length() * std::pow(a[p] * b[p], s) * (da * da + db * db);
  }
  return IndexedSequence(grid, std::move(out));
}

}  // namespace detail

/// Constant of the alpha-lemma, 72 / (alpha - 2 alpha^2).
inline double alpha_lemma_constant(double alpha) { return 72.0 / (alpha - 2.0 * alpha * alpha); }

/// mu_I^alpha; a Carleson sequence with intensity at most alpha_lemma_constant(alpha) [w]_{A_2}^alpha.
inline IndexedSequence alpha_sequence(const Weight& w, double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw std::invalid_argument("alpha must lie in (0, 1/2)");
  return detail::oscillation_sequence(w, alpha);
}

/// tau_I^s, the same expression for any s > 0.
inline IndexedSequence tau_sequence(const Weight& w, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("tau sequence needs s > 0");
  return detail::oscillation_sequence(w, s);
}

/// nu_I = |I| (m_I w)^2 (Delta_I w^{-1})^2.
inline IndexedSequence nu_sequence(const Weight& w) {
  const DyadicGrid& grid = w.grid();
  const std::vector<double> a = node_averages(w.function());
  const std::vector<double> b = node_averages(w.inverse().function());
  std::vector<double> out(grid.leaf_count(), 0.0);
  for (std::size_t p = 1; p < out.size(); ++p) {
    const double db = b[2 * p + 1] - b[2 * p];
    out[p] = IntervalId::from_heap(p).length() * a[p] * a[p] * db * db;
  }
  return IndexedSequence(grid, std::move(out));
}

/// {b_I^2}, the squared Haar coefficients of b.
inline IndexedSequence haar_square_sequence(const StepFunction& b) {
  const HaarSpectrum s = haar_transform(b);
  std::vector<double> out(s.coeffs.size(), 0.0);
  for (std::size_t p = 1; p < out.size(); ++p) out[p] = s.coeffs[p] * s.coeffs[p];
  return IndexedSequence(b.grid(), std::move(out));
}

/// {lambda_I / m_I v^{-1}}; a v-Carleson sequence with intensity at most 4 B when lambda has intensity B.
inline IndexedSequence little_lemma_transfer(const IndexedSequence& seq, const Weight& v) {
  require_same_grid(seq.grid(), v.grid(), "little lemma transfer");
  const std::vector<double> inv = node_averages(v.inverse().function());
  std::vector<double> out(seq.values().begin(), seq.values().end());
  for (std::size_t p = 1; p < out.size(); ++p) out[p] /= inv[p];
  return IndexedSequence(seq.grid(), std::move(out));
}

/// sum_L alpha_L inf_{x in L} F(x).
inline double weighted_carleson_pairing(const IndexedSequence& seq, const StepFunction& F) {
  require_same_grid(seq.grid(), F.grid(), "Carleson pairing");
  const DyadicGrid& grid = F.grid();
  for (double x : F.leaves())
    if (!(x >= 0.0)) throw std::invalid_argument("Carleson pairing needs a nonnegative F");
  const std::size_t n = grid.leaf_count();
  std::vector<double> lo(grid.table_size(), 0.0);
  std::copy(F.leaves().begin(), F.leaves().end(), lo.begin() + static_cast<std::ptrdiff_t>(n));
  double sum = 0.0;
  for (std::size_t p = n - 1; p >= 1; --p) {
    lo[p] = std::min(lo[2 * p], lo[2 * p + 1]);
    sum += seq.values()[p] * lo[p];
  }
  return sum;
}

/// Right-hand side of the weighted Carleson inequality, B * integral of F v.
inline double weighted_carleson_bound(const IndexedSequence& seq, const StepFunction& F, const Weight& v) {
  return intensity(seq, v).intensity * (F * v.function()).integral();
}

}  // namespace dyadic
