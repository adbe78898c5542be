#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "haar.hpp"
#include "random.hpp"
#include "weight.hpp"

namespace dyadic {

/// Largest admissible |c^L_{I,J}|, sqrt(|I| |J|) / |L|.
inline double coefficient_bound(const IntervalId& L, const IntervalId& I, const IntervalId& J) {
  return std::sqrt(I.length() * J.length()) / L.length();
}

struct MaximalCoefficients {};
struct RandomSignCoefficients {
  std::uint64_t seed = 0;
};
struct CustomCoefficients {
  std::function<double(const IntervalId& L, const IntervalId& I, const IntervalId& J)> value;
};

/// The coefficients c^L_{I,J} of an operator of complexity (m, n).
class CoefficientFamily {
 public:
  using Kind = std::variant<MaximalCoefficients, RandomSignCoefficients, CustomCoefficients>;

  CoefficientFamily() = default;
  // NOLINTBEGIN(google-explicit-constructor)
  CoefficientFamily(Kind kind) : kind_(std::move(kind)) {}
  CoefficientFamily(MaximalCoefficients k) : kind_(k) {}
  CoefficientFamily(RandomSignCoefficients k) : kind_(k) {}
  CoefficientFamily(CustomCoefficients k) : kind_(std::move(k)) {}
  // NOLINTEND(google-explicit-constructor)

  const Kind& kind() const { return kind_; }

  double operator()(const IntervalId& L, const IntervalId& I, const IntervalId& J) const {
    const double bound = coefficient_bound(L, I, J);
    return std::visit(
        [&](const auto& k) -> double {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, MaximalCoefficients>) {
            return bound;
          } else if constexpr (std::is_same_v<K, RandomSignCoefficients>) {
            std::uint64_t h = mix64(k.seed);
            h = mix64(h ^ L.heap());
            h = mix64(h ^ I.heap());
            h = mix64(h ^ J.heap());
            return (h >> 63) ? -bound : bound;
          } else {
            const double c = k.value(L, I, J);
            if (!(std::abs(c) <= bound * (1.0 + 1e-12)))
              throw std::invalid_argument("coefficient at L=" + to_string(L) + " exceeds sqrt(|I||J|)/|L|");
            return c;
          }
        },
        kind_);
  }

 private:
  Kind kind_ = MaximalCoefficients{};
};

/// pi_b^{m,n} f = sum_L sum_{I,J} c m_I f <b, h_I> h_J.
struct Paraproduct {
  StepFunction b;
};
/// S^{m,n} f = sum_L sum_{I,J} c <f, h_I> h_J.
struct HaarShift {};
/// T^{m,n}_{t,w} f = sum_L sum_{I,J} c (w / m_L w)^t <f, h_I> h_J.
struct HaarMultiplier {
  double t = 1.0;
  Weight w;
};

using OperatorFamily = std::variant<Paraproduct, HaarShift, HaarMultiplier>;

struct OperatorSpec {
  OperatorFamily family = HaarShift{};
  int m = 0;  // output generation, J in D_m(L)
  int n = 0;  // input generation, I in D_n(L)
  CoefficientFamily coeffs;
};

/// Deepest level of L for which the (m, n) sum is representable on a grid of depth D.
inline int top_level_limit(int depth, int m, int n) { return depth - 1 - std::max(m, n); }

/// Matrix-free evaluation of one operator on a fixed grid. Coefficients, Haar data of b and
/// the multiplier symbol are computed once at construction.
class DyadicOperator {
 public:
  DyadicOperator(const OperatorSpec& spec, DyadicGrid grid) : spec_(spec), grid_(grid) {
    if (spec.m < 0 || spec.n < 0) throw std::invalid_argument("complexity (m, n) must be nonnegative");
    max_level_ = top_level_limit(grid.depth(), spec.m, spec.n);
    if (max_level_ < 0)
      throw std::invalid_argument("complexity (" + std::to_string(spec.m) + "," + std::to_string(spec.n) +
                                  ") is too large for depth " + std::to_string(grid.depth()));
    if (const auto* para = std::get_if<Paraproduct>(&spec.family)) {
      require_same_grid(para->b.grid(), grid, "paraproduct symbol");
      b_coeffs_ = haar_transform(para->b).coeffs;
    } else if (const auto* mult = std::get_if<HaarMultiplier>(&spec.family)) {
      require_same_grid(mult->w.grid(), grid, "multiplier weight");
      const std::vector<double> avg = node_averages(mult->w.function());
      scale_.assign(grid.table_size(), 0.0);
      for (std::size_t p = 1; p < scale_.size(); ++p) scale_[p] = std::pow(avg[p], -mult->t);
      symbol_ = mult->w.function().pow(mult->t);
    }
    const std::size_t block = std::size_t{1} << (spec.m + spec.n);
    const std::size_t roots = (std::size_t{2} << max_level_) - 1;
    coeffs_.resize(roots * block);
    for (std::size_t l = 1; l <= roots; ++l) {
      const IntervalId L = IntervalId::from_heap(l);
      for (std::size_t i = 0; i < (std::size_t{1} << spec.n); ++i)
        for (std::size_t j = 0; j < (std::size_t{1} << spec.m); ++j) {
          const IntervalId I{L.level + spec.n, (L.index << spec.n) + i};
          const IntervalId J{L.level + spec.m, (L.index << spec.m) + j};
          coeffs_[(l - 1) * block + (i << spec.m) + j] = spec.coeffs(L, I, J);
        }
    }
  }

  const OperatorSpec& spec() const { return spec_; }
  const DyadicGrid& grid() const { return grid_; }
  int max_level() const { return max_level_; }

  double coefficient(std::size_t root_heap, std::size_t i, std::size_t j) const {
    return coeffs_[(root_heap - 1) * (std::size_t{1} << (spec_.m + spec_.n)) + (i << spec_.m) + j];
  }

  StepFunction apply(const StepFunction& f) const {
    require_same_grid(f.grid(), grid_, "operator input");
    std::vector<double> input;
    if (std::holds_alternative<Paraproduct>(spec_.family)) {
      input = node_averages(f);
      input.resize(grid_.leaf_count());
      for (std::size_t p = 1; p < input.size(); ++p) input[p] *= b_coeffs_[p];
    } else {
      input = haar_transform(f).coeffs;
    }
    HaarSpectrum out = HaarSpectrum::zero(grid_);
    transfer_forward(input, out.coeffs);
    StepFunction result = inverse_haar_transform(out);
    if (std::holds_alternative<HaarMultiplier>(spec_.family)) result = result * symbol_;
    return result;
  }

  /// Transpose with respect to the unweighted L^2 pairing.
  StepFunction apply_adjoint(const StepFunction& g) const {
    require_same_grid(g.grid(), grid_, "adjoint input");
    const bool multiplier = std::holds_alternative<HaarMultiplier>(spec_.family);
    const std::vector<double> input = haar_transform(multiplier ? g * symbol_ : g).coeffs;
    HaarSpectrum out = HaarSpectrum::zero(grid_);
    transfer_backward(input, out.coeffs);
    if (!std::holds_alternative<Paraproduct>(spec_.family)) return inverse_haar_transform(out);

    // sum_I b_I (sum_J c <g, h_J>) chi_I / |I|
    std::vector<double> acc(grid_.leaf_count(), 0.0);
    for (std::size_t p = 1; p < acc.size(); ++p) {
      const double a = out.coeffs[p] * b_coeffs_[p] / IntervalId::from_heap(p).length();
      acc[p] = (p > 1 ? acc[p / 2] : 0.0) + a;
    }
    const std::size_t n = grid_.leaf_count();
    std::vector<double> leaves(n);
    for (std::size_t k = 0; k < n; ++k) leaves[k] = acc[(n + k) / 2];
    return StepFunction(grid_, std::move(leaves));
  }

 private:
  double root_scale(std::size_t l) const { return scale_.empty() ? 1.0 : scale_[l]; }

  void transfer_forward(const std::vector<double>& in, std::vector<double>& out) const {
    const int m = spec_.m;
    const int n = spec_.n;
    const std::size_t roots = (std::size_t{2} << max_level_) - 1;
    const std::size_t block = std::size_t{1} << (m + n);
    for (std::size_t l = 1; l <= roots; ++l) {
      const double scale = root_scale(l);
      const double* c = &coeffs_[(l - 1) * block];
      for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
        const double x = in[(l << n) + i] * scale;
        if (x == 0.0) continue;
        double* dst = &out[l << m];
        for (std::size_t j = 0; j < (std::size_t{1} << m); ++j) dst[j] += c[(i << m) + j] * x;
      }
    }
  }

  void transfer_backward(const std::vector<double>& in, std::vector<double>& out) const {
    const int m = spec_.m;
    const int n = spec_.n;
    const std::size_t roots = (std::size_t{2} << max_level_) - 1;
    const std::size_t block = std::size_t{1} << (m + n);
    for (std::size_t l = 1; l <= roots; ++l) {
      const double scale = root_scale(l);
      const double* c = &coeffs_[(l - 1) * block];
      const double* src = &in[l << m];
      for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < (std::size_t{1} << m); ++j) s += c[(i << m) + j] * src[j];
        out[(l << n) + i] += s * scale;
      }
    }
  }

  OperatorSpec spec_;
  DyadicGrid grid_;
  int max_level_ = 0;
  std::vector<double> coeffs_;
  std::vector<double> b_coeffs_;
  std::vector<double> scale_;  // (m_L w)^{-t}, heap indexed
  StepFunction symbol_;        // w^t
};

inline StepFunction apply(const OperatorSpec& op, const StepFunction& f) { return DyadicOperator(op, f.grid()).apply(f); }

inline StepFunction apply_adjoint(const OperatorSpec& op, const StepFunction& g) {
  return DyadicOperator(op, g.grid()).apply_adjoint(g);
}

}  // namespace dyadic
