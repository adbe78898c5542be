#pragma once

// Shared fixtures and brute-force oracles. Oracles here deliberately avoid the heap tables
// and tree passes of the library: they loop over leaves and intervals directly.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dyadic/dyadic.hpp"

namespace oracle {

using namespace dyadic;

inline StepFunction random_function(const DyadicGrid& grid, std::uint64_t seed, double r = 1.0) {
  UniformSource rng(seed);
  std::vector<double> x(grid.leaf_count());
  for (double& v : x) v = rng.symmetric(r);
  return StepFunction(grid, std::move(x));
}

/// Log-uniform leaves in [e^{-spread}, e^{spread}].
inline Weight random_weight(const DyadicGrid& grid, std::uint64_t seed, double spread = 1.5) {
  UniformSource rng(seed ^ 0xabcdefULL);
  std::vector<double> x(grid.leaf_count());
  for (double& v : x) v = std::exp(rng.symmetric(spread));
  return Weight(grid, std::move(x));
}

/// Every interval of the grid, coarse to fine.
inline std::vector<IntervalId> all_intervals(const DyadicGrid& grid, bool with_leaves = true) {
  std::vector<IntervalId> out;
  for (int l = 0; l <= grid.depth() - (with_leaves ? 0 : 1); ++l)
    for (std::size_t k = 0; k < (std::size_t{1} << l); ++k) out.push_back({l, k});
  return out;
}

/// m_I f by summing the leaves under I.
inline double mean(const StepFunction& f, const IntervalId& I) {
  const std::size_t n = f.grid().leaf_count();
  const std::size_t span = n >> I.level;
  double s = 0.0;
  for (std::size_t k = I.index * span; k < (I.index + 1) * span; ++k) s += f[k];
  return s / static_cast<double>(span);
}

inline double delta(const StepFunction& f, const IntervalId& I) { return mean(f, I.right()) - mean(f, I.left()); }

/// Sum over leaves of f g / N, the L^2[0,1) pairing.
inline double pair(const StepFunction& f, const StepFunction& g) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += f[k] * g[k];
  return s / static_cast<double>(f.size());
}

inline double sup_over_intervals(const DyadicGrid& grid, const std::function<double(const IntervalId&)>& q,
                                 bool with_leaves = true) {
  double best = -INFINITY;
  for (const auto& I : all_intervals(grid, with_leaves)) best = std::max(best, q(I));
  return best;
}

/// Column k is the leaf vector of op(e_k).
inline Eigen::MatrixXd materialize(const DyadicGrid& grid, const std::function<StepFunction(const StepFunction&)>& op) {
  const std::size_t n = grid.leaf_count();
  Eigen::MatrixXd M(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> e(n, 0.0);
    e[k] = 1.0;
    const StepFunction y = op(StepFunction(grid, std::move(e)));
    for (std::size_t r = 0; r < n; ++r) M(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = y[r];
  }
  return M;
}

/// Leaf-to-leaf matrix of an operator spec built term by term from its defining double sum.
/// f enters through <f, h_I> (shift, multiplier) or m_I f (paraproduct), as a row over leaves.
inline Eigen::MatrixXd definition_matrix(const OperatorSpec& spec, const DyadicGrid& grid) {
  const std::size_t n = grid.leaf_count();
  const auto N = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N, N);
  const int top = grid.depth() - 1 - std::max(spec.m, spec.n);
  const auto* para = std::get_if<Paraproduct>(&spec.family);
  const auto* mult = std::get_if<HaarMultiplier>(&spec.family);
  for (int level = 0; level <= top; ++level)
    for (std::size_t l = 0; l < (std::size_t{1} << level); ++l) {
      const IntervalId L{level, l};
      Eigen::VectorXd symbol = Eigen::VectorXd::Ones(N);
      if (mult) {
        const double mw = mean(mult->w.function(), L);
        for (std::size_t r = 0; r < n; ++r) symbol(static_cast<Eigen::Index>(r)) = std::pow(mult->w[r] / mw, mult->t);
      }
      for (std::size_t i = 0; i < (std::size_t{1} << spec.n); ++i)
        for (std::size_t j = 0; j < (std::size_t{1} << spec.m); ++j) {
          const IntervalId I{level + spec.n, (l << spec.n) + i};
          const IntervalId J{level + spec.m, (l << spec.m) + j};
          const double c = spec.coeffs(L, I, J);
          const StepFunction hJ = StepFunction::haar(grid, J);
          Eigen::VectorXd row(N);
          if (para) {
            const double bI = pair(para->b, StepFunction::haar(grid, I));
            const StepFunction chi = StepFunction::indicator(grid, I);
            for (std::size_t k = 0; k < n; ++k)
              row(static_cast<Eigen::Index>(k)) = bI * chi[k] / (static_cast<double>(n) * I.length());
          } else {
            const StepFunction hI = StepFunction::haar(grid, I);
            for (std::size_t k = 0; k < n; ++k) row(static_cast<Eigen::Index>(k)) = hI[k] / static_cast<double>(n);
          }
          Eigen::VectorXd col(N);
          for (std::size_t r = 0; r < n; ++r)
            col(static_cast<Eigen::Index>(r)) = c * hJ[r] * symbol(static_cast<Eigen::Index>(r));
          M += col * row.transpose();
        }
    }
  return M;
}

/// Top singular value of D^{1/2} M D^{-1/2}, the L^2(w) operator norm of a leaf matrix.
inline double weighted_top_singular(const Eigen::MatrixXd& M, const Weight& w) {
  const auto n = M.rows();
  Eigen::VectorXd root(n), inv_root(n);
  for (Eigen::Index r = 0; r < n; ++r) {
    root(r) = std::sqrt(w[static_cast<std::size_t>(r)]);
    inv_root(r) = 1.0 / root(r);
  }
  const Eigen::MatrixXd A = root.asDiagonal() * M * inv_root.asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  return svd.singularValues()(0);
}

inline double max_abs(const Eigen::MatrixXd& M) { return M.cwiseAbs().maxCoeff(); }

}  // namespace oracle
