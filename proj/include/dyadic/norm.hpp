#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "operators.hpp"
#include "random.hpp"

namespace dyadic {

struct NormEstimate {
  double value = 0.0;
  int iterations = 0;
  double residual = 0.0;  // relative change of the estimate at the last step
  bool converged = false;
};

struct PowerIterationOptions {
  double tol = 1e-10;
  int max_iter = 2000;
  std::uint64_t seed = 12345;
};

namespace detail {

inline double euclidean_norm(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline StepFunction random_start(const DyadicGrid& grid, std::uint64_t seed) {
  UniformSource rng(seed);
  std::vector<double> x(grid.leaf_count());
  for (double& v : x) v = rng.symmetric(1.0);
  return StepFunction(grid, std::move(x));
}

}  // namespace detail

/// Largest singular value of an operator given by `forward` and `backward` (its transpose),
/// by power iteration on A^T A. The Rayleigh quotients only climb, so every returned
/// value is a lower bound for the norm up to roundoff. When the first start has not
/// converged halfway through the budget, a second start with a fresh seed is tried.
template <class Forward, class Backward>
NormEstimate power_iteration(const DyadicGrid& grid, Forward&& forward, Backward&& backward,
                             const PowerIterationOptions& opt) {
  NormEstimate best;
  int used = 0;
  for (int attempt = 0; attempt < 2 && !best.converged; ++attempt) {
    const int budget = attempt == 0 ? std::max(1, opt.max_iter / 2) : opt.max_iter - used;
    StepFunction x = detail::random_start(grid, opt.seed + static_cast<std::uint64_t>(attempt));
    x = (1.0 / detail::euclidean_norm(x.leaves())) * x;
    double prev = -1.0;
    for (int k = 0; k < budget; ++k) {
      ++used;
      const StepFunction y = forward(x);
      const double sigma = detail::euclidean_norm(y.leaves());
      const double change = prev < 0.0 ? 1.0 : std::abs(sigma - prev) / (sigma > 0.0 ? sigma : 1.0);
      if (sigma > best.value) best.value = sigma;
      best.iterations = used;
      best.residual = change;
      // A random start has no component in a proper kernel almost surely, so a zero image
      // means the zero operator.
      if (sigma == 0.0 || change < opt.tol) {
        best.converged = true;
        break;
      }
      prev = sigma;
      const StepFunction z = backward(y);
      const double nz = detail::euclidean_norm(z.leaves());
      if (nz == 0.0) {
        best.converged = true;
        break;
      }
      x = (1.0 / nz) * z;
    }
  }
  return best;
}

/// ||op||_{L^2(w) -> L^2(w)} as the top singular value of w^{1/2} op w^{-1/2}.
inline NormEstimate weighted_norm(const DyadicOperator& op, const Weight& w, const PowerIterationOptions& opt) {
  require_same_grid(op.grid(), w.grid(), "weighted norm");
  const StepFunction root = w.function().pow(0.5);
  const StepFunction inv_root = w.function().pow(-0.5);
  return power_iteration(
      op.grid(), [&](const StepFunction& x) { return root * op.apply(inv_root * x); },
      [&](const StepFunction& y) { return inv_root * op.apply_adjoint(root * y); }, opt);
}

inline NormEstimate weighted_norm(const OperatorSpec& spec, const Weight& w, double tol, int max_iter) {
  return weighted_norm(DyadicOperator(spec, w.grid()), w, PowerIterationOptions{tol, max_iter});
}

/// Plain L^2(dx) norm.
inline NormEstimate l2_norm(const DyadicOperator& op, const PowerIterationOptions& opt) {
  return power_iteration(
      op.grid(), [&](const StepFunction& x) { return op.apply(x); },
      [&](const StepFunction& y) { return op.apply_adjoint(y); }, opt);
}

}  // namespace dyadic
