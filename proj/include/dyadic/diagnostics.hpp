#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "carleson.hpp"
#include "haar.hpp"
#include "stopping.hpp"

// Per-interval quantities from the duality proofs of the paraproduct and multiplier bounds.
// Each sum runs over one generation below a fixed interval L.

namespace dyadic {

/// The exponent p = 2 - 1/(m + n + 2) used with the maximal function.
inline double complexity_exponent(int m, int n) { return 2.0 - 1.0 / static_cast<double>(m + n + 2); }

namespace detail {

inline void require_generation(const DyadicGrid& grid, const IntervalId& L, int gen, int below, const char* what) {
  grid.require(L);
  if (gen < 0 || L.level + gen + below > grid.depth())
    throw std::invalid_argument(std::string(what) + ": generation " + std::to_string(gen) + " below " + to_string(L) +
                                " does not fit a grid of depth " + std::to_string(grid.depth()));
}

inline double infimum_over(const StepFunction& f, const IntervalId& L) {
  const std::size_t first = f.grid().first_leaf(L);
  const auto begin = f.leaves().begin() + static_cast<std::ptrdiff_t>(first);
  return *std::min_element(begin, begin + static_cast<std::ptrdiff_t>(f.grid().leaf_span(L)));
}

}  // namespace detail

/// S^{v,m}_L phi = sum_{J in D_m(L)} |<phi, h_J^v>_v| sqrt(m_J v) sqrt(|J| / |L|).
inline double diagnostic_S(const Weight& v, const StepFunction& phi, const IntervalId& L, int m) {
  detail::require_generation(v.grid(), L, m, 1, "diagnostic S");
  const std::vector<double> v_avg = node_averages(v.function());
  const std::vector<double> pv_avg = node_averages(phi * v.function());
  double s = 0.0;
  for (std::size_t j = 0; j < (std::size_t{1} << m); ++j) {
    const IntervalId J{L.level + m, (L.index << m) + j};
    const WeightedHaarValues h = weighted_haar_values(v_avg, J);
    const double half = 0.5 * J.length();
    const double pairing = h.plus * half * pv_avg[2 * J.heap() + 1] + h.minus * half * pv_avg[2 * J.heap()];
    s += std::abs(pairing) * std::sqrt(v_avg[J.heap()]) * std::sqrt(J.length() / L.length());
  }
  return s;
}

/// Cauchy-Schwarz majorant of S: (sum_J <phi, h_J^v>_v^2)^{1/2} (m_L v)^{1/2}.
inline double diagnostic_S_bound(const Weight& v, const StepFunction& phi, const IntervalId& L, int m) {
  detail::require_generation(v.grid(), L, m, 1, "diagnostic S");
  const std::vector<double> v_avg = node_averages(v.function());
  const std::vector<double> pv_avg = node_averages(phi * v.function());
  double sq = 0.0;
  for (std::size_t j = 0; j < (std::size_t{1} << m); ++j) {
    const IntervalId J{L.level + m, (L.index << m) + j};
    const WeightedHaarValues h = weighted_haar_values(v_avg, J);
    const double half = 0.5 * J.length();
    const double pairing = h.plus * half * pv_avg[2 * J.heap() + 1] + h.minus * half * pv_avg[2 * J.heap()];
    sq += pairing * pairing;
  }
  return std::sqrt(sq) * std::sqrt(v_avg[L.heap()]);
}

/// R^{v,m}_L phi = sum_{J in D_m(L)} (|Delta_J v| / m_J v) m_J(|phi| v) |J| / sqrt|L|.
inline double diagnostic_R(const Weight& v, const StepFunction& phi, const IntervalId& L, int m) {
  detail::require_generation(v.grid(), L, m, 1, "diagnostic R");
  const std::vector<double> v_avg = node_averages(v.function());
  const std::vector<double> pv_avg = node_averages(phi.abs() * v.function());
  double s = 0.0;
  for (std::size_t j = 0; j < (std::size_t{1} << m); ++j) {
    const std::size_t p = (L.heap() << m) + j;
    const double osc = std::abs(v_avg[2 * p + 1] - v_avg[2 * p]) / v_avg[p];
    s += osc * pv_avg[p] * IntervalId::from_heap(p).length() / std::sqrt(L.length());
  }
  return s;
}

/// Pb^{w,n}_L phi = sum_{I in D_n(L)} |b_I| m_I(|phi| w) sqrt(|I| / |L|).
inline double diagnostic_Pb(const StepFunction& b, const Weight& w, const StepFunction& phi, const IntervalId& L,
                            int n) {
  require_same_grid(b.grid(), w.grid(), "diagnostic Pb");
  detail::require_generation(w.grid(), L, n, 1, "diagnostic Pb");
  const HaarSpectrum bs = haar_transform(b);
  const std::vector<double> pw_avg = node_averages(phi.abs() * w.function());
  double s = 0.0;
  for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
    const std::size_t p = (L.heap() << n) + i;
    s += std::abs(bs.coeffs[p]) * pw_avg[p] * std::sqrt(IntervalId::from_heap(p).length() / L.length());
  }
  return s;
}

/// Majorant of Pb with unit constant:
/// (m+n+2) (m_L w)^{1-s/2} (m_L w^{-1})^{-s/2} inf_L (M_w |phi|^p)^{1/p}
///   * (||b||_BMO sqrt(mu^{n,s}_L) + sqrt(mu^{b,n,s}_L)),
/// where the lifted sums run over the stopping family of L with u = w, v = w^{-1}.
inline double diagnostic_Pb_bound(const StepFunction& b, const Weight& w, const StepFunction& phi,
                                  const IntervalId& L, int m, int n, double s) {
  require_same_grid(b.grid(), w.grid(), "diagnostic Pb bound");
  detail::require_generation(w.grid(), L, n, 1, "diagnostic Pb bound");
  const int order = m + n + 2;
  const double p = complexity_exponent(m, n);
  const Weight w_inv = w.inverse();
  const std::vector<double> a = node_averages(w.function());
  const std::vector<double> ai = node_averages(w_inv.function());
  const IndexedSequence mu = tau_sequence(w, s);
  const HaarSpectrum bs = haar_transform(b);

  double mu_lift = 0.0;
  double mu_b_lift = 0.0;
  for (const StoppingMember& k : build_stopping(w, w_inv, L, n, order).members) {
    const std::size_t q = k.interval.heap();
    mu_lift += mu[k.interval];
    mu_b_lift += bs.coeffs[q] * bs.coeffs[q] * std::pow(a[q] * ai[q], s);
  }
  const double maximal = detail::infimum_over(weighted_maximal(phi.abs().pow(p), w), L);
  const double lp = std::pow(maximal, 1.0 / p);
  const double nu = bmo_norm(b) * std::sqrt(mu_lift) + std::sqrt(mu_b_lift);
  return order * std::pow(a[L.heap()], 1.0 - 0.5 * s) * std::pow(ai[L.heap()], -0.5 * s) * lp * nu;
}

/// Majorant of R^{w^{-1},m}_L g with unit constant:
/// (m+n+2) (m_L w)^{-s/2} (m_L w^{-1})^{1-s/2} inf_L (M_{w^{-1}} |g|^p)^{1/p} sqrt(mu^{m,s}_L).
inline double diagnostic_R_bound(const Weight& w, const StepFunction& g, const IntervalId& L, int m, int n, double s) {
  detail::require_generation(w.grid(), L, m, 1, "diagnostic R bound");
  const int order = m + n + 2;
  const double p = complexity_exponent(m, n);
  const Weight w_inv = w.inverse();
  const std::vector<double> a = node_averages(w.function());
  const std::vector<double> ai = node_averages(w_inv.function());
  const IndexedSequence mu = tau_sequence(w, s);
  double mu_lift = 0.0;
  for (const StoppingMember& k : build_stopping(w, w_inv, L, m, order).members) mu_lift += mu[k.interval];
  const double maximal = detail::infimum_over(weighted_maximal(g.abs().pow(p), w_inv), L);
  return order * std::pow(a[L.heap()], -0.5 * s) * std::pow(ai[L.heap()], 1.0 - 0.5 * s) *
         std::pow(maximal, 1.0 / p) * std::sqrt(mu_lift);
}

}  // namespace dyadic
