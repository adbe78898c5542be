#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "carleson.hpp"

namespace dyadic {

enum class StopCriterion {
  Oscillation,  // |Delta_K u| / m_K u + |Delta_K v| / m_K v >= 1 / order
  Depth,        // |K| = 2^-m |L|
};

struct StoppingMember {
  IntervalId interval;
  StopCriterion criterion = StopCriterion::Depth;
};

/// Maximal stopping intervals of L; they partition L into pieces of length >= 2^-m |L|.
struct StoppingFamily {
  IntervalId root;
  int m = 0;
  int order = 1;
  std::vector<StoppingMember> members;
};

/// Builds stopping families for a fixed pair of weights and fixed (m, order).
/// Averages of u and v are computed once and shared across every root.
class StoppingBuilder {
 public:
  StoppingBuilder(const Weight& u, const Weight& v, int m, int order)
      : grid_(u.grid()), m_(m), order_(order), u_(node_averages(u.function())), v_(node_averages(v.function())) {
    require_same_grid(u.grid(), v.grid(), "stopping time");
    if (m < 0) throw std::invalid_argument("stopping depth m must be nonnegative");
    if (order < 1) throw std::invalid_argument("stopping order must be at least 1");
  }

  int m() const { return m_; }
  int order() const { return order_; }
  const DyadicGrid& grid() const { return grid_; }

  bool admissible(const IntervalId& L) const { return grid_.contains(L) && L.level + m_ <= grid_.depth(); }

  /// Relative oscillation |Delta_K u| / m_K u + |Delta_K v| / m_K v; zero on leaves.
  double oscillation(const IntervalId& K) const {
    if (grid_.is_leaf(K)) return 0.0;
    const std::size_t p = K.heap();
    return std::abs(u_[2 * p + 1] - u_[2 * p]) / u_[p] + std::abs(v_[2 * p + 1] - v_[2 * p]) / v_[p];
  }

  bool oscillation_stops(const IntervalId& K) const { return oscillation(K) >= 1.0 / order_; }

  StoppingFamily operator()(const IntervalId& L) const {
    if (!admissible(L))
      throw std::invalid_argument("stopping depth m = " + std::to_string(m_) + " is too deep below " + to_string(L) +
                                  " for a grid of depth " + std::to_string(grid_.depth()));
    StoppingFamily family{L, m_, order_, {}};
    // Depth-first, left before right, so members come out in spatial order.
    std::vector<IntervalId> stack{L};
    while (!stack.empty()) {
      const IntervalId K = stack.back();
      stack.pop_back();
      if (oscillation_stops(K))
        family.members.push_back({K, StopCriterion::Oscillation});
      else if (K.level - L.level == m_)
        family.members.push_back({K, StopCriterion::Depth});
      else {
        stack.push_back(K.right());
        stack.push_back(K.left());
      }
    }
    return family;
  }

 private:
  DyadicGrid grid_;
  int m_;
  int order_;
  std::vector<double> u_;
  std::vector<double> v_;
};

inline StoppingFamily build_stopping(const Weight& u, const Weight& v, const IntervalId& L, int m, int order) {
  return StoppingBuilder(u, v, m, order)(L);
}

/// nu^m_L = sum over K in the stopping family of L of nu_K, for every L the builder admits.
template <class Builder>
IndexedSequence lift_sequence(const IndexedSequence& seq, const Builder& build) {
  const DyadicGrid& grid = seq.grid();
  IndexedSequence out(grid);
  for (std::size_t p = 1; p < grid.leaf_count(); ++p) {
    const IntervalId L = IntervalId::from_heap(p);
    if (!build.admissible(L)) continue;
    double s = 0.0;
    for (const StoppingMember& k : build(L).members) s += seq[k.interval];
    out.set(L, s);
  }
  return out;
}

inline nlohmann::json to_json(const StoppingFamily& family) {
  nlohmann::json members = nlohmann::json::array();
  for (const auto& k : family.members)
    members.push_back({{"level", k.interval.level},
                       {"index", k.interval.index},
                       {"criterion", k.criterion == StopCriterion::Oscillation ? "oscillation" : "depth"}});
  return {{"root", {{"level", family.root.level}, {"index", family.root.index}}},
          {"m", family.m},
          {"order", family.order},
          {"members", std::move(members)}};
}

}  // namespace dyadic
