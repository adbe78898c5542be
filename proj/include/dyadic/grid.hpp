#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dyadic {

/// A dyadic subinterval [index * 2^-level, (index + 1) * 2^-level) of [0, 1).
///
/// Intervals are stored in a heap layout: the node at (level, index) lives at
/// position 2^level + index, so the root is 1, the children of p are 2p
/// (left half, I_-) and 2p + 1 (right half, I_+), and the parent is p / 2.
struct IntervalId {
  int level = 0;
  std::size_t index = 0;

  static constexpr IntervalId from_heap(std::size_t pos) {
    int lvl = 0;
    for (std::size_t p = pos; p > 1; p >>= 1) ++lvl;
    return {lvl, pos - (std::size_t{1} << lvl)};
  }

  constexpr std::size_t heap() const { return (std::size_t{1} << level) + index; }

  double length() const { return std::ldexp(1.0, -level); }
  double start() const { return std::ldexp(static_cast<double>(index), -level); }
  double end() const { return std::ldexp(static_cast<double>(index + 1), -level); }

  constexpr bool has_parent() const { return level > 0; }
  constexpr IntervalId parent() const { return {level - 1, index >> 1}; }
  constexpr IntervalId left() const { return {level + 1, 2 * index}; }
  constexpr IntervalId right() const { return {level + 1, 2 * index + 1}; }

  /// The ancestor k generations up (k = 0 is the interval itself).
  constexpr IntervalId ancestor(int k) const { return {level - k, index >> k}; }

  /// True when `other` is a (not necessarily proper) dyadic subinterval.
  constexpr bool contains(const IntervalId& other) const {
    return other.level >= level && (other.index >> (other.level - level)) == index;
  }

  friend constexpr bool operator==(const IntervalId&, const IntervalId&) = default;
  friend constexpr auto operator<=>(const IntervalId& a, const IntervalId& b) {
    return a.heap() <=> b.heap();
  }
};

inline std::string to_string(const IntervalId& I) {
  return "(" + std::to_string(I.level) + "," + std::to_string(I.index) + ")";
}

/// Finite dyadic tree of depth D on [0, 1): levels 0..D, 2^D leaves.
class DyadicGrid {
 public:
  static constexpr int kMaxDepth = 26;

  DyadicGrid() = default;
  explicit DyadicGrid(int depth) : depth_(depth) {
    if (depth < 1 || depth > kMaxDepth)
      throw std::invalid_argument("grid depth must lie in [1, " + std::to_string(kMaxDepth) +
                                  "], got " + std::to_string(depth));
  }

  int depth() const { return depth_; }
  std::size_t leaf_count() const { return std::size_t{1} << depth_; }
  /// Size of a heap-indexed table covering levels 0..D (position 0 unused).
  std::size_t table_size() const { return std::size_t{2} << depth_; }
  /// Number of internal nodes (levels 0..D-1); also the first leaf position.
  std::size_t internal_count() const { return leaf_count() - 1; }

  bool contains(const IntervalId& I) const {
    return I.level >= 0 && I.level <= depth_ && I.index < (std::size_t{1} << I.level);
  }
  bool is_leaf(const IntervalId& I) const { return I.level == depth_; }

  /// Half-open range of leaf indices covered by I.
  std::size_t first_leaf(const IntervalId& I) const { return I.index << (depth_ - I.level); }
  std::size_t leaf_span(const IntervalId& I) const { return std::size_t{1} << (depth_ - I.level); }

  IntervalId root() const { return {0, 0}; }
  IntervalId leaf(std::size_t k) const { return {depth_, k}; }

  void require(const IntervalId& I) const {
    if (!contains(I))
      throw std::invalid_argument("interval " + to_string(I) + " is not in a grid of depth " +
                                  std::to_string(depth_));
  }

  friend bool operator==(const DyadicGrid&, const DyadicGrid&) = default;

 private:
  int depth_ = 1;
};

inline void require_same_grid(const DyadicGrid& a, const DyadicGrid& b, const char* what) {
  if (a != b)
    throw std::invalid_argument(std::string(what) + ": grid depth mismatch (" +
                                std::to_string(a.depth()) + " vs " + std::to_string(b.depth()) + ")");
}

}  // namespace dyadic
