#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "io.hpp"
#include "random.hpp"
#include "weight.hpp"

namespace dyadic {

/// Multiplicative cascade: m_{I+-} w = m_I w (1 +- x_I), x_I ~ U[-delta, delta].
struct CascadeSpec {
  int depth = 10;
  double delta = 0.5;
  std::uint64_t seed = 1;
};

/// Exact cell averages of |x - x0|^a.
struct PowerSpec {
  int depth = 10;
  double exponent = 0.5;
  double center = 0.5;
};

struct FileSpec {
  std::string path;
};

using WeightFamilySpec = std::variant<CascadeSpec, PowerSpec, FileSpec>;

inline Weight generate(const CascadeSpec& spec) {
  if (!(spec.delta >= 0.0 && spec.delta < 1.0))
    throw std::invalid_argument("cascade delta must lie in [0, 1)");
  const DyadicGrid grid(spec.depth);
  std::vector<double> avg(grid.table_size(), 0.0);
  avg[1] = 1.0;
  UniformSource rng(spec.seed);
  for (std::size_t p = 1; p < grid.leaf_count(); ++p) {
    const double x = rng.symmetric(spec.delta);
    avg[2 * p] = avg[p] * (1.0 - x);
    avg[2 * p + 1] = avg[p] * (1.0 + x);
  }
  const auto first = avg.begin() + static_cast<std::ptrdiff_t>(grid.leaf_count());
  return Weight(grid, std::vector<double>(first, avg.end()));
}

inline Weight generate(const PowerSpec& spec) {
  if (!(spec.exponent > -1.0)) throw std::invalid_argument("power weight needs exponent a > -1");
  if (!(spec.center >= 0.0 && spec.center <= 1.0)) throw std::invalid_argument("power weight center must lie in [0, 1]");
  const DyadicGrid grid(spec.depth);
  const double a1 = spec.exponent + 1.0;
  const auto antiderivative = [&](double x) {
    const double d = x - spec.center;
    const double mag = std::pow(std::abs(d), a1) / a1;
    return d < 0.0 ? -mag : mag;
  };
  const std::size_t n = grid.leaf_count();
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> leaves(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double lo = static_cast<double>(k) * h;
    leaves[k] = (antiderivative(lo + h) - antiderivative(lo)) / h;
  }
  return Weight(grid, std::move(leaves));
}

inline Weight generate(const FileSpec& spec) { return Weight(load_step_function(spec.path)); }

inline Weight generate(const WeightFamilySpec& spec) {
  return std::visit([](const auto& s) { return generate(s); }, spec);
}

namespace detail {

inline std::map<std::string, std::string> parse_params(std::string_view body, std::string_view what) {
  std::map<std::string, std::string> out;
  while (!body.empty()) {
    const std::size_t comma = body.find(',');
    const std::string_view item = body.substr(0, comma);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw std::invalid_argument(std::string(what) + ": expected key=value, got '" + std::string(item) + "'");
    out[std::string(item.substr(0, eq))] = std::string(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return out;
}

inline double parse_double(const std::string& s, std::string_view key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty())
    throw std::invalid_argument("parameter " + std::string(key) + ": not a number: '" + s + "'");
  return v;
}

inline long long parse_int(const std::string& s, std::string_view key) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty())
    throw std::invalid_argument("parameter " + std::string(key) + ": not an integer: '" + s + "'");
  return v;
}

/// Pops `key` from params, returning nullopt when absent.
inline std::optional<std::string> take(std::map<std::string, std::string>& params, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  std::string v = it->second;
  params.erase(it);
  return v;
}

inline void reject_leftovers(const std::map<std::string, std::string>& params, std::string_view what) {
  if (!params.empty())
    throw std::invalid_argument(std::string(what) + ": unknown parameter '" + params.begin()->first + "'");
}

}  // namespace detail

/// Parses "cascade:depth=10,delta=0.6,seed=7", "power:depth=10,a=0.8,x0=0.5" or "file:PATH".
/// A missing depth falls back to `default_depth`.
inline WeightFamilySpec parse_weight_spec(std::string_view text, int default_depth) {
  const std::size_t colon = text.find(':');
  const std::string_view kind = text.substr(0, colon);
  const std::string_view body = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (kind == "file") {
    if (body.empty()) throw std::invalid_argument("file weight spec needs a path");
    return FileSpec{std::string(body)};
  }
  auto params = detail::parse_params(body, "weight spec");
  int depth = default_depth;
  if (auto d = detail::take(params, "depth")) depth = static_cast<int>(detail::parse_int(*d, "depth"));
  if (kind == "cascade") {
    CascadeSpec s{depth, 0.5, 1};
    if (auto v = detail::take(params, "delta")) s.delta = detail::parse_double(*v, "delta");
    if (auto v = detail::take(params, "seed")) s.seed = static_cast<std::uint64_t>(detail::parse_int(*v, "seed"));
    detail::reject_leftovers(params, "cascade weight spec");
    return s;
  }
  if (kind == "power") {
    PowerSpec s{depth, 0.5, 0.5};
    if (auto v = detail::take(params, "a")) s.exponent = detail::parse_double(*v, "a");
    if (auto v = detail::take(params, "x0")) s.center = detail::parse_double(*v, "x0");
    detail::reject_leftovers(params, "power weight spec");
    return s;
  }
  throw std::invalid_argument("unknown weight family '" + std::string(kind) + "'");
}

}  // namespace dyadic
