#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "../norm.hpp"
#include "specs.hpp"

namespace dyadic::lab {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Generates a weight and checks it lives on the configured grid.
inline Weight weight_at_depth(const WeightFamilySpec& spec, int depth) {
  Weight w = generate(spec);
  if (w.depth() != depth)
    throw std::invalid_argument("weight '" + canonical(spec) + "' has depth " + std::to_string(w.depth()) +
                                ", expected " + std::to_string(depth));
  return w;
}

inline std::string canonical(const OperatorDescriptor& d) {
  std::string head;
  char buf[64];
  switch (d.kind) {
    case OperatorKind::Paraproduct:
      head = "para:";
      break;
    case OperatorKind::Shift:
      head = "shift:";
      break;
    case OperatorKind::Multiplier:
      std::snprintf(buf, sizeof buf, "tmult:t=%.17g,", d.t);
      head = buf;
      break;
  }
  std::string coeffs = "maximal";
  if (const auto* s = std::get_if<RandomSignCoefficients>(&d.coeffs.kind()))
    coeffs = "signs:seed=" + std::to_string(s->seed);
  else if (std::holds_alternative<CustomCoefficients>(d.coeffs.kind()))
    coeffs = "custom";
  return head + "m=" + std::to_string(d.m) + ",n=" + std::to_string(d.n) + ",coeffs=" + coeffs;
}

// ---------------------------------------------------------------------------------------------
// Characteristics

enum class CharKind { Ap, RH, Cs, Doubling };

struct CharRequest {
  CharKind kind = CharKind::Ap;
  double parameter = kNaN;
  std::string label;
};

/// "A:p", "RH:p", "C:s" or "D".
inline CharRequest parse_char_request(std::string_view text) {
  if (text == "D") return {CharKind::Doubling, kNaN, "D"};
  const std::size_t colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("characteristic '" + std::string(text) + "' needs a parameter");
  const std::string head(text.substr(0, colon));
  const double x = dyadic::detail::parse_double(std::string(text.substr(colon + 1)), head);
  if (head == "A") {
    if (!(x > 1.0)) throw std::invalid_argument("A_p needs p > 1");
    return {CharKind::Ap, x, std::string(text)};
  }
  if (head == "RH") {
    if (!(x > 1.0)) throw std::invalid_argument("RH_p needs p > 1");
    return {CharKind::RH, x, std::string(text)};
  }
  if (head == "C") return {CharKind::Cs, x, std::string(text)};
  throw std::invalid_argument("unknown characteristic '" + head + "'");
}

struct CharRow {
  std::string weight_id;
  std::string characteristic;
  double value = 0.0;
  IntervalId witness;
  // For C_s: the printed relation partner, rh(w,s) when s > 1 and ap(w,1-1/s)^{-s} when s < 0.
  double relation_value = kNaN;
  double relation_error = kNaN;
};

inline CharRow characteristic_row(const Weight& w, const std::string& weight_id, const CharRequest& r) {
  CharRow row{weight_id, r.label, 0.0, {}, kNaN, kNaN};
  CharacteristicReport rep;
  switch (r.kind) {
    case CharKind::Ap:
      rep = ap_characteristic(w, r.parameter);
      break;
    case CharKind::RH:
      rep = rh_characteristic(w, r.parameter);
      break;
    case CharKind::Doubling:
      rep = doubling_constant(w);
      break;
    case CharKind::Cs: {
      const double s = r.parameter;
      rep = cs_characteristic(w, s);
      if (s > 1.0) {
        row.relation_value = rh_characteristic(w, s).value;
        row.relation_error = std::abs(std::pow(rep.value, 1.0 / s) - row.relation_value) / row.relation_value;
      } else if (s < 0.0) {
        row.relation_value = std::pow(ap_characteristic(w, 1.0 - 1.0 / s).value, -s);
        row.relation_error = std::abs(rep.value - row.relation_value) / row.relation_value;
      }
      break;
    }
  }
  row.value = rep.value;
  row.witness = rep.witness;
  return row;
}

inline std::vector<CharRow> run_char(const std::vector<WeightFamilySpec>& weights, const std::vector<CharRequest>& requests,
                                     int depth) {
  std::vector<CharRow> rows;
  for (const auto& spec : weights) {
    const Weight w = weight_at_depth(spec, depth);
    for (const auto& r : requests) rows.push_back(characteristic_row(w, canonical(spec), r));
  }
  return rows;
}

// ---------------------------------------------------------------------------------------------
// Necessary condition for t-Haar multipliers

struct NecessaryRow {
  IntervalId i0;
  IntervalId l0;
  double direct = 0.0;  // ||T h_{I0}||_p^p by application and leafwise integration
  double closed = 0.0;  // |I0|^{p/2} / |L0|^{p-1} * m_{L0} w^{tp} / (m_{L0} w)^{tp}
  double rel_error = 0.0;
  double normalized = 0.0;  // (||T h_{I0}||_p / ||h_{I0}||_p)^p
};

struct NecessaryReport {
  std::string weight_id;
  double t = 1.0;
  double p = 2.0;
  int m = 0;
  int n = 0;
  std::vector<NecessaryRow> rows;
  double max_rel_error = 0.0;
  double certified = 0.0;     // 2^{n(p-1)} max_{I0} (||T h||_p / ||h||_p)^p
  double cs_truncated = 0.0;  // [w]_{C_tp} over the intervals that can play L0
  double cs_full = 0.0;       // [w]_{C_tp} over the whole grid
  bool certified_consistent = false;
};

/// Levels that I0 may occupy: its n-th ancestor must be a valid outer interval.
inline std::pair<int, int> admissible_i0_levels(int depth, int m, int n) {
  return {n, top_level_limit(depth, m, n) + n};
}

inline NecessaryReport run_necessary(const Weight& w, const std::string& weight_id, double t, double p, int m, int n,
                                     std::optional<IntervalId> only = std::nullopt) {
  if (!(p >= 1.0)) throw std::invalid_argument("necessary condition needs p >= 1");
  const DyadicGrid& grid = w.grid();
  const DyadicOperator op({HaarMultiplier{t, w}, m, n, MaximalCoefficients{}}, grid);
  const auto [lo, hi] = admissible_i0_levels(grid.depth(), m, n);

  std::vector<IntervalId> targets;
  if (only) {
    grid.require(*only);
    if (only->level < lo) throw std::invalid_argument("I0 = " + to_string(*only) + " is too shallow for n = " + std::to_string(n));
    if (only->level > hi) throw std::invalid_argument("I0 = " + to_string(*only) + " is too deep for (m, n) at this depth");
    targets.push_back(*only);
  } else {
    for (int level = lo; level <= hi; ++level)
      for (std::size_t k = 0; k < (std::size_t{1} << level); ++k) targets.push_back({level, k});
  }

  const std::vector<double> wa = node_averages(w.function());
  const std::vector<double> wtp = node_averages(w.function().pow(t * p));
  NecessaryReport rep{weight_id, t, p, m, n, {}, 0.0, 0.0, 0.0, 0.0, false};
  double best = 0.0;
  for (const IntervalId& i0 : targets) {
    const IntervalId l0 = i0.ancestor(n);
    const StepFunction h = StepFunction::haar(grid, i0);
    const double direct = lp_norm_pow(op.apply(h), p);
    const double closed = std::pow(i0.length(), 0.5 * p) / std::pow(l0.length(), p - 1.0) * wtp[l0.heap()] /
                          std::pow(wa[l0.heap()], t * p);
    const double err = std::abs(direct - closed) / closed;
    // ||h_{I0}||_p^p = |I0|^{1 - p/2}
    const double normalized = direct / std::pow(i0.length(), 1.0 - 0.5 * p);
    rep.rows.push_back({i0, l0, direct, closed, err, normalized});
    rep.max_rel_error = std::max(rep.max_rel_error, err);
    best = std::max(best, normalized);
  }
  rep.certified = std::pow(2.0, n * (p - 1.0)) * best;
  rep.cs_truncated = cs_characteristic_to_level(w, t * p, top_level_limit(grid.depth(), m, n)).value;
  rep.cs_full = cs_characteristic(w, t * p).value;
  // With every I0 scanned the certified bound is exactly the truncated characteristic.
  constexpr double slack = 1e-10;
  rep.certified_consistent = only ? rep.certified <= rep.cs_full * (1.0 + slack)
                                  : std::abs(rep.certified - rep.cs_truncated) <= slack * rep.cs_truncated &&
                                        rep.cs_truncated <= rep.cs_full * (1.0 + slack);
  return rep;
}

// ---------------------------------------------------------------------------------------------
// Bound sweeps

struct SweepConfig {
  int depth = 10;
  std::vector<WeightFamilySpec> weights;
  std::vector<OperatorDescriptor> operators;
  std::string symbol = "random:seed=1";
  PowerIterationOptions power{1e-8, 2000, 12345};
};

struct BoundRow {
  std::string weight_id;
  std::string weight_family;
  std::string operator_id;
  int m = 0;
  int n = 0;
  double t = 0.0;
  double measured_norm = 0.0;
  bool converged = false;
  int iterations = 0;
  double a2 = 0.0;      // [w]_{A_2}
  double c2t = 0.0;     // [w]_{C_{2t}}
  double a2_w2t = 0.0;  // [w^{2t}]_{A_2}
  double bmo = 0.0;     // ||b||_{BMO}
  double denominator = 0.0;
  double ratio = 0.0;
};

struct SlopeRow {
  std::string weight_family;
  std::string operator_id;
  int points = 0;
  double slope = kNaN;  // least squares slope of log(norm) against log(characteristic)
};

struct SweepReport {
  std::vector<BoundRow> rows;
  std::vector<SlopeRow> slopes;
};

inline double safe_ratio(double num, double den) { return num == 0.0 ? 0.0 : num / den; }

inline double power_of(int base, int e) { return std::pow(static_cast<double>(base), e); }

/// Groups rows by (weight family, operator) and fits log(norm) = a + slope * log(x(row)).
template <class X>
std::vector<SlopeRow> loglog_slopes(const std::vector<BoundRow>& rows, X&& x) {
  std::map<std::pair<std::string, std::string>, std::vector<std::pair<double, double>>> groups;
  std::vector<std::pair<std::string, std::string>> order;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.weight_family, r.operator_id);
    auto [it, fresh] = groups.try_emplace(key);
    if (fresh) order.push_back(key);
    if (r.measured_norm > 0.0 && x(r) > 0.0) it->second.emplace_back(std::log(x(r)), std::log(r.measured_norm));
  }
  std::vector<SlopeRow> out;
  for (const auto& key : order) {
    const auto& pts = groups[key];
    SlopeRow s{key.first, key.second, static_cast<int>(pts.size()), kNaN};
    if (pts.size() >= 2) {
      double mx = 0.0, my = 0.0;
      for (const auto& [a, b] : pts) {
        mx += a;
        my += b;
      }
      mx /= static_cast<double>(pts.size());
      my /= static_cast<double>(pts.size());
      double sxx = 0.0, sxy = 0.0;
      for (const auto& [a, b] : pts) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
      }
      if (sxx > 0.0) s.slope = sxy / sxx;
    }
    out.push_back(s);
  }
  return out;
}

/// ||pi_b^{m,n}||_{L^2(w)} against (m+n+2)^5 [w]_{A_2} ||b||_{BMO}.
inline SweepReport sweep_paraproduct(const SweepConfig& cfg) {
  const StepFunction b = parse_symbol_spec(cfg.symbol, cfg.depth);
  const double bmo = bmo_norm(b);
  SweepReport rep;
  for (const auto& spec : cfg.weights) {
    const Weight w = weight_at_depth(spec, cfg.depth);
    const double a2 = ap_characteristic(w, 2.0).value;
    for (const auto& d : cfg.operators) {
      if (d.kind != OperatorKind::Paraproduct) throw std::invalid_argument("sweep-para takes para operators only");
      const DyadicOperator op(bind(d, b, w), w.grid());
      const NormEstimate est = weighted_norm(op, w, cfg.power);
      BoundRow row{canonical(spec), weight_family_label(spec), canonical(d), d.m, d.n, 0.0, est.value, est.converged,
                   est.iterations, a2, kNaN, kNaN, bmo, 0.0, 0.0};
      row.denominator = power_of(d.m + d.n + 2, 5) * a2 * bmo;
      row.ratio = safe_ratio(row.measured_norm, row.denominator);
      rep.rows.push_back(std::move(row));
    }
  }
  rep.slopes = loglog_slopes(rep.rows, [](const BoundRow& r) { return r.a2; });
  return rep;
}

/// ||T^{m,n}_{t,w}||_{L^2} against (m+n+2)^3 [w]_{C_{2t}}^{1/2} [w^{2t}]_{A_2}^{1/2}.
inline SweepReport sweep_multiplier(const SweepConfig& cfg) {
  SweepReport rep;
  for (const auto& spec : cfg.weights) {
    const Weight w = weight_at_depth(spec, cfg.depth);
    const double a2 = ap_characteristic(w, 2.0).value;
    std::map<double, std::pair<double, double>> by_t;
    for (const auto& d : cfg.operators) {
      if (d.kind != OperatorKind::Multiplier) throw std::invalid_argument("sweep-mult takes tmult operators only");
      auto it = by_t.find(d.t);
      if (it == by_t.end())
        it = by_t.emplace(d.t, std::make_pair(cs_characteristic(w, 2.0 * d.t).value,
                                              ap_characteristic(w.pow(2.0 * d.t), 2.0).value))
                 .first;
      const auto [c2t, a2w] = it->second;
      const DyadicOperator op(bind(d, StepFunction{}, w), w.grid());
      const NormEstimate est = l2_norm(op, cfg.power);
      BoundRow row{canonical(spec), weight_family_label(spec), canonical(d), d.m, d.n, d.t, est.value, est.converged,
                   est.iterations, a2, c2t, a2w, kNaN, 0.0, 0.0};
      row.denominator = power_of(d.m + d.n + 2, 3) * std::sqrt(c2t) * std::sqrt(a2w);
      row.ratio = safe_ratio(row.measured_norm, row.denominator);
      rep.rows.push_back(std::move(row));
    }
  }
  rep.slopes = loglog_slopes(rep.rows, [](const BoundRow& r) { return std::sqrt(r.c2t * r.a2_w2t); });
  return rep;
}

struct RatioSpread {
  std::string operator_id;
  int rows = 0;
  double median = 0.0;
  double max = 0.0;
  bool all_finite = true;
};

/// Per operator, the median and the largest ratio across all weights.
inline std::vector<RatioSpread> ratio_spread(const std::vector<BoundRow>& rows) {
  std::vector<RatioSpread> out;
  std::map<std::string, std::vector<double>> groups;
  for (const auto& r : rows) {
    auto [it, fresh] = groups.try_emplace(r.operator_id);
    if (fresh) out.push_back({r.operator_id});
    it->second.push_back(r.ratio);
  }
  for (auto& s : out) {
    std::vector<double>& v = groups[s.operator_id];
    s.rows = static_cast<int>(v.size());
    for (double x : v) s.all_finite = s.all_finite && std::isfinite(x) && x >= 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    s.median = v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
    s.max = v.back();
  }
  return out;
}

// ---------------------------------------------------------------------------------------------
// Single norm

struct NormRow {
  std::string weight_id;
  std::string operator_id;
  NormEstimate estimate;
};

inline NormRow run_norm(const OperatorDescriptor& d, const WeightFamilySpec& spec, const std::string& symbol, int depth,
                        const PowerIterationOptions& opt) {
  const Weight w = weight_at_depth(spec, depth);
  const StepFunction b = d.kind == OperatorKind::Paraproduct ? parse_symbol_spec(symbol, depth) : StepFunction{};
  const DyadicOperator op(bind(d, b, w), w.grid());
  // Multipliers are measured on L^2(dx); the weight enters through the symbol.
  const NormEstimate est = d.kind == OperatorKind::Multiplier ? l2_norm(op, opt) : weighted_norm(op, w, opt);
  return {canonical(spec), canonical(d), est};
}

}  // namespace dyadic::lab
