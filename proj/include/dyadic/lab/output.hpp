#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "experiments.hpp"
#include "lemmas.hpp"

namespace dyadic::lab {

using Cell = std::variant<std::monostate, std::string, long long, double, bool>;

/// Fixed-column table; every writer emits columns in declaration order.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

namespace detail {

inline Cell num(double x) { return std::isfinite(x) ? Cell{x} : Cell{}; }
inline Cell interval(const IntervalId& I) { return to_string(I); }

inline std::string csv_field(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<V, std::string>) {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) {
            if (ch == '"') q += '"';
            q += ch;
          }
          return q + '"';
        } else if constexpr (std::is_same_v<V, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<V, double>) {
          char buf[32];
          std::snprintf(buf, sizeof buf, "%.17g", v);
          return buf;
        } else {
          return v ? "true" : "false";
        }
      },
      c);
}

}  // namespace detail

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + detail::csv_field(row[i]);
    out += '\n';
  }
  return out;
}

inline nlohmann::ordered_json to_json(const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, std::monostate>)
              obj[t.columns[i]] = nullptr;
            else
              obj[t.columns[i]] = v;
          },
          row[i]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

// ---------------------------------------------------------------------------------------------

inline Table char_table(const std::vector<CharRow>& rows) {
  Table t{{"weight", "characteristic", "value", "witness", "relation_value", "relation_error"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.weight_id, r.characteristic, detail::num(r.value), detail::interval(r.witness),
                      detail::num(r.relation_value), detail::num(r.relation_error)});
  return t;
}

inline Table necessary_table(const NecessaryReport& rep) {
  Table t{{"I0", "L0", "direct", "closed_form", "rel_error", "normalized"}, {}};
  for (const auto& r : rep.rows)
    t.rows.push_back({detail::interval(r.i0), detail::interval(r.l0), detail::num(r.direct), detail::num(r.closed),
                      detail::num(r.rel_error), detail::num(r.normalized)});
  return t;
}

inline nlohmann::ordered_json necessary_summary(const NecessaryReport& rep) {
  return {{"weight", rep.weight_id},
          {"t", rep.t},
          {"p", rep.p},
          {"m", rep.m},
          {"n", rep.n},
          {"intervals", rep.rows.size()},
          {"max_rel_error", rep.max_rel_error},
          {"certified_bound", rep.certified},
          {"cs_truncated", rep.cs_truncated},
          {"cs_full", rep.cs_full},
          {"certified_consistent", rep.certified_consistent}};
}

/// Paraproduct sweeps leave the multiplier columns empty and vice versa.
inline Table bound_table(const SweepReport& rep, bool multiplier) {
  Table t;
  if (multiplier)
    t.columns = {"weight", "operator", "m", "n", "t", "measured_norm", "converged", "iterations",
                 "a2", "c2t", "a2_w2t", "denominator", "ratio"};
  else
    t.columns = {"weight", "operator", "m", "n", "measured_norm", "converged", "iterations",
                 "a2", "bmo", "denominator", "ratio"};
  for (const auto& r : rep.rows) {
    std::vector<Cell> row{r.weight_id, r.operator_id, static_cast<long long>(r.m), static_cast<long long>(r.n)};
    if (multiplier) row.push_back(detail::num(r.t));
    row.insert(row.end(), {detail::num(r.measured_norm), r.converged, static_cast<long long>(r.iterations),
                           detail::num(r.a2)});
    if (multiplier)
      row.insert(row.end(), {detail::num(r.c2t), detail::num(r.a2_w2t)});
    else
      row.push_back(detail::num(r.bmo));
    row.insert(row.end(), {detail::num(r.denominator), detail::num(r.ratio)});
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline Table slope_table(const SweepReport& rep) {
  Table t{{"weight_family", "operator", "points", "slope"}, {}};
  for (const auto& s : rep.slopes)
    t.rows.push_back({s.weight_family, s.operator_id, static_cast<long long>(s.points), detail::num(s.slope)});
  return t;
}

inline Table lemma_table(const LemmaSuiteReport& rep) {
  Table t{{"check", "pinned", "limit", "max_ratio", "passed", "evaluations", "weight", "witness", "lhs", "rhs"}, {}};
  for (const auto& c : rep.checks)
    t.rows.push_back({c.name, c.pinned, c.pinned ? detail::num(c.limit) : Cell{}, detail::num(c.max_ratio),
                      c.passed(), static_cast<long long>(c.evaluations), c.worst_weight, detail::interval(c.witness),
                      detail::num(c.lhs), detail::num(c.rhs)});
  return t;
}

inline Table norm_table(const NormRow& r) {
  return {{"weight", "operator", "norm", "converged", "iterations", "residual"},
          {{r.weight_id, r.operator_id, detail::num(r.estimate.value), r.estimate.converged,
            static_cast<long long>(r.estimate.iterations), detail::num(r.estimate.residual)}}};
}

/// Gnuplot script plotting ratio against the characteristic of a sweep CSV.
inline std::string gnuplot_script(const std::string& csv_path, bool multiplier) {
  // Column numbers follow bound_table.
  const std::string x = multiplier ? "(sqrt($10*$11))" : "8";
  const std::string xlabel = multiplier ? "sqrt([w]_{C_{2t}} [w^{2t}]_{A_2})" : "[w]_{A_2}";
  const std::string y = multiplier ? "13" : "11";
  return "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set logscale xy\n"
         "set xlabel '" + xlabel + "'\n"
         "set ylabel 'measured norm / denominator'\n"
         "set terminal pngcairo size 900,600\n"
         "set output '" + csv_path + ".png'\n"
         "plot '" + csv_path + "' using " + x + ":" + y + " with points pt 7 ps 0.6 title 'rows'\n";
}

}  // namespace dyadic::lab
