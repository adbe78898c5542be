// dyadic-lab: experiment harness over the dyadic library.
// Exit codes: 0 success, 1 a checked assertion failed, 2 bad configuration.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyadic/dyadic.hpp"
#include "dyadic/lab/experiments.hpp"
#include "dyadic/lab/lemmas.hpp"
#include "dyadic/lab/output.hpp"

namespace {

using namespace dyadic;
using namespace dyadic::lab;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  int depth = 10;
  std::uint64_t seed = 12345;
  double tol = 1e-8;
  int max_iter = 2000;
  std::string out;
  std::string format = "csv";
};

struct CascadeGrid {
  int deltas = 20;
  int seeds = 10;
  double delta_max = 0.95;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + g.out);
  f << text;
}

void write_side_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

std::vector<WeightFamilySpec> parse_weights(const std::vector<std::string>& texts, int depth) {
  std::vector<WeightFamilySpec> out;
  for (const auto& t : texts) out.push_back(parse_weight_spec(t, depth));
  return out;
}

std::vector<WeightFamilySpec> cascade_grid(const CascadeGrid& c, int depth, std::uint64_t seed) {
  if (c.deltas < 1 || c.seeds < 1) throw ConfigError("cascade grid needs at least one delta and one seed");
  std::vector<WeightFamilySpec> out;
  for (int i = 1; i <= c.deltas; ++i)
    for (int j = 0; j < c.seeds; ++j)
      out.emplace_back(CascadeSpec{depth, c.delta_max * i / c.deltas, seed + static_cast<std::uint64_t>(j)});
  return out;
}

void require_depth(int depth, int max_m, int max_n) {
  if (depth < max_m + max_n + 2)
    throw ConfigError("depth " + std::to_string(depth) + " is below max(m) + max(n) + 2 = " +
                      std::to_string(max_m + max_n + 2));
}

void require_depth(int depth, const std::vector<OperatorDescriptor>& ops) {
  int mm = 0, nn = 0;
  for (const auto& d : ops) {
    mm = std::max(mm, d.m);
    nn = std::max(nn, d.n);
  }
  require_depth(depth, mm, nn);
}

std::optional<IntervalId> parse_interval(const std::string& text) {
  if (text.empty()) return std::nullopt;
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos) throw ConfigError("interval must be LEVEL:INDEX, got '" + text + "'");
  const long long level = dyadic::detail::parse_int(text.substr(0, colon), "level");
  const long long index = dyadic::detail::parse_int(text.substr(colon + 1), "index");
  if (level < 0 || index < 0) throw ConfigError("interval coordinates must be nonnegative");
  return IntervalId{static_cast<int>(level), static_cast<std::size_t>(index)};
}

std::string summary_lines(const nlohmann::ordered_json& summary) {
  std::string s;
  for (const auto& [k, v] : summary.items()) s += "# " + k + " = " + v.dump() + "\n";
  return s;
}

nlohmann::ordered_json spread_json(const std::vector<RatioSpread>& spread) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& s : spread)
    arr.push_back({{"operator", s.operator_id},
                   {"rows", s.rows},
                   {"median_ratio", s.median},
                   {"max_ratio", s.max},
                   {"all_finite", s.all_finite}});
  return arr;
}

int finish_sweep(const Globals& g, const SweepReport& rep, bool multiplier) {
  const auto spread = ratio_spread(rep.rows);
  bool finite = true;
  for (const auto& s : spread) finite = finite && s.all_finite;
  if (g.format == "json") {
    nlohmann::ordered_json doc{{"rows", to_json(bound_table(rep, multiplier))},
                               {"slopes", to_json(slope_table(rep))},
                               {"spread", spread_json(spread)}};
    emit(g, doc.dump(2) + "\n");
  } else {
    emit(g, to_csv(bound_table(rep, multiplier)));
    if (g.out.empty()) {
      std::cout << "\n" << to_csv(slope_table(rep));
    } else {
      write_side_file(g.out + ".slopes.csv", to_csv(slope_table(rep)));
      write_side_file(g.out + ".gp", gnuplot_script(g.out, multiplier));
    }
  }
  for (const auto& s : spread)
    std::fprintf(stderr, "%s: rows=%d median_ratio=%.6g max_ratio=%.6g\n", s.operator_id.c_str(), s.rows, s.median,
                 s.max);
  if (!finite) std::fprintf(stderr, "non-finite or negative ratio in sweep\n");
  return finite ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for dyadic weighted harmonic analysis"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--depth", g.depth, "Grid depth D (2^D leaves)")->check(CLI::Range(1, DyadicGrid::kMaxDepth));
  app.add_option("--seed", g.seed, "Base seed for random weights, symbols and start vectors");
  app.add_option("--tol", g.tol, "Power iteration tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", g.max_iter, "Power iteration budget")->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output file (stdout when absent)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  // char
  auto* c_char = app.add_subcommand("char", "Weight characteristics with witnesses");
  std::vector<std::string> char_weights;
  std::vector<std::string> char_requests{"A:2", "RH:2", "C:2", "C:-1", "D"};
  c_char->add_option("-w,--weight", char_weights, "Weight spec (repeatable)")->required();
  c_char->add_option("-c,--char", char_requests, "A:p, RH:p, C:s or D (repeatable)");

  // necessary
  auto* c_nec = app.add_subcommand("necessary", "Exact image norms of Haar functions under a t-Haar multiplier");
  std::string nec_weight;
  double nec_t = 1.0, nec_p = 2.0;
  int nec_m = 0, nec_n = 0;
  std::string nec_i0;
  c_nec->add_option("-w,--weight", nec_weight, "Weight spec")->required();
  c_nec->add_option("-t,--t", nec_t, "Multiplier exponent t");
  c_nec->add_option("-p,--p", nec_p, "Lebesgue exponent p")->check(CLI::Range(1.0, 1e6));
  c_nec->add_option("-m,--m", nec_m, "Output generation m")->check(CLI::NonNegativeNumber);
  c_nec->add_option("-n,--n", nec_n, "Input generation n")->check(CLI::NonNegativeNumber);
  c_nec->add_option("--i0", nec_i0, "Single interval LEVEL:INDEX (default: every admissible one)");

  // sweeps
  auto add_sweep = [&](const char* name, const char* help, std::vector<std::string>& weights, CascadeGrid& grid,
                       std::vector<std::string>& ops, int& m_max, int& n_max, std::string& coeffs) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("-w,--weight", weights, "Weight spec (repeatable); replaces the cascade grid");
    sc->add_option("--deltas", grid.deltas, "Cascade deltas: delta_max * i / deltas, i = 1..deltas");
    sc->add_option("--seeds", grid.seeds, "Cascade seeds per delta");
    sc->add_option("--delta-max", grid.delta_max, "Largest cascade delta")->check(CLI::Range(0.0, 0.999999));
    sc->add_option("--op", ops, "Operator spec (repeatable); replaces the (m, n) grid");
    sc->add_option("--m-max", m_max, "Largest m in the (m, n) grid")->check(CLI::NonNegativeNumber);
    sc->add_option("--n-max", n_max, "Largest n in the (m, n) grid")->check(CLI::NonNegativeNumber);
    sc->add_option("--coeffs", coeffs, "Coefficient family for the (m, n) grid");
    return sc;
  };
  std::vector<std::string> para_weights, para_ops, mult_weights, mult_ops;
  CascadeGrid para_grid, mult_grid;
  int para_m = 2, para_n = 2, mult_m = 2, mult_n = 2;
  std::string para_coeffs = "maximal", mult_coeffs = "maximal", para_symbol = "random:seed=1";
  std::vector<double> mult_t{1.0};
  auto* c_para = add_sweep("sweep-para", "Paraproduct norms against the A_2 / BMO bound", para_weights, para_grid,
                           para_ops, para_m, para_n, para_coeffs);
  c_para->add_option("--symbol", para_symbol, "Symbol b: random:seed=S, const:c=V or file:PATH");
  auto* c_mult = add_sweep("sweep-mult", "t-Haar multiplier norms against the C_2t / A_2 bound", mult_weights,
                           mult_grid, mult_ops, mult_m, mult_n, mult_coeffs);
  c_mult->add_option("-t,--t", mult_t, "Multiplier exponents (repeatable)");

  // verify-lemmas
  auto* c_ver = app.add_subcommand("verify-lemmas", "Pinned-constant inequality suite over cascade weights");
  LemmaSuiteConfig lemma_cfg;
  std::vector<std::string> ver_weights;
  c_ver->add_option("--seeds", lemma_cfg.seeds, "Number of cascade weights")->check(CLI::PositiveNumber);
  c_ver->add_option("--delta-max", lemma_cfg.delta_max, "Largest cascade delta")->check(CLI::Range(0.0, 0.999999));
  c_ver->add_option("-w,--weight", ver_weights, "Weight spec (repeatable); replaces the cascade suite");
  c_ver->add_option("--max-lift", lemma_cfg.max_lift, "Largest stopping depth m")->check(CLI::NonNegativeNumber);
  c_ver->add_option("--max-complexity", lemma_cfg.max_complexity, "Largest m, n for S, R, Pb")
      ->check(CLI::NonNegativeNumber);

  // norm
  auto* c_norm = app.add_subcommand("norm", "One operator norm by power iteration");
  std::string norm_op, norm_weight = "cascade:delta=0", norm_symbol = "random:seed=1";
  c_norm->add_option("--op", norm_op, "Operator spec")->required();
  c_norm->add_option("-w,--weight", norm_weight, "Weight spec");
  c_norm->add_option("--symbol", norm_symbol, "Paraproduct symbol");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const PowerIterationOptions power{g.tol, g.max_iter, g.seed};

    if (c_char->parsed()) {
      std::vector<CharRequest> reqs;
      for (const auto& r : char_requests) reqs.push_back(parse_char_request(r));
      const auto rows = run_char(parse_weights(char_weights, g.depth), reqs, g.depth);
      const Table t = char_table(rows);
      emit(g, g.format == "json" ? to_json(t).dump(2) + "\n" : to_csv(t));
      for (const auto& r : rows)
        if (std::isfinite(r.relation_error) && r.relation_error > 1e-12) {
          std::fprintf(stderr, "relation check failed for %s on %s: error %.3g\n", r.characteristic.c_str(),
                       r.weight_id.c_str(), r.relation_error);
          return 1;
        }
      return 0;
    }

    if (c_nec->parsed()) {
      require_depth(g.depth, nec_m, nec_n);
      const WeightFamilySpec spec = parse_weight_spec(nec_weight, g.depth);
      const Weight w = weight_at_depth(spec, g.depth);
      const NecessaryReport rep =
          run_necessary(w, canonical(spec), nec_t, nec_p, nec_m, nec_n, parse_interval(nec_i0));
      const nlohmann::ordered_json summary = necessary_summary(rep);
      if (g.format == "json") {
        nlohmann::ordered_json doc = summary;
        doc["rows"] = to_json(necessary_table(rep));
        emit(g, doc.dump(2) + "\n");
      } else {
        emit(g, to_csv(necessary_table(rep)));
      }
      std::cerr << summary_lines(summary);
      return rep.max_rel_error < 1e-12 && rep.certified_consistent ? 0 : 1;
    }

    if (c_para->parsed() || c_mult->parsed()) {
      const bool mult = c_mult->parsed();
      SweepConfig cfg;
      cfg.depth = g.depth;
      cfg.power = power;
      const auto& weights = mult ? mult_weights : para_weights;
      cfg.weights = weights.empty() ? cascade_grid(mult ? mult_grid : para_grid, g.depth, g.seed)
                                    : parse_weights(weights, g.depth);
      const auto& ops = mult ? mult_ops : para_ops;
      if (!ops.empty()) {
        for (const auto& o : ops) cfg.operators.push_back(parse_operator_spec(o));
      } else {
        const int mm = mult ? mult_m : para_m;
        const int nn = mult ? mult_n : para_n;
        const std::string& coeffs = mult ? mult_coeffs : para_coeffs;
        for (double t : mult ? mult_t : std::vector<double>{0.0})
          for (int m = 0; m <= mm; ++m)
            for (int n = 0; n <= nn; ++n) {
              OperatorDescriptor d;
              d.kind = mult ? OperatorKind::Multiplier : OperatorKind::Paraproduct;
              d.m = m;
              d.n = n;
              d.t = t;
              d.coeffs = parse_coefficients(coeffs);
              cfg.operators.push_back(d);
            }
      }
      require_depth(g.depth, cfg.operators);
      if (!mult) cfg.symbol = para_symbol;
      const SweepReport rep = mult ? sweep_multiplier(cfg) : sweep_paraproduct(cfg);
      return finish_sweep(g, rep, mult);
    }

    if (c_ver->parsed()) {
      lemma_cfg.depth = g.depth;
      lemma_cfg.seed = g.seed;
      lemma_cfg.weights = parse_weights(ver_weights, g.depth);
      require_depth(g.depth, 0, std::min(lemma_cfg.max_complexity, g.depth));
      const LemmaSuiteReport rep = verify_lemmas(lemma_cfg);
      const Table t = lemma_table(rep);
      emit(g, g.format == "json" ? to_json(t).dump(2) + "\n" : to_csv(t));
      for (const auto& c : rep.checks)
        if (!c.passed())
          std::fprintf(stderr, "FAILED %s: ratio %.17g > %.17g at %s on %s (lhs %.17g, rhs %.17g)\n", c.name.c_str(),
                       c.max_ratio, c.limit, to_string(c.witness).c_str(), c.worst_weight.c_str(), c.lhs, c.rhs);
      std::fprintf(stderr, "%d weights, %s\n", rep.weights, rep.passed() ? "all pinned checks passed" : "FAILED");
      return rep.passed() ? 0 : 1;
    }

    if (c_norm->parsed()) {
      const OperatorDescriptor d = parse_operator_spec(norm_op);
      require_depth(g.depth, d.m, d.n);
      const NormRow row = run_norm(d, parse_weight_spec(norm_weight, g.depth), norm_symbol, g.depth, power);
      const Table t = norm_table(row);
      emit(g, g.format == "json" ? to_json(t).dump(2) + "\n" : to_csv(t));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
