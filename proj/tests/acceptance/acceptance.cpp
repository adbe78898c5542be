// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "dyadic/dyadic.hpp"
#include "dyadic/lab/output.hpp"

using namespace dyadic;
using namespace dyadic::lab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

/// Runs body(i) for i in [0, count) on all hardware threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16u));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < workers; ++k)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  for (auto& t : pool) t.join();
}

/// Thread-safe running maximum that remembers where it was attained.
struct Worst {
  std::mutex mu;
  double value = 0.0;
  std::string where;
  void update(double v, const std::string& at) {
    std::lock_guard lock(mu);
    if (!(v <= value)) {  // NaN wins, so it surfaces
      value = v;
      where = at;
    }
  }
};

std::vector<Weight> cascade_weights(int depth, int count, double delta_max, std::uint64_t seed) {
  std::vector<Weight> out;
  for (const auto& s : cascade_suite(depth, count, delta_max, seed)) out.push_back(generate(s));
  return out;
}

Outcome exact_identity() {
  const std::vector<Weight> weights = cascade_weights(10, 50, 0.99, 1000);
  const double ts[] = {-0.5, 0.5, 1.0};
  const double ps[] = {1.5, 2.0, 3.0};
  Worst err;
  std::atomic<long> configs{0}, intervals{0}, inconsistent{0};
  parallel_for(weights.size() * 9, [&](std::size_t job) {
    const Weight& w = weights[job / 9];
    const int m = static_cast<int>(job % 9) / 3;
    const int n = static_cast<int>(job % 9) % 3;
    for (double t : ts)
      for (double p : ps) {
        const NecessaryReport r = run_necessary(w, "w", t, p, m, n);
        err.update(r.max_rel_error, fmt("weight %zu t=%g p=%g (m,n)=(%d,%d)", job / 9, t, p, m, n));
        if (!r.certified_consistent) ++inconsistent;
        ++configs;
        intervals += static_cast<long>(r.rows.size());
      }
  });
  return {err.value < 1e-11 && inconsistent == 0,
          fmt("%ld configurations, %ld Haar functions, max rel error %.3g at %s (limit 1e-11), %ld inconsistent bounds",
              configs.load(), intervals.load(), err.value, err.where.c_str(), inconsistent.load())};
}

Outcome gram() {
  const std::vector<Weight> weights = cascade_weights(8, 100, 0.99, 2000);
  Worst dev;
  parallel_for(weights.size(), [&](std::size_t k) {
    const Weight& v = weights[k];
    const DyadicGrid& g = v.grid();
    const auto N = static_cast<Eigen::Index>(g.leaf_count());
    Eigen::MatrixXd H(N, N - 1);
    for (std::size_t p = 1; p < g.leaf_count(); ++p) {
      const StepFunction h = weighted_haar(v, IntervalId::from_heap(p));
      for (Eigen::Index r = 0; r < N; ++r) H(r, static_cast<Eigen::Index>(p - 1)) = h[static_cast<std::size_t>(r)];
    }
    Eigen::VectorXd vv(N);
    for (Eigen::Index r = 0; r < N; ++r) vv(r) = v[static_cast<std::size_t>(r)];
    const Eigen::MatrixXd G = H.transpose() * vv.asDiagonal() * H / static_cast<double>(N);
    const Eigen::VectorXd means = H.transpose() * vv / static_cast<double>(N);
    const double d = std::max((G - Eigen::MatrixXd::Identity(N - 1, N - 1)).cwiseAbs().maxCoeff(), means.cwiseAbs().maxCoeff());
    dev.update(d, fmt("weight %zu", k));
  });
  return {dev.value < 1e-10, fmt("100 weights at depth 8, max Gram deviation %.3g at %s (limit 1e-10)", dev.value, dev.where.c_str())};
}

Outcome decomposition() {
  const std::vector<Weight> weights = cascade_weights(8, 100, 0.99, 3000);
  Worst recon, alpha, beta;
  parallel_for(weights.size(), [&](std::size_t k) {
    const Weight& v = weights[k];
    const DyadicGrid& g = v.grid();
    const std::vector<double> avg = node_averages(v.function());
    for (std::size_t p = 1; p < g.leaf_count(); ++p) {
      const IntervalId I = IntervalId::from_heap(p);
      const auto d = decompose_haar(v, I);
      const StepFunction rebuilt =
          d.alpha * weighted_haar(v, I) + (d.beta / std::sqrt(I.length())) * StepFunction::indicator(g, I);
      const StepFunction h = StepFunction::haar(g, I);
      double e = 0.0;
      for (std::size_t x = 0; x < h.size(); ++x) e = std::max(e, std::abs(rebuilt[x] - h[x]));
      const std::string at = fmt("weight %zu I=%s", k, to_string(I).c_str());
      recon.update(e, at);
      alpha.update(std::abs(d.alpha) / std::sqrt(avg[p]), at);
      const double osc = std::abs(avg[2 * p + 1] - avg[2 * p]) / avg[p];
      beta.update(osc > 0.0 ? std::abs(d.beta) / osc : (d.beta == 0.0 ? 0.0 : INFINITY), at);
    }
  });
  const bool ok = recon.value < 1e-12 && alpha.value <= 1.0 + 1e-12 && beta.value <= 1.0 + 1e-12;
  return {ok, fmt("100 weights at depth 8, max reconstruction error %.3g (limit 1e-12), max |alpha|/sqrt(m v) %.6f, "
                  "max |beta|/(|Delta v|/m v) %.6f (limits 1)",
                  recon.value, alpha.value, beta.value)};
}

Outcome contractivity() {
  const DyadicGrid g(10);
  Worst norm;
  std::atomic<int> unconverged{0};
  parallel_for(50 * 16, [&](std::size_t job) {
    const std::uint64_t draw = job / 16 + 1;
    const int m = static_cast<int>(job % 16) / 4;
    const int n = static_cast<int>(job % 16) % 4;
    const DyadicOperator op(OperatorSpec{HaarShift{}, m, n, RandomSignCoefficients{draw}}, g);
    const NormEstimate e = l2_norm(op, PowerIterationOptions{1e-10, 2000, 7 + draw});
    if (!e.converged) ++unconverged;
    norm.update(e.value, fmt("draw %llu (m,n)=(%d,%d)", static_cast<unsigned long long>(draw), m, n));
  });
  return {norm.value <= 1.0 + 1e-8,
          fmt("800 shifts at depth 10, max norm %.12f at %s (limit 1 + 1e-8), %d hit the iteration cap", norm.value,
              norm.where.c_str(), unconverged.load())};
}

Outcome lemma_suite() {
  const LemmaSuiteReport rep = verify_lemmas(LemmaSuiteConfig{});
  std::string failed;
  int pinned = 0;
  for (const auto& c : rep.checks) {
    if (c.pinned) ++pinned;
    if (!c.passed()) failed += " " + c.name + fmt("(%.4g > %.4g)", c.max_ratio, c.limit);
  }
  std::string detail = fmt("%d cascade weights at depth 10, %d pinned checks", rep.weights, pinned);
  for (const auto& c : rep.checks)
    if (c.pinned && (c.name.rfind("little-lemma", 0) == 0 || c.name.rfind("nu-", 0) == 0 ||
                     c.name.rfind("lifted-intensity:m=4", 0) == 0 || c.name.rfind("lift-lemma-averages:m=4", 0) == 0))
      detail += fmt("; %s ratio %.4g (limit %.4g)", c.name.c_str(), c.max_ratio, c.limit);
  if (!failed.empty()) detail += "; failed:" + failed;
  return {rep.passed(), detail};
}

Outcome dense_oracle() {
  double apply_err = 0.0, adjoint_err = 0.0, norm_err = 0.0;
  std::string norm_at;
  int cases = 0;
  for (int depth = 3; depth <= 6; ++depth) {
    const DyadicGrid g(depth);
    const Weight w = generate(CascadeSpec{depth, 0.8, static_cast<std::uint64_t>(depth)});
    const StepFunction b = random_symbol(g, static_cast<std::uint64_t>(depth));
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 2; ++n) {
        if (top_level_limit(depth, m, n) < 0) continue;
        const CoefficientFamily c = RandomSignCoefficients{static_cast<std::uint64_t>(10 * depth + 3 * m + n)};
        const OperatorSpec specs[] = {{Paraproduct{b}, m, n, c}, {HaarShift{}, m, n, c}, {HaarMultiplier{0.5, w}, m, n, c}};
        for (const auto& spec : specs) {
          const DyadicOperator op(spec, g);
          const auto N = static_cast<Eigen::Index>(g.leaf_count());
          Eigen::MatrixXd A(N, N), At(N, N);
          for (Eigen::Index k = 0; k < N; ++k) {
            std::vector<double> e(g.leaf_count(), 0.0);
            e[static_cast<std::size_t>(k)] = 1.0;
            const StepFunction x(g, e);
            const StepFunction y = op.apply(x);
            const StepFunction z = op.apply_adjoint(x);
            for (Eigen::Index r = 0; r < N; ++r) {
              A(r, k) = y[static_cast<std::size_t>(r)];
              At(r, k) = z[static_cast<std::size_t>(r)];
            }
          }
          // Entry (r, k) of the operator on leaves, straight from the double sum.
          Eigen::MatrixXd D = Eigen::MatrixXd::Zero(N, N);
          const std::vector<double> wa = node_averages(w.function());
          for (int level = 0; level <= top_level_limit(depth, m, n); ++level)
            for (std::size_t l = 0; l < (std::size_t{1} << level); ++l) {
              const IntervalId L{level, l};
              for (std::size_t i = 0; i < (std::size_t{1} << n); ++i)
                for (std::size_t j = 0; j < (std::size_t{1} << m); ++j) {
                  const IntervalId I{level + n, (l << n) + i};
                  const IntervalId J{level + m, (l << m) + j};
                  const double coef = spec.coeffs(L, I, J);
                  const StepFunction hI = StepFunction::haar(g, I);
                  const StepFunction hJ = StepFunction::haar(g, J);
                  const double bI = inner(b, hI);
                  for (Eigen::Index r = 0; r < N; ++r) {
                    const auto rr = static_cast<std::size_t>(r);
                    double out = coef * hJ[rr];
                    if (std::holds_alternative<HaarMultiplier>(spec.family)) out *= std::pow(w[rr] / wa[L.heap()], 0.5);
                    for (Eigen::Index k = 0; k < N; ++k) {
                      const auto kk = static_cast<std::size_t>(k);
                      double in = hI[kk] / static_cast<double>(N);
                      if (std::holds_alternative<Paraproduct>(spec.family))
                        in = I.contains(g.leaf(kk)) ? bI / (static_cast<double>(N) * I.length()) : 0.0;
                      D(r, k) += out * in;
                    }
                  }
                }
            }
          const double scale = std::max(1.0, D.cwiseAbs().maxCoeff());
          apply_err = std::max(apply_err, (A - D).cwiseAbs().maxCoeff() / scale);
          adjoint_err = std::max(adjoint_err, (At - D.transpose()).cwiseAbs().maxCoeff() / scale);

          Eigen::VectorXd root(N), inv(N);
          for (Eigen::Index r = 0; r < N; ++r) {
            root(r) = std::sqrt(w[static_cast<std::size_t>(r)]);
            inv(r) = 1.0 / root(r);
          }
          const Eigen::MatrixXd S = root.asDiagonal() * D * inv.asDiagonal();
          const double svd = Eigen::JacobiSVD<Eigen::MatrixXd>(S).singularValues()(0);
          const double est = weighted_norm(op, w, PowerIterationOptions{1e-14, 50000, 5}).value;
          const double rel = svd > 0 ? std::abs(est - svd) / svd : std::abs(est);
          if (rel > norm_err) {
            norm_err = rel;
            norm_at = fmt("depth %d (m,n)=(%d,%d) family %zu", depth, m, n, spec.family.index());
          }
          ++cases;
        }
      }
  }
  const bool ok = apply_err <= 1e-12 && adjoint_err <= 1e-12 && norm_err <= 1e-6;
  return {ok, fmt("%d operators at depths 3..6, max entry error apply %.3g adjoint %.3g (limit 1e-12), "
                  "max norm rel error %.3g at %s (limit 1e-6)",
                  cases, apply_err, adjoint_err, norm_err, norm_at.c_str())};
}

Outcome sweeps() {
  SweepConfig cfg;
  cfg.depth = 10;
  for (int i = 1; i <= 20; ++i)
    for (int j = 0; j < 10; ++j)
      cfg.weights.push_back(CascadeSpec{10, 0.95 * i / 20.0, static_cast<std::uint64_t>(12345 + j)});
  const auto grid_ops = [](const std::string& head) {
    std::vector<OperatorDescriptor> ops;
    for (int m = 0; m <= 2; ++m)
      for (int n = 0; n <= 2; ++n) ops.push_back(parse_operator_spec(head + "m=" + std::to_string(m) + ",n=" + std::to_string(n)));
    return ops;
  };
  std::vector<SweepReport> reports(4);
  const std::vector<std::string> heads{"para:", "tmult:t=-0.5,", "tmult:t=0.5,", "tmult:t=1,"};
  parallel_for(4, [&](std::size_t k) {
    SweepConfig c = cfg;
    c.operators = grid_ops(heads[k]);
    reports[k] = k == 0 ? sweep_paraproduct(c) : sweep_multiplier(c);
  });

  bool finite = true, bounded = true;
  double worst_spread = 0.0;
  std::string worst_op;
  std::size_t rows = 0;
  for (const auto& rep : reports) {
    rows += rep.rows.size();
    for (const auto& r : rep.rows)
      finite = finite && std::isfinite(r.measured_norm) && std::isfinite(r.denominator) && std::isfinite(r.ratio);
    for (const auto& s : ratio_spread(rep.rows)) {
      finite = finite && s.all_finite;
      const double spread = s.median > 0 ? s.max / s.median : (s.max == 0 ? 0.0 : INFINITY);
      if (spread > worst_spread) {
        worst_spread = spread;
        worst_op = s.operator_id;
      }
      bounded = bounded && spread <= 10.0;
    }
  }
  double max_slope = -INFINITY;
  for (const auto& s : reports[0].slopes) max_slope = std::max(max_slope, s.slope);
  finite = finite && std::isfinite(max_slope);
  return {finite && bounded,
          fmt("%zu rows, all finite: %s, worst max/median ratio %.3f for %s (limit 10); "
              "soft metric: max paraproduct log-log slope vs A_2 %.3f (target <= 1.1, %s)",
              rows, finite ? "yes" : "no", worst_spread, worst_op.c_str(), max_slope, max_slope <= 1.1 ? "met" : "not met")};
}

std::string render_everything() {
  std::string out;
  const std::vector<WeightFamilySpec> ws{CascadeSpec{8, 0.9, 77}, PowerSpec{8, -0.4, 0.3}};
  out += to_csv(char_table(run_char(ws, {parse_char_request("A:2"), parse_char_request("C:3"), parse_char_request("D")}, 8)));
  const NecessaryReport nr = run_necessary(generate(ws[0]), "w", 0.5, 3.0, 1, 2);
  out += to_csv(necessary_table(nr)) + necessary_summary(nr).dump();

  SweepConfig cfg;
  cfg.depth = 8;
  cfg.weights = cascade_suite(8, 6, 0.9, 5);
  cfg.operators = {parse_operator_spec("para:m=1,n=0"), parse_operator_spec("para:m=0,n=2,coeffs=signs:seed=4")};
  const SweepReport para = sweep_paraproduct(cfg);
  out += to_csv(bound_table(para, false)) + to_csv(slope_table(para)) + to_json(bound_table(para, false)).dump();
  cfg.operators = {parse_operator_spec("tmult:t=0.5,m=1,n=1")};
  const SweepReport mult = sweep_multiplier(cfg);
  out += to_csv(bound_table(mult, true)) + to_json(slope_table(mult)).dump();

  LemmaSuiteConfig lc;
  lc.depth = 7;
  lc.seeds = 5;
  out += to_csv(lemma_table(verify_lemmas(lc)));
  out += to_json(norm_table(run_norm(parse_operator_spec("tmult:t=-0.5,m=2,n=0"), ws[0], "random:seed=2", 8, {}))).dump();
  return out;
}

Outcome determinism() {
  const std::string a = render_everything();
  const std::string b = render_everything();
  std::size_t first = 0;
  while (first < std::min(a.size(), b.size()) && a[first] == b[first]) ++first;
  return {a == b && !a.empty(), a == b ? fmt("two in-process runs, %zu bytes of CSV/JSON, byte-identical", a.size())
                                       : fmt("outputs differ at byte %zu", first)};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"exact identity for T h_I0", exact_identity},
      {"weighted Haar orthonormality", gram},
      {"two-term decomposition of h_I", decomposition},
      {"Haar shift contractivity", contractivity},
      {"pinned-constant lemma suite", lemma_suite},
      {"dense oracle agreement", dense_oracle},
      {"bound sweeps", sweeps},
      {"determinism", determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  [%d] %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", index, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of 8 criteria passed\n", 8 - failures);
  return failures == 0 ? 0 : 1;
}
