#include <catch2/catch_amalgamated.hpp>

#include "../support.hpp"

using namespace dyadic;
using Catch::Approx;

namespace {

double relative_oscillation(const Weight& w, const IntervalId& K) {
  return std::abs(oracle::delta(w.function(), K)) / oracle::mean(w.function(), K);
}

}  // namespace

TEST_CASE("stopping on constant weights stops at depth m", "[stopping]") {
  const Weight one = Weight::lebesgue(DyadicGrid(6));
  const StoppingFamily f = build_stopping(one, one, {1, 1}, 2, 3);
  REQUIRE(f.members.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(f.members[k].interval == IntervalId{3, 4 + k});
    CHECK(f.members[k].criterion == StopCriterion::Depth);
  }
  // m = 0 returns L itself
  const StoppingFamily g = build_stopping(one, one, {2, 1}, 0, 1);
  REQUIRE(g.members.size() == 1);
  CHECK(g.members[0].interval == IntervalId{2, 1});
}

TEST_CASE("stopping on a hand example", "[stopping]") {
  // u jumps only inside the right half of [0,1/2)
  const Weight u(DyadicGrid(3), {1, 1, 1, 3, 1, 1, 1, 1});
  const Weight one = Weight::lebesgue(DyadicGrid(3));
  const StoppingFamily f = build_stopping(u, one, {0, 0}, 3, 1);
  std::vector<IntervalId> got;
  for (const auto& k : f.members) got.push_back(k.interval);
  // root 0.4, (1,0) 2/3, (2,1) exactly 1: only (2,1) reaches the order-1 threshold
  const std::vector<IntervalId> want1{{3, 0}, {3, 1}, {2, 1}, {3, 4}, {3, 5}, {3, 6}, {3, 7}};
  CHECK(got == want1);
  CHECK(f.members[2].criterion == StopCriterion::Oscillation);

  const StoppingFamily h = build_stopping(u, one, {0, 0}, 3, 2);
  got.clear();
  for (const auto& k : h.members) got.push_back(k.interval);
  // order 2: threshold 1/2; (1,0) has 2/3 and stops, (2,1) would too but lies inside
  const std::vector<IntervalId> want{{1, 0}, {3, 4}, {3, 5}, {3, 6}, {3, 7}};
  CHECK(got == want);
  CHECK(h.members[0].criterion == StopCriterion::Oscillation);
  CHECK(h.members[1].criterion == StopCriterion::Depth);

  const nlohmann::json j = to_json(h);
  CHECK(j["members"].size() == 5);
  CHECK(j["members"][0]["criterion"] == "oscillation");
  CHECK(j["order"] == 2);
}

TEST_CASE("stopping families partition L", "[stopping][property]") {
  const DyadicGrid g(9);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Weight u = generate(CascadeSpec{9, 0.9, seed});
    const Weight v = u.inverse();
    for (int m : {0, 1, 3}) {
      for (int order : {1, 2, 5}) {
        const StoppingBuilder build(u, v, m, order);
        for (const auto& L : oracle::all_intervals(g)) {
          if (!build.admissible(L)) {
            CHECK(L.level + m > g.depth());
            continue;
          }
          const StoppingFamily f = build(L);
          double covered = 0.0;
          double prev_end = L.start();
          for (const auto& k : f.members) {
            const IntervalId& K = k.interval;
            REQUIRE(L.contains(K));
            REQUIRE(K.level - L.level <= m);
            REQUIRE(K.start() == prev_end);  // spatial order, disjoint, no gaps
            prev_end = K.end();
            covered += K.length();
            const double osc = relative_oscillation(u, K) + relative_oscillation(v, K);
            if (k.criterion == StopCriterion::Oscillation)
              REQUIRE(osc >= 1.0 / order - 1e-12);
            else
              REQUIRE(K.level - L.level == m);
            // maximality: no strict ancestor below L stops
            for (int up = 1; up <= K.level - L.level; ++up) {
              const IntervalId A = K.ancestor(up);
              REQUIRE(relative_oscillation(u, A) + relative_oscillation(v, A) < 1.0 / order + 1e-12);
            }
          }
          REQUIRE(covered == Approx(L.length()));
          REQUIRE(prev_end == L.end());
        }
      }
    }
  }
}

TEST_CASE("an interval is a stopping member of at most m+1 roots", "[stopping][property]") {
  const DyadicGrid g(8);
  const Weight u = generate(CascadeSpec{8, 0.95, 4});
  const Weight v = u.inverse();
  for (int m : {1, 2, 4}) {
    const StoppingBuilder build(u, v, m, m + 2);
    std::vector<int> count(g.table_size(), 0);
    for (const auto& L : oracle::all_intervals(g))
      if (build.admissible(L))
        for (const auto& k : build(L).members) ++count[k.interval.heap()];
    CHECK(*std::max_element(count.begin(), count.end()) <= m + 1);
  }
}

TEST_CASE("lifted sequences", "[stopping]") {
  const DyadicGrid g(8);
  const Weight w = generate(CascadeSpec{8, 0.8, 6});
  const IndexedSequence nu = nu_sequence(w);
  const double B = intensity(nu).intensity;
  for (int m : {0, 1, 2, 3}) {
    const StoppingBuilder build(w, w.inverse(), m, m + 2);
    const IndexedSequence lifted = lift_sequence(nu, build);
    for (const auto& L : oracle::all_intervals(g, false)) {
      double s = 0.0;
      if (build.admissible(L))
        for (const auto& k : build(L).members) s += nu[k.interval];
      REQUIRE(lifted[L] == Approx(s).margin(1e-300));
    }
    CHECK(intensity(lifted).intensity <= (m + 1) * B * (1 + 1e-12));
    if (m == 0) CHECK(lifted.total() == Approx(nu.total()).epsilon(1e-14));
  }
}

TEST_CASE("stopping argument validation", "[stopping]") {
  const Weight one = Weight::lebesgue(DyadicGrid(4));
  CHECK_THROWS(StoppingBuilder(one, one, -1, 1));
  CHECK_THROWS(StoppingBuilder(one, one, 1, 0));
  CHECK_THROWS(StoppingBuilder(one, Weight::lebesgue(DyadicGrid(3)), 1, 1));
  CHECK_THROWS_WITH(build_stopping(one, one, {3, 0}, 2, 1), Catch::Matchers::ContainsSubstring("too deep"));
}
