#include <gtest/gtest.h>

#include "eadarp/oracle.hpp"
#include "eadarp/preprocess.hpp"
#include "fixtures.hpp"

using namespace eadarp;

namespace {

// One request on a line: pickup at x=0, dropoff at x=10 (t = 10).
Instance one_request(double pe, double pl, double ps, double m, double de, double dl) {
  return fx::Builder(1, 1, 500)
      .origin(0, 0)
      .pickup(0, 0, pe, pl, m, ps)
      .dropoff(10, 0, de, dl)
      .destination(0, 0)
      .build();
}

bool same_windows(const Instance& a, const Instance& b) {
  for (int i = 0; i < a.num_nodes(); ++i) {
    if (a.node(i).earliest != b.node(i).earliest || a.node(i).latest != b.node(i).latest) return false;
  }
  return true;
}

}  // namespace

TEST(Tighten, WorkedExample) {
  const Instance inst = one_request(0, 100, 2, 30, 50, 80);
  const Instance t = tighten_time_windows(inst);
  // Recomputed from the rules directly.
  const double t_direct = inst.travel(1, 2);
  const double e1 = std::max(0.0, 50 - 30 - 2.0);
  const double l1 = std::min(100.0, 80 - t_direct - 2);
  EXPECT_DOUBLE_EQ(t.node(1).earliest, e1);
  EXPECT_DOUBLE_EQ(t.node(1).latest, l1);
  EXPECT_DOUBLE_EQ(t.node(1).earliest, 18);
  EXPECT_DOUBLE_EQ(t.node(1).latest, 68);
  EXPECT_DOUBLE_EQ(t.node(2).earliest, std::max(50.0, e1 + 2 + t_direct));
  EXPECT_DOUBLE_EQ(t.node(2).latest, std::min(80.0, l1 + 2 + 30));
  EXPECT_DOUBLE_EQ(t.node(2).earliest, 50);
  EXPECT_DOUBLE_EQ(t.node(2).latest, 80);
}

TEST(Tighten, ForcedInfeasibility) {
  // e_{n+i} - m - s = 100 - 30 - 0 = 70 > l_i = 20
  const Instance inst = one_request(0, 20, 0, 30, 100, 200);
  EXPECT_THROW(tighten_time_windows(inst), InfeasibleInstance);
}

TEST(Tighten, MonotoneAndIdempotent) {
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    GeneratorSpec spec;
    spec.requests = 2 + static_cast<int>(seed % 6);
    spec.stations = static_cast<int>(seed % 3);
    spec.vehicles = 1 + static_cast<int>(seed % 2);
    spec.destinations = spec.vehicles;
    const Instance inst = generate_instance(spec, seed);
    const Instance once = tighten_time_windows(inst);
    for (int i = 0; i < inst.num_nodes(); ++i) {
      EXPECT_GE(once.node(i).earliest, inst.node(i).earliest);
      EXPECT_LE(once.node(i).latest, inst.node(i).latest);
    }
    const Instance twice = tighten_time_windows(once);
    EXPECT_TRUE(same_windows(once, twice)) << "seed " << seed;
  }
}

TEST(Arcs, WindowRule) {
  // Pickup 1 opens at 0 with s=5; pickup 2 is 10 away and closes at 8.
  const Instance inst = fx::Builder(1, 2, 500)
                            .origin(0, 0)
                            .pickup(0, 0, 0, 100, 200, 5)
                            .pickup(10, 0, 0, 8, 200)
                            .dropoff(0, 1, 0, 400)
                            .dropoff(10, 1, 0, 400)
                            .destination(0, 0)
                            .build();
  const ArcMask mask = eliminate_arcs(inst);
  EXPECT_FALSE(mask.allowed(1, 2));
  EXPECT_TRUE(mask.allowed(2, 1));
}

TEST(Arcs, StructuralRules) {
  const Instance inst = fx::tiny(3, 2, 3, 1);
  const ArcMask mask = eliminate_arcs(tighten_time_windows(inst));
  const int n = inst.num_requests();
  for (int i = 1; i <= n; ++i) {
    EXPECT_FALSE(mask.allowed(n + i, i));
    EXPECT_FALSE(mask.allowed(inst.origins()[0], n + i));
    for (int f : inst.destinations()) EXPECT_FALSE(mask.allowed(i, f));
    for (int s : inst.stations()) {
      EXPECT_FALSE(mask.allowed(i, s));
      EXPECT_FALSE(mask.allowed(s, n + i));
    }
  }
  for (int v = 0; v < inst.num_nodes(); ++v) {
    EXPECT_FALSE(mask.allowed(v, v));
    for (int o : inst.origins()) EXPECT_FALSE(mask.allowed(v, o));
    for (int f : inst.destinations()) EXPECT_FALSE(mask.allowed(f, v));
  }
}

// Soundness: optimal routes found without any arc elimination only use arcs
// the elimination keeps.
TEST(Arcs, ExhaustiveOptimaUseAllowedArcs) {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Instance raw = fx::tiny(seed, 2, 1 + static_cast<int>(seed % 4), 1);
    Instance inst;
    try {
      inst = tighten_time_windows(raw);
    } catch (const InfeasibleInstance&) {
      continue;
    }
    const ArcMask mask = eliminate_arcs(inst);
    const auto opt = oracle::exhaustive_solve(inst);
    for (const auto& r : opt.solution.routes) {
      for (std::size_t p = 1; p < r.seq.size(); ++p) {
        EXPECT_TRUE(mask.allowed(r.seq[p - 1], r.seq[p])) << "seed " << seed << " arc " << r.seq[p - 1] << "->" << r.seq[p];
      }
    }
    for (int req : mask.infeasible_requests) {
      for (const auto& r : opt.solution.routes) {
        EXPECT_EQ(std::count(r.seq.begin(), r.seq.end(), req), 0) << "seed " << seed;
      }
    }
    ++checked;
  }
  EXPECT_GE(checked, 40);
}

TEST(PathSchedule, RideCap) {
  // Detour through pickup 2 pushes request 1 past its cap of 15.
  const Instance inst = fx::Builder(1, 2, 500)
                            .origin(0, 0)
                            .pickup(0, 0, 0, 100, 15)
                            .pickup(0, 10, 0, 100, 100)
                            .dropoff(10, 0, 0, 100)
                            .dropoff(0, 20, 0, 200)
                            .destination(0, 0)
                            .build();
  const std::vector<int> direct{1, 3};
  const std::vector<int> detour{1, 2, 3, 4};
  const std::vector<int> open{1, 2};
  EXPECT_TRUE(path_schedule_feasible(inst, direct));
  EXPECT_FALSE(path_schedule_feasible(inst, detour));
  // Open pickup: 10 to node 2, then 14.1 onward to dropoff 3, over 15.
  EXPECT_FALSE(path_schedule_feasible(inst, open));
}

TEST(Preprocess, MeanArcTravelPositive) {
  const auto pre = preprocess(fx::tiny(9));
  EXPECT_GT(pre.mask.mean_arc_travel, 0);
  EXPECT_GT(pre.mask.count(), 0);
  EXPECT_LT(pre.mask.count(), pre.inst.num_nodes() * (pre.inst.num_nodes() - 1));
}
