#include <gtest/gtest.h>

#include "eadarp/oracle.hpp"
#include "eadarp/search.hpp"
#include "fixtures.hpp"

using namespace eadarp;

namespace {

// Keeps the instance, table and mask alive next to a context.
struct World {
  Preprocessed pre;
  FragmentTable table;
  SearchContext ctx;

  explicit World(const Instance& inst, StationCap cap = {})
      : pre(preprocess(inst)), table(enumerate_fragments(pre.inst, pre.mask)), ctx(pre.inst, table, pre.mask, cap) {}
};

std::vector<int> users(const Instance& inst, const Route& r) {
  std::vector<int> u;
  for (int v : r.seq) {
    if (inst.is_user(v)) u.push_back(v);
  }
  return u;
}

// Two requests along one line with wide windows: 1+ 2+ 1- 2- is a valid
// single route for a three-seat vehicle.
Instance easy_line(int vehicles = 1) {
  fx::Builder b(vehicles, 2, 1000);
  b.origin(0, 0).pickup(1, 0, 0, 900, 100).pickup(2, 0, 0, 900, 100).dropoff(3, 0, 0, 950).dropoff(4, 0, 0, 950);
  for (int k = 1; k < vehicles; ++k) b.origin(0, 1);
  for (int k = 0; k < vehicles; ++k) b.destination(5, static_cast<double>(k));
  return b.build();
}

bool consistent(const World& w, const Solution& s) {
  const auto sc = solution_cost(w.pre.inst, w.table, s, w.ctx.cap);
  return sc.ok() && std::abs(sc.cost.weighted - s.cost) < 1e-6;
}

}  // namespace

TEST(MoveKind, Names) {
  for (auto k : {MoveKind::ex_pickup, MoveKind::ex_dropoff, MoveKind::ex_2_neighbor, MoveKind::two_opt,
                 MoveKind::relocate, MoveKind::exchange, MoveKind::add_request}) {
    EXPECT_EQ(parse_move_kind(to_string(k)), k);
  }
  EXPECT_FALSE(parse_move_kind("swap"));
}

TEST(ParallelInsertion, ServesEverythingWhenEasy) {
  World w(easy_line());
  Rng rng(1);
  const Solution s = parallel_insertion(w.ctx, rng);
  ASSERT_EQ(s.routes.size(), 1u);
  EXPECT_TRUE(s.unserved.empty());
  EXPECT_TRUE(consistent(w, s));
}

TEST(ParallelInsertion, OneRequestPerVehicle) {
  // Two requests far apart in time and space; either vehicle can do either,
  // but not both.
  const Instance inst = fx::Builder(2, 2, 200)
                            .origin(0, 0)
                            .pickup(10, 0, 20, 22, 15)
                            .pickup(-10, 0, 20, 22, 15)
                            .dropoff(20, 0, 30, 40)
                            .dropoff(-20, 0, 30, 40)
                            .origin(0, 0)
                            .destination(0, 0)
                            .destination(0, 1)
                            .build();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    World w(inst);
    Rng rng(seed);
    const Solution s = parallel_insertion(w.ctx, rng);
    ASSERT_EQ(s.routes.size(), 2u);
    EXPECT_TRUE(s.unserved.empty()) << seed;
    EXPECT_EQ(users(inst, s.routes[0]).size(), 2u);
    EXPECT_EQ(users(inst, s.routes[1]).size(), 2u);
    EXPECT_TRUE(consistent(w, s));
  }
}

TEST(ParallelInsertion, NeverBeatsExhaustive) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const Instance inst = fx::tiny(seed, 2, 4, 1, 0.4);
    World w(inst);
    Rng rng(seed);
    const Solution s = parallel_insertion(w.ctx, rng);
    if (s.routes.empty()) continue;
    ASSERT_TRUE(consistent(w, s)) << seed;
    const auto opt = oracle::exhaustive_solve(inst);
    const int served = served_count(w.pre.inst, s);
    EXPECT_LE(served, opt.served) << seed;
    if (served == opt.served) EXPECT_GE(s.cost, opt.cost - 1e-6) << seed;
  }
}

TEST(Intra, ExPickupSwapsPickups) {
  World w(easy_line());
  const Solution base{{Route{0, {0, 1, 2, 3, 4, 5}}}, {}, 0};
  Solution start = base;
  start.cost = check_route(w.pre.inst, w.table, start.routes[0]).cost.weighted;
  ASSERT_TRUE(consistent(w, start));
  bool saw_swap = false;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const auto cand = intra_route_move(w.ctx, MoveKind::ex_pickup, start, rng);
    if (!cand) continue;
    const auto u = users(w.pre.inst, cand->routes[0]);
    const bool first = u == std::vector<int>{2, 1, 3, 4};
    const bool second = u == std::vector<int>{1, 3, 2, 4};
    EXPECT_TRUE(first || second);
    saw_swap |= first;
    EXPECT_TRUE(consistent(w, *cand));
  }
  EXPECT_TRUE(saw_swap);
}

TEST(Intra, AbsentWhenSuccessorIsOwnDropoff) {
  World w(easy_line());
  Solution s{{Route{0, {0, 1, 3, 5}}}, {2}, 0};
  s.cost = check_route(w.pre.inst, w.table, s.routes[0]).cost.weighted;
  Rng rng(1);
  EXPECT_FALSE(intra_route_move(w.ctx, MoveKind::ex_pickup, s, rng));
  EXPECT_FALSE(intra_route_move(w.ctx, MoveKind::ex_dropoff, s, rng));
  EXPECT_FALSE(intra_route_move(w.ctx, MoveKind::ex_2_neighbor, s, rng));
}

TEST(Inter, RelocateOnlyRequestEmptiesRoute) {
  World w(easy_line(2));
  const auto& inst = w.pre.inst;
  const int f0 = inst.destinations()[0], f1 = inst.destinations()[1];
  Solution s{{Route{0, {0, 1, 3, f0}}, Route{1, {inst.origin_of(1), 2, 4, f1}}}, {}, 0};
  s.cost = solution_cost(inst, w.table, s, {}).cost.weighted;
  int relocations = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    const auto cand = inter_route_move(w.ctx, MoveKind::relocate, s, rng);
    if (!cand) continue;
    ASSERT_TRUE(consistent(w, *cand));
    const auto a = users(inst, cand->routes[0]).size(), b = users(inst, cand->routes[1]).size();
    EXPECT_TRUE((a == 0 && b == 4) || (a == 4 && b == 0));
    ++relocations;
  }
  EXPECT_GT(relocations, 0);
}

TEST(Inter, ExchangeAndTwoOptKeepCostsHonest) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    World w(fx::tiny(seed, 2, 4, 1));
    Rng rng(seed);
    Solution s = parallel_insertion(w.ctx, rng);
    if (s.routes.empty()) continue;
    for (int it = 0; it < 60; ++it) {
      for (auto kind : {MoveKind::two_opt, MoveKind::relocate, MoveKind::exchange}) {
        const auto cand = inter_route_move(w.ctx, kind, s, rng);
        if (!cand) continue;
        ASSERT_TRUE(consistent(w, *cand)) << to_string(kind) << " seed " << seed;
        EXPECT_EQ(cand->unserved, s.unserved);
        s = *cand;
      }
    }
  }
}

TEST(Inter, TwoOptAtRouteEndsSwapsTails) {
  World w(easy_line(2));
  const auto& inst = w.pre.inst;
  const int f0 = inst.destinations()[0], f1 = inst.destinations()[1];
  Solution s{{Route{0, {0, 1, 3, f0}}, Route{1, {inst.origin_of(1), 2, 4, f1}}}, {}, 0};
  s.cost = solution_cost(inst, w.table, s, {}).cost.weighted;
  bool swapped = false;
  for (std::uint64_t seed = 1; seed <= 60 && !swapped; ++seed) {
    Rng rng(seed);
    const auto cand = inter_route_move(w.ctx, MoveKind::two_opt, s, rng);
    if (!cand) continue;
    ASSERT_TRUE(consistent(w, *cand));
    swapped = users(inst, cand->routes[0]) == std::vector<int>{2, 4} && users(inst, cand->routes[1]) == std::vector<int>{1, 3};
  }
  EXPECT_TRUE(swapped);
}

TEST(AddRequest, ServedGrowsByOne) {
  World w(easy_line());
  Solution s{{Route{0, {0, 1, 3, 5}}}, {2}, 0};
  s.cost = check_route(w.pre.inst, w.table, s.routes[0]).cost.weighted;
  Rng rng(3);
  const auto cand = add_request_move(w.ctx, s, rng);
  ASSERT_TRUE(cand);
  EXPECT_TRUE(cand->unserved.empty());
  EXPECT_EQ(served_count(w.pre.inst, *cand), served_count(w.pre.inst, s) + 1);
  EXPECT_TRUE(consistent(w, *cand));

  Rng rng2(3);
  EXPECT_FALSE(add_request_move(w.ctx, *cand, rng2));
}

namespace {

// Battery of 40 minutes; the request alone drains 36 plus the legs to and
// from the depots, so a station on the way home is needed.
Instance needs_station(int stations) {
  fx::Builder b(1, 1, 1000);
  b.battery(40, 1, 1, 0.1);
  b.origin(0, 0).pickup(2, 0, 0, 900, 100).dropoff(20, 0, 0, 950).destination(0, 0);
  for (int s = 0; s < stations; ++s) b.station(19, static_cast<double>(s));
  return b.build();
}

}  // namespace

TEST(Repair, FeasibleRouteUnchanged) {
  World w(easy_line());
  const Route r{0, {0, 1, 3, 5}};
  Rng rng(1);
  const std::vector<int> none;
  const auto out = repair_with_stations(w.ctx, r, none, rng);
  ASSERT_TRUE(out);
  EXPECT_EQ(out->seq, r.seq);
}

TEST(Repair, OneStationBetweenFragments) {
  World w(needs_station(1));
  const auto& inst = w.pre.inst;
  const Route r{0, {0, 1, 2, inst.destinations()[0]}};
  ASSERT_EQ(check_route(inst, w.table, r).violation, Violation::battery);
  Rng rng(1);
  const std::vector<int> used{0};
  const auto out = repair_with_stations(w.ctx, r, used, rng);
  ASSERT_TRUE(out);
  EXPECT_EQ(std::count(out->seq.begin(), out->seq.end(), inst.stations()[0]), 1);
  EXPECT_EQ(out->seq.size(), r.seq.size() + 1);
  EXPECT_TRUE(check_route(inst, w.table, *out).ok());
  EXPECT_TRUE(oracle::brute_force_feasible(inst, *out));
}

TEST(Repair, AllStationsUsedElsewhere) {
  World w(needs_station(1));
  const auto& inst = w.pre.inst;
  const Route r{0, {0, 1, 2, inst.destinations()[0]}};
  Rng rng(1);
  const std::vector<int> used{1};
  EXPECT_FALSE(repair_with_stations(w.ctx, r, used, rng));
}

TEST(DA, Deterministic) {
  World w(fx::tiny(4, 2, 4, 1, 0.4));
  DAParams p;
  p.iterations = 600;
  p.seed = 17;
  p.record_trace = true;
  const auto a = da_search(w.ctx, p);
  const auto b = da_search(w.ctx, p);
  EXPECT_EQ(a.best.cost, b.best.cost);
  EXPECT_EQ(a.trace, b.trace);
  EXPECT_EQ(a.best_cost, b.best_cost);
  EXPECT_FALSE(a.trace.empty());
}

TEST(DA, AcceptanceNeverLosesServedRequests) {
  World w(fx::tiny(6, 2, 4, 1, 0.4));
  DAParams p;
  p.iterations = 500;
  p.record_trace = true;
  const auto res = da_search(w.ctx, p);
  for (std::size_t i = 1; i < res.trace.size(); ++i) EXPECT_GE(res.trace[i].served, res.trace[i - 1].served);
  EXPECT_TRUE(consistent(w, res.best));
}

TEST(DA, MatchesExhaustiveOnThreeRequests) {
  const Instance inst = fx::tiny(11, 2, 3, 1);
  World w(inst);
  const auto opt = oracle::exhaustive_solve(inst);
  int best_served = -1;
  double best_cost = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DAParams p;
    p.iterations = 2000;
    p.seed = seed;
    const auto r = da_search(w.ctx, p);
    ASSERT_TRUE(consistent(w, r.best));
    if (r.served > best_served || (r.served == best_served && r.best.cost < best_cost)) {
      best_served = r.served;
      best_cost = r.best.cost;
    }
  }
  EXPECT_EQ(best_served, opt.served);
  EXPECT_NEAR(best_cost, opt.cost, 1e-6);
}
