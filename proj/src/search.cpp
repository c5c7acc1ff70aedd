#include "eadarp/search.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

namespace eadarp {

namespace {

constexpr double kTol = 1e-9;

struct Occupancy {
  std::vector<char> dest;     // by node id
  std::vector<int> stations;  // by station index
};

struct Built {
  Route route;
  double cost = 0;
};

class Engine {
 public:
  Engine(const SearchContext& ctx, Rng& rng) : ctx_(ctx), inst_(ctx.inst), rng_(rng) {}

  std::vector<int> users_of(const Route& r) const {
    std::vector<int> u;
    for (int v : r.seq) {
      if (inst_.is_user(v)) u.push_back(v);
    }
    return u;
  }

  Occupancy occupancy(const std::vector<Route>& routes, std::initializer_list<int> skip) const {
    Occupancy occ;
    occ.dest.assign(static_cast<std::size_t>(inst_.num_nodes()), 0);
    occ.stations.assign(inst_.stations().size(), 0);
    for (const auto& r : routes) {
      if (std::find(skip.begin(), skip.end(), r.vehicle) != skip.end()) continue;
      occupy(occ, r);
    }
    return occ;
  }

  void occupy(Occupancy& occ, const Route& r) const {
    if (r.seq.empty()) return;
    occ.dest[static_cast<std::size_t>(r.seq.back())] = 1;
    for (int v : r.seq) {
      if (inst_.is_station(v)) ++occ.stations[static_cast<std::size_t>(inst_.station_index(v))];
    }
  }

  RouteCheck evaluate(const Route& r, bool ignore_battery = false) const {
    for (std::size_t p = 1; p < r.seq.size(); ++p) {
      if (!ctx_.mask.allowed(r.seq[p - 1], r.seq[p])) {
        RouteCheck rc;
        rc.violation = Violation::structure;
        rc.position = static_cast<int>(p);
        return rc;
      }
    }
    return check_route(inst_, ctx_.table, r, CheckOptions{ctx_.cap, ignore_battery});
  }

  double cost_of(const Route& r) const { return evaluate(r).cost.weighted; }

  Route make_route(int veh, const std::vector<int>& users, int dest) const {
    Route r{veh, {}};
    r.seq.reserve(users.size() + 2);
    r.seq.push_back(inst_.origin_of(veh));
    r.seq.insert(r.seq.end(), users.begin(), users.end());
    r.seq.push_back(dest);
    return r;
  }

  std::optional<Route> repair(const Route& route, std::span<const int> used) {
    if (evaluate(route).ok()) return route;
    const int S = static_cast<int>(inst_.stations().size());
    if (S == 0) return std::nullopt;
    const int limit = (S + 1) / 2;
    int present = 0;
    for (int v : route.seq) present += inst_.is_station(v) ? 1 : 0;

    std::vector<Route> frontier{route};
    std::optional<Route> best;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<int> avail;
    for (int level = present; level < limit && !frontier.empty(); ++level) {
      std::vector<Route> next;
      std::set<std::vector<int>> seen;
      for (const auto& cand : frontier) {
        std::vector<int> counts(static_cast<std::size_t>(S), 0);
        for (int v : cand.seq) {
          if (inst_.is_station(v)) ++counts[static_cast<std::size_t>(inst_.station_index(v))];
        }
        int load = 0;
        for (std::size_t p = 1; p < cand.seq.size(); ++p) {
          const int prev = cand.seq[p - 1];
          load += inst_.node(prev).load;
          if (load != 0) continue;
          avail.clear();
          for (int s = 0; s < S; ++s) {
            const int node = inst_.stations()[static_cast<std::size_t>(s)];
            if (node == prev || node == cand.seq[p]) continue;
            const int total = counts[static_cast<std::size_t>(s)] + 1 + (s < static_cast<int>(used.size()) ? used[static_cast<std::size_t>(s)] : 0);
            if (!ctx_.cap.allows(total)) continue;
            avail.push_back(node);
          }
          if (avail.empty()) continue;
          const int station = avail[rng_.index(avail.size())];
          Route r = cand;
          r.seq.insert(r.seq.begin() + static_cast<std::ptrdiff_t>(p), station);
          if (!seen.insert(r.seq).second) continue;
          const auto rc = evaluate(r);
          if (rc.ok()) {
            if (rc.cost.weighted < best_cost - kTol) {
              best_cost = rc.cost.weighted;
              best = std::move(r);
            }
          } else if (rc.violation == Violation::battery) {
            next.push_back(std::move(r));
          }
        }
      }
      if (best) return best;
      if (static_cast<int>(next.size()) > ctx_.repair_frontier) next.resize(static_cast<std::size_t>(ctx_.repair_frontier));
      frontier = std::move(next);
    }
    return std::nullopt;
  }

  // Cheapest feasible completion of a user sequence: a free destination and,
  // if the battery requires it, stations.
  std::optional<Built> finish(int veh, const std::vector<int>& users, const Occupancy& occ) {
    std::optional<Built> best;
    std::vector<Route> battery;
    for (int f : inst_.destinations()) {
      if (occ.dest[static_cast<std::size_t>(f)]) continue;
      Route r = make_route(veh, users, f);
      const auto rc = evaluate(r);
      if (rc.ok()) {
        if (!best || rc.cost.weighted < best->cost - kTol) best = Built{std::move(r), rc.cost.weighted};
      } else if (rc.violation == Violation::battery) {
        battery.push_back(std::move(r));
      }
    }
    if (best) return best;
    for (const auto& r : battery) {
      auto rep = repair(r, occ.stations);
      if (!rep) continue;
      const double c = cost_of(*rep);
      if (!best || c < best->cost - kTol) best = Built{std::move(*rep), c};
    }
    return best;
  }

  // Cheapest feasible insertion of request `req` into the user sequence.
  std::optional<Built> best_insertion(int veh, const std::vector<int>& users, int req, const Occupancy& occ) {
    const int drop = inst_.dropoff_of(req);
    const std::size_t L = users.size();
    std::optional<Built> best;
    struct Pending {
      double estimate;
      Route route;
    };
    std::vector<Pending> battery;
    std::vector<int> seq;
    seq.reserve(L + 2);
    for (std::size_t a = 0; a <= L; ++a) {
      const int before = a == 0 ? inst_.origin_of(veh) : users[a - 1];
      if (!ctx_.mask.allowed(before, req)) continue;
      for (std::size_t b = a; b <= L; ++b) {
        seq.clear();
        seq.insert(seq.end(), users.begin(), users.begin() + static_cast<std::ptrdiff_t>(a));
        seq.push_back(req);
        seq.insert(seq.end(), users.begin() + static_cast<std::ptrdiff_t>(a), users.begin() + static_cast<std::ptrdiff_t>(b));
        seq.push_back(drop);
        seq.insert(seq.end(), users.begin() + static_cast<std::ptrdiff_t>(b), users.end());
        for (int f : inst_.destinations()) {
          if (occ.dest[static_cast<std::size_t>(f)]) continue;
          Route r = make_route(veh, seq, f);
          const auto rc = evaluate(r);
          if (rc.ok()) {
            if (!best || rc.cost.weighted < best->cost - kTol) best = Built{std::move(r), rc.cost.weighted};
          } else if (rc.violation == Violation::battery && !best) {
            const auto relaxed = evaluate(r, true);
            if (relaxed.ok()) battery.push_back({relaxed.cost.weighted, std::move(r)});
          }
        }
      }
    }
    if (best || battery.empty()) return best;
    std::stable_sort(battery.begin(), battery.end(), [](const Pending& x, const Pending& y) { return x.estimate < y.estimate; });
    const std::size_t tries = std::min<std::size_t>(battery.size(), static_cast<std::size_t>(std::max(0, ctx_.repair_insertions)));
    for (std::size_t t = 0; t < tries; ++t) {
      auto rep = repair(battery[t].route, occ.stations);
      if (!rep) continue;
      const double c = cost_of(*rep);
      if (!best || c < best->cost - kTol) best = Built{std::move(*rep), c};
    }
    return best;
  }

  // Zero-load cut points of a user sequence: 0 and every index after which
  // the vehicle is empty.
  std::vector<std::size_t> zero_splits(const std::vector<int>& users) const {
    std::vector<std::size_t> cuts{0};
    int load = 0;
    for (std::size_t p = 0; p < users.size(); ++p) {
      load += inst_.node(users[p]).load;
      if (load == 0) cuts.push_back(p + 1);
    }
    return cuts;
  }

  std::vector<int> without(const std::vector<int>& users, int req) const {
    std::vector<int> out;
    const int drop = inst_.dropoff_of(req);
    for (int v : users) {
      if (v != req && v != drop) out.push_back(v);
    }
    return out;
  }

  std::vector<int> requests_in(const std::vector<int>& users) const {
    std::vector<int> out;
    for (int v : users) {
      if (inst_.is_pickup(v)) out.push_back(v);
    }
    return out;
  }

  std::optional<Solution> intra(MoveKind kind, const Solution& sol) {
    struct Spot {
      int route;
      std::size_t a, b;  // positions to swap
    };
    std::vector<Spot> spots;
    std::vector<std::vector<int>> users(sol.routes.size());
    for (std::size_t k = 0; k < sol.routes.size(); ++k) {
      users[k] = users_of(sol.routes[k]);
      const auto& u = users[k];
      for (std::size_t p = 0; p < u.size(); ++p) {
        switch (kind) {
          case MoveKind::ex_pickup:
            if (inst_.is_pickup(u[p]) && p + 1 < u.size() && u[p + 1] != inst_.dropoff_of(u[p])) {
              spots.push_back({static_cast<int>(k), p, p + 1});
            }
            break;
          case MoveKind::ex_dropoff:
            if (inst_.is_dropoff(u[p]) && p >= 1 && u[p - 1] != inst_.pickup_of(u[p])) {
              spots.push_back({static_cast<int>(k), p - 1, p});
            }
            break;
          case MoveKind::ex_2_neighbor:
            if (p + 3 < u.size() && inst_.is_pickup(u[p]) && u[p + 1] == inst_.dropoff_of(u[p]) &&
                inst_.is_pickup(u[p + 2]) && u[p + 3] == inst_.dropoff_of(u[p + 2])) {
              spots.push_back({static_cast<int>(k), p + 1, p + 2});
            }
            break;
          default:
            return std::nullopt;
        }
      }
    }
    if (spots.empty()) return std::nullopt;
    const Spot s = spots[rng_.index(spots.size())];
    auto u = users[static_cast<std::size_t>(s.route)];
    std::swap(u[s.a], u[s.b]);
    const Occupancy occ = occupancy(sol.routes, {s.route});
    auto built = finish(s.route, u, occ);
    if (!built) return std::nullopt;
    Solution cand = sol;
    cand.cost = sol.cost - cost_of(sol.routes[static_cast<std::size_t>(s.route)]) + built->cost;
    cand.routes[static_cast<std::size_t>(s.route)] = std::move(built->route);
    return cand;
  }

  std::optional<Solution> inter(MoveKind kind, const Solution& sol) {
    const int K = static_cast<int>(sol.routes.size());
    if (K < 2) return std::nullopt;
    std::vector<std::vector<int>> users(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) users[static_cast<std::size_t>(k)] = users_of(sol.routes[static_cast<std::size_t>(k)]);

    auto two_distinct = [&](const std::vector<int>& pool_a, const std::vector<int>& pool_b) -> std::optional<std::pair<int, int>> {
      if (pool_a.empty()) return std::nullopt;
      const int a = pool_a[rng_.index(pool_a.size())];
      std::vector<int> rest;
      for (int k : pool_b) {
        if (k != a) rest.push_back(k);
      }
      if (rest.empty()) return std::nullopt;
      return std::make_pair(a, rest[rng_.index(rest.size())]);
    };
    std::vector<int> all(static_cast<std::size_t>(K)), nonempty;
    for (int k = 0; k < K; ++k) {
      all[static_cast<std::size_t>(k)] = k;
      if (!users[static_cast<std::size_t>(k)].empty()) nonempty.push_back(k);
    }

    Solution cand = sol;
    if (kind == MoveKind::two_opt) {
      auto pr = two_distinct(all, all);
      if (!pr) return std::nullopt;
      const auto [r1, r2] = *pr;
      const auto& u1 = users[static_cast<std::size_t>(r1)];
      const auto& u2 = users[static_cast<std::size_t>(r2)];
      const auto c1 = zero_splits(u1);
      const auto c2 = zero_splits(u2);
      const std::size_t p1 = c1[rng_.index(c1.size())];
      const std::size_t p2 = c2[rng_.index(c2.size())];
      std::vector<int> n1(u1.begin(), u1.begin() + static_cast<std::ptrdiff_t>(p1));
      n1.insert(n1.end(), u2.begin() + static_cast<std::ptrdiff_t>(p2), u2.end());
      std::vector<int> n2(u2.begin(), u2.begin() + static_cast<std::ptrdiff_t>(p2));
      n2.insert(n2.end(), u1.begin() + static_cast<std::ptrdiff_t>(p1), u1.end());
      if (n1 == u1) return std::nullopt;
      Occupancy occ = occupancy(sol.routes, {r1, r2});
      auto b1 = finish(r1, n1, occ);
      if (!b1) return std::nullopt;
      occupy(occ, b1->route);
      auto b2 = finish(r2, n2, occ);
      if (!b2) return std::nullopt;
      cand.cost = sol.cost - cost_of(sol.routes[static_cast<std::size_t>(r1)]) - cost_of(sol.routes[static_cast<std::size_t>(r2)]) +
                  b1->cost + b2->cost;
      cand.routes[static_cast<std::size_t>(r1)] = std::move(b1->route);
      cand.routes[static_cast<std::size_t>(r2)] = std::move(b2->route);
      return cand;
    }
    if (kind == MoveKind::relocate) {
      auto pr = two_distinct(nonempty, all);
      if (!pr) return std::nullopt;
      const auto [r1, r2] = *pr;
      const auto reqs = requests_in(users[static_cast<std::size_t>(r1)]);
      const int req = reqs[rng_.index(reqs.size())];
      Occupancy occ = occupancy(sol.routes, {r1, r2});
      auto b1 = finish(r1, without(users[static_cast<std::size_t>(r1)], req), occ);
      if (!b1) return std::nullopt;
      occupy(occ, b1->route);
      auto b2 = best_insertion(r2, users[static_cast<std::size_t>(r2)], req, occ);
      if (!b2) return std::nullopt;
      cand.cost = sol.cost - cost_of(sol.routes[static_cast<std::size_t>(r1)]) - cost_of(sol.routes[static_cast<std::size_t>(r2)]) +
                  b1->cost + b2->cost;
      cand.routes[static_cast<std::size_t>(r1)] = std::move(b1->route);
      cand.routes[static_cast<std::size_t>(r2)] = std::move(b2->route);
      return cand;
    }
    if (kind == MoveKind::exchange) {
      auto pr = two_distinct(nonempty, nonempty);
      if (!pr) return std::nullopt;
      const auto [r1, r2] = *pr;
      const auto q1 = requests_in(users[static_cast<std::size_t>(r1)]);
      const auto q2 = requests_in(users[static_cast<std::size_t>(r2)]);
      const int a = q1[rng_.index(q1.size())];
      const int b = q2[rng_.index(q2.size())];
      Occupancy occ = occupancy(sol.routes, {r1, r2});
      auto b1 = best_insertion(r1, without(users[static_cast<std::size_t>(r1)], a), b, occ);
      if (!b1) return std::nullopt;
      occupy(occ, b1->route);
      auto b2 = best_insertion(r2, without(users[static_cast<std::size_t>(r2)], b), a, occ);
      if (!b2) return std::nullopt;
      cand.cost = sol.cost - cost_of(sol.routes[static_cast<std::size_t>(r1)]) - cost_of(sol.routes[static_cast<std::size_t>(r2)]) +
                  b1->cost + b2->cost;
      cand.routes[static_cast<std::size_t>(r1)] = std::move(b1->route);
      cand.routes[static_cast<std::size_t>(r2)] = std::move(b2->route);
      return cand;
    }
    return std::nullopt;
  }

  std::optional<Solution> add_request(const Solution& sol) {
    if (sol.unserved.empty() || sol.routes.empty()) return std::nullopt;
    const std::size_t pick = rng_.index(sol.unserved.size());
    const int req = sol.unserved[pick];
    const int k = static_cast<int>(rng_.index(sol.routes.size()));
    const Occupancy occ = occupancy(sol.routes, {k});
    auto built = best_insertion(k, users_of(sol.routes[static_cast<std::size_t>(k)]), req, occ);
    if (!built) return std::nullopt;
    Solution cand = sol;
    cand.cost = sol.cost - cost_of(sol.routes[static_cast<std::size_t>(k)]) + built->cost;
    cand.routes[static_cast<std::size_t>(k)] = std::move(built->route);
    cand.unserved.erase(cand.unserved.begin() + static_cast<std::ptrdiff_t>(pick));
    return cand;
  }

  Solution construct() {
    const int K = inst_.num_vehicles();
    const int n = inst_.num_requests();
    std::vector<int> list;
    std::vector<int> unservable;
    for (int r = 1; r <= n; ++r) {
      const auto& bad = ctx_.mask.infeasible_requests;
      if (std::find(bad.begin(), bad.end(), r) != bad.end()) unservable.push_back(r);
      else list.push_back(r);
    }
    std::stable_sort(list.begin(), list.end(),
                     [&](int a, int b) { return inst_.node(a).earliest < inst_.node(b).earliest; });

    std::vector<int> vehicles(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) vehicles[static_cast<std::size_t>(k)] = k;
    rng_.shuffle(vehicles);
    const int k0 = rng_.uniform_int(1, K);
    std::vector<int> active(vehicles.begin(), vehicles.begin() + k0);
    std::size_t next_vehicle = static_cast<std::size_t>(k0);

    std::vector<std::optional<Built>> built(static_cast<std::size_t>(K));
    std::vector<std::vector<int>> users(static_cast<std::size_t>(K));
    auto occ_without = [&](int skip) {
      Occupancy occ;
      occ.dest.assign(static_cast<std::size_t>(inst_.num_nodes()), 0);
      occ.stations.assign(inst_.stations().size(), 0);
      for (int k = 0; k < K; ++k) {
        if (k != skip && built[static_cast<std::size_t>(k)]) occupy(occ, built[static_cast<std::size_t>(k)]->route);
      }
      return occ;
    };

    // Seed: the first requests go to distinct routes in random order.
    {
      std::vector<int> order = active;
      rng_.shuffle(order);
      std::vector<int> seeded;
      for (std::size_t j = 0; j < order.size() && j < list.size(); ++j) {
        const int veh = order[j];
        const int req = list[j];
        auto b = finish(veh, {req, inst_.dropoff_of(req)}, occ_without(veh));
        if (b) {
          users[static_cast<std::size_t>(veh)] = {req, inst_.dropoff_of(req)};
          built[static_cast<std::size_t>(veh)] = std::move(b);
          seeded.push_back(req);
        }
      }
      std::erase_if(list, [&](int r) { return std::find(seeded.begin(), seeded.end(), r) != seeded.end(); });
    }

    while (!list.empty()) {
      std::size_t idx = 0;
      while (idx < list.size()) {
        const int req = list[idx];
        std::vector<std::pair<double, int>> order;
        for (int veh : active) {
          const auto& u = users[static_cast<std::size_t>(veh)];
          const int last = u.empty() ? inst_.origin_of(veh) : u.back();
          order.emplace_back(inst_.travel(last, req), veh);
        }
        std::stable_sort(order.begin(), order.end(),
                         [](const auto& x, const auto& y) { return x.first < y.first; });
        bool inserted = false;
        for (const auto& [dist, veh] : order) {
          (void)dist;
          auto b = best_insertion(veh, users[static_cast<std::size_t>(veh)], req, occ_without(veh));
          if (b) {
            users[static_cast<std::size_t>(veh)] = users_of(b->route);
            built[static_cast<std::size_t>(veh)] = std::move(b);
            inserted = true;
            break;
          }
        }
        if (inserted) {
          list.erase(list.begin() + static_cast<std::ptrdiff_t>(idx));
          idx = 0;
        } else {
          ++idx;
        }
      }
      if (list.empty() || next_vehicle >= vehicles.size()) break;
      active.push_back(vehicles[next_vehicle++]);
    }

    Solution sol;
    for (int k = 0; k < K; ++k) {
      if (!built[static_cast<std::size_t>(k)]) {
        auto b = finish(k, {}, occ_without(k));
        if (!b) return Solution{};
        built[static_cast<std::size_t>(k)] = std::move(b);
      }
    }
    for (int k = 0; k < K; ++k) {
      sol.cost += built[static_cast<std::size_t>(k)]->cost;
      sol.routes.push_back(std::move(built[static_cast<std::size_t>(k)]->route));
    }
    sol.unserved = list;
    sol.unserved.insert(sol.unserved.end(), unservable.begin(), unservable.end());
    std::sort(sol.unserved.begin(), sol.unserved.end());
    return sol;
  }

 private:
  const SearchContext& ctx_;
  const Instance& inst_;
  Rng& rng_;
};

}  // namespace

std::string_view to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::ex_pickup: return "ex-pickup";
    case MoveKind::ex_dropoff: return "ex-dropoff";
    case MoveKind::ex_2_neighbor: return "ex-2-neighbor";
    case MoveKind::two_opt: return "2-opt";
    case MoveKind::relocate: return "relocate";
    case MoveKind::exchange: return "exchange";
    case MoveKind::add_request: return "add-request";
  }
  return "?";
}

std::optional<MoveKind> parse_move_kind(std::string_view name) {
  for (auto k : {MoveKind::ex_pickup, MoveKind::ex_dropoff, MoveKind::ex_2_neighbor, MoveKind::two_opt,
                 MoveKind::relocate, MoveKind::exchange, MoveKind::add_request}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

int served_count(const Instance& inst, const Solution& sol) {
  return inst.num_requests() - static_cast<int>(sol.unserved.size());
}

bool better(const Instance& inst, const Solution& a, const Solution& b) {
  const int sa = served_count(inst, a), sb = served_count(inst, b);
  if (sa != sb) return sa > sb;
  return a.cost < b.cost - kTol;
}

Solution parallel_insertion(const SearchContext& ctx, Rng& rng) { return Engine(ctx, rng).construct(); }

std::optional<Route> repair_with_stations(const SearchContext& ctx, const Route& route, std::span<const int> used_elsewhere,
                                          Rng& rng) {
  return Engine(ctx, rng).repair(route, used_elsewhere);
}

std::optional<Solution> intra_route_move(const SearchContext& ctx, MoveKind kind, const Solution& sol, Rng& rng) {
  return Engine(ctx, rng).intra(kind, sol);
}

std::optional<Solution> inter_route_move(const SearchContext& ctx, MoveKind kind, const Solution& sol, Rng& rng) {
  return Engine(ctx, rng).inter(kind, sol);
}

std::optional<Solution> add_request_move(const SearchContext& ctx, const Solution& sol, Rng& rng) {
  return Engine(ctx, rng).add_request(sol);
}

SearchResult da_search(const SearchContext& ctx, const DAParams& params) {
  const auto start = std::chrono::steady_clock::now();
  SearchResult out;
  Rng rng(params.seed);
  Engine eng(ctx, rng);
  const Instance& inst = ctx.inst;
  const int n = inst.num_requests();

  Solution x = eng.construct();
  if (x.routes.empty()) {
    out.best = x;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }
  Solution xb = x;
  const double theta_max = ctx.mask.mean_arc_travel * params.theta_max_rel;
  double theta = theta_max;
  int i_imp = 0;
  out.best_cost.reserve(static_cast<std::size_t>(std::max(0, params.iterations)));

  auto apply = [&](MoveKind kind) -> std::optional<Solution> {
    switch (kind) {
      case MoveKind::ex_pickup:
      case MoveKind::ex_dropoff:
      case MoveKind::ex_2_neighbor: return eng.intra(kind, x);
      case MoveKind::two_opt:
      case MoveKind::relocate:
      case MoveKind::exchange: return eng.inter(kind, x);
      case MoveKind::add_request: return eng.add_request(x);
    }
    return std::nullopt;
  };

  for (int iter = 1; iter <= params.iterations; ++iter) {
    ++i_imp;
    bool improved = false;
    auto consider = [&](MoveKind kind, std::optional<Solution> cand) {
      if (!cand) return;
      const int sc = served_count(inst, *cand);
      const int sx = served_count(inst, x);
      const bool accept = sc > sx || (sc == sx && cand->cost < x.cost + theta);
      if (!accept) return;
      x = std::move(*cand);
      if (params.record_trace) out.trace.push_back({iter, kind, served_count(inst, x), x.cost});
      if (better(inst, x, xb)) {
        xb = x;
        improved = true;
      }
    };
    for (MoveKind kind : params.order) consider(kind, apply(kind));
    if (served_count(inst, x) < n) consider(MoveKind::add_request, apply(MoveKind::add_request));

    if (improved) {
      i_imp = 0;
    } else {
      theta -= theta_max / params.theta_red;
      if (theta < 0) {
        theta = rng.uniform01() * theta_max;
        if (i_imp > params.n_imp) {
          x = xb;
          i_imp = 0;
        }
      }
    }
    out.best_cost.push_back(xb.cost);
    out.iterations = iter;
  }
  out.best = std::move(xb);
  out.served = served_count(inst, out.best);
  out.feasible = true;
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace eadarp
