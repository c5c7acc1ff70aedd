#include "eadarp/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "eadarp/lp.hpp"

namespace eadarp::oracle {

namespace {

constexpr double kEps = 1e-6;
using Sense = LinearProgram::Sense;

int position_of(std::span<const int> seq, int v, int from) {
  for (int p = from; p < static_cast<int>(seq.size()); ++p) {
    if (seq[static_cast<std::size_t>(p)] == v) return p;
  }
  return -1;
}

// Negative-cycle test for T_b - T_a <= w.
struct DiffSystem {
  struct Edge {
    int a, b;
    double w;
  };
  int vars = 0;
  std::vector<Edge> edges;

  bool feasible() const {
    std::vector<double> dist(static_cast<std::size_t>(vars), 0.0);
    for (int it = 0; it <= vars; ++it) {
      bool changed = false;
      for (const auto& e : edges) {
        const double c = dist[static_cast<std::size_t>(e.a)] + e.w;
        if (c < dist[static_cast<std::size_t>(e.b)] - 1e-9) {
          dist[static_cast<std::size_t>(e.b)] = c;
          changed = true;
        }
      }
      if (!changed) return true;
    }
    return false;
  }
};

}  // namespace

std::optional<double> brute_force_min_excess(const Instance& inst, std::span<const int> seq) {
  const int k = static_cast<int>(seq.size());
  if (k == 0) return 0.0;
  const bool route = inst.is_origin(seq.front());
  LinearProgram lp;
  std::vector<int> T(static_cast<std::size_t>(k)), C(static_cast<std::size_t>(k), -1), G(static_cast<std::size_t>(k), -1);
  for (int p = 0; p < k; ++p) {
    const int v = seq[static_cast<std::size_t>(p)];
    T[static_cast<std::size_t>(p)] = lp.add_variable(0.0);
    if (inst.is_station(v)) {
      C[static_cast<std::size_t>(p)] = lp.add_variable(0.0);
      G[static_cast<std::size_t>(p)] = lp.add_variable(0.0);
    }
  }
  for (int p = 0; p < k; ++p) {
    const int v = seq[static_cast<std::size_t>(p)];
    const Node& nd = inst.node(v);
    lp.add_constraint({{T[static_cast<std::size_t>(p)], 1.0}}, Sense::ge, nd.earliest);
    lp.add_constraint({{T[static_cast<std::size_t>(p)], 1.0}}, Sense::le, nd.latest);
    if (p + 1 < k) {
      std::vector<LinearProgram::Term> row{{T[static_cast<std::size_t>(p + 1)], 1.0}, {T[static_cast<std::size_t>(p)], -1.0}};
      if (C[static_cast<std::size_t>(p)] >= 0) row.push_back({C[static_cast<std::size_t>(p)], -1.0});
      lp.add_constraint(row, Sense::ge, nd.service + inst.travel(v, seq[static_cast<std::size_t>(p + 1)]));
    }
    if (C[static_cast<std::size_t>(p)] >= 0) {
      lp.add_constraint({{G[static_cast<std::size_t>(p)], 1.0}, {C[static_cast<std::size_t>(p)], -1.0}}, Sense::le, 0.0);
    }
  }
  for (int p = 0; p < k; ++p) {
    const int i = seq[static_cast<std::size_t>(p)];
    if (inst.is_dropoff(i) && position_of(seq.first(static_cast<std::size_t>(p)), inst.pickup_of(i), 0) < 0) return std::nullopt;
    if (!inst.is_pickup(i)) continue;
    const int q = position_of(seq, inst.dropoff_of(i), p + 1);
    if (q < 0) return std::nullopt;
    const Node& pn = inst.node(i);
    const int r = lp.add_variable(1.0);
    lp.add_constraint({{T[static_cast<std::size_t>(q)], 1.0}, {T[static_cast<std::size_t>(p)], -1.0}}, Sense::le,
                      pn.max_ride + pn.service);
    lp.add_constraint({{r, 1.0}, {T[static_cast<std::size_t>(q)], -1.0}, {T[static_cast<std::size_t>(p)], 1.0}}, Sense::ge,
                      -pn.service - inst.travel(i, inst.dropoff_of(i)));
  }
  if (route) {
    // Battery as time-to-full: arrival at p is sum(h) - sum(g before p).
    const double H = inst.full_recharge();
    double used = 0;
    std::vector<LinearProgram::Term> gains;
    for (int p = 1; p < k; ++p) {
      used += inst.recharge(seq[static_cast<std::size_t>(p - 1)], seq[static_cast<std::size_t>(p)]);
      std::vector<LinearProgram::Term> row;
      for (const auto& g : gains) row.push_back({g.first, -1.0});
      const double bound = inst.is_destination(seq[static_cast<std::size_t>(p)]) ? inst.final_recharge_bound() : H;
      if (row.empty()) {
        if (used > bound + kEps) return std::nullopt;
      } else {
        lp.add_constraint(row, Sense::le, bound - used);
      }
      if (G[static_cast<std::size_t>(p)] >= 0) {
        gains.push_back({G[static_cast<std::size_t>(p)], 1.0});
        std::vector<LinearProgram::Term> after;
        for (const auto& g : gains) after.push_back({g.first, 1.0});
        lp.add_constraint(after, Sense::le, used);
      }
    }
  }
  const auto res = lp.solve();
  if (res.status != LpStatus::optimal) return std::nullopt;
  return std::max(0.0, res.objective);
}

bool brute_force_feasible(const Instance& inst, const Route& route, GridSpec grid, StationCap cap) {
  const auto& seq = route.seq;
  const int k = static_cast<int>(seq.size());
  if (k < 2 || route.vehicle < 0 || route.vehicle >= static_cast<int>(inst.origins().size())) return false;
  if (seq.front() != inst.origin_of(route.vehicle) || !inst.is_destination(seq.back())) return false;

  // Structure, capacity and the station cap.
  std::vector<int> seen(static_cast<std::size_t>(inst.num_nodes()), 0);
  int load = 0;
  std::vector<int> stations;
  for (int p = 1; p + 1 < k; ++p) {
    const int v = seq[static_cast<std::size_t>(p)];
    if (inst.is_user(v)) {
      if (seen[static_cast<std::size_t>(v)]++) return false;
      if (inst.is_dropoff(v) && !seen[static_cast<std::size_t>(inst.pickup_of(v))]) return false;
      load += inst.node(v).load;
      if (load > inst.capacity(route.vehicle)) return false;
    } else if (inst.is_station(v)) {
      if (load != 0) return false;
      stations.push_back(p);
      ++seen[static_cast<std::size_t>(v)];
      if (!cap.allows(seen[static_cast<std::size_t>(v)])) return false;
    } else {
      return false;
    }
  }
  if (load != 0) return false;

  const double H = inst.full_recharge();
  std::vector<double> charge(static_cast<std::size_t>(k), 0.0);

  auto battery_ok = [&]() {
    double rt = 0;
    for (int p = 1; p < k; ++p) {
      rt += inst.recharge(seq[static_cast<std::size_t>(p - 1)], seq[static_cast<std::size_t>(p)]);
      const int v = seq[static_cast<std::size_t>(p)];
      const double bound = inst.is_destination(v) ? inst.final_recharge_bound() : H;
      if (rt > bound + kEps) return false;
      if (inst.is_station(v)) rt = std::max(0.0, rt - charge[static_cast<std::size_t>(p)]);
    }
    return true;
  };
  auto timing_ok = [&]() {
    DiffSystem sys;
    sys.vars = k + 1;
    const int z = k;
    for (int p = 0; p < k; ++p) {
      const Node& nd = inst.node(seq[static_cast<std::size_t>(p)]);
      sys.edges.push_back({z, p, nd.latest});
      sys.edges.push_back({p, z, -nd.earliest});
      if (p + 1 < k) {
        const double d = nd.service + inst.travel(seq[static_cast<std::size_t>(p)], seq[static_cast<std::size_t>(p + 1)]) +
                         charge[static_cast<std::size_t>(p)];
        sys.edges.push_back({p + 1, p, -d});
      }
      const int v = seq[static_cast<std::size_t>(p)];
      if (inst.is_pickup(v)) {
        const int q = position_of(seq, inst.dropoff_of(v), p + 1);
        sys.edges.push_back({p, q, nd.max_ride + nd.service});
      }
    }
    return sys.feasible();
  };
  // Time-to-full on arrival at position p under the current charges.
  auto arrival_deficit = [&](int upto) {
    double rt = 0;
    for (int p = 1; p <= upto; ++p) {
      rt += inst.recharge(seq[static_cast<std::size_t>(p - 1)], seq[static_cast<std::size_t>(p)]);
      if (p < upto && inst.is_station(seq[static_cast<std::size_t>(p)])) {
        rt = std::max(0.0, rt - charge[static_cast<std::size_t>(p)]);
      }
    }
    return rt;
  };

  const double step = grid.step;
  std::function<bool(std::size_t)> search = [&](std::size_t idx) -> bool {
    if (stations.empty()) return battery_ok() && timing_ok();
    const int pos = stations[idx];
    const double need = arrival_deficit(pos);
    if (need > H + kEps) return false;
    const long top = static_cast<long>(std::ceil(need / step - 1e-9));
    if (idx + 1 == stations.size()) {
      // Battery feasibility grows with the last charge and timing shrinks,
      // so the smallest battery-feasible grid value decides.
      charge[static_cast<std::size_t>(pos)] = static_cast<double>(top) * step;
      if (!battery_ok()) return false;
      long lo = 0, hi = top;
      while (lo < hi) {
        const long mid = (lo + hi) / 2;
        charge[static_cast<std::size_t>(pos)] = static_cast<double>(mid) * step;
        if (battery_ok()) hi = mid;
        else lo = mid + 1;
      }
      charge[static_cast<std::size_t>(pos)] = static_cast<double>(lo) * step;
      return timing_ok();
    }
    for (long g = 0; g <= top; ++g) {
      charge[static_cast<std::size_t>(pos)] = static_cast<double>(g) * step;
      if (search(idx + 1)) return true;
    }
    return false;
  };
  return search(0);
}

std::optional<double> grid_min_excess(const Instance& inst, std::span<const int> seq, GridSpec grid) {
  const int k = static_cast<int>(seq.size());
  const double step = grid.step;
  std::vector<double> T(static_cast<std::size_t>(k), 0.0);
  double best = std::numeric_limits<double>::infinity();

  std::function<void(int, double)> dfs = [&](int p, double partial) {
    if (partial >= best - 1e-12) return;
    if (p == k) {
      best = partial;
      return;
    }
    const int v = seq[static_cast<std::size_t>(p)];
    const Node& nd = inst.node(v);
    double asap = nd.earliest;
    if (p > 0) {
      const int u = seq[static_cast<std::size_t>(p - 1)];
      asap = std::max(asap, T[static_cast<std::size_t>(p - 1)] + inst.node(u).service + inst.travel(u, v));
    }
    if (asap > nd.latest + kEps) return;
    if (inst.is_pickup(v)) {
      const long first = static_cast<long>(std::ceil(asap / step - 1e-9));
      const long last = static_cast<long>(std::floor(nd.latest / step + 1e-9));
      for (long g = first; g <= last; ++g) {
        T[static_cast<std::size_t>(p)] = static_cast<double>(g) * step;
        dfs(p + 1, partial);
      }
      return;
    }
    T[static_cast<std::size_t>(p)] = asap;
    double add = 0;
    if (inst.is_dropoff(v)) {
      const int i = inst.pickup_of(v);
      const int pp = position_of(seq, i, 0);
      if (pp < 0 || pp > p) return;
      const double ride = asap - T[static_cast<std::size_t>(pp)] - inst.node(i).service;
      if (ride > inst.node(i).max_ride + kEps) return;
      add = ride - inst.travel(i, v);
    }
    dfs(p + 1, partial + add);
  };
  dfs(0, 0.0);
  if (!std::isfinite(best)) return std::nullopt;
  return std::max(0.0, best);
}

ExhaustiveResult exhaustive_solve(const Instance& inst, StationCap cap) {
  const int n = inst.num_requests();
  const int K = inst.num_vehicles();
  const int S = static_cast<int>(inst.stations().size());
  const int per_station = cap.unbounded() ? 2 : cap.limit;
  const FragmentTable table = enumerate_fragments(inst, ArcMask::all(inst));
  ExhaustiveResult out;

  // Candidate routes per vehicle keyed by (request mask, destination,
  // station counts), keeping the cheapest.
  struct Entry {
    int mask;
    int dest;
    std::vector<int> stations;
    double cost;
    Route route;
  };
  std::vector<std::vector<Entry>> cands(static_cast<std::size_t>(K));

  for (int veh = 0; veh < K; ++veh) {
    std::map<std::tuple<int, int, std::vector<int>>, std::size_t> index;
    auto& list = cands[static_cast<std::size_t>(veh)];
    auto offer = [&](int mask, const Route& r, double cost) {
      std::vector<int> counts(static_cast<std::size_t>(S), 0);
      for (int v : r.seq) {
        if (inst.is_station(v)) ++counts[static_cast<std::size_t>(inst.station_index(v))];
      }
      auto key = std::make_tuple(mask, r.seq.back(), counts);
      auto it = index.find(key);
      if (it == index.end()) {
        index.emplace(key, list.size());
        list.push_back({mask, r.seq.back(), counts, cost, r});
      } else if (cost < list[it->second].cost - 1e-12) {
        list[it->second].cost = cost;
        list[it->second].route = r;
      }
    };

    std::vector<int> users;
    std::vector<char> used(static_cast<std::size_t>(2 * n + 1), 0);
    std::function<void(int, int)> build_users;
    auto evaluate = [&](int mask) {
      // Zero-load gaps: before each fragment and after the last one.
      std::vector<std::size_t> gaps{0};
      int load = 0;
      for (std::size_t p = 0; p < users.size(); ++p) {
        load += inst.node(users[p]).load;
        if (load == 0) gaps.push_back(p + 1);
      }
      for (int f : inst.destinations()) {
        Route base{veh, {}};
        base.seq.push_back(inst.origin_of(veh));
        base.seq.insert(base.seq.end(), users.begin(), users.end());
        base.seq.push_back(f);
        ++out.routes_evaluated;
        const auto rc = check_route(inst, table, base, CheckOptions{cap, false});
        if (rc.ok()) {
          offer(mask, base, rc.cost.weighted);
          continue;
        }
        if (rc.violation != Violation::battery || S == 0) continue;
        // Insert station sequences into the gaps.
        std::vector<std::vector<int>> inserts(gaps.size());
        std::vector<int> counts(static_cast<std::size_t>(S), 0);
        std::function<void(std::size_t)> place = [&](std::size_t g) {
          if (g == gaps.size()) {
            Route r{veh, {inst.origin_of(veh)}};
            std::size_t u = 0;
            for (std::size_t gi = 0; gi < gaps.size(); ++gi) {
              while (u < gaps[gi]) r.seq.push_back(users[u++]);
              r.seq.insert(r.seq.end(), inserts[gi].begin(), inserts[gi].end());
            }
            while (u < users.size()) r.seq.push_back(users[u++]);
            r.seq.push_back(f);
            bool any = false;
            for (const auto& ins : inserts) any = any || !ins.empty();
            if (!any) return;
            ++out.routes_evaluated;
            const auto c = check_route(inst, table, r, CheckOptions{cap, false});
            if (c.ok()) offer(mask, r, c.cost.weighted);
            return;
          }
          place(g + 1);
          for (int s = 0; s < S; ++s) {
            if (counts[static_cast<std::size_t>(s)] >= per_station) continue;
            const int node = inst.stations()[static_cast<std::size_t>(s)];
            if (!inserts[g].empty() && inserts[g].back() == node) continue;
            ++counts[static_cast<std::size_t>(s)];
            inserts[g].push_back(node);
            // Allow several stations in one gap by staying on g.
            std::function<void()> stay = [&] {
              place(g + 1);
              for (int s2 = 0; s2 < S; ++s2) {
                if (counts[static_cast<std::size_t>(s2)] >= per_station) continue;
                const int node2 = inst.stations()[static_cast<std::size_t>(s2)];
                if (inserts[g].back() == node2) continue;
                ++counts[static_cast<std::size_t>(s2)];
                inserts[g].push_back(node2);
                stay();
                inserts[g].pop_back();
                --counts[static_cast<std::size_t>(s2)];
              }
            };
            stay();
            inserts[g].pop_back();
            --counts[static_cast<std::size_t>(s)];
          }
        };
        place(0);
      }
    };
    build_users = [&](int mask, int remaining) {
      if (remaining == 0) {
        evaluate(mask);
        return;
      }
      for (int v = 1; v <= 2 * n; ++v) {
        if (used[static_cast<std::size_t>(v)]) continue;
        const int r = inst.request_of(v);
        if (!(mask >> (r - 1) & 1)) continue;
        if (inst.is_dropoff(v) && !used[static_cast<std::size_t>(r)]) continue;
        used[static_cast<std::size_t>(v)] = 1;
        users.push_back(v);
        build_users(mask, remaining - 1);
        users.pop_back();
        used[static_cast<std::size_t>(v)] = 0;
      }
    };
    for (int mask = 0; mask < (1 << n); ++mask) build_users(mask, 2 * __builtin_popcount(static_cast<unsigned>(mask)));
  }

  // Combine one entry per vehicle.
  int best_served = -1;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<const Entry*> pick(static_cast<std::size_t>(K), nullptr), best_pick;
  std::vector<int> station_total(static_cast<std::size_t>(S), 0);
  std::vector<char> dest_used(static_cast<std::size_t>(inst.num_nodes()), 0);
  std::function<void(int, int, double)> combine = [&](int veh, int mask, double cost) {
    if (veh == K) {
      const int served = __builtin_popcount(static_cast<unsigned>(mask));
      if (served > best_served || (served == best_served && cost < best_cost - 1e-9)) {
        best_served = served;
        best_cost = cost;
        best_pick = pick;
      }
      return;
    }
    for (const auto& e : cands[static_cast<std::size_t>(veh)]) {
      if (e.mask & mask) continue;
      if (dest_used[static_cast<std::size_t>(e.dest)]) continue;
      bool ok = true;
      for (int s = 0; s < S; ++s) {
        if (!cap.allows(station_total[static_cast<std::size_t>(s)] + e.stations[static_cast<std::size_t>(s)])) ok = false;
      }
      if (!ok) continue;
      for (int s = 0; s < S; ++s) station_total[static_cast<std::size_t>(s)] += e.stations[static_cast<std::size_t>(s)];
      dest_used[static_cast<std::size_t>(e.dest)] = 1;
      pick[static_cast<std::size_t>(veh)] = &e;
      combine(veh + 1, mask | e.mask, cost + e.cost);
      dest_used[static_cast<std::size_t>(e.dest)] = 0;
      for (int s = 0; s < S; ++s) station_total[static_cast<std::size_t>(s)] -= e.stations[static_cast<std::size_t>(s)];
    }
  };
  combine(0, 0, 0.0);

  if (best_served < 0) return out;
  out.served = best_served;
  out.cost = best_cost;
  int mask = 0;
  for (int veh = 0; veh < K; ++veh) {
    out.solution.routes.push_back(best_pick[static_cast<std::size_t>(veh)]->route);
    mask |= best_pick[static_cast<std::size_t>(veh)]->mask;
  }
  for (int r = 1; r <= n; ++r) {
    if (!(mask >> (r - 1) & 1)) out.solution.unserved.push_back(r);
  }
  out.solution.cost = best_cost;
  return out;
}

}  // namespace eadarp::oracle
