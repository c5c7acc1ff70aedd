#include "eadarp/routeval.hpp"

#include <algorithm>

namespace eadarp {

namespace {

constexpr double kEps = 1e-6;

struct Core {
  double tmin;
  double tmax;
  double rtmax;
  bool visited;
};

// The REFs without the visit counters. Writes the successor into `out` and
// returns the first violated condition other than the station cap.
Violation extend_core(const Instance& inst, const Core& from, int i, int j, bool ignore_battery, Core& out) {
  const Node& ni = inst.node(i);
  const Node& nj = inst.node(j);
  const double t = inst.travel(i, j);
  const double h = inst.recharge(i, j);
  const double bound = inst.charge_bound(j);
  const bool i_station = inst.is_station(i);
  const double base = from.tmin + t + ni.service;
  const double arrive = std::max(nj.earliest, base);

  double z = 0;
  if (ignore_battery) {
    out.rtmax = 0;
  } else if (!from.visited) {
    out.rtmax = from.rtmax + h;
  } else {
    const double room = i_station ? from.rtmax : from.tmax - from.tmin;
    const double slack = std::max(0.0, std::min(nj.earliest - base, room));
    const double left = std::max(0.0, from.rtmax - slack);
    z = std::max(0.0, left + h - bound);
    out.rtmax = std::min(bound, left + h);
  }
  out.tmin = arrive + z;
  if (i_station && !ignore_battery) {
    out.tmax = std::min(nj.latest, std::max(nj.earliest, from.tmin + from.rtmax + t + ni.service));
  } else {
    out.tmax = std::min(nj.latest, std::max(nj.earliest, from.tmax + t + ni.service));
  }
  out.visited = from.visited || inst.is_station(j);

  if (arrive > nj.latest + kEps) return Violation::time_window;
  if (out.tmin > nj.latest + kEps) return Violation::battery;
  if (out.tmin > out.tmax + kEps) return z > 0 ? Violation::battery : Violation::time_window;
  if (!ignore_battery && out.rtmax > bound + kEps) return Violation::battery;
  return Violation::none;
}

}  // namespace

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::none: return "none";
    case Violation::structure: return "structure";
    case Violation::time_window: return "time_window";
    case Violation::battery: return "battery";
    case Violation::station_cap: return "station_cap";
    case Violation::fragment: return "fragment";
  }
  return "?";
}

Label initial_label(const Instance& inst, int origin) {
  Label l;
  l.rch.assign(inst.stations().size(), 0);
  l.tmin = inst.node(origin).earliest;
  l.tmax = l.tmin;
  l.rtmax = 0;
  l.visited_any_station = false;
  return l;
}

Violation extend_label(const Instance& inst, const Label& from, int i, int j, StationCap cap, Label& out) {
  out.rch = from.rch;
  if (out.rch.size() != inst.stations().size()) out.rch.resize(inst.stations().size(), 0);
  Core c{from.tmin, from.tmax, from.rtmax, from.visited_any_station};
  Core next{};
  Violation v = extend_core(inst, c, i, j, false, next);
  out.tmin = next.tmin;
  out.tmax = next.tmax;
  out.rtmax = next.rtmax;
  out.visited_any_station = next.visited;
  int visits = 0;
  if (inst.is_station(j)) visits = ++out.rch[static_cast<std::size_t>(inst.station_index(j))];
  if (v != Violation::none) {
    // The station cap sits between the time and battery checks.
    if (v == Violation::battery && out.tmin <= out.tmax + kEps && out.tmin <= inst.node(j).latest + kEps &&
        inst.is_station(j) && !cap.allows(visits)) {
      return Violation::station_cap;
    }
    return v;
  }
  if (inst.is_station(j) && !cap.allows(visits)) return Violation::station_cap;
  return Violation::none;
}

RouteCheck check_route(const Instance& inst, const FragmentTable& table, const Route& route, CheckOptions opt) {
  RouteCheck res;
  const auto& seq = route.seq;
  const int len = static_cast<int>(seq.size());
  const int N = inst.num_nodes();
  auto fail = [&](Violation v, int pos) {
    res.violation = v;
    res.position = pos;
    return res;
  };
  if (route.vehicle < 0 || route.vehicle >= static_cast<int>(inst.origins().size())) return fail(Violation::structure, 0);
  if (len < 2 || seq.front() != inst.origin_of(route.vehicle)) return fail(Violation::structure, 0);
  for (int v : seq) {
    if (v < 0 || v >= N) return fail(Violation::structure, 0);
  }
  if (!inst.is_destination(seq.back())) return fail(Violation::structure, len - 1);

  thread_local std::vector<char> seen;
  thread_local std::vector<int> visits;
  seen.assign(static_cast<std::size_t>(N), 0);
  visits.assign(inst.stations().size(), 0);

  // Structure and fragments.
  const int capacity = inst.capacity(route.vehicle);
  int load = 0;
  int start = -1;
  double excess = 0;
  for (int p = 1; p < len; ++p) {
    const int v = seq[static_cast<std::size_t>(p)];
    if (inst.is_user(v)) {
      if (seen[static_cast<std::size_t>(v)]) return fail(Violation::structure, p);
      if (inst.is_dropoff(v) && !seen[static_cast<std::size_t>(inst.pickup_of(v))]) return fail(Violation::structure, p);
      seen[static_cast<std::size_t>(v)] = 1;
      if (start < 0) start = p;
      load += inst.node(v).load;
      if (load == 0) {
        const Fragment* f = table.find(std::span<const int>(seq).subspan(static_cast<std::size_t>(start),
                                                                        static_cast<std::size_t>(p - start + 1)),
                                       capacity);
        if (!f) return fail(Violation::fragment, start);
        excess += f->eu_min;
        start = -1;
      }
    } else if (inst.is_station(v) || (inst.is_destination(v) && p == len - 1)) {
      if (start >= 0) return fail(Violation::structure, p);
    } else {
      return fail(Violation::structure, p);
    }
  }

  // Labels.
  const Node& o = inst.node(seq.front());
  Core cur{o.earliest, o.earliest, 0.0, false};
  double travel = 0;
  for (int p = 1; p < len; ++p) {
    const int i = seq[static_cast<std::size_t>(p - 1)];
    const int j = seq[static_cast<std::size_t>(p)];
    travel += inst.travel(i, j);
    Core next{};
    const Violation v = extend_core(inst, cur, i, j, opt.ignore_battery, next);
    if (v != Violation::none) return fail(v, p);
    if (inst.is_station(j)) {
      const int c = ++visits[static_cast<std::size_t>(inst.station_index(j))];
      if (!opt.cap.allows(c)) return fail(Violation::station_cap, p);
    }
    cur = next;
  }
  res.cost.travel = travel;
  res.cost.excess = excess;
  res.cost.weighted = inst.w_travel() * travel + inst.w_excess() * excess;
  return res;
}

SolutionCheck solution_cost(const Instance& inst, const FragmentTable& table, const Solution& sol, StationCap cap) {
  SolutionCheck res;
  const int K = inst.num_vehicles();
  const int n = inst.num_requests();
  auto fail = [&](Violation v, int r) {
    res.violation = v;
    res.route = r;
    return res;
  };
  if (static_cast<int>(sol.routes.size()) != K) return fail(Violation::structure, -1);
  std::vector<int> served(static_cast<std::size_t>(n + 1), 0);
  std::vector<int> station_visits(inst.stations().size(), 0);
  std::vector<char> dest_used(static_cast<std::size_t>(inst.num_nodes()), 0);
  for (int k = 0; k < K; ++k) {
    const Route& r = sol.routes[static_cast<std::size_t>(k)];
    if (r.vehicle != k) return fail(Violation::structure, k);
    const auto rc = check_route(inst, table, r, CheckOptions{cap, false});
    if (!rc.ok()) return fail(rc.violation, k);
    for (int v : r.seq) {
      if (inst.is_pickup(v)) ++served[static_cast<std::size_t>(v)];
      if (inst.is_station(v)) ++station_visits[static_cast<std::size_t>(inst.station_index(v))];
    }
    auto& d = dest_used[static_cast<std::size_t>(r.seq.back())];
    if (d) return fail(Violation::structure, k);
    d = 1;
    res.cost.travel += rc.cost.travel;
    res.cost.excess += rc.cost.excess;
  }
  for (int u : sol.unserved) {
    if (u < 1 || u > n) return fail(Violation::structure, -1);
    ++served[static_cast<std::size_t>(u)];
  }
  for (int i = 1; i <= n; ++i) {
    if (served[static_cast<std::size_t>(i)] != 1) return fail(Violation::structure, -1);
  }
  for (int c : station_visits) {
    if (!cap.allows(c)) return fail(Violation::station_cap, -1);
  }
  res.cost.weighted = inst.w_travel() * res.cost.travel + inst.w_excess() * res.cost.excess;
  return res;
}

}  // namespace eadarp
