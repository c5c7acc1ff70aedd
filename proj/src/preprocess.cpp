#include "eadarp/preprocess.hpp"

#include <algorithm>
#include <limits>

namespace eadarp {

namespace {

constexpr double kEps = 1e-6;

void set_window(InstanceData& d, int i, double e, double l) {
  auto& nd = d.nodes[static_cast<std::size_t>(i)];
  nd.earliest = std::max(nd.earliest, e);
  nd.latest = std::min(nd.latest, l);
}

}  // namespace

int ArcMask::count() const {
  return static_cast<int>(std::count(allowed_.begin(), allowed_.end(), char{1}));
}

ArcMask ArcMask::all(const Instance& inst) {
  ArcMask m;
  m.size = inst.num_nodes();
  m.allowed_.assign(static_cast<std::size_t>(m.size) * static_cast<std::size_t>(m.size), 1);
  double sum = 0;
  for (int i = 0; i < m.size; ++i) {
    m.set(i, i, false);
    for (int j = 0; j < m.size; ++j) {
      if (i != j) sum += inst.travel(i, j);
    }
  }
  const int arcs = m.size * (m.size - 1);
  m.mean_arc_travel = arcs > 0 ? sum / arcs : 0.0;
  return m;
}

Instance tighten_time_windows(const Instance& inst) {
  InstanceData d = inst.data();
  const int n = inst.num_requests();
  auto e = [&](int i) { return d.nodes[static_cast<std::size_t>(i)].earliest; };
  auto l = [&](int i) { return d.nodes[static_cast<std::size_t>(i)].latest; };
  auto s = [&](int i) { return d.nodes[static_cast<std::size_t>(i)].service; };
  auto m = [&](int i) { return d.nodes[static_cast<std::size_t>(i)].max_ride; };

  for (int i = 1; i <= n; ++i) {
    set_window(d, i, e(n + i) - m(i) - s(i), l(n + i) - inst.travel(i, n + i) - s(i));
  }
  for (int i = 1; i <= n; ++i) {
    set_window(d, n + i, e(i) + inst.travel(i, n + i) + s(i), l(i) + m(i) + s(i));
  }
  for (int st : inst.stations()) {
    double lo = std::numeric_limits<double>::infinity();
    for (int o : inst.origins()) lo = std::min(lo, e(o) + inst.travel(o, st));
    double hi = -std::numeric_limits<double>::infinity();
    for (int f : inst.destinations()) hi = std::max(hi, d.horizon - inst.travel(st, f));
    set_window(d, st, lo, hi);
  }
  for (int o : inst.origins()) {
    double lo = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= n; ++j) lo = std::min(lo, e(j) - inst.travel(o, j));
    for (int st : inst.stations()) lo = std::min(lo, e(st) - inst.travel(o, st));
    if (lo < std::numeric_limits<double>::infinity()) set_window(d, o, std::max(0.0, lo), l(o));
  }
  for (int f : inst.destinations()) {
    double hi = -std::numeric_limits<double>::infinity();
    for (int j = n + 1; j <= 2 * n; ++j) hi = std::max(hi, l(j) + s(j) + inst.travel(j, f));
    for (int o : inst.origins()) hi = std::max(hi, l(o) + inst.travel(o, f));
    for (int st : inst.stations()) hi = std::max(hi, l(st) + inst.full_recharge() + inst.travel(st, f));
    if (hi > -std::numeric_limits<double>::infinity()) set_window(d, f, e(f), hi);
  }

  for (const auto& nd : d.nodes) {
    if (nd.earliest > nd.latest + kEps) {
      throw InfeasibleInstance(nd.id, "instance trivially infeasible: empty time window at node " +
                                          std::to_string(nd.id) + " [" + std::to_string(nd.earliest) + ", " +
                                          std::to_string(nd.latest) + "]");
    }
  }
  return Instance(std::move(d));
}

bool path_schedule_feasible(const Instance& inst, std::span<const int> seq) {
  // Difference constraints T_b - T_a <= w, solved by Bellman-Ford from a
  // virtual source (index k) that pins absolute time 0.
  const int k = static_cast<int>(seq.size());
  if (k == 0) return true;
  struct Edge {
    int a, b;
    double w;
  };
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(4 * k + 4));
  const int z = k;
  for (int p = 0; p < k; ++p) {
    const Node& nd = inst.node(seq[static_cast<std::size_t>(p)]);
    edges.push_back({z, p, nd.latest});
    edges.push_back({p, z, -nd.earliest});
    if (p + 1 < k) {
      const int a = seq[static_cast<std::size_t>(p)];
      const int b = seq[static_cast<std::size_t>(p + 1)];
      edges.push_back({p + 1, p, -(nd.service + inst.travel(a, b))});
    }
  }
  const int last = seq.back();
  for (int p = 0; p < k; ++p) {
    const int i = seq[static_cast<std::size_t>(p)];
    if (!inst.is_pickup(i)) continue;
    const Node& pn = inst.node(i);
    const int drop = inst.dropoff_of(i);
    int q = -1;
    for (int r = p + 1; r < k; ++r) {
      if (seq[static_cast<std::size_t>(r)] == drop) {
        q = r;
        break;
      }
    }
    if (q >= 0) {
      edges.push_back({p, q, pn.max_ride + pn.service});
    } else if (p == k - 1) {
      if (inst.travel(i, drop) > pn.max_ride + kEps) return false;
    } else {
      const double rest = inst.node(last).service + inst.travel(last, drop);
      edges.push_back({p, k - 1, pn.max_ride + pn.service - rest});
    }
  }
  std::vector<double> dist(static_cast<std::size_t>(k + 1), 0.0);
  for (int it = 0; it <= k + 1; ++it) {
    bool changed = false;
    for (const auto& ed : edges) {
      const double cand = dist[static_cast<std::size_t>(ed.a)] + ed.w;
      if (cand < dist[static_cast<std::size_t>(ed.b)] - kEps) {
        dist[static_cast<std::size_t>(ed.b)] = cand;
        changed = true;
      }
    }
    if (!changed) return true;
  }
  return false;
}

ArcMask eliminate_arcs(const Instance& inst) {
  const int N = inst.num_nodes();
  const int n = inst.num_requests();
  const int cap = inst.max_capacity();
  ArcMask mask;
  mask.size = N;
  mask.allowed_.assign(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), 1);

  auto feasible = [&](std::initializer_list<int> path) {
    std::vector<int> seq(path);
    int load = 0;
    for (int v : seq) {
      load += inst.node(v).load;
      if (load > cap) return false;
    }
    return path_schedule_feasible(inst, seq);
  };

  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      bool ok = true;
      if (i == j) ok = false;
      else if (inst.is_origin(j) || inst.is_destination(i)) ok = false;
      else if (inst.is_origin(i) && inst.is_dropoff(j)) ok = false;
      else if (inst.is_pickup(i) && (inst.is_station(j) || inst.is_destination(j))) ok = false;
      else if (inst.is_station(i) && inst.is_dropoff(j)) ok = false;
      else if (inst.is_dropoff(i) && inst.is_pickup(j) && inst.pickup_of(i) == j) ok = false;
      else if (inst.node(i).earliest + inst.node(i).service + inst.travel(i, j) > inst.node(j).latest + kEps) ok = false;
      else if (inst.is_pickup(i) && inst.is_pickup(j)) {
        const int ni = inst.dropoff_of(i), nj = inst.dropoff_of(j);
        ok = feasible({i, j, ni, nj}) || feasible({i, j, nj, ni});
      } else if (inst.is_dropoff(i) && inst.is_dropoff(j)) {
        const int pi = inst.pickup_of(i), pj = inst.pickup_of(j);
        ok = feasible({pi, pj, i, j}) || feasible({pj, pi, i, j});
      } else if (inst.is_pickup(i) && inst.is_dropoff(j)) {
        const int pj = inst.pickup_of(j);
        if (pj == i) ok = feasible({i, j});
        else ok = feasible({pj, i, j, inst.dropoff_of(i)});
      } else if (inst.is_dropoff(i) && inst.is_pickup(j)) {
        ok = feasible({inst.pickup_of(i), i, j, inst.dropoff_of(j)});
      }
      mask.set(i, j, ok);
    }
  }

  double sum = 0;
  int arcs = 0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (mask.allowed(i, j)) {
        sum += inst.travel(i, j);
        ++arcs;
      }
    }
  }
  mask.mean_arc_travel = arcs > 0 ? sum / arcs : 0.0;

  for (int r = 1; r <= n; ++r) {
    bool in = false, out = false;
    for (int v = 0; v < N; ++v) {
      in = in || mask.allowed(v, r);
      out = out || mask.allowed(r, v);
    }
    if (!in || !out || inst.node(r).load > cap || !feasible({r, inst.dropoff_of(r)})) {
      mask.infeasible_requests.push_back(r);
    }
  }
  return mask;
}

Preprocessed preprocess(const Instance& inst) {
  Instance tight = tighten_time_windows(inst);
  ArcMask mask = eliminate_arcs(tight);
  return {std::move(tight), std::move(mask)};
}

}  // namespace eadarp
