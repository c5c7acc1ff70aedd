#include "eadarp/fragments.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <thread>

#include "eadarp/lp.hpp"

namespace eadarp {

namespace {

constexpr double kEps = 1e-6;

}  // namespace

FragmentTable::FragmentTable() : trie_(1) {}

const Fragment* FragmentTable::find(std::span<const int> seq, int capacity) const {
  int node = 0;
  for (int v : seq) {
    int next = -1;
    for (const auto& [key, child] : trie_[static_cast<std::size_t>(node)].children) {
      if (key == v) {
        next = child;
        break;
      }
    }
    if (next < 0) return nullptr;
    node = next;
  }
  const int idx = trie_[static_cast<std::size_t>(node)].fragment;
  if (idx < 0) return nullptr;
  const Fragment& f = fragments_[static_cast<std::size_t>(idx)];
  return f.max_load <= capacity ? &f : nullptr;
}

bool FragmentTable::insert(Fragment fragment) {
  int node = 0;
  for (int v : fragment.seq) {
    int next = -1;
    for (const auto& [key, child] : trie_[static_cast<std::size_t>(node)].children) {
      if (key == v) {
        next = child;
        break;
      }
    }
    if (next < 0) {
      next = static_cast<int>(trie_.size());
      trie_[static_cast<std::size_t>(node)].children.emplace_back(v, next);
      trie_.emplace_back();
    }
    node = next;
  }
  auto& slot = trie_[static_cast<std::size_t>(node)].fragment;
  if (slot >= 0) return false;
  slot = static_cast<int>(fragments_.size());
  fragments_.push_back(std::move(fragment));
  return true;
}

void FragmentTable::dump(std::ostream& out) const {
  for (const auto& f : fragments_) {
    for (int v : f.seq) out << v << ' ';
    out << f.eu_min << '\n';
  }
}

std::optional<double> min_excess_single(const Instance& inst, int pickup) {
  const int drop = inst.dropoff_of(pickup);
  const Node& p = inst.node(pickup);
  const Node& d = inst.node(drop);
  const double t = inst.travel(pickup, drop);
  if (p.earliest + p.service + t > d.latest + kEps) return std::nullopt;
  if (t > p.max_ride + kEps) return std::nullopt;
  const double excess = std::max(0.0, d.earliest - p.latest - p.service - t);
  if (excess > p.max_ride - t + kEps) return std::nullopt;
  return excess;
}

std::optional<double> min_excess_lp(const Instance& inst, std::span<const int> seq) {
  // Variables: y_k = T_k - e_k >= 0 for every position, and R_r >= 0 per
  // request.
  const int k = static_cast<int>(seq.size());
  LinearProgram lp;
  std::vector<int> y(static_cast<std::size_t>(k));
  for (int p = 0; p < k; ++p) y[static_cast<std::size_t>(p)] = lp.add_variable(0.0);
  auto e = [&](int p) { return inst.node(seq[static_cast<std::size_t>(p)]).earliest; };

  for (int p = 0; p < k; ++p) {
    const Node& nd = inst.node(seq[static_cast<std::size_t>(p)]);
    lp.add_constraint({{y[static_cast<std::size_t>(p)], 1.0}}, LinearProgram::Sense::le, nd.latest - nd.earliest);
    if (p + 1 < k) {
      // T_{p+1} >= T_p + s_p + t
      const double d = nd.service + inst.travel(seq[static_cast<std::size_t>(p)], seq[static_cast<std::size_t>(p + 1)]);
      lp.add_constraint({{y[static_cast<std::size_t>(p + 1)], 1.0}, {y[static_cast<std::size_t>(p)], -1.0}},
                        LinearProgram::Sense::ge, e(p) + d - e(p + 1));
    }
  }
  int requests = 0;
  for (int p = 0; p < k; ++p) {
    const int i = seq[static_cast<std::size_t>(p)];
    if (!inst.is_pickup(i)) continue;
    const auto it = std::find(seq.begin() + p + 1, seq.end(), inst.dropoff_of(i));
    if (it == seq.end()) return std::nullopt;
    const int q = static_cast<int>(it - seq.begin());
    const Node& pn = inst.node(i);
    const double t = inst.travel(i, inst.dropoff_of(i));
    const int r = lp.add_variable(1.0);
    ++requests;
    // ride cap: T_q - T_p - s_p <= m_p
    lp.add_constraint({{y[static_cast<std::size_t>(q)], 1.0}, {y[static_cast<std::size_t>(p)], -1.0}},
                      LinearProgram::Sense::le, pn.max_ride + pn.service - e(q) + e(p));
    // R >= T_q - T_p - s_p - t
    lp.add_constraint({{r, 1.0}, {y[static_cast<std::size_t>(q)], -1.0}, {y[static_cast<std::size_t>(p)], 1.0}},
                      LinearProgram::Sense::ge, e(q) - e(p) - pn.service - t);
  }
  if (requests == 0) return 0.0;
  const auto res = lp.solve();
  if (res.status != LpStatus::optimal) return std::nullopt;
  return std::max(0.0, res.objective);
}

namespace {

struct Enumerator {
  const Instance& inst;
  const ArcMask& mask;
  int cap;
  std::vector<Fragment> out;
  int n_lp = 0;
  std::vector<int> seq;
  std::vector<char> visited;

  // Minimum excess of a closed fragment, avoiding the LP when a schedule
  // without any waiting fits every window.
  std::optional<double> excess(bool& used_lp) {
    used_lp = false;
    if (seq.size() == 2) return min_excess_single(inst, seq[0]);
    const std::size_t k = seq.size();
    std::vector<double> off(k, 0.0);
    for (std::size_t p = 1; p < k; ++p) {
      off[p] = off[p - 1] + inst.node(seq[p - 1]).service + inst.travel(seq[p - 1], seq[p]);
    }
    double lo = -1e300, hi = 1e300;
    for (std::size_t p = 0; p < k; ++p) {
      lo = std::max(lo, inst.node(seq[p]).earliest - off[p]);
      hi = std::min(hi, inst.node(seq[p]).latest - off[p]);
    }
    if (lo <= hi + kEps) {
      double total = 0;
      bool rides_ok = true;
      for (std::size_t p = 0; p < k; ++p) {
        const int i = seq[p];
        if (!inst.is_pickup(i)) continue;
        const auto q = static_cast<std::size_t>(std::find(seq.begin(), seq.end(), inst.dropoff_of(i)) - seq.begin());
        const double ride = off[q] - off[p] - inst.node(i).service;
        if (ride > inst.node(i).max_ride + kEps) rides_ok = false;
        total += ride - inst.travel(i, inst.dropoff_of(i));
      }
      if (rides_ok) return std::max(0.0, total);
    }
    used_lp = true;
    return min_excess_lp(inst, seq);
  }

  void emit() {
    bool used_lp = false;
    auto eu = excess(used_lp);
    if (used_lp) ++n_lp;
    if (!eu) return;
    Fragment f;
    f.seq = seq;
    f.eu_min = *eu;
    int load = 0;
    for (std::size_t p = 0; p < seq.size(); ++p) {
      load += inst.node(seq[p]).load;
      f.load_profile.push_back(load);
      f.max_load = std::max(f.max_load, load);
      if (inst.is_pickup(seq[p])) f.requests.push_back(seq[p]);
      if (p) f.travel += inst.travel(seq[p - 1], seq[p]);
    }
    std::sort(f.requests.begin(), f.requests.end());
    out.push_back(std::move(f));
  }

  void dfs(int load, double tmin, double used) {
    const int last = seq.back();
    const int n = inst.num_requests();
    for (int j = 1; j <= 2 * n; ++j) {
      if (visited[static_cast<std::size_t>(j)] || !mask.allowed(last, j)) continue;
      const Node& nj = inst.node(j);
      if (inst.is_dropoff(j) && !visited[static_cast<std::size_t>(inst.pickup_of(j))]) continue;
      const int next_load = load + nj.load;
      if (next_load > cap) continue;
      const double t = std::max(nj.earliest, tmin + inst.node(last).service + inst.travel(last, j));
      if (t > nj.latest + kEps) continue;
      const double next_used = used + inst.recharge(last, j);
      if (next_used > inst.full_recharge() + kEps) continue;
      seq.push_back(j);
      visited[static_cast<std::size_t>(j)] = 1;
      if (path_schedule_feasible(inst, seq)) {
        if (next_load == 0) emit();
        else dfs(next_load, t, next_used);
      }
      visited[static_cast<std::size_t>(j)] = 0;
      seq.pop_back();
    }
  }

  void run_root(int p) {
    seq.assign(1, p);
    visited.assign(static_cast<std::size_t>(inst.num_nodes()), 0);
    visited[static_cast<std::size_t>(p)] = 1;
    if (inst.node(p).load > cap || !path_schedule_feasible(inst, seq)) return;
    dfs(inst.node(p).load, inst.node(p).earliest, 0.0);
  }
};

}  // namespace

FragmentTable enumerate_fragments(const Instance& inst, const ArcMask& mask, int threads) {
  const auto start = std::chrono::steady_clock::now();
  const int n = inst.num_requests();
  std::vector<int> roots;
  for (int p = 1; p <= n; ++p) {
    if (std::find(mask.infeasible_requests.begin(), mask.infeasible_requests.end(), p) == mask.infeasible_requests.end()) {
      roots.push_back(p);
    }
  }
  std::vector<std::vector<Fragment>> per_root(roots.size());
  std::vector<int> lp_counts(roots.size(), 0);
  auto work = [&](std::size_t r) {
    Enumerator en{inst, mask, inst.max_capacity(), {}, 0, {}, {}};
    en.run_root(roots[r]);
    per_root[r] = std::move(en.out);
    lp_counts[r] = en.n_lp;
  };
  threads = std::max(1, std::min<int>(threads, static_cast<int>(roots.size())));
  if (threads == 1) {
    for (std::size_t r = 0; r < roots.size(); ++r) work(r);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t r = static_cast<std::size_t>(w); r < roots.size(); r += static_cast<std::size_t>(threads)) work(r);
      });
    }
    for (auto& th : pool) th.join();
  }

  FragmentTable table;
  long total_len = 0;
  for (std::size_t r = 0; r < roots.size(); ++r) {
    table.stats.n_lp += lp_counts[r];
    for (auto& f : per_root[r]) {
      total_len += static_cast<long>(f.seq.size());
      table.stats.leg_max = std::max(table.stats.leg_max, static_cast<int>(f.seq.size()));
      table.insert(std::move(f));
    }
  }
  table.stats.n_frag = static_cast<int>(table.size());
  table.stats.leg_avg = table.size() ? static_cast<double>(total_len) / static_cast<double>(table.size()) : 0.0;
  table.stats.cpu_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return table;
}

}  // namespace eadarp
