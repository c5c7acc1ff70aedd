#pragma once

#include <climits>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "eadarp/model.hpp"
#include "eadarp/preprocess.hpp"

namespace eadarp {

struct Fragment {
  std::vector<int> seq;           // user nodes only
  std::vector<int> requests;      // pickups served, ascending
  double eu_min = 0;              // minimum total excess ride time
  std::vector<int> load_profile;  // load after each node
  int max_load = 0;
  double travel = 0;              // sum of t over consecutive nodes
};

struct FragmentStats {
  int n_frag = 0;
  double leg_avg = 0;  // mean node count
  int leg_max = 0;
  int n_lp = 0;        // fragments that needed the scheduling LP
  double cpu_s = 0;
};

// Exact-key table of fragments. Keys are node-id sequences stored in a trie.
class FragmentTable {
 public:
  FragmentTable();

  // nullptr when seq is not a stored fragment or its peak load exceeds
  // `capacity`.
  const Fragment* find(std::span<const int> seq, int capacity = INT_MAX) const;
  bool insert(Fragment fragment);

  std::span<const Fragment> fragments() const { return fragments_; }
  std::size_t size() const { return fragments_.size(); }

  FragmentStats stats;

  // One line per fragment: node ids, then eu_min.
  void dump(std::ostream& out) const;

 private:
  struct TrieNode {
    std::vector<std::pair<int, int>> children;  // (node id, trie index)
    int fragment = -1;
  };
  std::vector<TrieNode> trie_;
  std::vector<Fragment> fragments_;
};

// Direct trip (i, n+i): max(0, e_{n+i} - l_i - s_i - t) if it respects the
// ride cap and windows, nullopt otherwise.
std::optional<double> min_excess_single(const Instance& inst, int pickup);

// Scheduling LP over an empty-to-empty user sequence; nullopt if infeasible.
std::optional<double> min_excess_lp(const Instance& inst, std::span<const int> seq);

// Depth-first enumeration from every pickup along allowed arcs, pruned by
// windows, the largest vehicle capacity, ride caps and battery from full.
// `threads` > 1 fans the roots out; the result does not depend on it.
FragmentTable enumerate_fragments(const Instance& inst, const ArcMask& mask, int threads = 1);

}  // namespace eadarp
