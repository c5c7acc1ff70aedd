#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "eadarp/fragments.hpp"
#include "eadarp/model.hpp"
#include "eadarp/preprocess.hpp"
#include "eadarp/rng.hpp"
#include "eadarp/routeval.hpp"

namespace eadarp {

// Everything a search needs, shared read-only between concurrent runs.
struct SearchContext {
  SearchContext(const Instance& inst, const FragmentTable& table, const ArcMask& mask, StationCap cap = {})
      : inst(inst), table(table), mask(mask), cap(cap) {}

  const Instance& inst;
  const FragmentTable& table;
  const ArcMask& mask;
  StationCap cap;
  // Breadth of the station-repair frontier kept per insertion round.
  int repair_frontier = 64;
  // Battery-infeasible insertions handed to repair when none is feasible.
  int repair_insertions = 3;
};

enum class MoveKind { ex_pickup, ex_dropoff, ex_2_neighbor, two_opt, relocate, exchange, add_request };

std::string_view to_string(MoveKind kind);
std::optional<MoveKind> parse_move_kind(std::string_view name);

struct DAParams {
  int iterations = 10000;
  double theta_max_rel = 0.9;
  double theta_red = 300;
  int n_imp = 50;
  std::uint64_t seed = 1;
  bool record_trace = false;
  std::vector<MoveKind> order{MoveKind::ex_pickup, MoveKind::ex_dropoff, MoveKind::ex_2_neighbor,
                              MoveKind::two_opt, MoveKind::relocate, MoveKind::exchange};
};

struct AcceptedMove {
  int iteration = 0;
  MoveKind kind = MoveKind::ex_pickup;
  int served = 0;
  double cost = 0;

  bool operator==(const AcceptedMove&) const = default;
};

struct SearchResult {
  Solution best;
  int served = 0;
  bool feasible = false;  // a complete solution (every vehicle routed) exists
  std::vector<double> best_cost;  // per iteration
  int iterations = 0;
  double seconds = 0;
  std::vector<AcceptedMove> trace;
};

// Number of requests served by `sol`.
int served_count(const Instance& inst, const Solution& sol);

// Lexicographic: more served first, then lower cost.
bool better(const Instance& inst, const Solution& a, const Solution& b);

// Routes every vehicle; requests that fit nowhere end up in `unserved`.
// Returns a solution with no routes if even the idle routes (o, f) cannot be
// assigned distinct destinations feasibly.
Solution parallel_insertion(const SearchContext& ctx, Rng& rng);

// Inserts random available stations at zero-load positions, breadth first,
// up to ceil(|S|/2) stations in the route. `used_elsewhere` holds per-station
// visit counts of the other routes.
std::optional<Route> repair_with_stations(const SearchContext& ctx, const Route& route,
                                          std::span<const int> used_elsewhere, Rng& rng);

std::optional<Solution> intra_route_move(const SearchContext& ctx, MoveKind kind, const Solution& sol, Rng& rng);
std::optional<Solution> inter_route_move(const SearchContext& ctx, MoveKind kind, const Solution& sol, Rng& rng);
std::optional<Solution> add_request_move(const SearchContext& ctx, const Solution& sol, Rng& rng);

SearchResult da_search(const SearchContext& ctx, const DAParams& params);

}  // namespace eadarp
