#pragma once

#include <optional>
#include <span>

#include "eadarp/fragments.hpp"
#include "eadarp/model.hpp"
#include "eadarp/routeval.hpp"

// Brute-force references for tests. Nothing in the solver calls these.
namespace eadarp::oracle {

struct GridSpec {
  double step = 0.01;
};

// Minimum total excess ride time over a whole sequence, which may be a
// fragment (user nodes only) or a full route with depots and stations. For
// routes the LP also carries charging durations and the battery state, so
// infeasible routes come back as nullopt.
std::optional<double> brute_force_min_excess(const Instance& inst, std::span<const int> seq);

// Enumerates charging durations on the grid at every station of the route
// (at most three), simulates the battery and decides the remaining timing
// problem exactly. Also checks structure, capacity and the station cap.
bool brute_force_feasible(const Instance& inst, const Route& route, GridSpec grid = {},
                          StationCap cap = StationCap{});

// Minimum excess of a fragment by enumerating pickup start times on the grid
// (dropoffs as early as possible).
std::optional<double> grid_min_excess(const Instance& inst, std::span<const int> seq, GridSpec grid = {0.1});

struct ExhaustiveResult {
  Solution solution;
  int served = 0;
  double cost = 0;
  long routes_evaluated = 0;
};

// Lexicographic optimum (most requests served, then least cost) for tiny
// instances (n <= 4, K <= 2, |S| <= 2). Routes are evaluated with
// check_route against a table enumerated without arc elimination. With an
// unbounded cap each station appears at most twice per route.
ExhaustiveResult exhaustive_solve(const Instance& inst, StationCap cap = StationCap{});

}  // namespace eadarp::oracle
