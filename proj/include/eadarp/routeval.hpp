#pragma once

#include <string_view>
#include <vector>

#include "eadarp/fragments.hpp"
#include "eadarp/model.hpp"

namespace eadarp {

// Maximum visits per station. limit <= 0 means unbounded.
struct StationCap {
  int limit = 1;

  bool unbounded() const { return limit <= 0; }
  bool allows(int visits) const { return unbounded() || visits <= limit; }
  static StationCap unlimited() { return StationCap{0}; }
};

struct Label {
  std::vector<int> rch;  // visits per station index
  double tmin = 0;
  double tmax = 0;
  double rtmax = 0;  // time to full recharge, minimum recharging so far
  bool visited_any_station = false;
};

enum class Violation { none, structure, time_window, battery, station_cap, fragment };

std::string_view to_string(Violation v);

Label initial_label(const Instance& inst, int origin);

// Extends `from` (at node i) along (i, j) into `out`. Returns the first
// failed check; `out` is fully written either way.
//
// At a destination j, the battery bound U_j = (1 - gamma) H replaces H in
// both the recharge deficit Z_ij and the cap on rtMax, so that the extra
// charge needed for the final level is booked at the last station.
Violation extend_label(const Instance& inst, const Label& from, int i, int j, StationCap cap, Label& out);

struct CostBreakdown {
  double travel = 0;
  double excess = 0;
  double weighted = 0;
};

struct CheckOptions {
  StationCap cap;
  bool ignore_battery = false;  // used by repair to classify candidates
};

struct RouteCheck {
  Violation violation = Violation::none;
  int position = -1;  // index into seq of the first failing node
  CostBreakdown cost;

  bool ok() const { return violation == Violation::none; }
};

// Structural checks, fragment lookup (for the vehicle's capacity) and one
// forward labeling pass.
RouteCheck check_route(const Instance& inst, const FragmentTable& table, const Route& route, CheckOptions opt = {});

struct SolutionCheck {
  Violation violation = Violation::none;
  int route = -1;
  CostBreakdown cost;

  bool ok() const { return violation == Violation::none; }
};

// Sums route costs. Also enforces one route per vehicle, each request served
// at most once and listed as unserved otherwise, distinct destinations, and
// the station cap across all routes.
SolutionCheck solution_cost(const Instance& inst, const FragmentTable& table, const Solution& sol, StationCap cap);

}  // namespace eadarp
