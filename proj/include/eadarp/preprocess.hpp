#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eadarp/model.hpp"

namespace eadarp {

class InfeasibleInstance : public std::runtime_error {
 public:
  InfeasibleInstance(int node, const std::string& message) : std::runtime_error(message), node_(node) {}
  int node() const { return node_; }

 private:
  int node_;
};

struct ArcMask {
  int size = 0;
  std::vector<char> allowed_;
  // Requests whose pickup lost every incoming or outgoing arc, or whose
  // direct trip cannot be scheduled. They can never be served.
  std::vector<int> infeasible_requests;
  double mean_arc_travel = 0;  // mean t over allowed arcs

  bool allowed(int i, int j) const {
    return allowed_[static_cast<std::size_t>(i) * static_cast<std::size_t>(size) + static_cast<std::size_t>(j)] != 0;
  }
  void set(int i, int j, bool v) {
    allowed_[static_cast<std::size_t>(i) * static_cast<std::size_t>(size) + static_cast<std::size_t>(j)] = v ? 1 : 0;
  }
  int count() const;

  // Every arc allowed except self-loops.
  static ArcMask all(const Instance& inst);
};

// Single pass of the four tightening rules (pickups, dropoffs, stations,
// depots). Windows never widen. Throws InfeasibleInstance if a window empties.
//
// Depot rule as implemented: an origin's e is raised to the earliest moment a
// departure can still matter, min over P and S of e_j - t_{o,j}; a
// destination's l is lowered to max over predecessors j in D, O of
// l_j + s_j + t_{j,f}, and l_s + H + t_{s,f} for stations.
Instance tighten_time_windows(const Instance& inst);

// Arc rules, all sound:
//   self-loops; arcs into an origin or out of a destination;
//   (o, dropoff), (pickup, station|destination), (station, dropoff), (n+i, i);
//   (origin, station) and (station, station) are kept;
//   e_i + s_i + t_ij > l_j;
//   pickup/pickup and dropoff/dropoff pairs over the largest capacity;
//   the four-node path tests: (i, n+j) needs j,i,n+j,n+i; (n+i, j) needs
//   i,n+i,j,n+j; (i, j) needs one of i,j,n+i,n+j / i,j,n+j,n+i; (n+i, n+j)
//   needs one of i,j,n+i,n+j / j,i,n+i,n+j. A path is feasible when its
//   windows, precedence and ride caps admit a schedule.
ArcMask eliminate_arcs(const Instance& inst);

// Does the sequence admit service start times satisfying windows, travel
// plus service between consecutive nodes, and the ride caps of requests whose
// pickup lies in the sequence? For a pickup whose dropoff is absent, the
// remaining leg t(last, n+i) is charged against its cap.
bool path_schedule_feasible(const Instance& inst, std::span<const int> seq);

struct Preprocessed {
  Instance inst;
  ArcMask mask;
};

Preprocessed preprocess(const Instance& inst);

}  // namespace eadarp
