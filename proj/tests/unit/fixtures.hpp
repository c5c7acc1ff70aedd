#pragma once

#include <optional>
#include <vector>

#include "eadarp/model.hpp"

namespace fx {

using eadarp::InstanceData;
using eadarp::Node;
using eadarp::NodeKind;

// Hand-built instances. Nodes must be added in id order: origin 0, pickups
// 1..n, dropoffs n+1..2n, then the remaining origins, destinations, stations.
struct Builder {
  InstanceData d;

  Builder(int vehicles, int requests, double horizon = 1000) {
    d.name = "fixture";
    d.vehicles = vehicles;
    d.requests = requests;
    d.horizon = horizon;
    d.battery_capacity = 270;
    d.recharge_rate = 1;
    d.discharge_rate = 1;
    d.min_final_soc = 0.1;
    d.capacities.assign(static_cast<std::size_t>(vehicles), 3);
  }

  Builder& battery(double q, double alpha, double beta, double gamma) {
    d.battery_capacity = q;
    d.recharge_rate = alpha;
    d.discharge_rate = beta;
    d.min_final_soc = gamma;
    return *this;
  }

  Builder& add(NodeKind kind, double x, double y, double e, double l, double service = 0, int load = 0,
               double max_ride = 0) {
    Node n;
    n.id = static_cast<int>(d.nodes.size());
    n.kind = kind;
    n.x = x;
    n.y = y;
    n.service = service;
    n.load = load;
    n.earliest = e;
    n.latest = l;
    n.max_ride = max_ride;
    d.nodes.push_back(n);
    if (kind == NodeKind::station) ++d.stations;
    if (kind == NodeKind::destination) ++d.destinations;
    return *this;
  }
  Builder& origin(double x, double y, double e = 0, double l = 1000) { return add(NodeKind::origin, x, y, e, l); }
  Builder& destination(double x, double y, double e = 0, double l = 1000) {
    return add(NodeKind::destination, x, y, e, l);
  }
  Builder& station(double x, double y, double e = 0, double l = 1000) { return add(NodeKind::station, x, y, e, l); }
  Builder& pickup(double x, double y, double e, double l, double max_ride, double service = 0, int load = 1) {
    return add(NodeKind::pickup, x, y, e, l, service, load, max_ride);
  }
  Builder& dropoff(double x, double y, double e, double l, double service = 0, int load = -1) {
    return add(NodeKind::dropoff, x, y, e, l, service, load);
  }

  // Explicit travel times; entries not set stay Euclidean.
  Builder& matrix(const std::vector<std::vector<double>>& rows) {
    eadarp::Matrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = rows[i][j];
    }
    d.travel = m;
    return *this;
  }

  eadarp::Instance build() const { return eadarp::Instance(d); }
};

// Small random instance with the library generator.
inline eadarp::Instance tiny(std::uint64_t seed, int vehicles = 2, int requests = 3, int stations = 1,
                             double gamma = 0.1) {
  eadarp::GeneratorSpec spec;
  spec.vehicles = vehicles;
  spec.requests = requests;
  spec.stations = stations;
  spec.destinations = vehicles;
  spec.geometry_seed = seed * 7919 + 1;
  spec.gamma = gamma;
  return eadarp::generate_instance(spec, seed);
}

}  // namespace fx
