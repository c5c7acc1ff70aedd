#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eadarp {

enum class NodeKind { pickup, dropoff, origin, destination, station };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> parse_node_kind(std::string_view token);

// One vertex of the graph. Times are in minutes, loads in passengers.
struct Node {
  int id = 0;
  NodeKind kind = NodeKind::pickup;
  double x = 0;
  double y = 0;
  double service = 0;
  int load = 0;
  double earliest = 0;
  double latest = 0;
  double max_ride = 0;  // pickups only

  bool operator==(const Node&) const = default;
};

// Dense row-major square matrix.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), values_(n * n, fill) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

// The raw problem datum as it appears in an instance file. Battery
// parameters are kept in energy units here; Instance converts them.
struct InstanceData {
  std::string name;
  int vehicles = 0;
  int requests = 0;
  int stations = 0;      // declared |S|
  int destinations = 0;  // declared |F|
  double horizon = 0;
  double battery_capacity = 0;  // Q
  double recharge_rate = 1;     // alpha, energy per minute
  double discharge_rate = 1;    // beta, energy per minute
  double min_final_soc = 0;     // gamma
  double w_travel = 0.75;
  double w_excess = 0.25;
  std::vector<int> capacities;  // C_k, one per vehicle
  std::vector<Node> nodes;      // nodes[i].id == i
  std::optional<Matrix> travel; // explicit travel times; Euclidean otherwise

  bool operator==(const InstanceData&) const = default;
};

// Immutable, fully derived instance. Node ids 1..n are pickups and n+1..2n
// the matching dropoffs; every other id is a depot or a station. All battery
// quantities are time equivalents: recharge(i, j) = beta * t(i, j) / alpha is
// the time needed to recharge the energy spent on (i, j), and full_recharge()
// is H = Q / alpha.
class Instance {
 public:
  Instance() = default;
  explicit Instance(InstanceData data);

  const InstanceData& data() const { return data_; }
  const std::string& name() const { return data_.name; }

  int num_nodes() const { return static_cast<int>(data_.nodes.size()); }
  int num_requests() const { return data_.requests; }
  int num_vehicles() const { return data_.vehicles; }

  const Node& node(int i) const { return data_.nodes[static_cast<std::size_t>(i)]; }
  std::span<const Node> nodes() const { return data_.nodes; }
  NodeKind kind(int i) const { return node(i).kind; }

  bool is_pickup(int i) const { return i >= 1 && i <= data_.requests; }
  bool is_dropoff(int i) const { return i > data_.requests && i <= 2 * data_.requests; }
  bool is_user(int i) const { return i >= 1 && i <= 2 * data_.requests; }
  bool is_station(int i) const { return station_index_[static_cast<std::size_t>(i)] >= 0; }
  bool is_origin(int i) const { return kind(i) == NodeKind::origin; }
  bool is_destination(int i) const { return kind(i) == NodeKind::destination; }

  // Pickup of a request r in 1..n is node r; its dropoff is n + r.
  int dropoff_of(int pickup) const { return pickup + data_.requests; }
  int pickup_of(int dropoff) const { return dropoff - data_.requests; }
  int request_of(int user_node) const { return is_pickup(user_node) ? user_node : user_node - data_.requests; }

  double travel(int i, int j) const { return travel_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }
  double recharge(int i, int j) const { return recharge_(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); }
  double full_recharge() const { return full_recharge_; }
  // Largest admissible time-to-full at a destination depot, (1 - gamma) H.
  double final_recharge_bound() const { return (1.0 - data_.min_final_soc) * full_recharge_; }
  double charge_bound(int j) const { return is_destination(j) ? final_recharge_bound() : full_recharge_; }

  std::span<const int> origins() const { return origins_; }
  std::span<const int> destinations() const { return destinations_; }
  std::span<const int> stations() const { return stations_; }
  int station_index(int node_id) const { return station_index_[static_cast<std::size_t>(node_id)]; }

  int origin_of(int vehicle) const { return origins_[static_cast<std::size_t>(vehicle)]; }
  int capacity(int vehicle) const { return data_.capacities[static_cast<std::size_t>(vehicle)]; }
  int max_capacity() const;

  double horizon() const { return data_.horizon; }
  double gamma() const { return data_.min_final_soc; }
  double w_travel() const { return data_.w_travel; }
  double w_excess() const { return data_.w_excess; }

  const Matrix& travel_matrix() const { return travel_; }
  const Matrix& recharge_matrix() const { return recharge_; }

 private:
  InstanceData data_;
  Matrix travel_;
  Matrix recharge_;
  double full_recharge_ = 0;
  std::vector<int> origins_;
  std::vector<int> destinations_;
  std::vector<int> stations_;
  std::vector<int> station_index_;
};

// A vehicle's node sequence from its origin depot to a destination depot.
struct Route {
  int vehicle = 0;
  std::vector<int> seq;

  bool operator==(const Route&) const = default;
};

struct Solution {
  std::vector<Route> routes;  // one per vehicle, routes[k].vehicle == k
  std::vector<int> unserved;  // request ids, ascending
  double cost = 0;            // weighted objective over served requests

  int served(int num_requests) const { return num_requests - static_cast<int>(unserved.size()); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

Instance parse_instance(std::string_view text, std::string name = {});
Instance load_instance(const std::string& path);
std::string emit_instance(const Instance& inst);

// Returns an empty list iff every structural invariant holds.
std::vector<std::string> validate_instance(const Instance& inst);

struct GeneratorSpec {
  int vehicles = 2;
  int requests = 4;
  int stations = 1;
  int destinations = 2;
  double horizon = 240;
  std::uint64_t geometry_seed = 1;
  int capacity = 3;
  double max_ride = 30;
  double service = 3;
  double window_width = 15;
  double half_side = 10;  // coordinates drawn in [-half_side, half_side]^2
  double battery_capacity = 14.85;
  double recharge_rate = 0.055;
  double discharge_rate = 0.055;
  double gamma = 0.1;
  double w_travel = 0.75;
  double w_excess = 0.25;
  // When positive, travel times are rounded to multiples of this value and
  // closed under shortest paths, then stored as an explicit matrix.
  double time_resolution = 0;
};

// Deterministic for a fixed (spec, seed). Out-of-range parameters are clamped
// and reported through `warnings` when given; requests < 1 or vehicles < 1
// throw std::invalid_argument.
Instance generate_instance(const GeneratorSpec& spec, std::uint64_t seed,
                           std::vector<std::string>* warnings = nullptr);

Instance with_gamma(const Instance& inst, double gamma);

// Appends copies-1 replicas of every station (same position, fresh ids), so
// that an at-most-once station rule allows `copies` visits per location.
Instance replicate_stations(const Instance& inst, int copies);

}  // namespace eadarp
