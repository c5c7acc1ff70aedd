#include "eadarp/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "eadarp/rng.hpp"

namespace eadarp {

namespace {

constexpr double kTriangleTol = 1e-9;

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r' || line[i] == ',')) ++i;
    std::size_t j = i;
    while (j < line.size() && !(line[j] == ' ' || line[j] == '\t' || line[j] == '\r' || line[j] == ',')) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

struct Line {
  int number;
  std::vector<std::string_view> tokens;
};

std::vector<Line> logical_lines(std::string_view text) {
  std::vector<Line> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++number;
    std::string_view line = text.substr(pos, end - pos);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_tokens(line);
    if (!tokens.empty()) lines.push_back({number, std::move(tokens)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

double to_double(std::string_view tok, int line, const char* what) {
  double v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
    throw ParseError(line, std::string("expected a number for ") + what + ", got '" + std::string(tok) + "'");
  }
  return v;
}

int to_int(std::string_view tok, int line, const char* what) {
  int v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("expected an integer for ") + what + ", got '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::pickup: return "pickup";
    case NodeKind::dropoff: return "dropoff";
    case NodeKind::origin: return "origin";
    case NodeKind::destination: return "destination";
    case NodeKind::station: return "station";
  }
  return "?";
}

std::optional<NodeKind> parse_node_kind(std::string_view token) {
  for (auto k : {NodeKind::pickup, NodeKind::dropoff, NodeKind::origin, NodeKind::destination, NodeKind::station}) {
    if (token == to_string(k)) return k;
  }
  return std::nullopt;
}

ParseError::ParseError(int line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

Instance::Instance(InstanceData data) : data_(std::move(data)) {
  const auto n = data_.nodes.size();
  if (data_.travel && data_.travel->size() == n) {
    travel_ = *data_.travel;
  } else {
    travel_ = Matrix(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double dx = data_.nodes[i].x - data_.nodes[j].x;
        const double dy = data_.nodes[i].y - data_.nodes[j].y;
        travel_(i, j) = std::sqrt(dx * dx + dy * dy);
      }
    }
  }
  recharge_ = Matrix(n);
  const double ratio = data_.recharge_rate > 0 ? data_.discharge_rate / data_.recharge_rate : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) recharge_(i, j) = ratio * travel_(i, j);
  }
  full_recharge_ = data_.recharge_rate > 0 ? data_.battery_capacity / data_.recharge_rate : 0.0;

  station_index_.assign(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const int id = static_cast<int>(i);
    switch (data_.nodes[i].kind) {
      case NodeKind::origin: origins_.push_back(id); break;
      case NodeKind::destination: destinations_.push_back(id); break;
      case NodeKind::station:
        station_index_[i] = static_cast<int>(stations_.size());
        stations_.push_back(id);
        break;
      default: break;
    }
  }
}

int Instance::max_capacity() const {
  int best = 0;
  for (int c : data_.capacities) best = std::max(best, c);
  return best;
}

Instance parse_instance(std::string_view text, std::string name) {
  const auto lines = logical_lines(text);
  if (lines.empty()) throw ParseError(1, "empty instance file");

  InstanceData d;
  d.name = std::move(name);

  std::size_t li = 0;
  {
    const auto& h = lines[li++];
    if (h.tokens.size() != 5) throw ParseError(h.number, "malformed header: expected 'K n |S| |F| T_p'");
    d.vehicles = to_int(h.tokens[0], h.number, "K");
    d.requests = to_int(h.tokens[1], h.number, "n");
    d.stations = to_int(h.tokens[2], h.number, "|S|");
    d.destinations = to_int(h.tokens[3], h.number, "|F|");
    d.horizon = to_double(h.tokens[4], h.number, "T_p");
    if (d.vehicles < 0 || d.requests < 0 || d.stations < 0 || d.destinations < 0) {
      throw ParseError(h.number, "malformed header: negative count");
    }
  }
  {
    if (li >= lines.size()) throw ParseError(lines.back().number, "missing parameter line");
    const auto& p = lines[li++];
    if (p.tokens.size() != 6) throw ParseError(p.number, "malformed header: expected 'Q alpha beta gamma w1 w2'");
    d.battery_capacity = to_double(p.tokens[0], p.number, "Q");
    d.recharge_rate = to_double(p.tokens[1], p.number, "alpha");
    d.discharge_rate = to_double(p.tokens[2], p.number, "beta");
    d.min_final_soc = to_double(p.tokens[3], p.number, "gamma");
    d.w_travel = to_double(p.tokens[4], p.number, "w1");
    d.w_excess = to_double(p.tokens[5], p.number, "w2");
  }
  // Optional capacity line: one integer per vehicle. Node lines always carry
  // a kind keyword in the second column, which tells the two apart.
  if (li < lines.size() && (lines[li].tokens.size() < 2 || !parse_node_kind(lines[li].tokens[1]))) {
    const auto& c = lines[li++];
    if (static_cast<int>(c.tokens.size()) != d.vehicles) {
      throw ParseError(c.number, "capacity line must list one capacity per vehicle");
    }
    for (auto tok : c.tokens) d.capacities.push_back(to_int(tok, c.number, "C_k"));
  } else {
    d.capacities.assign(static_cast<std::size_t>(d.vehicles), 3);
  }

  const int expected = 2 * d.requests + d.vehicles + d.stations + d.destinations;
  std::vector<std::optional<Node>> slots(static_cast<std::size_t>(expected));
  std::vector<int> line_of(static_cast<std::size_t>(expected), 0);
  int count = 0;
  int last_line = lines[li > 0 ? li - 1 : 0].number;
  while (li < lines.size() && lines[li].tokens[0] != "MATRIX") {
    const auto& l = lines[li++];
    last_line = l.number;
    if (l.tokens.size() != 9) throw ParseError(l.number, "node line must have 9 fields 'id kind x y s q e l m'");
    Node nd;
    nd.id = to_int(l.tokens[0], l.number, "id");
    auto kind = parse_node_kind(l.tokens[1]);
    if (!kind) throw ParseError(l.number, "unknown node kind '" + std::string(l.tokens[1]) + "'");
    nd.kind = *kind;
    nd.x = to_double(l.tokens[2], l.number, "x");
    nd.y = to_double(l.tokens[3], l.number, "y");
    nd.service = to_double(l.tokens[4], l.number, "s");
    nd.load = to_int(l.tokens[5], l.number, "q");
    nd.earliest = to_double(l.tokens[6], l.number, "e");
    nd.latest = to_double(l.tokens[7], l.number, "l");
    nd.max_ride = to_double(l.tokens[8], l.number, "m");
    ++count;
    if (count > expected) {
      throw ParseError(l.number, "node count mismatch: header implies " + std::to_string(expected) + " nodes");
    }
    if (nd.id < 0 || nd.id >= expected) throw ParseError(l.number, "node id " + std::to_string(nd.id) + " out of range");
    auto& slot = slots[static_cast<std::size_t>(nd.id)];
    if (slot) throw ParseError(l.number, "duplicate node id " + std::to_string(nd.id));
    slot = nd;
    line_of[static_cast<std::size_t>(nd.id)] = l.number;
  }
  if (count != expected) {
    throw ParseError(last_line, "node count mismatch: header implies " + std::to_string(expected) + " nodes, found " +
                                    std::to_string(count));
  }
  for (int i = 1; i <= d.requests; ++i) {
    const Node& p = *slots[static_cast<std::size_t>(i)];
    const Node& q = *slots[static_cast<std::size_t>(i + d.requests)];
    if (p.kind != NodeKind::pickup) {
      throw ParseError(line_of[static_cast<std::size_t>(i)], "node " + std::to_string(i) + " must be a pickup");
    }
    if (q.kind != NodeKind::dropoff || q.load != -p.load) {
      throw ParseError(line_of[static_cast<std::size_t>(i)],
                       "unpaired request: pickup " + std::to_string(i) + " has no matching dropoff " +
                           std::to_string(i + d.requests));
    }
  }
  for (int i = 0; i < expected; ++i) {
    const Node& nd = *slots[static_cast<std::size_t>(i)];
    const bool user_slot = i >= 1 && i <= 2 * d.requests;
    if (!user_slot && (nd.kind == NodeKind::pickup || nd.kind == NodeKind::dropoff)) {
      throw ParseError(line_of[static_cast<std::size_t>(i)],
                       "unpaired request: user node " + std::to_string(i) + " outside 1.." + std::to_string(2 * d.requests));
    }
  }
  for (auto& s : slots) d.nodes.push_back(*s);

  if (li < lines.size()) {
    const int header_line = lines[li].number;
    if (lines[li].tokens.size() != 1) throw ParseError(header_line, "MATRIX takes no arguments");
    ++li;
    Matrix m(static_cast<std::size_t>(expected));
    for (int r = 0; r < expected; ++r) {
      if (li >= lines.size()) throw ParseError(header_line, "travel matrix has too few rows");
      const auto& l = lines[li++];
      if (static_cast<int>(l.tokens.size()) != expected) {
        throw ParseError(l.number, "travel matrix row must have " + std::to_string(expected) + " entries");
      }
      for (int c = 0; c < expected; ++c) {
        m(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = to_double(l.tokens[static_cast<std::size_t>(c)], l.number, "t");
      }
    }
    if (li < lines.size()) throw ParseError(lines[li].number, "trailing content after travel matrix");
    d.travel = std::move(m);
  }
  return Instance(std::move(d));
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open instance file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string name = path;
  if (auto slash = name.find_last_of("/\\"); slash != std::string::npos) name = name.substr(slash + 1);
  if (auto dot = name.rfind('.'); dot != std::string::npos && dot > 0) name = name.substr(0, dot);
  return parse_instance(ss.str(), name);
}

std::string emit_instance(const Instance& inst) {
  const auto& d = inst.data();
  std::string out;
  out += std::to_string(d.vehicles) + ' ' + std::to_string(d.requests) + ' ' + std::to_string(d.stations) + ' ' +
         std::to_string(d.destinations) + ' ' + fmt_double(d.horizon) + '\n';
  out += fmt_double(d.battery_capacity) + ' ' + fmt_double(d.recharge_rate) + ' ' + fmt_double(d.discharge_rate) + ' ' +
         fmt_double(d.min_final_soc) + ' ' + fmt_double(d.w_travel) + ' ' + fmt_double(d.w_excess) + '\n';
  for (std::size_t k = 0; k < d.capacities.size(); ++k) {
    if (k) out += ' ';
    out += std::to_string(d.capacities[k]);
  }
  out += '\n';
  for (const auto& nd : d.nodes) {
    out += std::to_string(nd.id) + ' ' + std::string(to_string(nd.kind)) + ' ' + fmt_double(nd.x) + ' ' +
           fmt_double(nd.y) + ' ' + fmt_double(nd.service) + ' ' + std::to_string(nd.load) + ' ' +
           fmt_double(nd.earliest) + ' ' + fmt_double(nd.latest) + ' ' + fmt_double(nd.max_ride) + '\n';
  }
  if (d.travel) {
    out += "MATRIX\n";
    const auto& m = *d.travel;
    for (std::size_t r = 0; r < m.size(); ++r) {
      for (std::size_t c = 0; c < m.size(); ++c) {
        if (c) out += ' ';
        out += fmt_double(m(r, c));
      }
      out += '\n';
    }
  }
  return out;
}

std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> diag;
  const auto& d = inst.data();
  const int n = d.requests;
  const int total = inst.num_nodes();

  if (total != 2 * n + d.vehicles + d.stations + d.destinations) diag.push_back("node count: header disagrees with node table");
  if (static_cast<int>(inst.origins().size()) != d.vehicles) {
    diag.push_back("origin depot count: " + std::to_string(inst.origins().size()) + " origins for K=" +
                   std::to_string(d.vehicles));
  }
  if (static_cast<int>(inst.destinations().size()) < d.vehicles) {
    diag.push_back("destination depot count: |F|=" + std::to_string(inst.destinations().size()) + " < K");
  }
  if (static_cast<int>(inst.destinations().size()) != d.destinations) diag.push_back("destination depot count: header disagrees");
  if (static_cast<int>(inst.stations().size()) != d.stations) diag.push_back("station count: header disagrees");
  if (static_cast<int>(d.capacities.size()) != d.vehicles) diag.push_back("capacities: expected one per vehicle");
  for (std::size_t k = 0; k < d.capacities.size(); ++k) {
    if (d.capacities[k] < 0) diag.push_back("capacities[" + std::to_string(k) + "] negative");
  }
  if (d.min_final_soc < 0 || d.min_final_soc > 1) diag.push_back("gamma outside [0,1]");
  if (std::abs(d.w_travel + d.w_excess - 1.0) > 1e-9) diag.push_back("weights: w1 + w2 != 1");
  if (d.recharge_rate <= 0) diag.push_back("alpha must be positive");
  if (d.discharge_rate < 0) diag.push_back("beta must be nonnegative");
  if (d.battery_capacity < 0) diag.push_back("Q must be nonnegative");

  for (int i = 0; i < total; ++i) {
    const Node& nd = inst.node(i);
    const std::string at = " at node " + std::to_string(i);
    if (nd.id != i) diag.push_back("node id mismatch" + at);
    if (nd.earliest > nd.latest) diag.push_back("time window e > l" + at);
    if (nd.service < 0) diag.push_back("negative service time" + at);
    switch (nd.kind) {
      case NodeKind::pickup:
        if (nd.load <= 0) diag.push_back("pickup load must be positive" + at);
        if (!inst.is_pickup(i)) diag.push_back("pickup outside 1..n" + at);
        break;
      case NodeKind::dropoff:
        if (nd.load >= 0) diag.push_back("dropoff load must be negative" + at);
        if (!inst.is_dropoff(i)) diag.push_back("dropoff outside n+1..2n" + at);
        break;
      default:
        if (nd.load != 0 || nd.service != 0) diag.push_back("depot/station must have q = s = 0" + at);
        if (inst.is_user(i)) diag.push_back("user index holds a depot/station" + at);
        break;
    }
  }
  for (int i = 1; i <= n && 2 * n < total + 1; ++i) {
    if (inst.node(i + n).load != -inst.node(i).load) {
      diag.push_back("request pairing: q[" + std::to_string(i + n) + "] != -q[" + std::to_string(i) + "]");
    }
  }

  const auto& t = inst.travel_matrix();
  for (int a = 0; a < total; ++a) {
    for (int c = 0; c < total; ++c) {
      const double tac = t(static_cast<std::size_t>(a), static_cast<std::size_t>(c));
      if (tac < 0) diag.push_back("travel time negative at (" + std::to_string(a) + "," + std::to_string(c) + ")");
      for (int b = 0; b < total; ++b) {
        const double via = t(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) +
                           t(static_cast<std::size_t>(b), static_cast<std::size_t>(c));
        if (tac > via + kTriangleTol * std::max(1.0, via)) {
          diag.push_back("triangle inequality violated at (" + std::to_string(a) + "," + std::to_string(b) + "," +
                         std::to_string(c) + ")");
        }
      }
    }
  }
  return diag;
}

Instance generate_instance(const GeneratorSpec& spec_in, std::uint64_t seed, std::vector<std::string>* warnings) {
  if (spec_in.vehicles < 1) throw std::invalid_argument("generate_instance: K must be >= 1");
  if (spec_in.requests < 1) throw std::invalid_argument("generate_instance: n must be >= 1");
  GeneratorSpec spec = spec_in;
  auto warn = [&](const std::string& msg) {
    if (warnings) warnings->push_back(msg);
  };
  if (spec.stations < 0) { warn("stations clamped to 0"); spec.stations = 0; }
  if (spec.destinations < spec.vehicles) { warn("destinations raised to K"); spec.destinations = spec.vehicles; }
  if (spec.capacity < 1) { warn("capacity raised to 1"); spec.capacity = 1; }
  if (spec.half_side <= 0) { warn("half_side reset to 10"); spec.half_side = 10; }
  if (spec.service < 0) { warn("service clamped to 0"); spec.service = 0; }
  if (spec.window_width < 0) { warn("window_width clamped to 0"); spec.window_width = 0; }
  if (spec.gamma < 0 || spec.gamma > 1) { warn("gamma clamped to [0,1]"); spec.gamma = std::clamp(spec.gamma, 0.0, 1.0); }
  if (spec.recharge_rate <= 0) { warn("recharge_rate reset to 0.055"); spec.recharge_rate = 0.055; }
  if (spec.discharge_rate < 0) { warn("discharge_rate clamped to 0"); spec.discharge_rate = 0; }
  if (spec.battery_capacity < 0) { warn("battery_capacity clamped to 0"); spec.battery_capacity = 0; }
  if (spec.time_resolution < 0) { warn("time_resolution clamped to 0"); spec.time_resolution = 0; }
  if (spec.w_travel < 0 || spec.w_excess < 0 || spec.w_travel + spec.w_excess <= 0) {
    warn("weights reset to 0.75/0.25");
    spec.w_travel = 0.75;
    spec.w_excess = 0.25;
  } else if (std::abs(spec.w_travel + spec.w_excess - 1.0) > 1e-12) {
    warn("weights normalized to sum to 1");
    const double s = spec.w_travel + spec.w_excess;
    spec.w_travel /= s;
    spec.w_excess = 1.0 - spec.w_travel;
  }
  const double diameter = 2.0 * std::sqrt(2.0) * spec.half_side;
  if (spec.max_ride < diameter) {
    warn("max_ride raised to the area diameter");
    spec.max_ride = diameter;
  }
  const double min_horizon = 2.0 * (diameter + spec.service) + spec.max_ride + spec.window_width;
  if (spec.horizon < min_horizon) {
    warn("horizon raised to fit one request");
    spec.horizon = min_horizon;
  }

  const int K = spec.vehicles;
  const int n = spec.requests;
  const int total = 2 * n + K + spec.stations + spec.destinations;

  Rng geo(spec.geometry_seed * 0x9E3779B97F4A7C15ULL ^ 0x5851F42D4C957F2DULL);
  Rng rng(seed);
  const double res = spec.time_resolution;
  auto snap = [&](double v) { return res > 0 ? std::round(v / res) * res : v; };
  auto coord = [&] { return snap(geo.uniform(-spec.half_side, spec.half_side)); };

  InstanceData d;
  d.name = "gen-" + std::to_string(K) + "-" + std::to_string(n) + "-s" + std::to_string(seed);
  d.vehicles = K;
  d.requests = n;
  d.stations = spec.stations;
  d.destinations = spec.destinations;
  d.horizon = snap(spec.horizon);
  d.battery_capacity = spec.battery_capacity;
  d.recharge_rate = spec.recharge_rate;
  d.discharge_rate = spec.discharge_rate;
  d.min_final_soc = spec.gamma;
  d.w_travel = spec.w_travel;
  d.w_excess = spec.w_excess;
  d.capacities.assign(static_cast<std::size_t>(K), spec.capacity);
  d.nodes.resize(static_cast<std::size_t>(total));

  auto depot = [&](int id, NodeKind kind) {
    Node& nd = d.nodes[static_cast<std::size_t>(id)];
    nd.id = id;
    nd.kind = kind;
    nd.x = coord();
    nd.y = coord();
    nd.earliest = 0;
    nd.latest = d.horizon;
  };
  // Layout: origin of vehicle 0 at id 0, users at 1..2n, then the remaining
  // origins, the destinations and the stations.
  depot(0, NodeKind::origin);
  int next = 2 * n + 1;
  for (int k = 1; k < K; ++k) depot(next++, NodeKind::origin);
  for (int f = 0; f < spec.destinations; ++f) depot(next++, NodeKind::destination);
  for (int s = 0; s < spec.stations; ++s) depot(next++, NodeKind::station);

  for (int i = 1; i <= n; ++i) {
    Node& p = d.nodes[static_cast<std::size_t>(i)];
    Node& q = d.nodes[static_cast<std::size_t>(i + n)];
    p.id = i;
    q.id = i + n;
    p.kind = NodeKind::pickup;
    q.kind = NodeKind::dropoff;
    p.x = coord();
    p.y = coord();
    q.x = coord();
    q.y = coord();
  }

  std::optional<Matrix> travel;
  if (res > 0) {
    Matrix m(static_cast<std::size_t>(total));
    for (int a = 0; a < total; ++a) {
      for (int b = 0; b < total; ++b) {
        const double dx = d.nodes[static_cast<std::size_t>(a)].x - d.nodes[static_cast<std::size_t>(b)].x;
        const double dy = d.nodes[static_cast<std::size_t>(a)].y - d.nodes[static_cast<std::size_t>(b)].y;
        m(static_cast<std::size_t>(a), static_cast<std::size_t>(b)) = snap(std::sqrt(dx * dx + dy * dy));
      }
    }
    for (int c = 0; c < total; ++c) {
      for (int a = 0; a < total; ++a) {
        for (int b = 0; b < total; ++b) {
          const auto A = static_cast<std::size_t>(a), B = static_cast<std::size_t>(b), C = static_cast<std::size_t>(c);
          const double via = snap(m(A, C) + m(C, B));
          if (via < m(A, B)) m(A, B) = via;
        }
      }
    }
    travel = std::move(m);
  }
  auto t = [&](int a, int b) {
    if (travel) return (*travel)(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    const double dx = d.nodes[static_cast<std::size_t>(a)].x - d.nodes[static_cast<std::size_t>(b)].x;
    const double dy = d.nodes[static_cast<std::size_t>(a)].y - d.nodes[static_cast<std::size_t>(b)].y;
    return std::sqrt(dx * dx + dy * dy);
  };

  // First half outbound (tight window at the pickup), second half inbound
  // (tight window at the dropoff).
  const double slack = spec.max_ride;
  for (int i = 1; i <= n; ++i) {
    Node& p = d.nodes[static_cast<std::size_t>(i)];
    Node& q = d.nodes[static_cast<std::size_t>(i + n)];
    p.service = snap(spec.service);
    q.service = snap(spec.service);
    p.load = 1;
    q.load = -1;
    p.max_ride = snap(spec.max_ride);
    const double direct = t(i, i + n);
    const double reach = diameter + spec.service;
    const bool outbound = i <= (n + 1) / 2;
    p.earliest = 0;
    p.latest = d.horizon;
    q.earliest = 0;
    q.latest = d.horizon;
    if (outbound) {
      const double lo = reach;
      const double hi = d.horizon - spec.window_width - slack - 2 * reach;
      const double e = snap(rng.uniform(lo, std::max(lo, hi)));
      p.earliest = e;
      p.latest = snap(e + spec.window_width);
    } else {
      const double lo = 2 * reach + direct + spec.service;
      const double hi = d.horizon - spec.window_width - reach;
      const double e = snap(rng.uniform(lo, std::max(lo, hi)));
      q.earliest = e;
      q.latest = snap(e + spec.window_width);
    }
  }
  d.travel = std::move(travel);
  return Instance(std::move(d));
}

Instance with_gamma(const Instance& inst, double gamma) {
  InstanceData d = inst.data();
  d.min_final_soc = gamma;
  return Instance(std::move(d));
}

Instance replicate_stations(const Instance& inst, int copies) {
  if (copies < 1) throw std::invalid_argument("replicate_stations: copies must be >= 1");
  InstanceData d = inst.data();
  const auto base = d.nodes.size();
  std::vector<std::size_t> source(base);
  for (std::size_t i = 0; i < base; ++i) source[i] = i;
  for (int c = 1; c < copies; ++c) {
    for (int s : inst.stations()) {
      Node nd = inst.node(s);
      nd.id = static_cast<int>(d.nodes.size());
      d.nodes.push_back(nd);
      source.push_back(static_cast<std::size_t>(s));
    }
  }
  d.stations = static_cast<int>(inst.stations().size()) * copies;
  if (d.travel) {
    const auto total = d.nodes.size();
    Matrix m(total);
    for (std::size_t a = 0; a < total; ++a) {
      for (std::size_t b = 0; b < total; ++b) m(a, b) = a == b ? 0.0 : (*inst.data().travel)(source[a], source[b]);
    }
    d.travel = std::move(m);
  }
  return Instance(std::move(d));
}

}  // namespace eadarp
