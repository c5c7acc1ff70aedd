#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "eadarp/experiment.hpp"
#include "eadarp/preprocess.hpp"
#include "eadarp/routeval.hpp"
#include "eadarp/search.hpp"

namespace py = pybind11;
using namespace eadarp;

namespace {

// Owns the preprocessed instance and fragment table a search context points into.
class Problem {
 public:
  Problem(const Instance& inst, int n_as, int threads)
      : cap_(n_as <= 0 ? StationCap::unlimited() : StationCap{1}) {
    const Instance base = n_as > 1 ? replicate_stations(inst, n_as) : inst;
    pre_ = preprocess(base);
    table_ = enumerate_fragments(pre_.inst, pre_.mask, threads);
    ctx_ = std::make_unique<SearchContext>(pre_.inst, table_, pre_.mask, cap_);
  }

  const Instance& instance() const { return pre_.inst; }
  const FragmentTable& table() const { return table_; }
  const ArcMask& mask() const { return pre_.mask; }
  StationCap cap() const { return cap_; }
  const SearchContext& ctx() const { return *ctx_; }

 private:
  StationCap cap_;
  Preprocessed pre_;
  FragmentTable table_;
  std::unique_ptr<SearchContext> ctx_;
};

py::dict route_check_dict(const RouteCheck& rc) {
  py::dict d;
  d["ok"] = rc.ok();
  d["violation"] = std::string(to_string(rc.violation));
  d["position"] = rc.position;
  d["travel"] = rc.cost.travel;
  d["excess"] = rc.cost.excess;
  d["cost"] = rc.cost.weighted;
  return d;
}

py::list routes_list(const Solution& s) {
  py::list out;
  for (const auto& r : s.routes) out.append(py::cast(r.seq));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Electric autonomous dial-a-ride solver core";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InfeasibleInstance>(m, "InfeasibleInstance", PyExc_ValueError);

  py::class_<Node>(m, "Node")
      .def_readonly("id", &Node::id)
      .def_property_readonly("kind", [](const Node& n) { return std::string(to_string(n.kind)); })
      .def_readonly("x", &Node::x)
      .def_readonly("y", &Node::y)
      .def_readonly("service", &Node::service)
      .def_readonly("load", &Node::load)
      .def_readonly("earliest", &Node::earliest)
      .def_readonly("latest", &Node::latest)
      .def_readonly("max_ride", &Node::max_ride);

  py::class_<Instance>(m, "Instance")
      .def_property_readonly("name", &Instance::name)
      .def_property_readonly("num_nodes", &Instance::num_nodes)
      .def_property_readonly("num_requests", &Instance::num_requests)
      .def_property_readonly("num_vehicles", &Instance::num_vehicles)
      .def_property_readonly("gamma", &Instance::gamma)
      .def_property_readonly("horizon", &Instance::horizon)
      .def_property_readonly("full_recharge", &Instance::full_recharge)
      .def_property_readonly("origins", [](const Instance& i) { return std::vector<int>(i.origins().begin(), i.origins().end()); })
      .def_property_readonly("destinations",
                             [](const Instance& i) { return std::vector<int>(i.destinations().begin(), i.destinations().end()); })
      .def_property_readonly("stations", [](const Instance& i) { return std::vector<int>(i.stations().begin(), i.stations().end()); })
      .def("node", &Instance::node, py::arg("i"))
      .def("travel", &Instance::travel, py::arg("i"), py::arg("j"))
      .def("emit", &emit_instance)
      .def("__repr__", [](const Instance& i) {
        std::ostringstream os;
        os << "<Instance " << i.name() << " K=" << i.num_vehicles() << " n=" << i.num_requests()
           << " S=" << i.stations().size() << ">";
        return os.str();
      });

  m.def("parse_instance", [](const std::string& text, const std::string& name) { return parse_instance(text, name); },
        py::arg("text"), py::arg("name") = "");
  m.def("load_instance", &load_instance, py::arg("path"));
  m.def("validate_instance", &validate_instance, py::arg("instance"));
  m.def("with_gamma", &with_gamma, py::arg("instance"), py::arg("gamma"));
  m.def(
      "generate_instance",
      [](int vehicles, int requests, int stations, int destinations, double horizon, std::uint64_t geometry_seed,
         int capacity, double max_ride, double window_width, double battery_capacity, double gamma,
         double time_resolution, std::uint64_t seed) {
        GeneratorSpec spec;
        spec.vehicles = vehicles;
        spec.requests = requests;
        spec.stations = stations;
        spec.destinations = destinations;
        spec.horizon = horizon;
        spec.geometry_seed = geometry_seed;
        spec.capacity = capacity;
        spec.max_ride = max_ride;
        spec.window_width = window_width;
        spec.battery_capacity = battery_capacity;
        spec.gamma = gamma;
        spec.time_resolution = time_resolution;
        return generate_instance(spec, seed);
      },
      py::arg("vehicles") = 2, py::arg("requests") = 4, py::arg("stations") = 1, py::arg("destinations") = 2,
      py::arg("horizon") = 240.0, py::arg("geometry_seed") = 1, py::arg("capacity") = 3, py::arg("max_ride") = 30.0,
      py::arg("window_width") = 15.0, py::arg("battery_capacity") = 14.85, py::arg("gamma") = 0.1,
      py::arg("time_resolution") = 0.0, py::arg("seed") = 1);

  m.def(
      "min_excess_lp",
      [](const Instance& inst, const std::vector<int>& seq) { return min_excess_lp(inst, seq); }, py::arg("instance"),
      py::arg("seq"));

  py::class_<Problem>(m, "Problem")
      .def(py::init<const Instance&, int, int>(), py::arg("instance"), py::arg("n_as") = 1, py::arg("threads") = 1)
      .def_property_readonly("instance", &Problem::instance, py::return_value_policy::reference_internal)
      .def_property_readonly("allowed_arcs", [](const Problem& p) { return p.mask().count(); })
      .def_property_readonly("infeasible_requests", [](const Problem& p) { return p.mask().infeasible_requests; })
      .def("fragment_stats",
           [](const Problem& p) {
             py::dict d;
             d["N_frag"] = p.table().stats.n_frag;
             d["Leg_avg"] = p.table().stats.leg_avg;
             d["Leg_max"] = p.table().stats.leg_max;
             d["N_lp"] = p.table().stats.n_lp;
             return d;
           })
      .def("fragments",
           [](const Problem& p) {
             py::list out;
             for (const auto& f : p.table().fragments()) out.append(py::make_tuple(f.seq, f.eu_min));
             return out;
           })
      .def(
          "check_route",
          [](const Problem& p, int vehicle, const std::vector<int>& seq) {
            return route_check_dict(check_route(p.instance(), p.table(), Route{vehicle, seq}, {p.cap()}));
          },
          py::arg("vehicle"), py::arg("seq"))
      .def(
          "solve",
          [](const Problem& p, int iterations, std::uint64_t seed, double theta_max, double theta_red, int n_imp,
             bool trace) {
            DAParams params;
            params.iterations = iterations;
            params.seed = seed;
            params.theta_max_rel = theta_max;
            params.theta_red = theta_red;
            params.n_imp = n_imp;
            params.record_trace = trace;
            SearchResult r;
            {
              py::gil_scoped_release release;
              r = da_search(p.ctx(), params);
            }
            py::dict d;
            d["feasible"] = r.feasible;
            d["served"] = r.served;
            d["cost"] = r.best.cost;
            d["routes"] = routes_list(r.best);
            d["unserved"] = r.best.unserved;
            d["iterations"] = r.iterations;
            d["seconds"] = r.seconds;
            py::list moves;
            for (const auto& mv : r.trace)
              moves.append(py::make_tuple(mv.iteration, std::string(to_string(mv.kind)), mv.served, mv.cost));
            d["trace"] = moves;
            return d;
          },
          py::arg("iterations") = 10000, py::arg("seed") = 1, py::arg("theta_max") = 0.9,
          py::arg("theta_red") = 300.0, py::arg("n_imp") = 50, py::arg("trace") = false);

  m.def(
      "run_instance",
      [](const Instance& inst, int runs, int iterations, std::uint64_t seed, int n_as, int jobs,
         std::optional<double> gamma, bool timing) {
        ExperimentConfig cfg;
        cfg.runs = runs;
        cfg.iterations = iterations;
        cfg.seed = seed;
        cfg.n_as = n_as;
        cfg.jobs = jobs;
        cfg.gamma = gamma;
        std::ostringstream os;
        {
          py::gil_scoped_release release;
          write_json(os, {run_instance(inst, cfg)}, {}, timing);
        }
        return os.str();
      },
      py::arg("instance"), py::arg("runs") = 50, py::arg("iterations") = 10000, py::arg("seed") = 1,
      py::arg("n_as") = 1, py::arg("jobs") = 1, py::arg("gamma") = std::nullopt, py::arg("timing") = true);
}
