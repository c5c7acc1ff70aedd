#include "eadarp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

namespace eadarp {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double d = 0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw std::invalid_argument("config: bad number for " + key + ": '" + v + "'");
  return d;
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw std::invalid_argument("config: expected an integer for " + key);
  return static_cast<int>(d);
}

int parse_n_as(const std::string& v) {
  if (v == "inf" || v == "unbounded" || v == "0") return 0;
  const int n = to_int("n_as", v);
  if (n < 0) throw std::invalid_argument("config: n_as must be positive or 'inf'");
  return n;
}

std::string stem(const std::string& path) {
  auto slash = path.find_last_of("/\\");
  std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
  auto dot = base.find_last_of('.');
  if (dot != std::string::npos && dot > 0) base.resize(dot);
  return base;
}

std::string fixed2(std::optional<double> v) {
  if (!v) return "NA";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

std::string shortest(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

nlohmann::json opt_json(std::optional<double> v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

}  // namespace

ExperimentConfig load_config(const std::string& path, ExperimentConfig cfg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "instance") cfg.instances.push_back(value);
    else if (key == "gamma") cfg.gamma = to_double(key, value);
    else if (key == "n_as") cfg.n_as = parse_n_as(value);
    else if (key == "runs") cfg.runs = to_int(key, value);
    else if (key == "iters" || key == "iterations") cfg.iterations = to_int(key, value);
    else if (key == "theta_max") cfg.theta_max = to_double(key, value);
    else if (key == "theta_red") cfg.theta_red = to_double(key, value);
    else if (key == "n_imp") cfg.n_imp = to_int(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_int(key, value));
    else if (key == "jobs") cfg.jobs = to_int(key, value);
    else if (key == "out") cfg.out = value;
    else if (key == "format") cfg.format = value;
    else if (key == "refs") cfg.refs = value;
    else throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return cfg;
}

std::optional<Summary> summarize(std::vector<double> costs) {
  if (costs.empty()) return std::nullopt;
  std::sort(costs.begin(), costs.end());
  const std::size_t m = costs.size();
  Summary s;
  s.best = costs.front();
  s.worst = costs.back();
  s.median = m % 2 == 1 ? costs[m / 2] : (costs[m / 2 - 1] + costs[m / 2]) / 2;
  s.mean = std::accumulate(costs.begin(), costs.end(), 0.0) / static_cast<double>(m);
  s.q1 = (s.best + s.median) / 2;
  s.q3 = (s.median + s.worst) / 2;
  return s;
}

std::string RunResult::feas_ratio() const { return std::to_string(feasible_runs) + "/" + std::to_string(runs); }

std::optional<double> gap_percent(std::optional<double> v, std::optional<double> ref) {
  if (!v || !ref || *ref == 0) return std::nullopt;
  return (*v - *ref) / *ref * 100.0;
}

GapReport make_gaps(const RunResult& r, std::optional<double> ref) {
  GapReport g;
  g.bc_ref = ref;
  g.bc = gap_percent(r.bc, ref);
  g.q1 = gap_percent(r.q1, ref);
  g.ac = gap_percent(r.ac, ref);
  g.q3 = gap_percent(r.q3, ref);
  return g;
}

References load_references(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read references file " + path);
  References refs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (cells.size() != 3) throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected instance,gamma,BCprime");
    if (lineno == 1 && cells[0] == "instance") continue;
    refs[{cells[0], to_double("gamma", cells[1])}] = to_double("BCprime", cells[2]);
  }
  return refs;
}

std::optional<double> lookup_reference(const References& refs, const std::string& instance, double gamma) {
  for (const auto& [key, value] : refs) {
    if (key.first == instance && std::abs(key.second - gamma) < 1e-9) return value;
  }
  return std::nullopt;
}

void aggregate(RunResult& r) {
  std::vector<double> costs;
  double search = 0;
  r.feasible_runs = 0;
  for (const auto& rec : r.records) {
    search += rec.seconds;
    if (rec.feasible) {
      ++r.feasible_runs;
      costs.push_back(rec.cost);
    }
  }
  r.runs = static_cast<int>(r.records.size());
  r.search_s = r.records.empty() ? 0 : search / static_cast<double>(r.records.size());
  r.bc = r.q1 = r.ac = r.q3 = std::nullopt;
  if (auto s = summarize(costs)) {
    r.bc = s->best;
    r.q1 = s->q1;
    r.ac = s->mean;
    r.q3 = s->q3;
  }
}

std::string n_as_label(int n_as) { return n_as <= 0 ? "inf" : std::to_string(n_as); }

RunResult run_instance(const Instance& original, const ExperimentConfig& cfg) {
  if (cfg.runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (cfg.iterations < 0) throw std::invalid_argument("iterations must be non-negative");
  RunResult out;
  out.instance = original.name();
  out.n_as = cfg.n_as;

  const auto t0 = std::chrono::steady_clock::now();
  Instance inst = cfg.gamma ? with_gamma(original, *cfg.gamma) : original;
  out.gamma = inst.gamma();
  StationCap cap{1};
  if (cfg.n_as <= 0) cap = StationCap::unlimited();
  else if (cfg.n_as > 1) inst = replicate_stations(inst, cfg.n_as);

  std::optional<Preprocessed> pre;
  try {
    pre.emplace(preprocess(inst));
  } catch (const InfeasibleInstance&) {
    // Nothing can be routed; every run is reported infeasible.
  }
  std::vector<RunRecord> records(static_cast<std::size_t>(cfg.runs));
  if (!pre) {
    out.preprocess_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (int i = 0; i < cfg.runs; ++i) records[static_cast<std::size_t>(i)].seed = cfg.seed + static_cast<std::uint64_t>(i);
    out.records = std::move(records);
    aggregate(out);
    return out;
  }
  const FragmentTable table = enumerate_fragments(pre->inst, pre->mask, std::max(1, cfg.jobs));
  out.fragments = table.stats;
  out.preprocess_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const SearchContext ctx(pre->inst, table, pre->mask, cap);
  const int n = pre->inst.num_requests();
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < cfg.runs; i = next++) {
      DAParams p;
      p.iterations = cfg.iterations;
      p.theta_max_rel = cfg.theta_max;
      p.theta_red = cfg.theta_red;
      p.n_imp = cfg.n_imp;
      p.seed = cfg.seed + static_cast<std::uint64_t>(i);
      const SearchResult res = da_search(ctx, p);
      RunRecord& rec = records[static_cast<std::size_t>(i)];
      rec.seed = p.seed;
      rec.served = res.served;
      rec.feasible = res.feasible && res.served == n;
      rec.cost = res.best.cost;
      rec.seconds = res.seconds;
    }
  };
  const int jobs = std::clamp(cfg.jobs, 1, cfg.runs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  out.records = std::move(records);
  aggregate(out);
  return out;
}

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg) {
  if (cfg.instances.empty()) throw std::invalid_argument("no instance given");
  if (cfg.format != "csv" && cfg.format != "json") throw std::invalid_argument("format must be csv or json");
  std::vector<Instance> insts;
  for (const auto& path : cfg.instances) {
    Instance inst = load_instance(path);
    if (inst.name().empty()) {
      InstanceData d = inst.data();
      d.name = stem(path);
      inst = Instance(std::move(d));
    }
    insts.push_back(std::move(inst));
  }
  std::vector<RunResult> results;
  for (const auto& inst : insts) results.push_back(run_instance(inst, cfg));
  return results;
}

void write_csv(std::ostream& out, const std::vector<RunResult>& results, const References& refs) {
  out << "instance,gamma,n_as,runs,BC,Q1,AC,Q3,FeasRatio,CPU_s,BCprime,BC%,Q1%,AC%,Q3%\n";
  for (const auto& r : results) {
    const GapReport g = make_gaps(r, lookup_reference(refs, r.instance, r.gamma));
    out << r.instance << ',' << shortest(r.gamma) << ',' << n_as_label(r.n_as) << ',' << r.runs << ','
        << fixed2(r.bc) << ',' << fixed2(r.q1) << ',' << fixed2(r.ac) << ',' << fixed2(r.q3) << ','
        << r.feas_ratio() << ',' << fixed2(r.cpu_s()) << ',' << fixed2(g.bc_ref) << ',' << fixed2(g.bc) << ','
        << fixed2(g.q1) << ',' << fixed2(g.ac) << ',' << fixed2(g.q3) << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<RunResult>& results, const References& refs, bool timing) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    const GapReport g = make_gaps(r, lookup_reference(refs, r.instance, r.gamma));
    nlohmann::ordered_json j;
    j["instance"] = r.instance;
    j["gamma"] = r.gamma;
    j["n_as"] = n_as_label(r.n_as);
    j["runs"] = r.runs;
    j["BC"] = opt_json(r.bc);
    j["Q1"] = opt_json(r.q1);
    j["AC"] = opt_json(r.ac);
    j["Q3"] = opt_json(r.q3);
    j["FeasRatio"] = r.feas_ratio();
    if (timing) {
      j["CPU_s"] = r.cpu_s();
      j["preprocess_s"] = r.preprocess_s;
      j["search_s"] = r.search_s;
    }
    j["BCprime"] = opt_json(g.bc_ref);
    j["BC%"] = opt_json(g.bc);
    j["Q1%"] = opt_json(g.q1);
    j["AC%"] = opt_json(g.ac);
    j["Q3%"] = opt_json(g.q3);
    j["fragments"] = {{"n_frag", r.fragments.n_frag},
                      {"leg_avg", r.fragments.leg_avg},
                      {"leg_max", r.fragments.leg_max},
                      {"n_lp", r.fragments.n_lp}};
    auto& runs = j["per_run"] = nlohmann::ordered_json::array();
    for (const auto& rec : r.records) {
      nlohmann::ordered_json e;
      e["seed"] = rec.seed;
      e["cost"] = rec.feasible ? nlohmann::ordered_json(rec.cost) : nlohmann::ordered_json(nullptr);
      e["served"] = rec.served;
      e["feasible"] = rec.feasible;
      if (timing) e["seconds"] = rec.seconds;
      runs.push_back(std::move(e));
    }
    doc.push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace eadarp
