#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eadarp/fragments.hpp"
#include "eadarp/search.hpp"

namespace eadarp {

struct ExperimentConfig {
  std::vector<std::string> instances;  // file paths
  std::optional<double> gamma;         // overrides the file value
  int n_as = 1;                        // visits per station; 0 means unbounded
  int runs = 50;
  int iterations = 10000;
  double theta_max = 0.9;
  double theta_red = 300;
  int n_imp = 50;
  std::uint64_t seed = 1;  // seeds are seed .. seed+runs-1
  int jobs = 1;
  std::string out;            // empty: stdout
  std::string format = "csv"; // csv | json
  std::string refs;           // optional references file
};

// Reads `key = value` lines ('#' comments). Unknown keys throw.
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

struct RunRecord {
  std::uint64_t seed = 0;
  double cost = 0;
  int served = 0;
  bool feasible = false;  // every request served
  double seconds = 0;
};

// Best, quartiles and mean of a sample of costs. Q1 sits halfway between
// the best and the median, Q3 halfway between the median and the worst.
struct Summary {
  double best = 0;
  double q1 = 0;
  double median = 0;
  double mean = 0;
  double q3 = 0;
  double worst = 0;
};

std::optional<Summary> summarize(std::vector<double> costs);

struct RunResult {
  std::string instance;
  double gamma = 0;
  int n_as = 1;
  int runs = 0;
  std::vector<RunRecord> records;  // ordered by seed
  std::optional<double> bc, q1, ac, q3;
  int feasible_runs = 0;
  double preprocess_s = 0;
  double search_s = 0;  // mean per run
  FragmentStats fragments;

  double cpu_s() const { return preprocess_s + search_s; }
  std::string feas_ratio() const;
};

struct GapReport {
  std::optional<double> bc_ref;
  std::optional<double> bc, q1, ac, q3;  // percent
};

std::optional<double> gap_percent(std::optional<double> v, std::optional<double> ref);
GapReport make_gaps(const RunResult& r, std::optional<double> ref);

// `instance,gamma,BCprime`, header optional.
using References = std::map<std::pair<std::string, double>, double>;
References load_references(const std::string& path);
std::optional<double> lookup_reference(const References& refs, const std::string& instance, double gamma);

// Aggregates per-run records into the BC/Q1/AC/Q3/FeasRatio fields.
void aggregate(RunResult& r);

// Runs the campaign for one instance already in memory.
RunResult run_instance(const Instance& inst, const ExperimentConfig& cfg);

std::vector<RunResult> run_experiment(const ExperimentConfig& cfg);

std::string n_as_label(int n_as);

// CSV: instance,gamma,n_as,runs,BC,Q1,AC,Q3,FeasRatio,CPU_s then
// BCprime,BC%,Q1%,AC%,Q3%; two decimals, NA when undefined.
void write_csv(std::ostream& out, const std::vector<RunResult>& results, const References& refs);
// Same fields at full precision plus per-run records. Timing fields are
// omitted when `timing` is false.
void write_json(std::ostream& out, const std::vector<RunResult>& results, const References& refs, bool timing = true);

}  // namespace eadarp
