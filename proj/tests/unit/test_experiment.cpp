#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "eadarp/experiment.hpp"
#include "fixtures.hpp"
#include "json.hpp"

using namespace eadarp;

namespace {

std::string csv(const std::vector<RunResult>& r, const References& refs = {}) {
  std::ostringstream os;
  write_csv(os, r, refs);
  return os.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

RunResult from_costs(const std::vector<std::optional<double>>& costs) {
  RunResult r;
  r.instance = "a2-16";
  r.gamma = 0.1;
  std::uint64_t seed = 1;
  for (auto c : costs) {
    RunRecord rec;
    rec.seed = seed++;
    rec.feasible = c.has_value();
    rec.cost = c.value_or(0);
    r.records.push_back(rec);
  }
  aggregate(r);
  return r;
}

}  // namespace

TEST(Summary, FiveSamples) {
  const auto s = summarize({30, 10, 20, 15, 12});
  ASSERT_TRUE(s);
  EXPECT_DOUBLE_EQ(s->best, 10);
  EXPECT_DOUBLE_EQ(s->median, 15);
  EXPECT_DOUBLE_EQ(s->q1, 12.5);
  EXPECT_DOUBLE_EQ(s->q3, 22.5);
  EXPECT_DOUBLE_EQ(s->mean, 17.4);
  EXPECT_DOUBLE_EQ(s->worst, 30);
}

TEST(Summary, EvenCountAndOrdering) {
  const auto s = summarize({4, 1, 3, 2});
  ASSERT_TRUE(s);
  EXPECT_DOUBLE_EQ(s->median, 2.5);
  EXPECT_DOUBLE_EQ(s->q1, 1.75);
  EXPECT_DOUBLE_EQ(s->q3, 3.25);
  EXPECT_LE(s->best, s->q1);
  EXPECT_LE(s->q1, s->q3);
  EXPECT_FALSE(summarize({}));
}

TEST(Aggregate, SingleRun) {
  const RunResult r = from_costs({42.5});
  EXPECT_EQ(r.bc, r.ac);
  EXPECT_EQ(r.bc, r.q1);
  EXPECT_EQ(r.bc, r.q3);
  EXPECT_EQ(r.feas_ratio(), "1/1");
}

TEST(Aggregate, InfeasibleRunsExcluded) {
  const RunResult r = from_costs({std::nullopt, 10.0, std::nullopt, 20.0});
  EXPECT_EQ(r.feas_ratio(), "2/4");
  EXPECT_DOUBLE_EQ(*r.bc, 10);
  EXPECT_DOUBLE_EQ(*r.ac, 15);
}

TEST(Report, AllInfeasible) {
  const RunResult r = from_costs({std::nullopt, std::nullopt, std::nullopt});
  const auto lines = csv({r});
  std::stringstream ss(lines);
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  const auto cells = split(row);
  EXPECT_EQ(cells[4], "NA");
  EXPECT_EQ(cells[8], "0/3");
}

TEST(Report, HeaderAndNaGaps) {
  const RunResult r = from_costs({237.384, 240.0, 250.0});
  std::stringstream ss(csv({r}));
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  EXPECT_EQ(header.rfind("instance,gamma,n_as,runs,BC,Q1,AC,Q3,FeasRatio,CPU_s", 0), 0u);
  const auto cells = split(row);
  ASSERT_EQ(cells.size(), split(header).size());
  EXPECT_EQ(cells[0], "a2-16");
  EXPECT_EQ(cells[4], "237.38");
  for (std::size_t c = 10; c < cells.size(); ++c) EXPECT_EQ(cells[c], "NA");
}

TEST(Report, ZeroGapAgainstReference) {
  const RunResult r = from_costs({237.38, 239.0});
  References refs;
  refs[{"a2-16", 0.1}] = 237.38;
  std::stringstream ss(csv({r}, refs));
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  const auto h = split(header);
  const auto cells = split(row);
  const auto col = std::find(h.begin(), h.end(), "BC%") - h.begin();
  EXPECT_EQ(cells[static_cast<std::size_t>(col)], "0.00");
  const auto g = make_gaps(r, 237.38);
  EXPECT_NEAR(*g.bc, 0, 1e-12);
  EXPECT_NEAR(*g.ac, (238.19 - 237.38) / 237.38 * 100, 1e-9);
}

TEST(References, ParseFile) {
  const auto path = std::filesystem::temp_directory_path() / "eadarp_refs_test.csv";
  {
    std::ofstream f(path);
    f << "instance,gamma,BCprime\na2-16,0.1,237.38\nu2-16,0.1,57.61\n";
  }
  const auto refs = load_references(path.string());
  EXPECT_EQ(refs.size(), 2u);
  EXPECT_DOUBLE_EQ(*lookup_reference(refs, "u2-16", 0.1), 57.61);
  EXPECT_FALSE(lookup_reference(refs, "u2-16", 0.4));
  std::filesystem::remove(path);
}

TEST(Config, KeyValueFile) {
  const auto path = std::filesystem::temp_directory_path() / "eadarp_cfg_test.txt";
  {
    std::ofstream f(path);
    f << "# campaign\ninstance = a.txt\ngamma = 0.4\nn_as = inf\nruns = 5\ntheta-max = 0.5\n";
  }
  const auto cfg = load_config(path.string());
  EXPECT_EQ(cfg.instances, std::vector<std::string>{"a.txt"});
  EXPECT_DOUBLE_EQ(*cfg.gamma, 0.4);
  EXPECT_EQ(cfg.n_as, 0);
  EXPECT_EQ(cfg.runs, 5);
  EXPECT_DOUBLE_EQ(cfg.theta_max, 0.5);
  EXPECT_EQ(cfg.iterations, 10000);
  {
    std::ofstream f(path);
    f << "speed = 3\n";
  }
  EXPECT_THROW(load_config(path.string()), std::invalid_argument);
  std::filesystem::remove(path);
}

TEST(RunInstance, JsonDeterministicAcrossJobs) {
  const Instance inst = fx::tiny(8, 2, 4, 1, 0.4);
  ExperimentConfig cfg;
  cfg.runs = 4;
  cfg.iterations = 300;
  cfg.jobs = 1;
  const auto a = run_instance(inst, cfg);
  cfg.jobs = 4;
  const auto b = run_instance(inst, cfg);
  std::ostringstream ja, jb;
  write_json(ja, {a}, {}, false);
  write_json(jb, {b}, {}, false);
  EXPECT_EQ(ja.str(), jb.str());
  const auto doc = nlohmann::json::parse(ja.str());
  ASSERT_EQ(doc.size(), 1u);
  EXPECT_EQ(doc[0]["per_run"].size(), 4u);
  EXPECT_EQ(doc[0]["FeasRatio"], a.feas_ratio());
  EXPECT_FALSE(doc[0].contains("CPU_s"));
}

TEST(RunInstance, SeedsShiftSchemaStays) {
  const Instance inst = fx::tiny(12, 2, 4, 1, 0.1);
  ExperimentConfig cfg;
  cfg.runs = 3;
  cfg.iterations = 100;
  const auto a = run_instance(inst, cfg);
  cfg.seed = 100;
  const auto b = run_instance(inst, cfg);
  EXPECT_EQ(a.records.front().seed, 1u);
  EXPECT_EQ(b.records.front().seed, 100u);
  std::ostringstream ja, jb;
  write_json(ja, {a}, {});
  write_json(jb, {b}, {});
  const auto da = nlohmann::json::parse(ja.str()), db = nlohmann::json::parse(jb.str());
  std::vector<std::string> ka, kb;
  for (auto it = da[0].begin(); it != da[0].end(); ++it) ka.push_back(it.key());
  for (auto it = db[0].begin(); it != db[0].end(); ++it) kb.push_back(it.key());
  EXPECT_EQ(ka, kb);
}

TEST(RunInstance, MultiVisitModes) {
  const Instance inst = fx::tiny(13, 2, 3, 1, 0.7);
  ExperimentConfig cfg;
  cfg.runs = 2;
  cfg.iterations = 100;
  for (int n_as : {1, 2, 3, 0}) {
    cfg.n_as = n_as;
    const auto r = run_instance(inst, cfg);
    EXPECT_EQ(r.n_as, n_as);
    EXPECT_EQ(r.runs, 2);
  }
  EXPECT_EQ(n_as_label(0), "inf");
  EXPECT_EQ(n_as_label(2), "2");
}
