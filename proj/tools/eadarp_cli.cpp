// eadarp: experiment runner and instance utilities.
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "eadarp/experiment.hpp"
#include "eadarp/fragments.hpp"
#include "eadarp/model.hpp"
#include "eadarp/preprocess.hpp"

namespace {

int cmd_run(eadarp::ExperimentConfig cfg, const std::string& n_as) {
  if (!n_as.empty()) cfg.n_as = (n_as == "inf" || n_as == "unbounded") ? 0 : std::stoi(n_as);
  eadarp::References refs;
  if (!cfg.refs.empty()) refs = eadarp::load_references(cfg.refs);
  const auto results = eadarp::run_experiment(cfg);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.out.empty()) {
    file.open(cfg.out);
    if (!file) {
      std::cerr << "error: cannot write " << cfg.out << "\n";
      return 1;
    }
    out = &file;
  }
  if (cfg.format == "json") eadarp::write_json(*out, results, refs);
  else eadarp::write_csv(*out, results, refs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"E-ADARP solver: deterministic annealing over battery-restricted fragments"};
  app.require_subcommand(1);

  // run
  eadarp::ExperimentConfig cfg;
  std::string config_file, n_as;
  auto* run = app.add_subcommand("run", "Multi-seed campaign over instance files");
  run->add_option("--config", config_file, "key = value file; command-line flags override it")
      ->check(CLI::ExistingFile);
  run->add_option("--instance,instances", cfg.instances, "Instance file(s)");
  run->add_option("--gamma", cfg.gamma, "Override the minimum final state of charge");
  run->add_option("--n-as", n_as, "Visits allowed per station: 1, 2, 3 or inf");
  run->add_option("--runs", cfg.runs)->check(CLI::PositiveNumber);
  run->add_option("--iters", cfg.iterations)->check(CLI::NonNegativeNumber);
  run->add_option("--theta-max", cfg.theta_max);
  run->add_option("--theta-red", cfg.theta_red)->check(CLI::PositiveNumber);
  run->add_option("--n-imp", cfg.n_imp);
  run->add_option("--seed", cfg.seed, "Base seed");
  run->add_option("--jobs", cfg.jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  run->add_option("--out", cfg.out, "Report path (stdout when absent)");
  run->add_option("--format", cfg.format)->check(CLI::IsMember({"csv", "json"}));
  run->add_option("--refs", cfg.refs, "References file instance,gamma,BCprime")->check(CLI::ExistingFile);

  // generate
  eadarp::GeneratorSpec spec;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write a synthetic instance");
  gen->add_option("--vehicles", spec.vehicles);
  gen->add_option("--requests", spec.requests);
  gen->add_option("--stations", spec.stations);
  gen->add_option("--destinations", spec.destinations);
  gen->add_option("--horizon", spec.horizon);
  gen->add_option("--geometry-seed", spec.geometry_seed);
  gen->add_option("--capacity", spec.capacity);
  gen->add_option("--max-ride", spec.max_ride);
  gen->add_option("--window", spec.window_width);
  gen->add_option("--battery", spec.battery_capacity);
  gen->add_option("--gamma", spec.gamma);
  gen->add_option("--resolution", spec.time_resolution);
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out);

  // validate
  std::string val_path;
  auto* val = app.add_subcommand("validate", "Parse and check an instance file");
  val->add_option("instance", val_path)->required();

  // fragments
  std::string frag_path;
  int frag_threads = 1;
  bool frag_dump = false;
  auto* frag = app.add_subcommand("fragments", "Preprocess and enumerate fragments");
  frag->add_option("instance", frag_path)->required();
  frag->add_option("--threads", frag_threads)->check(CLI::PositiveNumber);
  frag->add_flag("--dump", frag_dump, "List every fragment");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      if (!config_file.empty()) {
        // Apply the file, then the flags that were given on the command line.
        eadarp::ExperimentConfig base = eadarp::load_config(config_file);
        if (run->count("--instance") || run->count("instances")) base.instances = cfg.instances;
        if (run->count("--gamma")) base.gamma = cfg.gamma;
        if (run->count("--runs")) base.runs = cfg.runs;
        if (run->count("--iters")) base.iterations = cfg.iterations;
        if (run->count("--theta-max")) base.theta_max = cfg.theta_max;
        if (run->count("--theta-red")) base.theta_red = cfg.theta_red;
        if (run->count("--n-imp")) base.n_imp = cfg.n_imp;
        if (run->count("--seed")) base.seed = cfg.seed;
        if (run->count("--jobs")) base.jobs = cfg.jobs;
        if (run->count("--out")) base.out = cfg.out;
        if (run->count("--format")) base.format = cfg.format;
        if (run->count("--refs")) base.refs = cfg.refs;
        cfg = base;
      }
      return cmd_run(cfg, n_as);
    }
    if (gen->parsed()) {
      std::vector<std::string> warnings;
      const auto inst = eadarp::generate_instance(spec, gen_seed, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      const std::string text = eadarp::emit_instance(inst);
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(gen_out);
        if (!f) {
          std::cerr << "error: cannot write " << gen_out << "\n";
          return 1;
        }
        f << text;
      }
      return 0;
    }
    if (val->parsed()) {
      const auto inst = eadarp::load_instance(val_path);
      const auto problems = eadarp::validate_instance(inst);
      for (const auto& p : problems) std::cout << p << "\n";
      if (problems.empty()) {
        std::cout << "ok: K=" << inst.num_vehicles() << " n=" << inst.num_requests()
                  << " |S|=" << inst.stations().size() << " |F|=" << inst.destinations().size() << "\n";
      }
      return problems.empty() ? 0 : 2;
    }
    if (frag->parsed()) {
      const auto inst = eadarp::load_instance(frag_path);
      const auto pre = eadarp::preprocess(inst);
      const auto table = eadarp::enumerate_fragments(pre.inst, pre.mask, frag_threads);
      const auto& s = table.stats;
      std::cout << "arcs " << pre.mask.count() << "\n"
                << "N_frag " << s.n_frag << "\nLeg_avg " << s.leg_avg << "\nLeg_max " << s.leg_max << "\nN_lp "
                << s.n_lp << "\nCPU_s " << s.cpu_s << "\n";
      if (frag_dump) table.dump(std::cout);
      return 0;
    }
  } catch (const eadarp::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
