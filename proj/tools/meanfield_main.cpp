#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "meanfield/errors.hpp"
#include "meanfield/experiment.hpp"
#include "meanfield/runner.hpp"
#include "meanfield/threads.hpp"

namespace {

// A config argument names either a file on disk or a bundled preset
// ("convergence" or "convergence.preset").
meanfield::ExperimentConfig load_config(const std::string& arg) {
  if (std::filesystem::exists(arg)) return meanfield::parse_config_file(arg);
  std::string name = arg;
  const std::string suffix = ".preset";
  if (name.size() > suffix.size() && name.ends_with(suffix))
    name.resize(name.size() - suffix.size());
  for (const std::string& p : meanfield::preset_names())
    if (p == name) return meanfield::parse_config(meanfield::preset_text(name));
  throw meanfield::config_error("no config file or preset named '" + arg + "'");
}

void print_check(const meanfield::ExperimentConfig& c) {
  const meanfield::FeasibilityReport rep = meanfield::estimate_feasibility(c);
  std::cout << "study " << meanfield::study_name(c.study) << ", " << c.sites << " sites, "
            << c.n_list.size() << " particle numbers\n";
  for (const meanfield::FeasibilityLine& line : rep.lines)
    std::cout << "  n=" << line.n << "  cutoff=" << line.n_max << "  dimension=" << line.dim
              << "  approx " << line.mb << " MB\n";
  std::cout << "peak estimate " << rep.peak_mb << " MB, budget " << c.memory_mb << " MB\n";
  meanfield::require_feasible(c);
  std::cout << "config ok\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean-field bosonic lattice dynamics laboratory"};
  app.require_subcommand(1);

  std::string config_arg, out_dir;
  bool check_only = false;
  int threads = 1;

  CLI::App* run = app.add_subcommand("run", "execute a study from a config file or preset");
  run->add_option("config", config_arg, "config file, or preset name")->required();
  run->add_flag("--check", check_only, "validate and size the config, run nothing");
  run->add_option("--threads", threads, "worker threads for state-vector kernels")
      ->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "output directory (overrides the config)");

  CLI::App* presets = app.add_subcommand("presets", "list bundled example configs");
  std::string dump_name;
  presets->add_option("--dump", dump_name, "print the named preset config");

  CLI11_PARSE(app, argc, argv);

  try {
    if (presets->parsed()) {
      if (!dump_name.empty()) {
        std::cout << meanfield::preset_text(dump_name);
        return 0;
      }
      for (const std::string& name : meanfield::preset_names()) {
        const meanfield::ExperimentConfig c = meanfield::parse_config(meanfield::preset_text(name));
        std::cout << name << "  (study " << meanfield::study_name(c.study) << ", " << c.sites
                  << " sites)\n";
      }
      return 0;
    }

    const meanfield::ExperimentConfig c = load_config(config_arg);
    if (check_only) {
      print_check(c);
      return 0;
    }
    meanfield::set_num_threads(threads);
    const meanfield::RunArtifacts art = meanfield::run_experiment(c, out_dir);
    std::cout << "wrote " << art.csv_path << " (" << art.rows << " rows), " << art.json_path;
    for (const std::string& p : art.chart_paths) std::cout << ", " << p;
    std::cout << "\n";
    return 0;
  } catch (const meanfield::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const meanfield::infeasible_error& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const meanfield::numeric_error& e) {
    std::cerr << "numerical invariant violated: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
