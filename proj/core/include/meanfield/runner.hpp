#pragma once

#include <string>
#include <vector>

#include "meanfield/experiment.hpp"

namespace meanfield {

struct RunArtifacts {
  std::string csv_path, json_path;
  std::vector<std::string> chart_paths;
  int rows = 0;
};

// Executes the configured study and writes results.csv, results.json and
// optional charts into the output directory (created if missing).  Throws
// config_error, infeasible_error or numeric_error; the command line maps
// those onto its exit codes.
RunArtifacts run_experiment(const ExperimentConfig& c, const std::string& out_dir_override = "");

}  // namespace meanfield
