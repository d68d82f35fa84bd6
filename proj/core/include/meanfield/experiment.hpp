#pragma once

#include <string>
#include <vector>

#include "meanfield/lattice.hpp"
#include "meanfield/statistics.hpp"

namespace meanfield {

enum class StudyKind { free_case, convergence, growth, bogoliubov, clt };
enum class DataKind { product, coherent };

std::string study_name(StudyKind kind);
StudyKind study_from_name(const std::string& name);
std::string data_name(DataKind kind);
DataKind data_from_name(const std::string& name);

struct ExperimentConfig {
  StudyKind study = StudyKind::convergence;
  int sites = 0;
  Eigen::VectorXd potential;    // one value per displacement, even under minimal image
  WaveFunction phi0;            // stored as given, normalized by the runner
  DataKind data = DataKind::product;
  std::vector<int> n_list;
  int nmax_override = 0;        // 0 = cutoff policy chosen by the study and data kind
  double t_final = 0.0;
  double dt = 1e-3;
  int stride = 1;               // rows every stride trajectory steps
  ObservableKind observable = ObservableKind::hopping;
  double delta = 0.1;           // threshold for the Chebyshev tail rows
  int samples = 20;             // sampled (f, g, psi) triples in the pair-action check
  unsigned long seed = 1;
  double memory_mb = 4096.0;
  bool charts = true;
  std::string out_dir = "out";
};

// Text grammar: one `key value...` pair per line, `#` comments.  A leading
// `{` switches to the JSON encoding with the same field names.  Errors are
// config_error; text-grammar messages carry the offending line number.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

// Canonical text form; parse(serialize(c)) reproduces c exactly.
std::string serialize_config(const ExperimentConfig& c);

// Cross-field checks shared by both encodings.
void validate(const ExperimentConfig& c);

// Basis cutoff the runner will use for a given particle number.
int resolved_nmax(const ExperimentConfig& c, int n);

// Size forecast, computed before anything is allocated.
struct FeasibilityLine {
  int n = 0;
  int n_max = 0;
  double dim = 0.0;
  double mb = 0.0;
};
struct FeasibilityReport {
  std::vector<FeasibilityLine> lines;
  double peak_mb = 0.0;
};
FeasibilityReport estimate_feasibility(const ExperimentConfig& c);
void require_feasible(const ExperimentConfig& c);  // throws infeasible_error

// Bundled example configs, by name: free, convergence, growth, bogoliubov, clt.
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);

}  // namespace meanfield
