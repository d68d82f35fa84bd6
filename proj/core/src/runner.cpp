#include "meanfield/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "meanfield/bogoliubov.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/fluctuation.hpp"
#include "meanfield/fock_ops.hpp"
#include "meanfield/hartree.hpp"
#include "meanfield/reduced.hpp"
#include "meanfield/snapshot.hpp"
#include "meanfield/svg.hpp"
#include "meanfield/threads.hpp"
#include "meanfield/weyl.hpp"

namespace meanfield {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Row {
  int m = 0, n = 0;
  double t = 0.0;
  std::string quantity;
  double value = 0.0;
};

class Table {
 public:
  explicit Table(std::string study) : study_(std::move(study)) {}

  void add(int m, int n, double t, const std::string& quantity, double value) {
    rows_.push_back({m, n, t, quantity, value});
  }

  void write(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "study,M,N,t,quantity,value\n";
    for (const Row& r : rows_)
      out << study_ << "," << r.m << "," << r.n << "," << fmt17(r.t) << "," << r.quantity << ","
          << fmt17(r.value) << "\n";
  }

  int size() const { return int(rows_.size()); }
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::string study_;
  std::vector<Row> rows_;
};

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// least squares C e^{K t} through positive samples, plus the rms of the
// relative misfit
void fit_exponential(const std::vector<double>& t, const std::vector<double>& y, double* c_out,
                     double* k_out, double* res_out) {
  std::vector<double> logy(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) logy[i] = std::log(y[i]);
  const double k = ls_slope(t, logy);
  double st = 0, sl = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sl += logy[i];
  }
  const double c = std::exp((sl - k * st) / double(t.size()));
  double rss = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double fit = c * std::exp(k * t[i]);
    const double rel = (y[i] - fit) / y[i];
    rss += rel * rel;
  }
  *c_out = c;
  *k_out = k;
  *res_out = std::sqrt(rss / double(t.size()));
}

void check_density(const DensityMatrix& g, const std::string& label) {
  const double herm = g.hermiticity_dev();
  const double eig = g.min_eigenvalue();
  const double tr = g.trace_dev();
  if (herm > 1e-12 || eig < -1e-10 || tr > 1e-9)
    throw numeric_error(label + " invariant violated: hermiticity_dev=" + fmt17(herm) +
                        ", min_eigenvalue=" + fmt17(eig) + ", trace_dev=" + fmt17(tr) +
                        " (increase nmax if truncation-dominated)");
}

void check_wave_norm(const WaveFunction& phi, double t) {
  if (std::abs(phi.norm() - 1.0) > 1e-8)
    throw numeric_error("mean-field trajectory norm drifted by " +
                        fmt17(std::abs(phi.norm() - 1.0)) + " at t=" + fmt17(t));
}

void check_sector(const FockState& psi, int n, double t) {
  const Eigen::VectorXd w = sector_weights(psi);
  double off = 0.0;
  for (int s = 0; s < w.size(); ++s)
    if (s != n) off += w(s);
  if (off > 1e-9)
    throw numeric_error("sector weight leaked " + fmt17(off) + " outside n=" +
                        std::to_string(n) + " at t=" + fmt17(t));
}

struct StudyContext {
  const ExperimentConfig& c;
  PairPotential V;
  WaveFunction phi0;  // normalized
  HartreeTrajectory traj;
  std::vector<double> sample_times;  // stride multiples, t=0 excluded
  KrylovOptions kopts;
  Table* table;
  std::map<std::string, double>* deficits;
};

void note_deficit(StudyContext& ctx, const std::string& key, double value) {
  auto& slot = (*ctx.deficits)[key];
  slot = std::max(slot, value);
}

void run_convergence(StudyContext& ctx, std::vector<PlotSeries>* chart) {
  const ExperimentConfig& c = ctx.c;
  const int m = c.sites;
  std::map<double, Eigen::MatrixXcd> projectors;
  for (double t : ctx.sample_times) {
    const WaveFunction& phi_t = ctx.traj.state_at(t);
    check_wave_norm(phi_t, t);
    projectors[t] = hartree_projector(phi_t);
  }

  std::map<double, std::vector<double>> dist_by_t;
  for (int n : c.n_list) {
    auto basis = make_basis(m, resolved_nmax(c, n));
    FockState state(basis);
    if (c.data == DataKind::product) {
      state = product_state(ctx.phi0, n, basis);
    } else {
      const WeylResult coh =
          weyl(std::sqrt(double(n)) * ctx.phi0, vacuum_state(basis), ctx.kopts);
      state = coh.state;
      note_deficit(ctx, "weyl", coh.truncation_deficit);
      ctx.table->add(m, n, 0.0, "weyl_deficit", coh.truncation_deficit);
    }
    double at = 0.0;
    for (double t : ctx.sample_times) {
      state = evolve_hamiltonian(ctx.V, n, state, t - at, ctx.kopts);
      at = t;
      if (c.data == DataKind::product) check_sector(state, n, t);
      const DensityMatrix g1 = gamma1(state, n);
      check_density(g1, "gamma1");
      const double d = trace_distance(g1.mat, projectors[t]);
      ctx.table->add(m, n, t, "gamma1_distance", d);
      dist_by_t[t].push_back(d);
    }
  }

  for (const auto& [t, dist] : dist_by_t) {
    std::vector<double> logn, logd;
    for (std::size_t k = 0; k < dist.size(); ++k) {
      if (dist[k] <= 0.0) continue;
      logn.push_back(std::log(double(c.n_list[k])));
      logd.push_back(std::log(dist[k]));
    }
    if (logn.size() >= 2) ctx.table->add(m, 0, t, "gamma1_slope", ls_slope(logn, logd));
    if (chart) {
      PlotSeries s;
      s.label = "t=" + fmt17(t).substr(0, 6);
      for (std::size_t k = 0; k < dist.size(); ++k) {
        s.x.push_back(double(c.n_list[k]));
        s.y.push_back(dist[k]);
      }
      chart->push_back(std::move(s));
    }
  }
}

void run_growth(StudyContext& ctx, std::vector<PlotSeries>* chart) {
  const ExperimentConfig& c = ctx.c;
  Eigen::VectorXd times(ctx.sample_times.size() + 1);
  times(0) = 0.0;
  for (std::size_t k = 0; k < ctx.sample_times.size(); ++k) times(k + 1) = ctx.sample_times[k];

  for (int n : c.n_list) {
    auto basis = make_basis(c.sites, resolved_nmax(c, n));
    const GrowthSeries series =
        vacuum_number_growth(ctx.traj, ctx.V, n, basis, times, ctx.kopts);
    note_deficit(ctx, "growth", series.truncation_deficit);

    std::vector<double> ts(times.data(), times.data() + times.size());
    std::vector<double> ys(series.values.data(), series.values.data() + series.values.size());
    for (std::size_t k = 0; k < ts.size(); ++k)
      ctx.table->add(c.sites, n, ts[k], "vacuum_number", ys[k]);

    double cf = 0, kf = 0, res = 0;
    fit_exponential(ts, ys, &cf, &kf, &res);
    ctx.table->add(c.sites, n, c.t_final, "growth_C", cf);
    ctx.table->add(c.sites, n, c.t_final, "growth_K", kf);
    ctx.table->add(c.sites, n, c.t_final, "growth_fit_residual", res);
    ctx.table->add(c.sites, n, c.t_final, "growth_deficit", series.truncation_deficit);

    if (chart) {
      PlotSeries s;
      s.label = "n=" + std::to_string(n);
      s.x = ts;
      s.y = ys;
      chart->push_back(std::move(s));
    }
  }
}

void run_bogoliubov(StudyContext& ctx, std::vector<PlotSeries>* chart) {
  const ExperimentConfig& c = ctx.c;
  PlotSeries id_series{"identity dev", {}, {}}, off_series{"pairing dev", {}, {}};
  for (double t : ctx.sample_times) {
    const BogoliubovMap theta = theta_evolve(ctx.traj, ctx.V, t, 0.0);
    ctx.table->add(c.sites, 0, t, "uv_identity_dev", theta.uv_identity_dev);
    ctx.table->add(c.sites, 0, t, "uv_offdiag_dev", theta.uv_offdiag_dev);
    ctx.table->add(c.sites, 0, t, "v_hs_norm", theta.v_hs_norm);
    id_series.x.push_back(t);
    id_series.y.push_back(theta.uv_identity_dev);
    off_series.x.push_back(t);
    off_series.y.push_back(theta.uv_offdiag_dev);
  }
  if (chart) {
    chart->push_back(std::move(id_series));
    chart->push_back(std::move(off_series));
  }

  // the conjugation-action check runs to a fixed short horizon; beyond that
  // truncation noise drowns the comparison long before the identities drift
  const double t_btu = std::min(c.t_final, 0.5);
  const BogoliubovMap theta = theta_evolve(ctx.traj, ctx.V, t_btu, 0.0);
  for (int n : c.n_list) {
    auto basis = make_basis(c.sites, resolved_nmax(c, n));
    const BtuReport rep =
        check_btu(theta, ctx.traj, ctx.V, basis, c.samples, unsigned(c.seed));
    note_deficit(ctx, "btu", rep.truncation_deficit);
    ctx.table->add(c.sites, n, t_btu, "btu_max_rel_dev", rep.max_rel_dev);
    ctx.table->add(c.sites, n, t_btu, "btu_truncation_deficit", rep.truncation_deficit);
  }
}

void run_clt(StudyContext& ctx, std::vector<PlotSeries>* chart) {
  const ExperimentConfig& c = ctx.c;
  const int m = c.sites;
  const Eigen::MatrixXcd o = build_observable(c.observable, m);

  std::vector<double> grid;
  grid.push_back(0.0);
  for (double t : ctx.sample_times) grid.push_back(t);

  std::map<double, double> sigma2;
  PlotSeries sig_series{"sigma^2 limit", {}, {}};
  for (double t : grid) {
    const WaveFunction& phi_t = ctx.traj.state_at(t);
    check_wave_norm(phi_t, t);
    const BogoliubovMap theta = theta_evolve(ctx.traj, ctx.V, t, 0.0);
    sigma2[t] = sigma_t(theta, o, ctx.phi0, phi_t);
    ctx.table->add(m, 0, t, "sigma2_prediction", sigma2[t]);
    const double c1 = std::real((phi_t.adjoint() * o * phi_t).value());
    const double c2 = std::real((phi_t.adjoint() * o * o * phi_t).value());
    ctx.table->add(m, 0, t, "classical_variance", c2 - c1 * c1);
    sig_series.x.push_back(t);
    sig_series.y.push_back(sigma2[t]);
  }

  for (int n : c.n_list) {
    auto basis = make_basis(m, resolved_nmax(c, n));
    FockState state = product_state(ctx.phi0, n, basis);
    PlotSeries var_series{"n=" + std::to_string(n), {}, {}};
    double at = 0.0;
    for (double t : grid) {
      if (t > at) {
        state = evolve_hamiltonian(ctx.V, n, state, t - at, ctx.kopts);
        at = t;
      }
      check_sector(state, n, t);
      const MomentReport rep = fluctuation_moments(state, o, ctx.traj.state_at(t), n);
      ctx.table->add(m, n, t, "mean", rep.m1);
      ctx.table->add(m, n, t, "variance", rep.variance());
      ctx.table->add(m, n, t, "m4", rep.m4);
      ctx.table->add(m, n, t, "kurtosis", rep.kurtosis());
      ctx.table->add(m, n, t, "sigma2_residual", std::abs(rep.variance() - sigma2[t]));
      ctx.table->add(m, n, t, "lln_bound", rep.m2 / (n * c.delta * c.delta));
      var_series.x.push_back(t);
      var_series.y.push_back(rep.variance());
    }
    if (chart) chart->push_back(std::move(var_series));
  }
  if (chart) chart->push_back(std::move(sig_series));
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& cfg, const std::string& out_dir_override) {
  validate(cfg);
  require_feasible(cfg);
  const auto t_start = std::chrono::steady_clock::now();

  ExperimentConfig c = cfg;
  if (!out_dir_override.empty()) c.out_dir = out_dir_override;
  std::filesystem::create_directories(c.out_dir);

  StudyContext ctx{c,
                   PairPotential::from_displacements(c.potential),
                   c.phi0 / c.phi0.norm(),
                   {},
                   {},
                   {},
                   nullptr,
                   nullptr};
  ctx.kopts.tol = 1e-11;
  ctx.kopts.memory_budget = 0.8 * c.memory_mb * 1024.0 * 1024.0;
  ctx.traj = hartree_evolve(ctx.phi0, ctx.V, c.t_final, c.dt);

  const long steps = std::lround(c.t_final / c.dt);
  for (long k = c.stride; k <= steps; k += c.stride) ctx.sample_times.push_back(k * c.dt);

  Table table(study_name(c.study));
  std::map<std::string, double> deficits;
  ctx.table = &table;
  ctx.deficits = &deficits;

  std::vector<PlotSeries> chart;
  std::vector<PlotSeries>* chart_ptr = c.charts ? &chart : nullptr;

  PlotSpec plot;
  std::string chart_name;
  switch (c.study) {
    case StudyKind::free_case:
    case StudyKind::convergence: {
      run_convergence(ctx, chart_ptr);
      plot = {"distance to the mean-field projector", "n", "trace distance", "", true, true};
      double slope = 0.0;
      int found = 0;
      for (const Row& r : table.rows())
        if (r.quantity == "gamma1_slope") {
          slope = r.value;
          ++found;
        }
      if (found > 0) plot.annotation = "last slope " + fmt17(slope).substr(0, 8);
      chart_name = study_name(c.study) + "_distance_vs_n.svg";
      break;
    }
    case StudyKind::growth:
      run_growth(ctx, chart_ptr);
      plot = {"dressed vacuum pair content", "t", "<number> + 1", "", false, true};
      chart_name = "growth_vacuum_number.svg";
      break;
    case StudyKind::bogoliubov:
      run_bogoliubov(ctx, chart_ptr);
      plot = {"pair-flow identity deviations", "t", "max entry deviation", "", false, true};
      chart_name = "bogoliubov_identities.svg";
      break;
    case StudyKind::clt:
      run_clt(ctx, chart_ptr);
      plot = {"fluctuation variance against the limit", "t", "variance", "", false, false};
      chart_name = "clt_variance_vs_t.svg";
      break;
  }

  RunArtifacts out;
  out.csv_path = c.out_dir + "/results.csv";
  table.write(out.csv_path);
  out.rows = table.size();

  if (c.charts && !chart.empty()) {
    const std::string path = c.out_dir + "/" + chart_name;
    write_svg_plot(path, plot, chart);
    out.chart_paths.push_back(path);
  }

  {
    SnapshotMeta meta;
    meta.sites = c.sites;
    meta.n_max = 0;
    meta.basis_hash = 0;
    meta.time = c.t_final;
    write_snapshot(c.out_dir + "/hartree_final", ctx.traj.states.back(), meta);
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  nlohmann::json meta;
  meta["version"] = "1.0.0";
  meta["study"] = study_name(c.study);
  meta["config"] = serialize_config(c);
  meta["threads"] = num_threads();
  meta["rows"] = out.rows;
  meta["elapsed_seconds"] = elapsed;
  meta["truncation_deficits"] = deficits;
  {
    const FeasibilityReport fr = estimate_feasibility(c);
    meta["peak_estimated_mb"] = fr.peak_mb;
  }
  out.json_path = c.out_dir + "/results.json";
  std::ofstream js(out.json_path, std::ios::trunc);
  if (!js) throw std::runtime_error("cannot open " + out.json_path + " for writing");
  js << meta.dump(2) << "\n";

  return out;
}

}  // namespace meanfield
