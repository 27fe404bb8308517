// Command-line laboratory: reproduces the arrival-time figure data from
// declarative configs and writes machine-readable bundles.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "toalab/eeqt.hpp"
#include "toalab/figure.hpp"
#include "toalab/galnewt.hpp"
#include "toalab/kijowski.hpp"
#include "toalab/liouville.hpp"
#include "toalab/propagators.hpp"
#include "toalab/runconfig.hpp"

namespace {

using namespace toalab;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

Grid1D config_grid(const RunConfig &c) {
  return make_grid(c.grid.x_min, c.grid.x_max, c.grid.n);
}

WaveFunction config_packet(const RunConfig &c) {
  return gaussian_packet(
      {c.packet.center, c.packet.alpha, c.packet.momentum, c.packet.phase},
      config_grid(c));
}

DetectorSpec config_detector(const RunConfig &c) {
  DetectorSpec det;
  det.position = c.detector.position;
  det.kappa = c.detector.kappa;
  det.regularization = c.detector.regularization == "gaussian"
                           ? DetectorSpec::Regularization::Gaussian
                           : DetectorSpec::Regularization::GridPoint;
  det.sigma = c.detector.sigma;
  return det;
}

std::map<std::string, std::string> base_metadata(const RunConfig &c) {
  std::map<std::string, std::string> meta;
  meta["grid"] = "n=" + std::to_string(c.grid.n) + " [" + fmt(c.grid.x_min) +
                 "," + fmt(c.grid.x_max) + "]";
  meta["packet"] = "center=" + fmt(c.packet.center) +
                   " alpha=" + fmt(c.packet.alpha) +
                   " momentum=" + fmt(c.packet.momentum) +
                   " phase=" + fmt(c.packet.phase);
  meta["dt"] = fmt(c.dt);
  meta["horizon"] = fmt(c.horizon);
  meta["version"] = "toa-lab 1.0.0";
  return meta;
}

std::size_t horizon_steps(const RunConfig &c) {
  return static_cast<std::size_t>(std::llround(c.horizon / c.dt));
}

std::vector<FigureBundle> run_evolve(const RunConfig &c) {
  auto g = config_grid(c);
  FigureBundle b;
  b.figure_id = "fig1";
  b.columns = {"x[atomic]"};
  for (double t : c.times) b.columns.push_back("density_t" + fmt(t) + "[1/atomic]");
  std::vector<WaveFunction> states;
  for (double t : c.times) states.push_back(analytic_gaussian(t, g));
  for (std::size_t j = 0; j < g.n; ++j) {
    std::vector<double> row{g.x(j)};
    for (const auto &wf : states) row.push_back(std::norm(wf.amplitudes[j]));
    b.rows.push_back(std::move(row));
  }
  b.metadata = base_metadata(c);
  b.metadata["times"] = [&] {
    std::string s;
    for (double t : c.times) s += (s.empty() ? "" : " ") + fmt(t);
    return s;
  }();
  return {b};
}

std::vector<FigureBundle> run_momentum(const RunConfig &c) {
  auto g = config_grid(c);
  FigureBundle b;
  b.figure_id = "fig2";
  b.columns = {"k[atomic]"};
  for (double t : c.times) b.columns.push_back("spectral_density_t" + fmt(t));
  std::vector<SpectralWaveFunction> states;
  for (double t : c.times) states.push_back(to_momentum(analytic_gaussian(t, g)));
  for (std::size_t m = 0; m < g.n; ++m) {
    const double k = g.k(m);
    if (std::abs(k) > 16.0) continue; // the packet's spectral support
    std::vector<double> row{k};
    for (const auto &sw : states) row.push_back(std::norm(sw.amplitudes[m]));
    b.rows.push_back(std::move(row));
  }
  b.metadata = base_metadata(c);
  return {b};
}

std::vector<FigureBundle> run_kijowski(const RunConfig &c) {
  auto sw = to_momentum(config_packet(c));
  auto taus = uniform_times(0.0, c.horizon, c.tau_points);
  auto amp = kijowski_amplitudes(sw, taus);
  auto dist = kijowski_density(amp);
  FigureBundle plus, minus;
  plus.figure_id = "fig3";
  plus.columns = {"tau[atomic]", "p_plus[1/atomic]", "p_total[1/atomic]"};
  minus.figure_id = "fig4";
  minus.columns = {"tau[atomic]", "p_minus[1/atomic]"};
  for (std::size_t j = 0; j < taus.size(); ++j) {
    plus.rows.push_back({taus[j], std::norm(amp.plus[j]), dist.density[j]});
    minus.rows.push_back({taus[j], std::norm(amp.minus[j])});
  }
  auto meta = base_metadata(c);
  meta["tau_range"] = "[0," + fmt(c.horizon) + "] (figure support; a choice, not from the source data)";
  plus.metadata = meta;
  minus.metadata = meta;
  return {plus, minus};
}

std::vector<FigureBundle> run_eeqt(const RunConfig &c) {
  auto wf = config_packet(c);
  auto det = config_detector(c);
  FigureBundle raw, norm;
  raw.figure_id = "fig5";
  norm.figure_id = "fig7";
  raw.columns = {"t[atomic]"};
  norm.columns = {"t[atomic]"};
  std::vector<std::vector<double>> densities, normalized_densities;
  std::vector<double> times;
  for (double kappa : c.kappas) {
    det.kappa = kappa;
    auto d = detection_distribution(damped_evolve(wf, det, c.dt, horizon_steps(c)), det);
    times = d.dist.times;
    raw.columns.push_back("p_kappa" + fmt(kappa) + "[1/atomic]");
    norm.columns.push_back("p_kappa" + fmt(kappa) + "[1/atomic]");
    densities.push_back(d.dist.density);
    normalized_densities.push_back(normalized(d.dist).density);
  }
  for (std::size_t j = 0; j < times.size(); ++j) {
    std::vector<double> r{times[j]}, nr{times[j]};
    for (const auto &d : densities) r.push_back(d[j]);
    for (const auto &d : normalized_densities) nr.push_back(d[j]);
    raw.rows.push_back(std::move(r));
    norm.rows.push_back(std::move(nr));
  }
  auto meta = base_metadata(c);
  meta["detector"] = "position=" + fmt(c.detector.position) + " " +
                     c.detector.regularization;
  raw.metadata = meta;
  norm.metadata = meta;
  return {raw, norm};
}

std::vector<FigureBundle> run_sweep(const RunConfig &c) {
  auto sweep = kappa_sweep(config_packet(c), config_detector(c), c.kappas, c.dt,
                           horizon_steps(c));
  FigureBundle b;
  b.figure_id = "fig6";
  b.columns = {"kappa[1/atomic]", "p_infinity", "tail_estimate"};
  for (std::size_t j = 0; j < sweep.kappas.size(); ++j)
    b.rows.push_back(
        {sweep.kappas[j], sweep.p_infinity[j], sweep.tail_estimates[j]});
  b.metadata = base_metadata(c);
  b.metadata["best_kappa"] = fmt(sweep.best_kappa);
  b.metadata["best_p_infinity"] = fmt(sweep.best_p_infinity);
  return {b};
}

std::vector<FigureBundle> run_compare(const RunConfig &c) {
  auto rep = compare_with_kijowski(config_packet(c), c.detector.kappa, c.dt,
                                   c.horizon, c.tau_points);
  FigureBundle b;
  b.figure_id = "fig8";
  b.columns = {"tau[atomic]", "eeqt_normalized[1/atomic]",
               "kijowski_normalized[1/atomic]", "difference[1/atomic]"};
  for (std::size_t j = 0; j < rep.times.size(); ++j)
    b.rows.push_back({rep.times[j], rep.eeqt_density[j], rep.kijowski_density[j],
                      rep.eeqt_density[j] - rep.kijowski_density[j]});
  b.metadata = base_metadata(c);
  b.metadata["kappa"] = fmt(c.detector.kappa);
  b.metadata["sup_difference"] = fmt(rep.sup_difference);
  b.metadata["l1_difference"] = fmt(rep.l1_difference);
  b.metadata["eeqt_p_infinity"] = fmt(rep.eeqt_total_raw);
  return {b};
}

std::vector<FigureBundle> run_lindblad(const RunConfig &c) {
  RunConfig coarse = c;
  coarse.grid.n = c.lindblad_n;
  auto wf = config_packet(coarse);
  auto det = config_detector(c);
  // stability bound for the 4th-order stepper on the spectral Hamiltonian
  const double hnorm = wf.grid.k_max() * wf.grid.k_max() / 2.0;
  const double dt = std::min(0.01, 2.5 / hnorm);
  const auto steps = static_cast<std::size_t>(std::llround(c.horizon / dt));
  auto rep = eeqt_crosscheck(wf, det, dt, steps, c.dt);
  FigureBundle b;
  b.figure_id = "lindblad";
  b.columns = {"t[atomic]", "kernel_trace", "damped_norm2", "abs_difference"};
  for (std::size_t j = 0; j < rep.times.size(); ++j)
    b.rows.push_back({rep.times[j], rep.kernel_trace[j], rep.damped_norm[j],
                      std::abs(rep.kernel_trace[j] - rep.damped_norm[j])});
  b.metadata = base_metadata(c);
  b.metadata["kernel_n"] = std::to_string(c.lindblad_n);
  b.metadata["kernel_dt"] = fmt(dt);
  b.metadata["max_difference"] = fmt(rep.max_difference);
  return {b};
}

std::vector<FigureBundle> run_geometry(const RunConfig &c) {
  using namespace toalab::galnewt;
  auto delta = [](int i, int j, const std::array<double, 4> &) {
    return i == j ? 1.0 : 0.0;
  };
  auto smooth_g = [](int i, int j, const std::array<double, 4> &x) {
    const double base = (i == j) ? 1.0 : 0.0;
    return base + 0.05 * std::sin(x[0] + x[1] + 0.5 * x[2]) *
                      std::cos(0.3 * x[3] + static_cast<double>(i + j));
  };
  auto smooth_phi = [](int mu, int nu, const std::array<double, 4> &x) {
    return 0.1 * std::sin(x[static_cast<std::size_t>(mu)] +
                          2.0 * x[static_cast<std::size_t>(nu)]);
  };
  FigureBundle b;
  b.figure_id = "geometry";
  b.columns = {"h", "compat_max_interior", "compat_mean_interior",
               "closedness_max_interior"};
  for (std::size_t n : {7u, 13u, 25u}) {
    Grid4 g4;
    g4.n = {n, n, n, n};
    auto m = sample_model(g4, smooth_g, smooth_phi);
    auto compat = verify_compatibility(build_connection(m), m);
    auto closed = check_closedness(m);
    b.rows.push_back({m.grid.h(0), compat.max_interior, compat.mean_interior,
                      closed.max_interior});
  }
  auto [e, bb] = boost_transform(Vec3{0.0, 0.0, 0.0}, Vec3{0.0, 0.0, 1.0},
                                 Vec3{1.0, 0.0, 0.0});
  (void)bb;
  b.metadata = base_metadata(c);
  b.metadata["boost_check"] = "E'=(" + fmt(e[0]) + "," + fmt(e[1]) + "," +
                              fmt(e[2]) + ") for v=x, B=z";
  b.metadata["field_family"] = "builtin smooth trigonometric g, Phi on [0,1]^4";
  return {b};
}

std::vector<FigureBundle> dispatch(const RunConfig &c) {
  if (c.experiment == "evolve") return run_evolve(c);
  if (c.experiment == "momentum") return run_momentum(c);
  if (c.experiment == "kijowski") return run_kijowski(c);
  if (c.experiment == "eeqt") return run_eeqt(c);
  if (c.experiment == "sweep") return run_sweep(c);
  if (c.experiment == "compare") return run_compare(c);
  if (c.experiment == "lindblad") return run_lindblad(c);
  if (c.experiment == "geometry") return run_geometry(c);
  throw std::invalid_argument("unknown experiment: " + c.experiment);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Quantum time-of-arrival laboratory"};
  app.get_formatter()->column_width(40);

  std::string experiment;
  std::string config_path;
  bool paper_defaults = false;
  std::string out_path;
  std::string format;
  std::vector<double> kappas;
  double dt = -1.0, horizon = -1.0;

  app.add_option("experiment", experiment,
                 "one of: evolve momentum kijowski eeqt sweep compare lindblad geometry")
      ->required();
  app.add_option("--config", config_path, "JSON config file");
  app.add_flag("--paper-defaults", paper_defaults,
               "use the built-in paper configuration (same as configs/paper_defaults.json)");
  app.add_option("--out", out_path, "output directory (default: .)");
  app.add_option("--format", format, "csv or json");
  app.add_option("--kappa", kappas, "sensitivity value(s), overrides the config list");
  auto *dt_opt = app.add_option("--dt", dt, "integration step");
  auto *horizon_opt = app.add_option("--horizon", horizon, "time horizon");

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    if (!config_path.empty()) {
      if (paper_defaults) {
        std::cerr << "error: --config and --paper-defaults are mutually exclusive\n";
        return 1;
      }
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot read config file " << config_path << "\n";
        return 1;
      }
      nlohmann::json j;
      in >> j;
      cfg = toalab::parse_config(j);
    }
  } catch (const std::exception &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  cfg.experiment = experiment;
  if (!out_path.empty()) cfg.out = out_path;
  if (!format.empty()) cfg.format = format;
  if (!kappas.empty()) {
    cfg.kappas = kappas;
    cfg.detector.kappa = kappas.front();
  }
  if (dt_opt->count() > 0) cfg.dt = dt;
  if (horizon_opt->count() > 0) cfg.horizon = horizon;

  const auto diagnostics = toalab::validate(cfg);
  if (!diagnostics.empty()) {
    for (const auto &d : diagnostics) std::cerr << "invalid config: " << d << "\n";
    return 1;
  }

  try {
    std::filesystem::create_directories(cfg.out);
    for (const auto &bundle : dispatch(cfg)) {
      const std::string ext = cfg.format == "json" ? ".json" : ".csv";
      const auto path =
          (std::filesystem::path(cfg.out) / (bundle.figure_id + ext)).string();
      if (cfg.format == "json")
        toalab::write_file(path, toalab::to_json(bundle).dump(2) + "\n");
      else
        toalab::write_file(path, toalab::to_csv(bundle));
      std::cout << "wrote " << path << "\n";
    }
  } catch (const std::invalid_argument &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
