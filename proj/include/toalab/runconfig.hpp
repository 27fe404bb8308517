#pragma once

#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "toalab/grid.hpp"

namespace toalab {

/// Declarative experiment configuration. The defaults reproduce the worked
/// example's setup (unit-width packet at x=-4 with velocity 4, detector at
/// the origin, horizon 3 with dt=1e-3 on a 4096-point grid over [-20,20]).
struct RunConfig {
  std::string experiment = "kijowski";

  struct {
    double x_min = -20.0;
    double x_max = 20.0;
    std::size_t n = 4096;
  } grid;

  struct {
    double center = -4.0;
    double alpha = 1.0;
    double momentum = 4.0;
    double phase = 16.0;
  } packet;

  struct {
    double position = 0.0;
    double kappa = 8.0;
    std::string regularization = "grid-point";
    double sigma = 0.1;
  } detector;

  std::vector<double> kappas = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
  double horizon = 3.0;
  double dt = 1e-3;
  std::size_t tau_points = 600;
  std::vector<double> times = {0.0, 0.5, 1.0, 2.0};
  std::size_t lindblad_n = 128;
  std::string out = ".";
  std::string format = "csv";
};

inline const std::set<std::string> &known_experiments() {
  static const std::set<std::string> e = {"evolve", "momentum", "kijowski",
                                          "eeqt",   "sweep",    "compare",
                                          "lindblad", "geometry"};
  return e;
}

namespace detail {

inline void require_keys(const nlohmann::json &j,
                         const std::set<std::string> &allowed,
                         const std::string &scope) {
  for (const auto &[key, value] : j.items())
    if (!allowed.contains(key))
      throw std::invalid_argument("unknown config key '" + scope + key + "'");
}

} // namespace detail

/// Parses a config file, starting from the paper defaults; unknown keys are
/// errors.
inline RunConfig parse_config(const nlohmann::json &j) {
  RunConfig c;
  detail::require_keys(j,
                       {"experiment", "grid", "packet", "detector", "kappas",
                        "horizon", "dt", "tau_points", "times", "lindblad_n",
                        "out", "format"},
                       "");
  if (j.contains("experiment")) c.experiment = j["experiment"].get<std::string>();
  if (j.contains("grid")) {
    const auto &g = j["grid"];
    detail::require_keys(g, {"x_min", "x_max", "n"}, "grid.");
    if (g.contains("x_min")) c.grid.x_min = g["x_min"].get<double>();
    if (g.contains("x_max")) c.grid.x_max = g["x_max"].get<double>();
    if (g.contains("n")) c.grid.n = g["n"].get<std::size_t>();
  }
  if (j.contains("packet")) {
    const auto &p = j["packet"];
    detail::require_keys(p, {"center", "alpha", "momentum", "phase"}, "packet.");
    if (p.contains("center")) c.packet.center = p["center"].get<double>();
    if (p.contains("alpha")) c.packet.alpha = p["alpha"].get<double>();
    if (p.contains("momentum")) c.packet.momentum = p["momentum"].get<double>();
    if (p.contains("phase")) c.packet.phase = p["phase"].get<double>();
  }
  if (j.contains("detector")) {
    const auto &d = j["detector"];
    detail::require_keys(d, {"position", "kappa", "regularization", "sigma"},
                         "detector.");
    if (d.contains("position")) c.detector.position = d["position"].get<double>();
    if (d.contains("kappa")) c.detector.kappa = d["kappa"].get<double>();
    if (d.contains("regularization"))
      c.detector.regularization = d["regularization"].get<std::string>();
    if (d.contains("sigma")) c.detector.sigma = d["sigma"].get<double>();
  }
  if (j.contains("kappas")) c.kappas = j["kappas"].get<std::vector<double>>();
  if (j.contains("horizon")) c.horizon = j["horizon"].get<double>();
  if (j.contains("dt")) c.dt = j["dt"].get<double>();
  if (j.contains("tau_points")) c.tau_points = j["tau_points"].get<std::size_t>();
  if (j.contains("times")) c.times = j["times"].get<std::vector<double>>();
  if (j.contains("lindblad_n")) c.lindblad_n = j["lindblad_n"].get<std::size_t>();
  if (j.contains("out")) c.out = j["out"].get<std::string>();
  if (j.contains("format")) c.format = j["format"].get<std::string>();
  return c;
}

/// Checks every module precondition without running anything; an empty list
/// means the config is runnable.
inline std::vector<std::string> validate(const RunConfig &c) {
  std::vector<std::string> d;
  if (!known_experiments().contains(c.experiment))
    d.push_back("unknown experiment '" + c.experiment + "'");
  if (!(c.grid.x_min < c.grid.x_max))
    d.push_back("grid.x_min must be less than grid.x_max");
  if (!is_power_of_two(c.grid.n))
    d.push_back("grid.n must be a power of two (>= 2)");
  if (!(c.packet.alpha > 0.0)) d.push_back("packet.alpha must be positive");
  if (!(c.dt > 0.0)) d.push_back("dt must be positive");
  if (!(c.horizon > 0.0)) d.push_back("horizon must be positive");
  if (c.tau_points < 2) d.push_back("tau_points must be at least 2");
  if (c.detector.kappa < 0.0) d.push_back("detector.kappa must be non-negative");
  if (c.detector.regularization != "grid-point" &&
      c.detector.regularization != "gaussian")
    d.push_back("detector.regularization must be 'grid-point' or 'gaussian'");
  if (c.detector.regularization == "gaussian" && !(c.detector.sigma > 0.0))
    d.push_back("detector.sigma must be positive");
  for (double k : c.kappas)
    if (k < 0.0) {
      d.push_back("kappas must be non-negative");
      break;
    }
  if (c.format != "csv" && c.format != "json")
    d.push_back("format must be 'csv' or 'json'");
  if (c.lindblad_n > 256)
    d.push_back("lindblad_n must be at most 256 (kernel resource guard)");
  if (!is_power_of_two(c.lindblad_n)) d.push_back("lindblad_n must be a power of two");
  for (double t : c.times)
    if (t < 0.0) {
      d.push_back("times must be non-negative");
      break;
    }
  return d;
}

} // namespace toalab
