#include "cqed/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Core>
#include <json.hpp>

#include "cqed/acceptance.hpp"
#include "cqed/direct.hpp"
#include "cqed/dynamics.hpp"
#include "cqed/io.hpp"
#include "cqed/protocol.hpp"
#include "cqed/tomo.hpp"
#include "cqed/wigner.hpp"

namespace cqed::experiments {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

const std::vector<std::string>& names() {
  static const std::vector<std::string> n = {"prepare-cat",    "decoherence-scan", "wigner-map", "tomography",
                                             "direct-map",     "direct-monitor",   "pauli-demo", "selfcheck"};
  return n;
}

namespace {

const std::set<std::string> kKeys = {
    "experiment", "alpha",   "state",   "fock_n",    "psi",   "phi",  "eta",   "ramsey_phase",
    "kappa",      "n_thermal", "dim",   "grid",      "angles", "samples", "bin_width", "shots",
    "efficiency", "t_end",   "steps",   "shot_interval", "seed", "out"};

double number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("config: '" + key + "' must be a number");
  return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& key) {
  if (!j.is_number_integer()) throw ConfigError("config: '" + key + "' must be an integer");
  return j.get<std::int64_t>();
}

std::string text(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("config: '" + key + "' must be a string");
  return j.get<std::string>();
}

// Config with every optional resolved for its experiment.
ExperimentConfig resolve(const ExperimentConfig& in) {
  ExperimentConfig c = in;
  const std::string& e = c.experiment;
  if (!c.alpha) {
    if (e == "wigner-map") c.alpha = Complex(3.0, 0.0);
    else if (e == "tomography") c.alpha = Complex(2.0, 0.0);
    else if (e == "direct-map") c.alpha = Complex(0.0, 0.0);
    else c.alpha = Complex(std::sqrt(5.0), 0.0);
  }
  if (!c.state) c.state = e == "direct-map" ? "fock" : "cat";
  if (!c.fock_n) c.fock_n = 1;
  if (!c.angles) c.angles = 72;
  if (!c.samples) c.samples = e == "pauli-demo" ? 100000 : 200000;
  if (!c.shots) c.shots = 1000;
  if (!c.t_end) c.t_end = e == "direct-monitor" ? 1.0 : 8.0;
  if (!c.steps) c.steps = e == "direct-monitor" ? 41 : 81;
  if (!c.grid) {
    const double reach = *c.state == "fock" ? 1.0 + 0.5 * *c.fock_n : std::abs(*c.alpha);
    if (e == "tomography") {
      c.grid = GridConfig{std::sqrt(2.0) * reach + 2.5, 101};
    } else if (e == "pauli-demo") {
      c.grid = GridConfig{4.0, 81};
    } else {
      const PhaseSpaceGrid g = PhaseSpaceGrid::fine(reach);
      c.grid = GridConfig{g.q1_max, g.n1};
    }
  }
  return c;
}

HilbertSpec spec_for(const ExperimentConfig& c) {
  if (c.dim > 0) return HilbertSpec(c.dim);
  if (*c.state == "vacuum" || *c.state == "fock") return HilbertSpec(std::max(8, *c.fock_n + 6));
  return HilbertSpec::for_amplitude(std::abs(*c.alpha));
}

DensityOperator make_state(const ExperimentConfig& c, const std::string& which) {
  const HilbertSpec spec = spec_for(c);
  if (which == "vacuum") return pure_to_density(fock_state(spec, 0));
  if (which == "fock") return pure_to_density(fock_state(spec, *c.fock_n));
  if (which == "coherent") return pure_to_density(coherent_state(spec, *c.alpha));
  if (which == "cat") return pure_to_density(cat_state(spec, *c.alpha, c.psi));
  if (which == "mixture") {
    const std::pair<FieldState, double> halves[] = {{coherent_state(spec, *c.alpha), 0.5},
                                                    {coherent_state(spec, -*c.alpha), 0.5}};
    return mix(halves);
  }
  throw ConfigError("config: unknown state '" + which + "'");
}

ProtocolConfig protocol_config(const ExperimentConfig& c) {
  ProtocolConfig p;
  p.phi = c.phi;
  p.eta = c.eta;
  p.ramsey_phase = c.ramsey_phase;
  p.dim = c.dim;
  return p;
}

PhaseSpaceGrid grid_of(const ExperimentConfig& c) { return PhaseSpaceGrid::square(c.grid->half_width, c.grid->points); }

std::vector<double> linspace(double end, int steps) {
  std::vector<double> t(steps);
  for (int k = 0; k < steps; ++k) t[k] = steps == 1 ? 0.0 : end * k / (steps - 1);
  return t;
}

class Output {
 public:
  Output(const ExperimentConfig& c, RunResult& r) : config_(c), result_(r) {}

  void write(const std::string& file, const std::string& content) {
    io::write_atomic(config_.out / file, content);
    result_.artifacts.push_back({file, io::fnv1a64_hex(content), content.size()});
  }
  void write_json(const std::string& file, const ojson& j) { write(file, j.dump(2) + "\n"); }

 private:
  const ExperimentConfig& config_;
  RunResult& result_;
};

ojson complex_json(Complex z) { return ojson::array({z.real(), z.imag()}); }

void run_prepare_cat(const ExperimentConfig& c, Output& out, RunResult& r) {
  const CatPreparation prep = prepare_cat(*c.alpha, protocol_config(c));
  ojson j;
  j["alpha"] = complex_json(*c.alpha);
  j["p_e"] = prep.p_e;
  j["p_g"] = prep.p_g;
  io::CsvWriter csv({"n", "P_n_given_e", "P_n_given_g"});
  const int dim = prep.field_e ? prep.field_e->dim() : prep.field_g->dim();
  for (int n = 0; n < dim; ++n) {
    csv.add_row(std::vector<double>{static_cast<double>(n), prep.field_e ? prep.field_e->matrix()(n, n).real() : 0.0,
                                    prep.field_g ? prep.field_g->matrix()(n, n).real() : 0.0});
  }
  for (const auto& [label, field] : {std::pair{"e", prep.field_e}, std::pair{"g", prep.field_g}}) {
    if (!field) {
      j["branches"][label] = nullptr;
      continue;
    }
    j["branches"][label] = {{"mean_n", field->mean_photon_number()},
                            {"purity", field->purity()},
                            {"parity", field->expectation(parity(HilbertSpec(field->dim())).matrix()).real()},
                            {"coherence", cat_coherence(*field, *c.alpha)}};
  }
  out.write_json("prepare_cat.json", j);
  out.write("photon_numbers.csv", csv.str());
  r.messages.push_back("P_e = " + io::format_double(prep.p_e) + ", P_g = " + io::format_double(prep.p_g));
}

void run_decoherence_scan(const ExperimentConfig& c, Output& out, RunResult& r) {
  const DampingModel model(c.kappa, c.n_thermal);
  const ProtocolConfig pc = protocol_config(c);
  const std::vector<double> delays = linspace(*c.t_end, *c.steps);

  io::CsvWriter fig({"delay", "P_e2_given_e1", "P_g2_given_g1"});
  for (const double t : delays) {
    const ConditionalTable table = two_atom_conditional(*c.alpha, t, model, pc);
    fig.add_row(std::vector<double>{t, table.p_e2_given_e1, table.p_g2_given_g1});
  }
  out.write("two_atom.csv", fig.str());

  const DensityOperator cat = make_state(c, "cat");
  const auto states = evolve_trajectory(cat, model, delays);
  io::CsvWriter traj({"t", "coherence", "mean_n", "trace_error"});
  for (std::size_t k = 0; k < delays.size(); ++k) {
    traj.add_row(std::vector<double>{delays[k], cat_coherence(states[k], *c.alpha), states[k].mean_photon_number(),
                                     std::abs(states[k].matrix().trace().real() - 1.0)});
  }
  out.write("trajectory.csv", traj.str());
  r.messages.push_back("decoherence time " + io::format_double(decoherence_time(model, std::norm(*c.alpha))));
}

void run_wigner_map(const ExperimentConfig& c, Output& out, RunResult& r) {
  const PhaseSpaceGrid grid = grid_of(c);
  std::vector<std::string> which = {*c.state};
  if (*c.state == "cat") which.push_back("mixture");
  ojson summary;
  std::vector<WignerMap> maps;
  for (const auto& w : which) {
    WignerMap m = wigner_map(make_state(c, w), grid);
    out.write("wigner_" + w + ".csv", io::wigner_map_csv(m));
    summary["maps"][w] = {{"normalization", m.normalization()}, {"max_abs", m.max_abs()},
                          {"within_bound", within_wigner_bound(m)}};
    maps.push_back(std::move(m));
  }
  if (maps.size() == 2) {
    // Fringes live on the strip between the two lobes.
    double diff = 0.0;
    for (int i = 0; i < grid.n1; ++i) {
      if (std::abs(grid.q1(i)) > 1.0) continue;
      for (int j = 0; j < grid.n2; ++j) diff = std::max(diff, std::abs(maps[0].values(i, j) - maps[1].values(i, j)));
    }
    summary["fringe_sup_difference"] = diff;
    r.messages.push_back("fringe-region sup difference cat vs mixture: " + io::format_double(diff));
  }
  out.write_json("wigner_summary.json", summary);
}

void run_tomography(const ExperimentConfig& c, Output& out, RunResult& r) {
  const DensityOperator rho = make_state(c, *c.state);
  const PhaseSpaceGrid grid = grid_of(c);
  Binning binning;
  binning.bin_width = c.bin_width;
  binning.half_width = std::max(default_half_width(rho), grid.max_radius() + 1.0);
  const FringeRegion region{-1.0, 1.0, grid.q2_min, grid.q2_max};
  const ReconstructionReport rep = reconstruct_from_samples(rho, *c.angles, *c.samples, c.seed, grid, binning, region);

  out.write("sinogram.csv", io::sinogram_csv(rep.sinogram));
  ojson meta;
  meta["n_samples"] = *c.samples;
  meta["seed"] = c.seed;
  meta["angles"] = *c.angles;
  meta["binning"] = {{"bin_width", binning.bin_width}, {"half_width", binning.half_width},
                     {"tabulation_points", binning.tabulation_points}};
  out.write_json("sinogram.json", meta);
  out.write("reconstruction.csv", io::wigner_map_csv(rep.map));

  ojson report;
  report["rmse"] = rep.rmse;
  report["max_error"] = rep.max_error;
  report["fringe_contrast"] = *rep.fringe_contrast;
  report["true_fringe_contrast"] = *rep.true_fringe_contrast;
  report["angles"] = rep.angles;
  report["n"] = rep.n_per_angle;
  report["normalization"] = rep.normalization;
  report["max_abs"] = rep.max_abs;
  report["max_marginal_residual"] = *std::max_element(rep.marginal_residuals.begin(), rep.marginal_residuals.end());
  out.write_json("reconstruction_report.json", report);
  r.messages.push_back("RMSE " + io::format_double(rep.rmse) + ", fringe contrast " +
                       io::format_double(*rep.fringe_contrast) + " (truth " +
                       io::format_double(*rep.true_fringe_contrast) + ")");
}

void run_direct_map(const ExperimentConfig& c, Output& out, RunResult& r) {
  const DensityOperator rho = make_state(c, *c.state);
  const PhaseSpaceGrid grid = grid_of(c);
  const WignerMap m = scan_map(rho, grid, protocol_config(c));
  out.write("direct_map.csv", io::wigner_map_csv(m));
  ojson s;
  s["normalization"] = m.normalization();
  s["max_abs"] = m.max_abs();
  s["within_bound"] = within_wigner_bound(m);
  s["origin"] = direct_point_exact(rho, 0.0, protocol_config(c)).estimate;
  out.write_json("direct_summary.json", s);
  r.messages.push_back("W at the origin: " + io::format_double(s["origin"].get<double>()));
}

void run_direct_monitor(const ExperimentConfig& c, Output& out, RunResult& r) {
  const DensityOperator rho = make_state(c, *c.state);
  const DampingModel model(c.kappa, c.n_thermal);
  const std::vector<double> times = linspace(*c.t_end, *c.steps);
  const auto series = monitor_origin(rho, model, times, protocol_config(c), *c.shots, c.efficiency, c.seed);
  io::CsvWriter csv({"t", "W0_exact", "W0_sampled", "stderr"});
  for (const auto& s : series) {
    csv.add_row(std::vector<double>{s.t, s.exact.estimate, s.sampled->estimate, s.sampled->std_error});
  }
  out.write("monitor.csv", csv.str());
  ojson summary;
  summary["decoherence_time"] = decoherence_time(model, std::max(rho.mean_photon_number(), 1e-12));
  if (c.shot_interval) {
    const auto warn = pacing_warning(*c.shot_interval, summary["decoherence_time"].get<double>());
    summary["pacing_warning"] = warn ? ojson(*warn) : ojson(nullptr);
    if (warn) r.messages.push_back("warning: " + *warn);
  }
  out.write_json("monitor_summary.json", summary);
}

void run_pauli_demo(const ExperimentConfig& c, Output& out, RunResult& r) {
  const PauliDemoReport rep = pauli_incompleteness_demo(grid_of(c), *c.samples, c.seed);
  ojson j;
  j["two_angle_sinogram_deviation"] = rep.two_angle_sinogram_deviation;
  j["two_angle_histogram_deviation"] = rep.two_angle_histogram_deviation;
  j["full_reconstruction_deviation"] = rep.full_reconstruction_deviation;
  j["rotated_marginal_deviation"] = rep.rotated_marginal_deviation;
  j["marginals-only incomplete"] = rep.marginals_only_incomplete;
  out.write_json("pauli_report.json", j);
  r.messages.push_back(std::string("marginals-only incomplete: ") + (rep.marginals_only_incomplete ? "true" : "false"));
}

void run_selfcheck(Output& out, RunResult& r) {
  const auto results = acceptance::run_all();
  ojson j = ojson::array();
  bool all = true;
  for (const auto& res : results) {
    all = all && res.pass;
    // Timing is left out so the report is reproducible.
    j.push_back({{"criterion", res.id}, {"name", res.name}, {"pass", res.pass}, {"detail", res.detail}});
    r.messages.push_back(acceptance::format_line(res));
  }
  out.write_json("selfcheck.json", j);
  r.exit_code = all ? 0 : 3;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError("config: unknown key '" + key + "'");
  }
  ExperimentConfig c;
  if (j.contains("experiment")) c.experiment = text(j["experiment"], "experiment");
  if (j.contains("alpha")) {
    const json& a = j["alpha"];
    if (a.is_number()) {
      c.alpha = Complex(a.get<double>(), 0.0);
    } else if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number()) {
      c.alpha = Complex(a[0].get<double>(), a[1].get<double>());
    } else {
      throw ConfigError("config: 'alpha' must be a number or [re, im]");
    }
  }
  if (j.contains("state")) c.state = text(j["state"], "state");
  if (j.contains("fock_n")) c.fock_n = static_cast<int>(integer(j["fock_n"], "fock_n"));
  if (j.contains("psi")) c.psi = number(j["psi"], "psi");
  if (j.contains("phi")) c.phi = number(j["phi"], "phi");
  if (j.contains("eta")) c.eta = number(j["eta"], "eta");
  if (j.contains("ramsey_phase")) c.ramsey_phase = number(j["ramsey_phase"], "ramsey_phase");
  if (j.contains("kappa")) c.kappa = number(j["kappa"], "kappa");
  if (j.contains("n_thermal")) c.n_thermal = number(j["n_thermal"], "n_thermal");
  if (j.contains("dim")) c.dim = static_cast<int>(integer(j["dim"], "dim"));
  if (j.contains("grid")) {
    const json& g = j["grid"];
    if (!g.is_object()) throw ConfigError("config: 'grid' must be an object");
    for (const auto& [key, _] : g.items()) {
      if (key != "half_width" && key != "points") throw ConfigError("config: unknown key 'grid." + key + "'");
    }
    if (!g.contains("half_width") || !g.contains("points")) {
      throw ConfigError("config: 'grid' needs half_width and points");
    }
    c.grid = GridConfig{number(g["half_width"], "grid.half_width"), static_cast<int>(integer(g["points"], "grid.points"))};
  }
  if (j.contains("angles")) c.angles = static_cast<int>(integer(j["angles"], "angles"));
  if (j.contains("samples")) c.samples = integer(j["samples"], "samples");
  if (j.contains("bin_width")) c.bin_width = number(j["bin_width"], "bin_width");
  if (j.contains("shots")) c.shots = integer(j["shots"], "shots");
  if (j.contains("efficiency")) c.efficiency = number(j["efficiency"], "efficiency");
  if (j.contains("t_end")) c.t_end = number(j["t_end"], "t_end");
  if (j.contains("steps")) c.steps = static_cast<int>(integer(j["steps"], "steps"));
  if (j.contains("shot_interval")) c.shot_interval = number(j["shot_interval"], "shot_interval");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("config: 'seed' must be a nonnegative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("out")) c.out = text(j["out"], "out");
  return c;
}

void validate(const ExperimentConfig& c) {
  const auto& n = names();
  if (std::find(n.begin(), n.end(), c.experiment) == n.end()) {
    throw ConfigError("config: unknown experiment '" + c.experiment + "'");
  }
  auto finite = [](double v) { return std::isfinite(v); };
  if (c.alpha && (!finite(c.alpha->real()) || !finite(c.alpha->imag()))) throw ConfigError("config: alpha not finite");
  static const std::set<std::string> states = {"vacuum", "fock", "coherent", "cat", "mixture"};
  if (c.state && !states.count(*c.state)) throw ConfigError("config: unknown state '" + *c.state + "'");
  if (c.fock_n && *c.fock_n < 0) throw ConfigError("config: fock_n must be >= 0");
  if (!finite(c.psi) || !finite(c.phi) || !finite(c.eta) || !finite(c.ramsey_phase)) {
    throw ConfigError("config: phases must be finite");
  }
  if (!(c.kappa > 0.0) || !finite(c.kappa)) throw ConfigError("config: kappa must be positive");
  if (!(c.n_thermal >= 0.0) || !finite(c.n_thermal)) throw ConfigError("config: n_thermal must be >= 0");
  if (c.dim < 0 || c.dim == 1) throw ConfigError("config: dim must be 0 (automatic) or >= 2");
  if (c.grid && (!(c.grid->half_width > 0.0) || c.grid->points < 2)) {
    throw ConfigError("config: grid needs half_width > 0 and points >= 2");
  }
  if (c.angles && *c.angles < 1) throw ConfigError("config: angles must be >= 1");
  if (c.samples && *c.samples < 1) throw ConfigError("config: samples must be >= 1");
  if (!(c.bin_width > 0.0)) throw ConfigError("config: bin_width must be positive");
  if (c.shots && *c.shots < 1) throw ConfigError("config: shots must be >= 1");
  if (!(c.efficiency > 0.0 && c.efficiency <= 1.0)) throw ConfigError("config: efficiency must lie in (0, 1]");
  if (c.t_end && !(*c.t_end >= 0.0)) throw ConfigError("config: t_end must be >= 0");
  if (c.steps && *c.steps < 1) throw ConfigError("config: steps must be >= 1");
  if (c.shot_interval && !(*c.shot_interval > 0.0)) throw ConfigError("config: shot_interval must be positive");
}

std::string canonical_json(const ExperimentConfig& in) {
  validate(in);
  const ExperimentConfig c = resolve(in);
  ojson j;
  j["experiment"] = c.experiment;
  j["alpha"] = complex_json(*c.alpha);
  j["state"] = *c.state;
  j["fock_n"] = *c.fock_n;
  j["psi"] = c.psi;
  j["phi"] = c.phi;
  j["eta"] = c.eta;
  j["ramsey_phase"] = c.ramsey_phase;
  j["kappa"] = c.kappa;
  j["n_thermal"] = c.n_thermal;
  j["dim"] = c.dim;
  j["grid"] = {{"half_width", c.grid->half_width}, {"points", c.grid->points}};
  j["angles"] = *c.angles;
  j["samples"] = *c.samples;
  j["bin_width"] = c.bin_width;
  j["shots"] = *c.shots;
  j["efficiency"] = c.efficiency;
  j["t_end"] = *c.t_end;
  j["steps"] = *c.steps;
  j["shot_interval"] = c.shot_interval ? ojson(*c.shot_interval) : ojson(nullptr);
  j["seed"] = c.seed;
  return j.dump();
}

std::string config_hash(const ExperimentConfig& config) { return io::fnv1a64_hex(canonical_json(config)); }

RunResult run(const ExperimentConfig& in) {
  validate(in);
  const ExperimentConfig c = resolve(in);
  RunResult r;
  Output out(c, r);
  const std::string& e = c.experiment;
  if (e == "prepare-cat") run_prepare_cat(c, out, r);
  else if (e == "decoherence-scan") run_decoherence_scan(c, out, r);
  else if (e == "wigner-map") run_wigner_map(c, out, r);
  else if (e == "tomography") run_tomography(c, out, r);
  else if (e == "direct-map") run_direct_map(c, out, r);
  else if (e == "direct-monitor") run_direct_monitor(c, out, r);
  else if (e == "pauli-demo") run_pauli_demo(c, out, r);
  else if (e == "selfcheck") run_selfcheck(out, r);

  const std::string hash = config_hash(c);
  ojson manifest;
  manifest["experiment"] = e;
  manifest["versions"] = {{"cqed", CQED_VERSION},
                          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                                        "." + std::to_string(EIGEN_MINOR_VERSION)}};
  manifest["config"] = ojson::parse(canonical_json(c));
  manifest["config_hash"] = hash;
  manifest["exit_code"] = r.exit_code;
  manifest["artifacts"] = ojson::array();
  for (const auto& a : r.artifacts) {
    manifest["artifacts"].push_back(
        {{"file", a.file}, {"fnv1a64", a.checksum}, {"bytes", a.bytes}, {"config_hash", hash}});
  }
  io::write_atomic(c.out / "manifest.json", manifest.dump(2) + "\n");
  return r;
}

}  // namespace cqed::experiments
