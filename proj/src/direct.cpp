#include "cqed/direct.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "cqed/tomo.hpp"

namespace cqed {

namespace {

constexpr double kTailLimit = 1e-14;
constexpr int kTailLevels = 4;
constexpr double kComponentFloor = 1e-15;

int top_level(const DensityOperator& rho) {
  int top = 0;
  for (int k = 0; k < rho.dim(); ++k) {
    if (rho.matrix()(k, k).real() > 1e-16) top = k;
  }
  return top;
}

void require_pi_shift(const ProtocolConfig& config) {
  config.validate();
  if (std::abs(config.phi - kPi) > 1e-12) {
    throw DomainError("direct measurement: the standard scheme requires a per-photon phase of pi");
  }
}

using Shift = JointState (*)(const JointState&, const ProtocolConfig&);

JointState no_shift_resonant(const JointState& s, const ProtocolConfig&) { return resonant_2pi(s); }

// R1, conditional operation, R2 and detection on each pure component.
MeasurementRecord run_components(std::span<const std::pair<FieldState, double>> components, Complex alpha,
                                 Shift shift, const ProtocolConfig& config) {
  MeasurementRecord rec;
  rec.alpha = alpha;
  for (const auto& [field, weight] : components) {
    JointState s = JointState::product(AtomState::excited(), field);
    s = ramsey_pulse(s, RamseyZone::R1, config);
    s = shift(s, config);
    s = ramsey_pulse(s, RamseyZone::R2, config);
    const Detection det = detect_atom(s);
    rec.p_e += weight * det.p_e;
    rec.p_g += weight * det.p_g;
  }
  rec.estimate = 2.0 * (rec.p_g - rec.p_e);
  rec.validate();
  return rec;
}

}  // namespace

void MeasurementRecord::validate() const {
  if (std::abs(p_e + p_g - 1.0) > 1e-10) throw InvariantError("MeasurementRecord: p_e + p_g differs from 1");
  if (n_detected < 0 || n_detected > n_shots) throw InvariantError("MeasurementRecord: n_detected > n_shots");
}

int injection_dim(const DensityOperator& rho, Complex alpha) {
  const double r = std::sqrt(static_cast<double>(top_level(rho))) + std::abs(alpha);
  const int poisson = static_cast<int>(std::ceil(r * r + 8.0 * r + 20.0));
  const int guard = HilbertSpec::for_amplitude(std::abs(alpha)).dim();
  return std::max({rho.dim(), poisson, guard});
}

std::vector<std::pair<FieldState, double>> inject(const DensityOperator& rho, Complex alpha,
                                                  const ProtocolConfig& config) {
  config.validate();
  const int dim = config.dim > 0 ? config.dim : injection_dim(rho, alpha);
  if (dim < rho.dim()) throw DomainError("inject: dim override below the state dimension");
  const HilbertSpec spec(dim);

  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix());
  std::vector<int> kept;
  for (int k = 0; k < rho.dim(); ++k) {
    if (es.eigenvalues()[k] > kComponentFloor) kept.push_back(k);
  }
  Matrix vectors = Matrix::Zero(dim, static_cast<int>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    vectors.col(static_cast<int>(c)).head(rho.dim()) = es.eigenvectors().col(kept[c]);
  }
  const Matrix displaced = apply_displacement(spec, alpha, vectors);

  double total = 0.0;
  for (const int k : kept) total += es.eigenvalues()[k];
  std::vector<std::pair<FieldState, double>> out;
  for (std::size_t c = 0; c < kept.size(); ++c) {
    Vector v = displaced.col(static_cast<int>(c));
    const double tail = v.tail(kTailLevels).squaredNorm();
    if (tail > kTailLimit) {
      throw TruncationError("inject: displaced field reaches the top of a " + std::to_string(dim) +
                            "-level space (tail " + std::to_string(tail) + ")");
    }
    const double norm = v.norm();
    v /= norm;
    out.emplace_back(FieldState(std::move(v), std::abs(1.0 - norm)), es.eigenvalues()[kept[c]] / total);
  }
  return out;
}

MeasurementRecord direct_point_exact(const DensityOperator& rho, Complex alpha, const ProtocolConfig& config) {
  require_pi_shift(config);
  const auto components = inject(rho, alpha, config);
  return run_components(components, alpha, &dispersive_shift, config);
}

MeasurementRecord direct_point_sampled(const DensityOperator& rho, Complex alpha, std::int64_t n_shots,
                                       double efficiency, std::uint64_t seed, const ProtocolConfig& config) {
  if (n_shots < 1) throw DomainError("direct_point_sampled: n_shots must be >= 1");
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) throw DomainError("direct_point_sampled: efficiency in [0, 1]");
  MeasurementRecord rec = direct_point_exact(rho, alpha, config);
  rec.n_shots = n_shots;

  std::mt19937_64 rng(seed);
  std::bernoulli_distribution detected(efficiency);
  std::bernoulli_distribution ground(std::clamp(rec.p_g, 0.0, 1.0));
  std::int64_t n_g = 0;
  for (std::int64_t s = 0; s < n_shots; ++s) {
    if (!detected(rng)) continue;
    ++rec.n_detected;
    if (ground(rng)) ++n_g;
  }
  if (rec.n_detected == 0) throw NoDetectionError("direct_point_sampled: no atom was detected");
  const double p_hat = static_cast<double>(n_g) / static_cast<double>(rec.n_detected);
  rec.estimate = 4.0 * p_hat - 2.0;
  rec.std_error = 4.0 * std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(rec.n_detected));
  rec.validate();
  return rec;
}

WignerMap scan_map(const DensityOperator& rho, const PhaseSpaceGrid& grid, const ProtocolConfig& config) {
  grid.validate();
  WignerMap map;
  map.grid = grid;
  map.provenance = "measured-direct";
  map.values.resize(grid.n1, grid.n2);
  for (int i = 0; i < grid.n1; ++i) {
    for (int j = 0; j < grid.n2; ++j) map.values(i, j) = direct_point_exact(rho, grid.alpha(i, j), config).estimate;
  }
  return map;
}

std::vector<MonitorSample> monitor_origin(const DensityOperator& rho, const DampingModel& model,
                                          std::span<const double> times, const ProtocolConfig& config,
                                          std::int64_t n_shots, double efficiency, std::uint64_t seed) {
  const auto states = evolve_trajectory(rho, model, times);
  std::vector<MonitorSample> out;
  out.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    MonitorSample sample;
    sample.t = times[k];
    sample.exact = direct_point_exact(states[k], 0.0, config);
    if (n_shots > 0) {
      sample.sampled = direct_point_sampled(states[k], 0.0, n_shots, efficiency, derive_seed(seed, k), config);
    }
    out.push_back(std::move(sample));
  }
  return out;
}

CollapseFit fit_origin_collapse(Complex alpha, const DampingModel& model, const ProtocolConfig& config,
                                double window_fraction, int samples) {
  if (samples < 3) throw DomainError("fit_origin_collapse: need at least 3 samples");
  if (!(window_fraction > 0.0)) throw DomainError("fit_origin_collapse: window_fraction must be positive");
  const HilbertSpec spec = config.dim > 0 ? HilbertSpec(config.dim) : HilbertSpec::for_amplitude(std::abs(alpha));
  const DensityOperator cat = pure_to_density(cat_state(spec, alpha, 0.0));
  const std::pair<FieldState, double> halves[] = {{coherent_state(spec, alpha), 0.5},
                                                  {coherent_state(spec, -alpha), 0.5}};
  const DensityOperator mixture = mix(halves);
  const double norm2 = std::pow(cat_normalization(alpha, 0.0), 2);

  CollapseFit fit;
  fit.predicted_time = decoherence_time(model, std::norm(alpha));
  auto fringe_at = [&](std::span<const double> times) {
    const auto a = monitor_origin(cat, model, times, config);
    const auto b = monitor_origin(mixture, model, times, config);
    std::vector<double> f(times.size());
    for (std::size_t k = 0; k < times.size(); ++k) f[k] = a[k].exact.estimate - (2.0 / norm2) * b[k].exact.estimate;
    return f;
  };

  for (int k = 0; k < samples; ++k) fit.times.push_back(window_fraction * fit.predicted_time * k / (samples - 1));
  fit.fringe = fringe_at(fit.times);
  fit.fitted_time = fit_exponential_time_constant(fit.times, fit.fringe);

  std::vector<double> scan;
  const int scan_points = 161;
  for (int k = 0; k < scan_points; ++k) scan.push_back(4.0 * fit.predicted_time * k / (scan_points - 1));
  const auto f = fringe_at(scan);
  fit.onset_time = scan.back();
  for (std::size_t k = 1; k < scan.size(); ++k) {
    const double level = f[0] / std::exp(1.0);
    if (f[k] <= level) {
      fit.onset_time = scan[k - 1] + (scan[k] - scan[k - 1]) * (f[k - 1] - level) / (f[k - 1] - f[k]);
      break;
    }
  }
  return fit;
}

const char* to_string(Variant v) {
  switch (v) {
    case Variant::Standard: return "standard";
    case Variant::Resonant2Pi: return "resonant-2pi";
    case Variant::Brune: return "brune";
  }
  return "unknown";
}

MeasurementRecord variant_check(const DensityOperator& rho, Variant variant, Complex alpha,
                                const ProtocolConfig& config) {
  config.validate();
  switch (variant) {
    case Variant::Standard:
      return direct_point_exact(rho, alpha, config);
    case Variant::Resonant2Pi: {
      if (std::abs(alpha) != 0.0) throw DomainError("variant_check: the resonant variant reads the origin only");
      ProtocolConfig c = config;
      c.eta = 0.0;
      const auto components = inject(rho, alpha, c);
      return run_components(components, alpha, &no_shift_resonant, c);
    }
    case Variant::Brune: {
      ProtocolConfig c = config;
      c.phi = 0.5 * kPi;
      c.eta = 0.5 * kPi;
      const auto components = inject(rho, alpha, c);
      return run_components(components, alpha, &brune_variant_shift, c);
    }
  }
  throw DomainError("variant_check: unknown variant");
}

std::optional<std::string> pacing_warning(double shot_interval, double decoherence_time) {
  if (!(shot_interval > 0.0) || !(decoherence_time > 0.0)) {
    throw DomainError("pacing_warning: intervals must be positive");
  }
  if (shot_interval <= decoherence_time) return std::nullopt;
  return "atoms are spaced " + std::to_string(shot_interval) + " apart, longer than the decoherence time " +
         std::to_string(decoherence_time) + "; fewer than one atom probes the field before the fringes collapse";
}

}  // namespace cqed
