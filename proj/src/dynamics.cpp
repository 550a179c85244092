#include "cqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cqed {

DampingModel::DampingModel(double kappa, double n_thermal) : kappa_(kappa), n_thermal_(n_thermal) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw DomainError("DampingModel: kappa must be positive and finite");
  }
  if (!(n_thermal >= 0.0) || !std::isfinite(n_thermal)) {
    throw DomainError("DampingModel: n_thermal must be nonnegative and finite");
  }
}

void TimeGrid::validate() const {
  if (!(t_start >= 0.0) || !(t_end > t_start) || steps < 1) {
    throw DomainError("TimeGrid: need t_end > t_start >= 0 and steps >= 1");
  }
}

std::vector<double> TimeGrid::points() const {
  validate();
  std::vector<double> t(steps + 1);
  for (int i = 0; i <= steps; ++i) t[i] = t_start + (t_end - t_start) * i / steps;
  return t;
}

Matrix damping_generator(const Matrix& rho, const DampingModel& model) {
  const int d = static_cast<int>(rho.rows());
  const double down = model.kappa() * (model.n_thermal() + 1.0);
  const double up = model.kappa() * model.n_thermal();
  Matrix out(d, d);
  for (int n = 0; n < d; ++n) {
    for (int m = 0; m < d; ++m) {
      Complex v = -0.5 * down * (m + n) * rho(m, n);
      if (m + 1 < d && n + 1 < d) {
        v += down * std::sqrt(static_cast<double>((m + 1) * (n + 1))) * rho(m + 1, n + 1);
      }
      if (up != 0.0) {
        // (a a^dagger)_kk on the truncated space is k + 1 except at the top level.
        const double cm = (m + 1 < d) ? m + 1.0 : 0.0;
        const double cn = (n + 1 < d) ? n + 1.0 : 0.0;
        v -= 0.5 * up * (cm + cn) * rho(m, n);
        if (m > 0 && n > 0) v += up * std::sqrt(static_cast<double>(m * n)) * rho(m - 1, n - 1);
      }
      out(m, n) = v;
    }
  }
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247, kA64 = 49.0 / 176,
                 kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920, kE5 = -17253.0 / 339200,
                 kE6 = 22.0 / 525, kE7 = -1.0 / 40;

Matrix integrate(const Matrix& rho0, const DampingModel& model, double t, const IntegratorOptions& opt) {
  if (t == 0.0) return rho0;
  const int d = static_cast<int>(rho0.rows());
  Matrix y = rho0;
  // Largest generator rate sets the initial step scale.
  const double rate = model.kappa() * (2.0 * model.n_thermal() + 1.0) * d;
  double h = std::min(t, 0.05 / rate);
  double elapsed = 0.0;
  Matrix k1 = damping_generator(y, model);
  int steps = 0;
  const double finish_tol = 1e-14 * std::max(1.0, t);
  while (t - elapsed > finish_tol) {
    if (++steps > opt.max_steps) throw IntegrationError("evolve: step budget exhausted");
    if (elapsed + h > t) h = t - elapsed;
    const Matrix k2 = damping_generator(y + h * kA21 * k1, model);
    const Matrix k3 = damping_generator(y + h * (kA31 * k1 + kA32 * k2), model);
    const Matrix k4 = damping_generator(y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3), model);
    const Matrix k5 = damping_generator(y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4), model);
    const Matrix k6 =
        damping_generator(y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5), model);
    Matrix y_new = y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
    const Matrix k7 = damping_generator(y_new, model);
    const Matrix err = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);

    double err_norm = 0.0;
    for (int j = 0; j < d; ++j) {
      for (int i = 0; i < d; ++i) {
        const double scale = opt.abs_tol + opt.rel_tol * std::max(std::abs(y(i, j)), std::abs(y_new(i, j)));
        err_norm = std::max(err_norm, std::abs(err(i, j)) / scale);
      }
    }
    if (!std::isfinite(err_norm)) throw IntegrationError("evolve: non-finite error estimate");

    const double factor = err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
    if (err_norm <= 1.0) {
      elapsed += h;
      y = std::move(y_new);
      k1 = k7;  // first-same-as-last
      h *= factor;
    } else {
      h *= factor;
      if (h < finish_tol) throw IntegrationError("evolve: step size underflow");
    }
  }
  return y;
}

DensityOperator finish(const Matrix& m) { return DensityOperator(hermitian_part(m)); }

}  // namespace

DensityOperator evolve(const DensityOperator& rho, const DampingModel& model, double t,
                       const IntegratorOptions& options) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("evolve: t must be finite and >= 0");
  return finish(integrate(rho.matrix(), model, t, options));
}

std::vector<DensityOperator> evolve_trajectory(const DensityOperator& rho, const DampingModel& model,
                                               std::span<const double> times,
                                               const IntegratorOptions& options) {
  std::vector<DensityOperator> out;
  out.reserve(times.size());
  Matrix current = rho.matrix();
  double now = 0.0;
  for (const double t : times) {
    if (!(t >= now)) throw DomainError("evolve_trajectory: times must be sorted and >= 0");
    current = hermitian_part(integrate(current, model, t - now, options));
    now = t;
    out.push_back(finish(current));
  }
  return out;
}

namespace {

Complex coherence_element(const Matrix& rho, Complex alpha) {
  const HilbertSpec spec(static_cast<int>(rho.rows()));
  const Vector plus = coherent_state(spec, alpha).amplitudes();
  const Vector minus = coherent_state(spec, -alpha).amplitudes();
  return plus.dot(rho * minus);
}

double fresh_cat_coherence(Complex alpha) { return 0.5 * (1.0 + std::exp(-2.0 * std::norm(alpha))); }

}  // namespace

double cat_coherence(const DensityOperator& rho, Complex alpha) {
  return std::abs(coherence_element(rho.matrix(), alpha)) / fresh_cat_coherence(alpha);
}

double decoherence_time(const DampingModel& model, double mean_n) {
  if (!(mean_n > 0.0) || !std::isfinite(mean_n)) {
    throw DomainError("decoherence_time: mean photon number must be positive");
  }
  return model.dissipation_time() / (2.0 * mean_n);
}

double separation_measure(double distance_m, double mass_kg, double temperature_k) {
  if (!(distance_m > 0.0) || !(mass_kg > 0.0) || !(temperature_k > 0.0)) {
    throw DomainError("separation_measure: all arguments must be positive");
  }
  constexpr double kPlanck = 6.62607015e-34;     // J s
  constexpr double kBoltzmann = 1.380649e-23;    // J / K
  const double lambda = kPlanck / std::sqrt(2.0 * kPi * mass_kg * kBoltzmann * temperature_k);
  const double ratio = distance_m / lambda;
  return ratio * ratio;
}

double fit_exponential_time_constant(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size() || times.size() < 2) {
    throw DomainError("fit_exponential_time_constant: need >= 2 matched samples");
  }
  const double t0 = times[0];
  const double l0 = std::log(values[0]);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(values[i] > 0.0)) throw DomainError("fit_exponential_time_constant: values must be positive");
    const double x = times[i] - t0;
    sxx += x * x;
    sxy += x * (std::log(values[i]) - l0);
  }
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) throw DomainError("fit_exponential_time_constant: series is not decaying");
  return -1.0 / slope;
}

CoherenceFit fit_cat_decoherence(Complex alpha, const DampingModel& model, double window_fraction,
                                 int samples) {
  const double mean_n = std::norm(alpha);
  CoherenceFit fit;
  fit.predicted_time = decoherence_time(model, mean_n);
  const HilbertSpec spec = HilbertSpec::for_amplitude(std::abs(alpha));

  const DensityOperator cat = pure_to_density(cat_state(spec, alpha, 0.0));
  const std::pair<FieldState, double> halves[] = {{coherent_state(spec, alpha), 0.5},
                                                  {coherent_state(spec, -alpha), 0.5}};
  const DensityOperator mixture = mix(halves);
  // The cat's diagonal part is the mixture scaled by 2/N^2.
  const double n1 = cat_normalization(alpha, 0.0);
  const double diagonal_weight = 2.0 / (n1 * n1);

  fit.times.resize(samples + 1);
  for (int i = 0; i <= samples; ++i) fit.times[i] = window_fraction * fit.predicted_time * i / samples;
  const auto cats = evolve_trajectory(cat, model, fit.times);
  const auto mixes = evolve_trajectory(mixture, model, fit.times);
  for (int i = 0; i <= samples; ++i) {
    const Matrix interference = cats[i].matrix() - diagonal_weight * mixes[i].matrix();
    fit.excess.push_back(std::abs(coherence_element(interference, alpha)));
  }
  fit.fitted_time = fit_exponential_time_constant(fit.times, fit.excess);
  return fit;
}

}  // namespace cqed
