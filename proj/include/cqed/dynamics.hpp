#pragma once

// Cavity damping of the field density operator and the timescales derived
// from it.

#include <span>
#include <vector>

#include "cqed/fock.hpp"

namespace cqed {

class DampingModel {
 public:
  // kappa > 0 is the energy decay rate; n_thermal >= 0 the mean thermal
  // occupation of the reservoir. Throws DomainError otherwise.
  explicit DampingModel(double kappa, double n_thermal = 0.0);

  double kappa() const { return kappa_; }
  double n_thermal() const { return n_thermal_; }
  double dissipation_time() const { return 1.0 / kappa_; }

 private:
  double kappa_;
  double n_thermal_;
};

struct TimeGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  int steps = 1;

  // Throws DomainError unless t_end > t_start >= 0 and steps >= 1.
  void validate() const;
  // steps + 1 equally spaced points including both ends.
  std::vector<double> points() const;
};

struct IntegratorOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_steps = 2'000'000;
};

// Right-hand side of the amplitude-damping master equation
//   d rho/dt = kappa (n_th + 1) D[a] rho + kappa n_th D[a^dagger] rho,
// with D[L] rho = L rho L^dagger - {L^dagger L, rho}/2 on the truncated space.
Matrix damping_generator(const Matrix& rho, const DampingModel& model);

// rho(t) by adaptive Dormand-Prince 5(4) on the density matrix. Throws
// IntegrationError if the step size collapses or the step budget runs out.
DensityOperator evolve(const DensityOperator& rho, const DampingModel& model, double t,
                       const IntegratorOptions& options = {});

// rho at each of the sorted, nonnegative `times`, integrating incrementally.
std::vector<DensityOperator> evolve_trajectory(const DensityOperator& rho, const DampingModel& model,
                                               std::span<const double> times,
                                               const IntegratorOptions& options = {});

// |<alpha|rho|-alpha>| divided by its value for the fresh even cat,
// (1 + exp(-2|alpha|^2))/2.
double cat_coherence(const DensityOperator& rho, Complex alpha);

// Dissipation time divided by twice the mean photon number. Throws
// DomainError for mean_n <= 0.
double decoherence_time(const DampingModel& model, double mean_n);

// (d / lambda_dB)^2 with lambda_dB = h / sqrt(2 pi m k_B T), SI inputs.
double separation_measure(double distance_m, double mass_kg, double temperature_k);

// Least-squares slope of ln(values) against times, constrained through
// ln(values[0]) at times[0]; returns -1/slope. Values must be positive.
double fit_exponential_time_constant(std::span<const double> times, std::span<const double> values);

struct CoherenceFit {
  double fitted_time = 0.0;     // fitted e-folding time of the interference term
  double predicted_time = 0.0;  // decoherence_time(model, |alpha|^2)
  std::vector<double> times;
  std::vector<double> excess;   // cat_coherence(cat) - cat_coherence(mixture)
};

// Evolves cat(alpha, 0) and its statistical mixture of |alpha>, |-alpha> side by
// side and fits the decay of the coherence excess over the window
// [0, window_fraction * t_dec].
CoherenceFit fit_cat_decoherence(Complex alpha, const DampingModel& model,
                                 double window_fraction = 0.25, int samples = 16);

}  // namespace cqed
