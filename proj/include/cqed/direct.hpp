#pragma once

// Direct Wigner measurement: inject a coherent amplitude, send one atom
// through R1, the conditional phase and R2, and read 2 (P_g - P_e).
// With injection D(alpha) the readout equals W(-alpha).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqed/dynamics.hpp"
#include "cqed/protocol.hpp"
#include "cqed/wigner.hpp"

namespace cqed {

struct MeasurementRecord {
  Complex alpha{0.0, 0.0};
  double p_e = 0.0;
  double p_g = 0.0;
  std::int64_t n_shots = 0;     // 0 for exact records
  std::int64_t n_detected = 0;
  double estimate = 0.0;        // 2 (P_g - P_e), exact or from detected shots
  double std_error = 0.0;

  // Throws InvariantError if p_e + p_g is off by more than 1e-10 or
  // n_detected > n_shots.
  void validate() const;
};

// Truncation used for the injected field: ceil(R^2 + 8 R + 20) with
// R = sqrt(n_top) + |alpha|, about eight Poisson widths above the displaced
// support; never below the input dimension or the truncation rule for |alpha|.
// n_top is the highest populated level.
int injection_dim(const DensityOperator& rho, Complex alpha);

// Field after D(alpha), as weighted pure components on the enlarged space.
// Throws TruncationError if the top 4 levels of any component hold more than 1e-14.
std::vector<std::pair<FieldState, double>> inject(const DensityOperator& rho, Complex alpha,
                                                  const ProtocolConfig& config = {});

// Requires phi = pi. config.dim, when set, overrides injection_dim.
MeasurementRecord direct_point_exact(const DensityOperator& rho, Complex alpha, const ProtocolConfig& config = {});

// Each shot is detected with probability `efficiency`; detected shots yield e
// or g with the exact Born probabilities. Throws NoDetectionError when no
// shot is detected.
MeasurementRecord direct_point_sampled(const DensityOperator& rho, Complex alpha, std::int64_t n_shots,
                                       double efficiency, std::uint64_t seed, const ProtocolConfig& config = {});

// Exact readout on every grid point; provenance "measured-direct".
WignerMap scan_map(const DensityOperator& rho, const PhaseSpaceGrid& grid, const ProtocolConfig& config = {});

struct MonitorSample {
  double t = 0.0;
  MeasurementRecord exact;
  std::optional<MeasurementRecord> sampled;
};

// Damps rho to each time and reads the origin. When n_shots > 0 every time
// also gets a sampled record with seed derived from `seed` and the index.
std::vector<MonitorSample> monitor_origin(const DensityOperator& rho, const DampingModel& model,
                                          std::span<const double> times, const ProtocolConfig& config = {},
                                          std::int64_t n_shots = 0, double efficiency = 1.0,
                                          std::uint64_t seed = 0);

struct CollapseFit {
  double fitted_time = 0.0;     // exponential time constant of the fringe part of W(0)
  double predicted_time = 0.0;  // decoherence_time(model, |alpha|^2)
  double onset_time = 0.0;      // first time the fringe part drops below 1/e of its start
  std::vector<double> times;
  std::vector<double> fringe;   // W0(cat) - (2 / N^2) W0(mixture)
};

// Origin monitoring of the even cat against the matching mixture, fitted
// over [0, window_fraction * predicted_time] and scanned for the onset over
// [0, 4 predicted_time].
CollapseFit fit_origin_collapse(Complex alpha, const DampingModel& model, const ProtocolConfig& config = {},
                                double window_fraction = 0.25, int samples = 16);

enum class Variant { Standard, Resonant2Pi, Brune };

const char* to_string(Variant v);

// Resonant2Pi: R1, 2 pi Rabi rotation on |e,1>, R2. Requires alpha = 0 and a
// field within {0, 1} photons (SubspaceError otherwise).
// Brune: opposite shifts with phi = pi/2 and eta = pi/2 in R2 (the config's
// phi and eta are replaced).
MeasurementRecord variant_check(const DensityOperator& rho, Variant variant, Complex alpha,
                                const ProtocolConfig& config = {});

// Warning text when atoms are spaced further apart than the decoherence time
// of the field being monitored; empty otherwise.
std::optional<std::string> pacing_warning(double shot_interval, double decoherence_time);

}  // namespace cqed
