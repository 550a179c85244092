#pragma once

// Homodyne-style tomography: sampling rotated-quadrature distributions and
// filtered back-projection of the resulting sinogram.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cqed/wigner.hpp"

namespace cqed {

struct QuadratureHistogram {
  double theta = 0.0;
  std::vector<double> edges;  // strictly increasing, size = counts.size() + 1
  std::vector<std::int64_t> counts;
  std::int64_t total = 0;

  // Throws DomainError if counts do not sum to total or edges are not increasing.
  void validate() const;
  std::vector<double> centers() const;
  // counts / (total * bin width), evaluated at bin centers.
  std::vector<double> densities() const;
};

struct SinogramSet {
  std::vector<double> q;                     // common, uniformly spaced grid
  std::vector<double> thetas;                // distinct, in [0, pi)
  std::vector<std::vector<double>> density;  // density[k][i] at (thetas[k], q[i])

  // Throws CoverageError when angles or grids are malformed.
  void validate() const;
};

struct Binning {
  double bin_width = 0.05;
  // Half-width of the tabulated density; 0 picks sqrt(2 n_top + 1) + 8
  // with n_top the highest populated Fock level.
  double half_width = 0.0;
  int tabulation_points = 8001;
};

// splitmix64 finalizer of master + index: per-angle seeds that are
// independent of how many angles are requested.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

// count angles k pi / count, k = 0 .. count-1.
std::vector<double> uniform_angles(int count);

// Quadrature half-width used when Binning::half_width is 0.
double default_half_width(const DensityOperator& rho);

// I.i.d. draws of q_theta by inverse CDF on a dense tabulation of the exact
// density. The bins cover the whole tabulation, so every draw is counted.
// Throws SamplingError if the tabulated density misses unit mass by > 1e-8.
QuadratureHistogram sample_homodyne(const DensityOperator& rho, double theta, std::int64_t n_samples,
                                    std::uint64_t seed, const Binning& binning = {});

SinogramSet sinogram_from_histograms(std::span<const QuadratureHistogram> histograms);
// Exact marginals at the given angles on the given grid.
SinogramSet exact_sinogram(const DensityOperator& rho, std::span<const double> thetas,
                           const std::vector<double>& q);
// q grid of spacing `step` covering [-half_width, half_width].
std::vector<double> symmetric_q_grid(double half_width, double step);

struct FbpOptions {
  // Hann apodization cutoff as a fraction of the sinogram Nyquist frequency.
  double cutoff = 1.0;
};

// Ram-Lak ramp filter with Hann apodization, then back-projection with linear
// interpolation in q. The result is rescaled to the alpha-normalized convention
// and tagged "reconstructed". Throws CoverageError for fewer than 8 angles or
// a sinogram that does not reach the grid corners.
WignerMap inverse_radon(const SinogramSet& sinogram, const PhaseSpaceGrid& grid, const FbpOptions& options = {});

struct FringeRegion {
  double q1_lo, q1_hi, q2_lo, q2_hi;
};

struct ReconstructionReport {
  WignerMap map;
  WignerMap truth;
  SinogramSet sinogram;  // the data that was back-projected
  int angles = 0;
  std::int64_t n_per_angle = 0;
  double rmse = 0.0;
  double max_error = 0.0;
  std::vector<double> marginal_residuals;  // per angle, sup |histogram - exact|
  double normalization = 0.0;
  double max_abs = 0.0;
  std::optional<double> fringe_contrast;
  std::optional<double> true_fringe_contrast;
};

ReconstructionReport reconstruct_from_samples(const DensityOperator& rho_true, int angle_count,
                                              std::int64_t n_per_angle, std::uint64_t seed,
                                              const PhaseSpaceGrid& grid, const Binning& binning = {},
                                              std::optional<FringeRegion> fringe = std::nullopt);

// Noise-free counterpart: exact marginals sampled on the same q grid.
ReconstructionReport reconstruct_exact(const DensityOperator& rho_true, int angle_count, const PhaseSpaceGrid& grid,
                                       double q_step = 0.05, std::optional<FringeRegion> fringe = std::nullopt);

double rmse(const WignerMap& a, const WignerMap& b);

struct PauliDemoReport {
  double two_angle_sinogram_deviation = 0.0;  // theta in {0, pi/2}
  double two_angle_histogram_deviation = 0.0; // same seeds, sampled
  double full_reconstruction_deviation = 0.0; // sup-norm, 36 angles
  double rotated_marginal_deviation = 0.0;    // theta = pi/4
  bool marginals_only_incomplete = false;
};

PauliDemoReport pauli_incompleteness_demo(const PhaseSpaceGrid& grid, std::int64_t n_samples = 100000,
                                          std::uint64_t seed = 1);

}  // namespace cqed
