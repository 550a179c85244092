#include "cqed/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include <unsupported/Eigen/FFT>

namespace cqed {

void QuadratureHistogram::validate() const {
  if (edges.size() != counts.size() + 1 || counts.empty()) {
    throw DomainError("QuadratureHistogram: edges must have one more entry than counts");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) throw DomainError("QuadratureHistogram: edges must increase");
  }
  std::int64_t sum = 0;
  for (const auto c : counts) {
    if (c < 0) throw DomainError("QuadratureHistogram: negative count");
    sum += c;
  }
  if (sum != total) throw DomainError("QuadratureHistogram: counts do not sum to total");
}

std::vector<double> QuadratureHistogram::centers() const {
  std::vector<double> c(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) c[i] = 0.5 * (edges[i] + edges[i + 1]);
  return c;
}

std::vector<double> QuadratureHistogram::densities() const {
  std::vector<double> d(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    d[i] = static_cast<double>(counts[i]) / (static_cast<double>(total) * (edges[i + 1] - edges[i]));
  }
  return d;
}

void SinogramSet::validate() const {
  if (q.size() < 2) throw CoverageError("SinogramSet: q grid needs at least 2 points");
  const double step = q[1] - q[0];
  if (!(step > 0.0)) throw CoverageError("SinogramSet: q grid must increase");
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (std::abs((q[i] - q[i - 1]) - step) > 1e-9 * std::max(1.0, std::abs(step))) {
      throw CoverageError("SinogramSet: q grid must be uniform");
    }
  }
  if (density.size() != thetas.size()) throw CoverageError("SinogramSet: one density row per angle");
  for (const auto& row : density) {
    if (row.size() != q.size()) throw CoverageError("SinogramSet: density rows must match the q grid");
  }
  std::vector<double> sorted = thetas;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] < 0.0 || sorted[k] >= kPi) throw CoverageError("SinogramSet: angles must lie in [0, pi)");
    if (k > 0 && sorted[k] - sorted[k - 1] < 1e-12) throw CoverageError("SinogramSet: angles must be distinct");
  }
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<double> uniform_angles(int count) {
  if (count < 1) throw DomainError("uniform_angles: count must be >= 1");
  std::vector<double> t(count);
  for (int k = 0; k < count; ++k) t[k] = kPi * k / count;
  return t;
}

double default_half_width(const DensityOperator& rho) {
  int top = 0;
  for (int k = 0; k < rho.dim(); ++k) {
    if (rho.matrix()(k, k).real() > 1e-16) top = k;
  }
  return std::sqrt(2.0 * top + 1.0) + 8.0;
}

std::vector<double> symmetric_q_grid(double half_width, double step) {
  if (!(half_width > 0.0) || !(step > 0.0)) throw DomainError("symmetric_q_grid: positive sizes required");
  const int n = static_cast<int>(std::ceil(half_width / step - 1e-9));
  std::vector<double> q(2 * n + 1);
  for (int i = -n; i <= n; ++i) q[i + n] = i * step;
  return q;
}

QuadratureHistogram sample_homodyne(const DensityOperator& rho, double theta, std::int64_t n_samples,
                                    std::uint64_t seed, const Binning& binning) {
  if (n_samples < 1) throw DomainError("sample_homodyne: n_samples must be >= 1");
  if (!(theta >= 0.0 && theta < kPi)) throw DomainError("sample_homodyne: theta must lie in [0, pi)");
  if (!(binning.bin_width > 0.0) || binning.tabulation_points < 3) {
    throw DomainError("sample_homodyne: invalid binning");
  }

  // Bins of the requested width, symmetric about 0; the tabulation spans them.
  const double requested = binning.half_width > 0.0 ? binning.half_width : default_half_width(rho);
  const int half_bins = static_cast<int>(std::ceil(requested / binning.bin_width - 1e-9));
  const double half = half_bins * binning.bin_width;
  const int n_tab = binning.tabulation_points;
  const double dx = 2.0 * half / (n_tab - 1);

  std::vector<double> cdf(n_tab, 0.0);
  double prev = std::max(0.0, marginal_distribution(rho, theta, -half));
  for (int i = 1; i < n_tab; ++i) {
    const double cur = std::max(0.0, marginal_distribution(rho, theta, -half + i * dx));
    cdf[i] = cdf[i - 1] + 0.5 * dx * (prev + cur);
    prev = cur;
  }
  const double mass = cdf.back();
  if (std::abs(mass - 1.0) > 1e-8) {
    throw SamplingError("sample_homodyne: tabulated density integrates to " + std::to_string(mass));
  }
  for (auto& c : cdf) c /= mass;

  QuadratureHistogram hist;
  hist.theta = theta;
  hist.edges.resize(2 * half_bins + 1);
  for (int i = 0; i <= 2 * half_bins; ++i) hist.edges[i] = -half + i * binning.bin_width;
  hist.counts.assign(2 * half_bins, 0);
  hist.total = n_samples;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::int64_t s = 0; s < n_samples; ++s) {
    const double u = uniform(rng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const int hi = std::clamp(static_cast<int>(it - cdf.begin()), 1, n_tab - 1);
    const int lo = hi - 1;
    const double span = cdf[hi] - cdf[lo];
    const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.5;
    const double x = -half + (lo + frac) * dx;
    const int bin = std::clamp(static_cast<int>(std::floor((x + half) / binning.bin_width)), 0, 2 * half_bins - 1);
    ++hist.counts[bin];
  }
  return hist;
}

SinogramSet sinogram_from_histograms(std::span<const QuadratureHistogram> histograms) {
  if (histograms.empty()) throw CoverageError("sinogram_from_histograms: no histograms");
  SinogramSet s;
  s.q = histograms.front().centers();
  for (const auto& h : histograms) {
    h.validate();
    if (h.edges != histograms.front().edges) throw CoverageError("sinogram_from_histograms: bins differ");
    s.thetas.push_back(h.theta);
    s.density.push_back(h.densities());
  }
  s.validate();
  return s;
}

SinogramSet exact_sinogram(const DensityOperator& rho, std::span<const double> thetas, const std::vector<double>& q) {
  SinogramSet s;
  s.q = q;
  for (const double t : thetas) {
    s.thetas.push_back(t);
    s.density.push_back(marginal_distribution(rho, t, q));
  }
  s.validate();
  return s;
}

namespace {

// Spatial kernel of the band-limited ramp (Ram-Lak), apodized by a Hann window
// in frequency. Returned for lags -(n-1) .. (n-1), index = lag + n - 1.
std::vector<double> filter_kernel(int n, double step, double cutoff) {
  int m = 1;
  while (m < 4 * n) m <<= 1;
  std::vector<double> h(m, 0.0);
  for (int k = -(n - 1); k <= n - 1; ++k) {
    double v = 0.0;
    if (k == 0) {
      v = 1.0 / (4.0 * step * step);
    } else if (k % 2 != 0) {
      v = -1.0 / (kPi * kPi * k * k * step * step);
    }
    h[(k + m) % m] = v;
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, h);
  for (int j = 0; j < m; ++j) {
    // Frequency as a fraction of Nyquist.
    const double f = 2.0 * std::min(j, m - j) / static_cast<double>(m);
    const double window = f <= cutoff ? 0.5 * (1.0 + std::cos(kPi * f / cutoff)) : 0.0;
    spectrum[j] *= window;
  }
  std::vector<double> back;
  fft.inv(back, spectrum);
  std::vector<double> kernel(2 * n - 1);
  for (int k = -(n - 1); k <= n - 1; ++k) kernel[k + n - 1] = back[(k + m) % m];
  return kernel;
}

}  // namespace

WignerMap inverse_radon(const SinogramSet& sinogram, const PhaseSpaceGrid& grid, const FbpOptions& options) {
  sinogram.validate();
  grid.validate();
  if (sinogram.thetas.size() < 8) {
    throw CoverageError("inverse_radon: at least 8 angles are required, got " +
                        std::to_string(sinogram.thetas.size()));
  }
  const double q0 = sinogram.q.front();
  const double q_end = sinogram.q.back();
  const double reach = grid.max_radius();
  if (q0 > -reach || q_end < reach) {
    throw CoverageError("inverse_radon: sinogram support does not cover the target grid");
  }
  if (!(options.cutoff > 0.0 && options.cutoff <= 1.0)) throw DomainError("inverse_radon: cutoff in (0, 1]");

  const int n = static_cast<int>(sinogram.q.size());
  const double step = sinogram.q[1] - sinogram.q[0];
  const std::vector<double> kernel = filter_kernel(n, step, options.cutoff);

  WignerMap map;
  map.grid = grid;
  map.provenance = "reconstructed";
  map.values = RealMatrix::Zero(grid.n1, grid.n2);
  std::vector<double> filtered(n);
  for (std::size_t a = 0; a < sinogram.thetas.size(); ++a) {
    const auto& proj = sinogram.density[a];
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += proj[j] * kernel[i - j + n - 1];
      filtered[i] = acc * step;
    }
    const double c = std::cos(sinogram.thetas[a]);
    const double s = std::sin(sinogram.thetas[a]);
    for (int i = 0; i < grid.n1; ++i) {
      const double x = grid.q1(i);
      for (int j = 0; j < grid.n2; ++j) {
        const double t = (x * c + grid.q2(j) * s - q0) / step;
        if (t < 0.0 || t > n - 1) continue;
        const int lo = std::min(static_cast<int>(t), n - 2);
        const double frac = t - lo;
        map.values(i, j) += (1.0 - frac) * filtered[lo] + frac * filtered[lo + 1];
      }
    }
  }
  // pi/K from the angular sum, 2 pi from the alpha normalization.
  map.values *= (kPi / sinogram.thetas.size()) * 2.0 * kPi;
  return map;
}

double rmse(const WignerMap& a, const WignerMap& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) {
    throw DomainError("rmse: map shapes differ");
  }
  return std::sqrt((a.values - b.values).squaredNorm() / static_cast<double>(a.values.size()));
}

namespace {

void finish_report(ReconstructionReport& r, const DensityOperator& rho, const PhaseSpaceGrid& grid,
                   std::optional<FringeRegion> fringe) {
  r.truth = wigner_map(rho, grid);
  r.rmse = rmse(r.map, r.truth);
  r.max_error = (r.map.values - r.truth.values).cwiseAbs().maxCoeff();
  r.normalization = r.map.normalization();
  r.max_abs = r.map.max_abs();
  if (fringe) {
    r.fringe_contrast = fringe_contrast(r.map, fringe->q1_lo, fringe->q1_hi, fringe->q2_lo, fringe->q2_hi);
    r.true_fringe_contrast = fringe_contrast(r.truth, fringe->q1_lo, fringe->q1_hi, fringe->q2_lo, fringe->q2_hi);
  }
}

}  // namespace

ReconstructionReport reconstruct_from_samples(const DensityOperator& rho_true, int angle_count,
                                              std::int64_t n_per_angle, std::uint64_t seed,
                                              const PhaseSpaceGrid& grid, const Binning& binning,
                                              std::optional<FringeRegion> fringe) {
  if (angle_count < 8) throw CoverageError("reconstruct_from_samples: at least 8 angles are required");
  const std::vector<double> thetas = uniform_angles(angle_count);
  std::vector<QuadratureHistogram> histograms;
  histograms.reserve(thetas.size());
  ReconstructionReport report;
  for (std::size_t k = 0; k < thetas.size(); ++k) {
    histograms.push_back(sample_homodyne(rho_true, thetas[k], n_per_angle, derive_seed(seed, k), binning));
    const auto centers = histograms.back().centers();
    const auto est = histograms.back().densities();
    double worst = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i) {
      worst = std::max(worst, std::abs(est[i] - marginal_distribution(rho_true, thetas[k], centers[i])));
    }
    report.marginal_residuals.push_back(worst);
  }
  report.sinogram = sinogram_from_histograms(histograms);
  report.map = inverse_radon(report.sinogram, grid);
  report.angles = angle_count;
  report.n_per_angle = n_per_angle;
  finish_report(report, rho_true, grid, fringe);
  return report;
}

ReconstructionReport reconstruct_exact(const DensityOperator& rho_true, int angle_count, const PhaseSpaceGrid& grid,
                                       double q_step, std::optional<FringeRegion> fringe) {
  const std::vector<double> thetas = uniform_angles(angle_count);
  const double half = std::max(default_half_width(rho_true), grid.max_radius() + 1.0);
  ReconstructionReport report;
  report.sinogram = exact_sinogram(rho_true, thetas, symmetric_q_grid(half, q_step));
  report.map = inverse_radon(report.sinogram, grid);
  report.angles = angle_count;
  report.marginal_residuals.assign(thetas.size(), 0.0);
  finish_report(report, rho_true, grid, fringe);
  return report;
}

PauliDemoReport pauli_incompleteness_demo(const PhaseSpaceGrid& grid, std::int64_t n_samples, std::uint64_t seed) {
  const PauliPair pair = pauli_counterexample(HilbertSpec(3));
  const DensityOperator a = pure_to_density(pair.state_a);
  const DensityOperator b = pure_to_density(pair.state_b);
  PauliDemoReport report;

  const double two[] = {0.0, 0.5 * kPi};
  const std::vector<double> q = symmetric_q_grid(std::max(8.0, grid.max_radius() + 1.0), 0.05);
  const SinogramSet sa = exact_sinogram(a, two, q);
  const SinogramSet sb = exact_sinogram(b, two, q);
  for (std::size_t k = 0; k < 2; ++k) {
    for (std::size_t i = 0; i < q.size(); ++i) {
      report.two_angle_sinogram_deviation =
          std::max(report.two_angle_sinogram_deviation, std::abs(sa.density[k][i] - sb.density[k][i]));
    }
    const auto ha = sample_homodyne(a, two[k], n_samples, derive_seed(seed, k));
    const auto hb = sample_homodyne(b, two[k], n_samples, derive_seed(seed, k));
    for (std::size_t i = 0; i < ha.counts.size(); ++i) {
      report.two_angle_histogram_deviation = std::max(
          report.two_angle_histogram_deviation, static_cast<double>(std::abs(ha.counts[i] - hb.counts[i])));
    }
  }

  const auto ra = reconstruct_exact(a, 36, grid);
  const auto rb = reconstruct_exact(b, 36, grid);
  report.full_reconstruction_deviation = (ra.map.values - rb.map.values).cwiseAbs().maxCoeff();
  report.rotated_marginal_deviation = pair.evidence.rotated_marginal_deviation;
  report.marginals_only_incomplete =
      report.two_angle_sinogram_deviation < 1e-8 && report.full_reconstruction_deviation > 0.05;
  return report;
}

}  // namespace cqed
