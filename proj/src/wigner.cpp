#include "cqed/wigner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cqed/hermite.hpp"

namespace cqed {

PhaseSpaceGrid PhaseSpaceGrid::square(double half_width, int points) {
  PhaseSpaceGrid g{-half_width, half_width, -half_width, half_width, points, points};
  g.validate();
  return g;
}

PhaseSpaceGrid PhaseSpaceGrid::fine(double alpha_max) {
  if (!(alpha_max >= 0.0)) throw DomainError("PhaseSpaceGrid::fine: alpha_max must be >= 0");
  const double half = std::sqrt(2.0) * alpha_max + 4.0;
  const int intervals = static_cast<int>(std::ceil(2.0 * half / 0.075));
  return square(half, intervals + 1);
}

void PhaseSpaceGrid::validate() const {
  if (!(q1_max > q1_min) || !(q2_max > q2_min) || n1 < 2 || n2 < 2) {
    throw DomainError("PhaseSpaceGrid: need max > min and at least 2 points per axis");
  }
}

PhaseSpaceGrid PhaseSpaceGrid::reflected() const {
  PhaseSpaceGrid g = *this;
  g.q1_min = -q1_max;
  g.q1_max = -q1_min;
  g.q2_min = -q2_max;
  g.q2_max = -q2_min;
  return g;
}

double PhaseSpaceGrid::max_radius() const {
  const double a = std::max(std::abs(q1_min), std::abs(q1_max));
  const double b = std::max(std::abs(q2_min), std::abs(q2_max));
  return std::hypot(a, b);
}

double WignerMap::normalization() const {
  return values.sum() * std::abs(grid.step1() * grid.step2()) / (2.0 * kPi);
}

double WignerMap::interpolate(double q1, double q2) const {
  const double x = (q1 - grid.q1_min) / grid.step1();
  const double y = (q2 - grid.q2_min) / grid.step2();
  if (x < 0.0 || y < 0.0 || x > grid.n1 - 1 || y > grid.n2 - 1) return 0.0;
  const int i = std::min(static_cast<int>(x), grid.n1 - 2);
  const int j = std::min(static_cast<int>(y), grid.n2 - 2);
  const double fx = x - i;
  const double fy = y - j;
  return (1 - fx) * (1 - fy) * values(i, j) + fx * (1 - fy) * values(i + 1, j) +
         (1 - fx) * fy * values(i, j + 1) + fx * fy * values(i + 1, j + 1);
}

bool within_wigner_bound(const WignerMap& map, double slack) { return map.max_abs() <= 2.0 + slack; }

namespace {

// <m|D(gamma)|n> for m, n < d, exact in the untruncated space. Uses
// sqrt(m+1) D[m+1,n] = sqrt(n) D[m,n-1] + gamma D[m,n], which follows from
// a D = D (a + gamma).
Matrix displacement_elements(int d, Complex gamma) {
  Matrix el(d, d);
  el(0, 0) = std::exp(-0.5 * std::norm(gamma));
  const Complex minus_conj = -std::conj(gamma);
  for (int n = 1; n < d; ++n) el(0, n) = el(0, n - 1) * minus_conj / std::sqrt(static_cast<double>(n));
  for (int m = 0; m + 1 < d; ++m) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(m + 1));
    el(m + 1, 0) = gamma * el(m, 0) * inv;
    for (int n = 1; n < d; ++n) {
      el(m + 1, n) = (std::sqrt(static_cast<double>(n)) * el(m, n - 1) + gamma * el(m, n)) * inv;
    }
  }
  return el;
}

constexpr double kMaxDisplacementNorm = 1200.0;  // |gamma|^2; exp(-600) stays normal

double real_or_throw(Complex w, const char* what) {
  if (std::abs(w.imag()) > 1e-6) {
    throw NonHermitianError(std::string(what) + ": imaginary residue " + std::to_string(w.imag()));
  }
  return w.real();
}

}  // namespace

double wigner_point(const DensityOperator& rho, Complex alpha) {
  const Complex gamma = 2.0 * alpha;
  if (!(std::norm(gamma) <= kMaxDisplacementNorm)) {
    throw TruncationError("wigner_point: |2 alpha|^2 = " + std::to_string(std::norm(gamma)) +
                          " outside the representable range");
  }
  const int d = rho.dim();
  // D(a) P D(a)^dagger = D(2a) P, so W = 2 sum_mn rho_mn <n|D(2a)|m> (-1)^m.
  const Matrix el = displacement_elements(d, gamma);
  const Matrix& r = rho.matrix();
  Complex acc = 0.0;
  for (int m = 0; m < d; ++m) {
    Complex col = 0.0;
    for (int n = 0; n < d; ++n) col += r(m, n) * el(n, m);
    acc += (m % 2 == 0) ? col : -col;
  }
  return real_or_throw(2.0 * acc, "wigner_point");
}

namespace {

Complex position_integral(const Matrix& rho, double q, double p, int order) {
  const auto rule = gauss_hermite(order);
  const int d = static_cast<int>(rho.rows());
  Complex acc = 0.0;
  for (int i = 0; i < order; ++i) {
    const double u = rule->nodes[i];
    // x = 2u: <q - u| rho |q + u>, with real eigenfunctions.
    const RealVector left = hermite_functions(d, q - u);
    const RealVector right = hermite_functions(d, q + u);
    const Complex kernel = (left.cast<Complex>().transpose() * rho * right.cast<Complex>())(0, 0);
    acc += rule->scaled_weights[i] * std::polar(1.0, 2.0 * p * u) * kernel;
  }
  // dx = 2 du, and the 1/(2 pi) prefactor cancels against the 2 pi rescaling.
  return 2.0 * acc;
}

}  // namespace

double wigner_position(const DensityOperator& rho, double q, double p) {
  if (!std::isfinite(q) || !std::isfinite(p)) throw DomainError("wigner_position: non-finite point");
  const int d = rho.dim();
  const int order = 2 * d + static_cast<int>(std::ceil(std::exp(1.0) * p * p)) + 40;
  const Complex a = position_integral(rho.matrix(), q, p, order);
  const Complex b = position_integral(rho.matrix(), q, p, order + 24);
  if (std::abs(a - b) > 1e-9) {
    throw QuadratureError("wigner_position: quadrature orders disagree by " + std::to_string(std::abs(a - b)));
  }
  return real_or_throw(b, "wigner_position");
}

WignerMap wigner_map(const DensityOperator& rho, const PhaseSpaceGrid& grid) {
  grid.validate();
  WignerMap map;
  map.grid = grid;
  map.values.resize(grid.n1, grid.n2);
  for (int i = 0; i < grid.n1; ++i) {
    for (int j = 0; j < grid.n2; ++j) map.values(i, j) = wigner_point(rho, grid.alpha(i, j));
  }
  return map;
}

double marginal_distribution(const DensityOperator& rho, double theta, double q_theta) {
  const int d = rho.dim();
  const RealVector psi = hermite_functions(d, q_theta);
  // |q_theta> = exp(i theta n)|q>, so P = sum_mn rho_mn e^{-i theta (m - n)} psi_m psi_n.
  Vector left(d);
  for (int m = 0; m < d; ++m) left[m] = std::polar(psi[m], theta * m);
  const Complex v = left.dot(rho.matrix() * left);
  return real_or_throw(v, "marginal_distribution");
}

std::vector<double> marginal_distribution(const DensityOperator& rho, double theta,
                                          const std::vector<double>& q_values) {
  std::vector<double> out;
  out.reserve(q_values.size());
  for (const double q : q_values) out.push_back(marginal_distribution(rho, theta, q));
  return out;
}

std::vector<double> radon_of_map(const WignerMap& map, double theta, const std::vector<double>& q_values) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double reach = map.grid.max_radius();
  const double ds = 0.5 * std::min(std::abs(map.grid.step1()), std::abs(map.grid.step2()));
  const int half = static_cast<int>(std::ceil(reach / ds));
  std::vector<double> out;
  out.reserve(q_values.size());
  for (const double q : q_values) {
    double acc = 0.0;
    for (int k = -half; k <= half; ++k) {
      const double t = k * ds;
      acc += map.interpolate(q * c - t * s, q * s + t * c);
    }
    out.push_back(acc * ds / (2.0 * kPi));
  }
  return out;
}

namespace {

// Sum over all distinct words with `m` q's and `n` p's, divided by their count.
Matrix weyl_symmetrized(const Matrix& q, const Matrix& p, int m, int n) {
  const int d = static_cast<int>(q.rows());
  const int len = m + n;
  Matrix total = Matrix::Zero(d, d);
  int words = 0;
  for (unsigned mask = 0; mask < (1u << len); ++mask) {
    if (std::popcount(mask) != n) continue;
    Matrix w = Matrix::Identity(d, d);
    for (int k = 0; k < len; ++k) w = w * (((mask >> k) & 1u) ? p : q);
    total += w;
    ++words;
  }
  return total / static_cast<double>(words);
}

int highest_populated_level(const DensityOperator& rho) {
  int top = 0;
  for (int k = 0; k < rho.dim(); ++k) {
    if (rho.matrix()(k, k).real() > 1e-16) top = k;
  }
  return top;
}

}  // namespace

std::vector<MoyalComparison> moyal_averages(const DensityOperator& rho,
                                            std::span<const SymmetricMonomial> monomials) {
  for (const auto& m : monomials) {
    if (m.q_power < 0 || m.p_power < 0) throw DomainError("moyal_average: negative power");
    if (m.degree() > 4) throw TruncationError("moyal_average: degree above 4 is not supported");
  }
  std::vector<MoyalComparison> out(monomials.size());

  // Operator side on an enlarged space so words of degree <= 4 are exact.
  const HilbertSpec big(rho.dim() + 10);
  const DensityOperator wide = rho.embedded(big.dim());
  const Matrix q_op = quadrature_q(big).matrix();
  const Matrix p_op = quadrature_p(big).matrix();
  for (std::size_t k = 0; k < monomials.size(); ++k) {
    const Matrix sym = weyl_symmetrized(q_op, p_op, monomials[k].q_power, monomials[k].p_power);
    out[k].operator_side = real_or_throw(wide.expectation(sym), "moyal_average");
  }

  // Phase-space side: trapezoid rule on a grid wide enough that W is below
  // double precision at the edge. For smooth Gaussian-tailed integrands the
  // rule converges spectrally in the step.
  const double half = std::sqrt(2.0 * highest_populated_level(rho) + 1.0) + 7.5;
  const double h = 0.2;
  const int n = static_cast<int>(std::ceil(half / h));
  std::vector<double> acc(monomials.size(), 0.0);
  for (int i = -n; i <= n; ++i) {
    const double q = i * h;
    for (int j = -n; j <= n; ++j) {
      const double p = j * h;
      const double w = wigner_point(rho, PhaseSpaceGrid::alpha_at(q, p));
      for (std::size_t k = 0; k < monomials.size(); ++k) {
        acc[k] += w * std::pow(q, monomials[k].q_power) * std::pow(p, monomials[k].p_power);
      }
    }
  }
  for (std::size_t k = 0; k < monomials.size(); ++k) {
    out[k].phase_space_side = acc[k] * h * h / (2.0 * kPi);
    out[k].discrepancy = std::abs(out[k].operator_side - out[k].phase_space_side);
  }
  return out;
}

MoyalComparison moyal_average(const DensityOperator& rho, const SymmetricMonomial& monomial) {
  return moyal_averages(rho, std::span<const SymmetricMonomial>(&monomial, 1)).front();
}

std::vector<double> photon_number_distribution(const DensityOperator& rho) {
  std::vector<double> p(rho.dim());
  for (int k = 0; k < rho.dim(); ++k) p[k] = rho.matrix()(k, k).real();
  return p;
}

PauliPair pauli_counterexample(const HilbertSpec& spec) {
  if (spec.dim() < 3) throw DomainError("pauli_counterexample: needs dim >= 3");
  const double s = 1.0 / std::sqrt(2.0);
  Vector a = Vector::Zero(spec.dim());
  Vector b = Vector::Zero(spec.dim());
  a[0] = s;
  a[2] = kI * s;
  b[0] = s;
  b[2] = -kI * s;
  PauliPair pair{FieldState(a), FieldState(b), {}};

  const DensityOperator ra = pure_to_density(pair.state_a);
  const DensityOperator rb = pure_to_density(pair.state_b);
  auto marginal_gap = [&](double theta) {
    double gap = 0.0;
    for (int k = 0; k <= 240; ++k) {
      const double q = -6.0 + 0.05 * k;
      gap = std::max(gap, std::abs(marginal_distribution(ra, theta, q) - marginal_distribution(rb, theta, q)));
    }
    return gap;
  };
  pair.evidence.position_marginal_deviation = marginal_gap(0.0);
  pair.evidence.momentum_marginal_deviation = marginal_gap(0.5 * kPi);
  pair.evidence.rotated_marginal_deviation = marginal_gap(0.25 * kPi);

  const PhaseSpaceGrid grid = PhaseSpaceGrid::square(4.0, 81);
  pair.evidence.wigner_deviation = (wigner_map(ra, grid).values - wigner_map(rb, grid).values).cwiseAbs().maxCoeff();
  return pair;
}

double fringe_contrast(const WignerMap& map, double q1_lo, double q1_hi, double q2_lo, double q2_hi) {
  double hi = -1e300, lo = 1e300;
  bool any = false;
  for (int i = 0; i < map.grid.n1; ++i) {
    const double x = map.grid.q1(i);
    if (x < q1_lo || x > q1_hi) continue;
    for (int j = 0; j < map.grid.n2; ++j) {
      const double y = map.grid.q2(j);
      if (y < q2_lo || y > q2_hi) continue;
      hi = std::max(hi, map.values(i, j));
      lo = std::min(lo, map.values(i, j));
      any = true;
    }
  }
  if (!any) throw DomainError("fringe_contrast: region contains no grid points");
  return hi - lo;
}

}  // namespace cqed
