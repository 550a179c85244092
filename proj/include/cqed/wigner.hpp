#pragma once

// Phase-space representations of a single-mode field.
//
// Convention: alpha = (q1 + i q2)/sqrt(2) and W(alpha) = 2 Tr[rho D(alpha) P D(alpha)^-1],
// normalized so that the integral of W d^2alpha/pi is 1 and |W| <= 2. The
// position-representation integral is rescaled by 2 pi to the same convention.

#include <span>
#include <string>
#include <vector>

#include "cqed/fock.hpp"

namespace cqed {

struct PhaseSpaceGrid {
  double q1_min = -4.0, q1_max = 4.0;
  double q2_min = -4.0, q2_max = 4.0;
  int n1 = 81, n2 = 81;

  static PhaseSpaceGrid square(double half_width, int points);
  // Default fine grid for states whose phase-space features sit within
  // |alpha| <= alpha_max: half-width sqrt(2) alpha_max + 4 in q units, step <= 0.075.
  static PhaseSpaceGrid fine(double alpha_max);

  // Throws DomainError unless max > min and counts >= 2.
  void validate() const;
  double q1(int i) const { return q1_min + (q1_max - q1_min) * i / (n1 - 1); }
  double q2(int j) const { return q2_min + (q2_max - q2_min) * j / (n2 - 1); }
  double step1() const { return (q1_max - q1_min) / (n1 - 1); }
  double step2() const { return (q2_max - q2_min) / (n2 - 1); }
  static Complex alpha_at(double q1, double q2) { return Complex(q1, q2) / std::sqrt(2.0); }
  Complex alpha(int i, int j) const { return alpha_at(q1(i), q2(j)); }
  // Grid spanning the negated box. Its point (n1-1-i, n2-1-j) is minus point (i, j).
  PhaseSpaceGrid reflected() const;
  // Largest distance of a grid corner from the origin.
  double max_radius() const;
};

struct WignerMap {
  PhaseSpaceGrid grid;
  RealMatrix values;  // n1 x n2, values(i, j) at (q1(i), q2(j))
  std::string convention = "alpha-normalized";
  std::string provenance = "computed";

  double max_abs() const { return values.cwiseAbs().maxCoeff(); }
  // Riemann sum of W d^2alpha/pi = W dq1 dq2 / (2 pi).
  double normalization() const;
  // Bilinear interpolation; 0 outside the grid.
  double interpolate(double q1, double q2) const;
};

// Eq. |W| <= 2 check with slack 1e-8.
bool within_wigner_bound(const WignerMap& map, double slack = 1e-8);

// 2 Tr[rho D(alpha) P D(alpha)^-1] from exact matrix elements of D(2 alpha).
// Throws TruncationError when |2 alpha|^2 leaves the double-precision range of
// those elements and NonHermitianError if the imaginary residue exceeds 1e-6.
double wigner_point(const DensityOperator& rho, Complex alpha);

// 2 pi * (1/2pi) int e^{ipx} <q - x/2|rho|q + x/2> dx by Gauss-Hermite
// quadrature over oscillator eigenfunctions. Throws QuadratureError if two
// quadrature orders disagree by more than 1e-9.
double wigner_position(const DensityOperator& rho, double q, double p);

WignerMap wigner_map(const DensityOperator& rho, const PhaseSpaceGrid& grid);

// <q_theta|rho|q_theta> with q_theta = q cos(theta) + p sin(theta).
double marginal_distribution(const DensityOperator& rho, double theta, double q_theta);
std::vector<double> marginal_distribution(const DensityOperator& rho, double theta,
                                          const std::vector<double>& q_values);

// Line integrals of the map along the direction conjugate to q_theta,
// divided by 2 pi so the result is a probability density in q_theta.
std::vector<double> radon_of_map(const WignerMap& map, double theta, const std::vector<double>& q_values);

// Weyl-symmetrized monomial {q^m p^n}_sym.
struct SymmetricMonomial {
  int q_power = 0;
  int p_power = 0;
  int degree() const { return q_power + p_power; }
};

struct MoyalComparison {
  double operator_side = 0.0;     // Tr(rho {q^m p^n}_sym)
  double phase_space_side = 0.0;  // int dq dp W q^m p^n / (2 pi)
  double discrepancy = 0.0;
};

// Throws TruncationError for degree > 4.
MoyalComparison moyal_average(const DensityOperator& rho, const SymmetricMonomial& monomial);
// Same, sharing one phase-space grid across several monomials.
std::vector<MoyalComparison> moyal_averages(const DensityOperator& rho,
                                            std::span<const SymmetricMonomial> monomials);

// Diagonal of rho; sums to 1 within 1e-10.
std::vector<double> photon_number_distribution(const DensityOperator& rho);

struct PauliEvidence {
  double position_marginal_deviation = 0.0;  // sup over the reference grid
  double momentum_marginal_deviation = 0.0;
  double rotated_marginal_deviation = 0.0;   // theta = pi/4
  double wigner_deviation = 0.0;             // sup over a phase-space grid
};

struct PauliPair {
  FieldState state_a;  // (|0> + i|2>)/sqrt(2)
  FieldState state_b;  // (|0> - i|2>)/sqrt(2)
  PauliEvidence evidence;
};

// Two states with identical position and momentum distributions but
// different Wigner functions. Requires dim >= 3.
PauliPair pauli_counterexample(const HilbertSpec& spec);

// max - min of the map over the box [q1_lo, q1_hi] x [q2_lo, q2_hi].
double fringe_contrast(const WignerMap& map, double q1_lo, double q1_hi, double q2_lo, double q2_hi);

}  // namespace cqed
