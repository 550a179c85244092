#pragma once

// Truncated Fock-space algebra for a single field mode (hbar = 1).
//
// Quadratures are dimensionless: a = (q1 + i q2)/sqrt(2), [q1, q2] = i, so the
// vacuum has variance 1/2 in either quadrature. Every state and operator is
// built against a HilbertSpec and carries exactly dim (or dim x dim) entries.

#include <span>
#include <utility>
#include <vector>

#include "cqed/types.hpp"

namespace cqed {

// Tolerances shared by the type invariants below.
inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kHermiticityTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kPositivityTolerance = 1e-8;
inline constexpr double kRenormalizationLimit = 1e-8;

class HilbertSpec {
 public:
  explicit HilbertSpec(int dim);

  // ceil(4 * |alpha|^2 + 10): keeps coherent-state tail mass below 1e-10.
  static HilbertSpec for_amplitude(double max_abs_alpha);

  int dim() const { return dim_; }
  bool operator==(const HilbertSpec&) const = default;

 private:
  int dim_;
};

// True when |alpha|^2 <= dim/4.
bool within_truncation_guard(const HilbertSpec& spec, Complex alpha);

class FieldOperator {
 public:
  explicit FieldOperator(Matrix m) : matrix_(std::move(m)) {}

  const Matrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

 private:
  Matrix matrix_;
};

class FieldState {
 public:
  // Takes ownership of amplitudes that are already unit-norm; throws
  // InvariantError otherwise.
  explicit FieldState(Vector amplitudes, double truncation_correction = 0.0);

  const Vector& amplitudes() const { return amplitudes_; }
  int dim() const { return static_cast<int>(amplitudes_.size()); }
  // |1 - norm| of the untruncated series before renormalization.
  double truncation_correction() const { return truncation_correction_; }

  Complex overlap(const FieldState& other) const;  // <this|other>
  double mean_photon_number() const;

 private:
  Vector amplitudes_;
  double truncation_correction_;
};

class DensityOperator {
 public:
  // Validates hermiticity, trace and positivity; throws InvariantError.
  explicit DensityOperator(Matrix m);

  const Matrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

  Complex expectation(const Matrix& op) const;  // Tr(rho op)
  double purity() const;
  double mean_photon_number() const;
  // Zero-padded copy on a larger truncation.
  DensityOperator embedded(int new_dim) const;
  // Population in the top `levels` Fock states.
  double tail_population(int levels) const;

 private:
  Matrix matrix_;
};

// Max elementwise |m - m^dagger|.
double hermiticity_error(const Matrix& m);
// (m + m^dagger)/2.
Matrix hermitian_part(const Matrix& m);

FieldOperator annihilation(const HilbertSpec& spec);
FieldOperator creation(const HilbertSpec& spec);
FieldOperator number_operator(const HilbertSpec& spec);
FieldOperator quadrature_q(const HilbertSpec& spec);  // (a + a^dagger)/sqrt(2)
FieldOperator quadrature_p(const HilbertSpec& spec);  // (a - a^dagger)/(i sqrt(2))
FieldOperator parity(const HilbertSpec& spec);
// exp(i phi n): rotates a coherent amplitude by phi.
FieldOperator phase_rotation(const HilbertSpec& spec, double phi);
// exp(alpha a^dagger - alpha^* a) by scaling and squaring with a Pade
// approximant. Throws TruncationError outside the guard |alpha|^2 <= dim/4.
FieldOperator displacement(const HilbertSpec& spec, Complex alpha);
// D(alpha) applied to the columns of `vectors` (spec.dim rows) by a scaled
// Taylor series of the sparse generator, without forming D. Same guard.
Matrix apply_displacement(const HilbertSpec& spec, Complex alpha, const Matrix& vectors);

FieldState coherent_state(const HilbertSpec& spec, Complex alpha);
FieldState fock_state(const HilbertSpec& spec, int n);

// N = sqrt(2 [1 + cos(psi) exp(-2|alpha|^2)]).
double cat_normalization(Complex alpha, double psi);
// (|alpha> + e^{i psi} |-alpha>)/N.
FieldState cat_state(const HilbertSpec& spec, Complex alpha, double psi);

DensityOperator pure_to_density(const FieldState& state);
// Convex combination; weights must be nonnegative and sum to 1 within 1e-12.
DensityOperator mix(std::span<const std::pair<FieldState, double>> components);
DensityOperator mix(std::span<const std::pair<DensityOperator, double>> components);

}  // namespace cqed
