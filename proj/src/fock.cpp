#include "cqed/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace cqed {

HilbertSpec::HilbertSpec(int dim) : dim_(dim) {
  if (dim < 2) {
    throw DomainError("HilbertSpec: dim must be >= 2, got " + std::to_string(dim));
  }
}

HilbertSpec HilbertSpec::for_amplitude(double max_abs_alpha) {
  const double n = 4.0 * max_abs_alpha * max_abs_alpha + 10.0;
  return HilbertSpec(static_cast<int>(std::ceil(n - 1e-12)));
}

bool within_truncation_guard(const HilbertSpec& spec, Complex alpha) {
  return std::norm(alpha) <= spec.dim() / 4.0 + 1e-12;
}

namespace {

void require_guard(const HilbertSpec& spec, Complex alpha, const char* what) {
  if (!within_truncation_guard(spec, alpha)) {
    throw TruncationError(std::string(what) + ": |alpha|^2 = " + std::to_string(std::norm(alpha)) +
                          " exceeds dim/4 = " + std::to_string(spec.dim() / 4.0));
  }
}

}  // namespace

FieldState::FieldState(Vector amplitudes, double truncation_correction)
    : amplitudes_(std::move(amplitudes)), truncation_correction_(truncation_correction) {
  if (amplitudes_.size() < 2) throw DomainError("FieldState: dim must be >= 2");
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw InvariantError("FieldState: norm " + std::to_string(norm) + " differs from 1");
  }
}

Complex FieldState::overlap(const FieldState& other) const {
  if (other.dim() != dim()) throw DomainError("FieldState::overlap: dimension mismatch");
  return amplitudes_.dot(other.amplitudes_);
}

double FieldState::mean_photon_number() const {
  double n = 0.0;
  for (int k = 0; k < dim(); ++k) n += k * std::norm(amplitudes_[k]);
  return n;
}

double hermiticity_error(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

Matrix hermitian_part(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

DensityOperator::DensityOperator(Matrix m) : matrix_(std::move(m)) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() < 2) {
    throw DomainError("DensityOperator: matrix must be square with dim >= 2");
  }
  const double herm = hermiticity_error(matrix_);
  if (herm > kHermiticityTolerance) {
    throw InvariantError("DensityOperator: hermiticity error " + std::to_string(herm));
  }
  const Complex tr = matrix_.trace();
  if (std::abs(tr - 1.0) > kTraceTolerance) {
    throw InvariantError("DensityOperator: trace " + std::to_string(tr.real()) + " differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(matrix_), Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kPositivityTolerance) {
    throw InvariantError("DensityOperator: negative eigenvalue " + std::to_string(min_eig));
  }
}

Complex DensityOperator::expectation(const Matrix& op) const {
  if (op.rows() != matrix_.rows()) throw DomainError("expectation: dimension mismatch");
  // Tr(rho op) = sum_ij rho_ij op_ji
  return (matrix_.cwiseProduct(op.transpose())).sum();
}

double DensityOperator::purity() const {
  return (matrix_.cwiseProduct(matrix_.transpose())).sum().real();
}

double DensityOperator::mean_photon_number() const {
  double n = 0.0;
  for (int k = 0; k < dim(); ++k) n += k * matrix_(k, k).real();
  return n;
}

DensityOperator DensityOperator::embedded(int new_dim) const {
  if (new_dim < dim()) throw DomainError("embedded: new_dim smaller than current dim");
  Matrix m = Matrix::Zero(new_dim, new_dim);
  m.topLeftCorner(dim(), dim()) = matrix_;
  return DensityOperator(std::move(m));
}

double DensityOperator::tail_population(int levels) const {
  double p = 0.0;
  for (int k = std::max(0, dim() - levels); k < dim(); ++k) p += matrix_(k, k).real();
  return p;
}

FieldOperator annihilation(const HilbertSpec& spec) {
  const int d = spec.dim();
  Matrix a = Matrix::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return FieldOperator(std::move(a));
}

FieldOperator creation(const HilbertSpec& spec) {
  return FieldOperator(annihilation(spec).matrix().adjoint());
}

FieldOperator number_operator(const HilbertSpec& spec) {
  const int d = spec.dim();
  Matrix n = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
  return FieldOperator(std::move(n));
}

FieldOperator quadrature_q(const HilbertSpec& spec) {
  const Matrix a = annihilation(spec).matrix();
  return FieldOperator((a + a.adjoint()) / std::sqrt(2.0));
}

FieldOperator quadrature_p(const HilbertSpec& spec) {
  const Matrix a = annihilation(spec).matrix();
  return FieldOperator((a - a.adjoint()) / (kI * std::sqrt(2.0)));
}

FieldOperator parity(const HilbertSpec& spec) {
  const int d = spec.dim();
  Matrix p = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  return FieldOperator(std::move(p));
}

FieldOperator phase_rotation(const HilbertSpec& spec, double phi) {
  const int d = spec.dim();
  Matrix u = Matrix::Zero(d, d);
  for (int k = 0; k < d; ++k) u(k, k) = std::polar(1.0, phi * k);
  return FieldOperator(std::move(u));
}

FieldOperator displacement(const HilbertSpec& spec, Complex alpha) {
  require_guard(spec, alpha, "displacement");
  const Matrix a = annihilation(spec).matrix();
  const Matrix generator = alpha * a.adjoint() - std::conj(alpha) * a;
  return FieldOperator(generator.exp());
}

Matrix apply_displacement(const HilbertSpec& spec, Complex alpha, const Matrix& vectors) {
  require_guard(spec, alpha, "apply_displacement");
  const int d = spec.dim();
  if (vectors.rows() != d) throw DomainError("apply_displacement: vectors must have dim rows");
  // G = alpha a^dagger - alpha^* a is bidiagonal with norm <= 2 |alpha| sqrt(d).
  // Each step exponentiates a slice of norm <= 2.
  const double bound = 2.0 * std::abs(alpha) * std::sqrt(static_cast<double>(d));
  const int steps = std::max(1, static_cast<int>(std::ceil(bound / 2.0)));
  const Complex h = alpha / static_cast<double>(steps);
  std::vector<double> root(d + 1);
  for (int n = 0; n <= d; ++n) root[n] = std::sqrt(static_cast<double>(n));
  auto apply = [&](const Matrix& v) {
    Matrix out(d, v.cols());
    for (int n = 0; n < d; ++n) {
      out.row(n).setZero();
      if (n > 0) out.row(n) += (h * root[n]) * v.row(n - 1);
      if (n + 1 < d) out.row(n) -= (std::conj(h) * root[n + 1]) * v.row(n + 1);
    }
    return out;
  };
  Matrix result = vectors;
  for (int s = 0; s < steps; ++s) {
    Matrix term = result;
    Matrix sum = result;
    const double scale = std::max(result.cwiseAbs().maxCoeff(), 1e-300);
    for (int k = 1; k <= 60; ++k) {
      term = apply(term) / static_cast<double>(k);
      sum += term;
      if (term.cwiseAbs().maxCoeff() < 1e-18 * scale) break;
    }
    result = std::move(sum);
  }
  return result;
}

FieldState coherent_state(const HilbertSpec& spec, Complex alpha) {
  require_guard(spec, alpha, "coherent_state");
  const int d = spec.dim();
  Vector c(d);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < d; ++n) c[n] = c[n - 1] * alpha / std::sqrt(static_cast<double>(n));
  const double norm = c.norm();
  const double correction = std::abs(1.0 - norm);
  if (correction > kRenormalizationLimit) {
    throw TruncationError("coherent_state: renormalization correction " + std::to_string(correction) +
                          " exceeds 1e-8 at dim " + std::to_string(d));
  }
  c /= norm;
  return FieldState(std::move(c), correction);
}

FieldState fock_state(const HilbertSpec& spec, int n) {
  if (n < 0 || n >= spec.dim()) {
    throw IndexError("fock_state: n = " + std::to_string(n) + " outside [0, " +
                     std::to_string(spec.dim()) + ")");
  }
  Vector c = Vector::Zero(spec.dim());
  c[n] = 1.0;
  return FieldState(std::move(c));
}

double cat_normalization(Complex alpha, double psi) {
  const double inner = 2.0 * (1.0 + std::cos(psi) * std::exp(-2.0 * std::norm(alpha)));
  return std::sqrt(std::max(inner, 0.0));
}

FieldState cat_state(const HilbertSpec& spec, Complex alpha, double psi) {
  const double n1 = cat_normalization(alpha, psi);
  if (n1 < 1e-6) {
    throw DegenerateStateError("cat_state: normalization " + std::to_string(n1) + " below 1e-6");
  }
  const FieldState plus = coherent_state(spec, alpha);
  const FieldState minus = coherent_state(spec, -alpha);
  Vector v = (plus.amplitudes() + std::polar(1.0, psi) * minus.amplitudes()) / n1;
  const double norm = v.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw TruncationError("cat_state: truncated superposition has norm " + std::to_string(norm));
  }
  return FieldState(std::move(v), std::max(plus.truncation_correction(), minus.truncation_correction()));
}

DensityOperator pure_to_density(const FieldState& state) {
  const Vector& v = state.amplitudes();
  return DensityOperator(v * v.adjoint());
}

namespace {

void check_weight(double w) {
  if (w < 0.0) throw WeightError("mix: negative weight " + std::to_string(w));
}

void check_total(double total) {
  if (std::abs(total - 1.0) > 1e-12) {
    throw WeightError("mix: weights sum to " + std::to_string(total));
  }
}

}  // namespace

DensityOperator mix(std::span<const std::pair<FieldState, double>> components) {
  if (components.empty()) throw WeightError("mix: no components");
  const int d = components.front().first.dim();
  Matrix m = Matrix::Zero(d, d);
  double total = 0.0;
  for (const auto& [state, w] : components) {
    check_weight(w);
    if (state.dim() != d) throw DomainError("mix: dimension mismatch");
    total += w;
    m += w * state.amplitudes() * state.amplitudes().adjoint();
  }
  check_total(total);
  return DensityOperator(std::move(m));
}

DensityOperator mix(std::span<const std::pair<DensityOperator, double>> components) {
  if (components.empty()) throw WeightError("mix: no components");
  const int d = components.front().first.dim();
  Matrix m = Matrix::Zero(d, d);
  double total = 0.0;
  for (const auto& [rho, w] : components) {
    check_weight(w);
    if (rho.dim() != d) throw DomainError("mix: dimension mismatch");
    total += w;
    m += w * rho.matrix();
  }
  check_total(total);
  return DensityOperator(std::move(m));
}

}  // namespace cqed
