#include "cqed/protocol.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace cqed {

const char* to_string(Atom a) { return a == Atom::Excited ? "e" : "g"; }

void AtomState::validate() const {
  const double n = std::norm(amp_e) + std::norm(amp_g);
  if (std::abs(n - 1.0) > kNormTolerance) {
    throw InvariantError("AtomState: norm " + std::to_string(n) + " differs from 1");
  }
}

void ProtocolConfig::validate() const {
  if (!std::isfinite(phi) || !std::isfinite(ramsey_phase) || !std::isfinite(eta)) {
    throw DomainError("ProtocolConfig: angles must be finite");
  }
  if (dim < 0) throw DomainError("ProtocolConfig: dim must be >= 0");
}

JointState JointState::product(const AtomState& atom, const FieldState& field) {
  atom.validate();
  JointState s(field.dim(), true);
  s.psi_.resize(2 * field.dim());
  s.psi_.head(field.dim()) = atom.amp_e * field.amplitudes();
  s.psi_.tail(field.dim()) = atom.amp_g * field.amplitudes();
  return s;
}

JointState JointState::product(const AtomState& atom, const DensityOperator& field) {
  atom.validate();
  const int d = field.dim();
  JointState s(d, false);
  s.rho_.resize(2 * d, 2 * d);
  const Complex c[2] = {atom.amp_e, atom.amp_g};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      s.rho_.block(a * d, b * d, d, d) = c[a] * std::conj(c[b]) * field.matrix();
    }
  }
  return s;
}

const Vector& JointState::amplitudes() const {
  if (!pure_) throw DomainError("JointState: amplitudes requested from a mixed state");
  return psi_;
}

Matrix JointState::density() const { return pure_ ? Matrix(psi_ * psi_.adjoint()) : rho_; }

double JointState::weight() const { return pure_ ? psi_.squaredNorm() : rho_.trace().real(); }

Complex JointState::amplitude(Atom a, int n) const {
  return amplitudes()[static_cast<int>(a) * dim_ + n];
}

Matrix JointState::field_block(Atom a) const {
  const int off = static_cast<int>(a) * dim_;
  if (pure_) {
    const Vector part = psi_.segment(off, dim_);
    return part * part.adjoint();
  }
  return rho_.block(off, off, dim_, dim_);
}

DensityOperator JointState::reduced_field() const {
  return DensityOperator(hermitian_part(field_block(Atom::Excited) + field_block(Atom::Ground)));
}

Eigen::Matrix2cd JointState::reduced_atom() const {
  Eigen::Matrix2cd r;
  const Matrix full = density();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) r(a, b) = full.block(a * dim_, b * dim_, dim_, dim_).trace();
  }
  return r;
}

JointState JointState::apply_atom_unitary(const Eigen::Matrix2cd& u) const {
  const int d = dim_;
  JointState out(d, pure_);
  if (pure_) {
    out.psi_.resize(2 * d);
    const auto e = psi_.head(d);
    const auto g = psi_.tail(d);
    out.psi_.head(d) = u(0, 0) * e + u(0, 1) * g;
    out.psi_.tail(d) = u(1, 0) * e + u(1, 1) * g;
    return out;
  }
  // Rows first, then columns: O(d^2) per block instead of a dense product.
  Matrix tmp(2 * d, 2 * d);
  for (int a = 0; a < 2; ++a) {
    tmp.middleRows(a * d, d) = u(a, 0) * rho_.middleRows(0, d) + u(a, 1) * rho_.middleRows(d, d);
  }
  out.rho_.resize(2 * d, 2 * d);
  for (int b = 0; b < 2; ++b) {
    out.rho_.middleCols(b * d, d) =
        std::conj(u(b, 0)) * tmp.middleCols(0, d) + std::conj(u(b, 1)) * tmp.middleCols(d, d);
  }
  return out;
}

JointState JointState::apply_diagonal(const Vector& phase_e, const Vector& phase_g) const {
  const int d = dim_;
  if (phase_e.size() != d || phase_g.size() != d) throw DomainError("apply_diagonal: size mismatch");
  Vector f(2 * d);
  f << phase_e, phase_g;
  JointState out(d, pure_);
  if (pure_) {
    out.psi_ = f.cwiseProduct(psi_);
  } else {
    out.rho_ = f.asDiagonal() * rho_ * f.conjugate().asDiagonal();
  }
  return out;
}

Eigen::Matrix2cd ramsey_matrix(double ramsey_phase) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex w = std::polar(1.0, ramsey_phase);
  Eigen::Matrix2cd r;
  // Columns are the images of |e> and |g>.
  r << s, -s * std::conj(w),  //
      s * w, s;
  return r;
}

JointState ramsey_pulse(const JointState& s, RamseyZone which, const ProtocolConfig& config) {
  Eigen::Matrix2cd u = ramsey_matrix(config.ramsey_phase);
  if (which == RamseyZone::R2 && config.eta != 0.0) {
    Eigen::Matrix2cd dephase = Eigen::Matrix2cd::Identity();
    dephase(1, 1) = std::polar(1.0, config.eta);
    u = u * dephase;
  }
  return s.apply_atom_unitary(u);
}

namespace {

Vector number_phases(int d, double phi, double offset) {
  Vector v(d);
  for (int n = 0; n < d; ++n) v[n] = std::polar(1.0, phi * (n + offset));
  return v;
}

}  // namespace

JointState dispersive_shift(const JointState& s, const ProtocolConfig& config) {
  const int d = s.field_dim();
  return s.apply_diagonal(number_phases(d, config.phi, 0.0), Vector::Ones(d));
}

JointState brune_variant_shift(const JointState& s, const ProtocolConfig& config) {
  const int d = s.field_dim();
  return s.apply_diagonal(number_phases(d, config.phi, 0.5), number_phases(d, -config.phi, 0.5));
}

JointState resonant_2pi(const JointState& s) {
  const int d = s.field_dim();
  const Matrix block = s.field_block(Atom::Excited);
  double above = 0.0;
  for (int n = 2; n < d; ++n) above += block(n, n).real();
  if (above > 1e-8) {
    throw SubspaceError("resonant_2pi: e-sector population above one photon is " + std::to_string(above));
  }
  Vector phase_e = Vector::Ones(d);
  phase_e[1] = -1.0;
  return s.apply_diagonal(phase_e, Vector::Ones(d));
}

DensityOperator Detection::field_after(Atom a) const {
  const double p = probability(a);
  if (p < 1e-14) {
    throw DegenerateBranchError(std::string("detection branch ") + to_string(a) + " has probability " +
                                std::to_string(p));
  }
  const Matrix& block = a == Atom::Excited ? block_e : block_g;
  return DensityOperator(hermitian_part(block / p));
}

Detection detect_atom(const JointState& s) {
  Detection det;
  det.block_e = s.field_block(Atom::Excited);
  det.block_g = s.field_block(Atom::Ground);
  const double total = s.weight();
  det.p_e = std::max(0.0, det.block_e.trace().real()) / total;
  det.p_g = std::max(0.0, det.block_g.trace().real()) / total;
  det.block_e /= total;
  det.block_g /= total;
  return det;
}

namespace {

void require_pi_shift(const ProtocolConfig& config, const char* what) {
  config.validate();
  if (std::abs(config.phi - kPi) > 1e-12) {
    throw DomainError(std::string(what) + ": requires a per-photon phase of pi");
  }
}

HilbertSpec spec_for(Complex alpha, const ProtocolConfig& config) {
  return config.dim > 0 ? HilbertSpec(config.dim) : HilbertSpec::for_amplitude(std::abs(alpha));
}

Detection run_atom(JointState s, const ProtocolConfig& config) {
  s = ramsey_pulse(s, RamseyZone::R1, config);
  s = dispersive_shift(s, config);
  s = ramsey_pulse(s, RamseyZone::R2, config);
  return detect_atom(s);
}

std::optional<DensityOperator> branch_or_empty(const Detection& det, Atom a) {
  if (det.probability(a) < 1e-14) return std::nullopt;
  return det.field_after(a);
}

}  // namespace

CatPreparation prepare_cat(Complex alpha, const ProtocolConfig& config) {
  require_pi_shift(config, "prepare_cat");
  const HilbertSpec spec = spec_for(alpha, config);
  const Detection det = run_atom(JointState::product(AtomState::excited(), coherent_state(spec, alpha)), config);
  CatPreparation out;
  out.p_e = det.p_e;
  out.p_g = det.p_g;
  out.field_e = branch_or_empty(det, Atom::Excited);
  out.field_g = branch_or_empty(det, Atom::Ground);
  return out;
}

Detection probe_atom(const DensityOperator& field, const ProtocolConfig& config) {
  return run_atom(JointState::product(AtomState::excited(), field), config);
}

ConditionalTable two_atom_conditional(Complex alpha, double delay, const DampingModel& model,
                                      const ProtocolConfig& config, FirstAtomField first) {
  require_pi_shift(config, "two_atom_conditional");
  if (!(delay >= 0.0) || !std::isfinite(delay)) throw DomainError("two_atom_conditional: delay must be >= 0");

  const CatPreparation prep = prepare_cat(alpha, config);
  ConditionalTable table;
  table.delay = delay;
  table.p_e1 = prep.p_e;
  table.p_g1 = prep.p_g;

  std::optional<DensityOperator> mixture;
  if (first == FirstAtomField::Mixture) {
    const HilbertSpec spec = spec_for(alpha, config);
    const std::pair<FieldState, double> halves[] = {{coherent_state(spec, alpha), 0.5},
                                                    {coherent_state(spec, -alpha), 0.5}};
    mixture = mix(halves);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  auto second = [&](const std::optional<DensityOperator>& field, double& p_e2, double& p_g2) {
    if (!field) {
      p_e2 = p_g2 = nan;
      return;
    }
    const DensityOperator& start = mixture ? *mixture : *field;
    const Detection det = probe_atom(evolve(start, model, delay), config);
    p_e2 = det.p_e;
    p_g2 = det.p_g;
  };
  second(prep.field_e, table.p_e2_given_e1, table.p_g2_given_e1);
  second(prep.field_g, table.p_e2_given_g1, table.p_g2_given_g1);

  table.p_e2 = 0.0;
  table.p_g2 = 0.0;
  if (prep.field_e) {
    table.p_e2 += table.p_e1 * table.p_e2_given_e1;
    table.p_g2 += table.p_e1 * table.p_g2_given_e1;
  }
  if (prep.field_g) {
    table.p_e2 += table.p_g1 * table.p_e2_given_g1;
    table.p_g2 += table.p_g1 * table.p_g2_given_g1;
  }
  return table;
}

}  // namespace cqed
