#pragma once

// Atom-field experiment engine: Ramsey pulses, conditional phase shifts,
// projective atom detection, cat preparation and the two-atom monitor.
//
// The atom is a two-level system with upper level e and lower level g. The
// dispersive coupling to the off-resonant third level is folded into a single
// per-photon phase phi. Atom transits are instantaneous on the damping scale.

#include <Eigen/Dense>
#include <optional>

#include "cqed/dynamics.hpp"
#include "cqed/fock.hpp"

namespace cqed {

enum class Atom { Excited = 0, Ground = 1 };

const char* to_string(Atom a);

struct AtomState {
  Complex amp_e{1.0, 0.0};
  Complex amp_g{0.0, 0.0};

  static AtomState excited() { return {{1.0, 0.0}, {0.0, 0.0}}; }
  static AtomState ground() { return {{0.0, 0.0}, {1.0, 0.0}}; }
  // Throws InvariantError unless |amp_e|^2 + |amp_g|^2 = 1 within 1e-10.
  void validate() const;
};

enum class RamseyZone { R1, R2 };

struct ProtocolConfig {
  double phi = kPi;           // per-photon conditional phase
  double ramsey_phase = 0.0;  // common microwave phase of both zones
  double eta = 0.0;           // extra dephasing of the second zone
  int dim = 0;                // Fock truncation override; 0 picks the default rule

  // Throws DomainError for non-finite angles or negative dim.
  void validate() const;
};

// Atom (x) field state, pure or mixed. Basis index = atom * dim + n with
// e = 0, g = 1.
class JointState {
 public:
  static JointState product(const AtomState& atom, const FieldState& field);
  static JointState product(const AtomState& atom, const DensityOperator& field);

  bool is_pure() const { return pure_; }
  int field_dim() const { return dim_; }
  // Amplitude vector (pure states only; throws DomainError otherwise).
  const Vector& amplitudes() const;
  // Full 2 dim x 2 dim density matrix (computed for pure states).
  Matrix density() const;
  // Norm squared for pure states, trace for mixed ones.
  double weight() const;
  Complex amplitude(Atom a, int n) const;

  // Unnormalized field block <a| rho |a>.
  Matrix field_block(Atom a) const;
  DensityOperator reduced_field() const;
  Eigen::Matrix2cd reduced_atom() const;

  // (u (x) 1) state (u (x) 1)^dagger; u acts on (e, g).
  JointState apply_atom_unitary(const Eigen::Matrix2cd& u) const;
  // Diagonal unitary with entries phase_e[n] on |e,n> and phase_g[n] on |g,n>.
  JointState apply_diagonal(const Vector& phase_e, const Vector& phase_g) const;

 private:
  JointState(int dim, bool pure) : dim_(dim), pure_(pure) {}

  int dim_;
  bool pure_;
  Vector psi_;
  Matrix rho_;
};

// pi/2 pulse |e> -> (|e> + e^{i chi}|g>)/sqrt(2), |g> -> (-e^{-i chi}|e> + |g>)/sqrt(2)
// with chi the Ramsey microwave phase.
Eigen::Matrix2cd ramsey_matrix(double ramsey_phase);

// R1 applies the pulse; R2 first puts the relative phase e^{i eta} on |g>.
JointState ramsey_pulse(const JointState& s, RamseyZone which, const ProtocolConfig& config);
// exp(i phi n) on the field when the atom is in e; identity for g.
JointState dispersive_shift(const JointState& s, const ProtocolConfig& config);
// Opposite shifts exp(+i phi (n + 1/2)) for e and exp(-i phi (n + 1/2)) for g.
// The half-photon term is the light shift of the atomic transition; with
// phi = pi/2 it is what the eta = pi/2 dephasing compensates.
JointState brune_variant_shift(const JointState& s, const ProtocolConfig& config);
// Sign flip of |e,1>. Throws SubspaceError when the e sector holds more than
// 1e-8 population above one photon.
JointState resonant_2pi(const JointState& s);

struct Detection {
  double p_e = 0.0;
  double p_g = 0.0;
  Matrix block_e;  // unnormalized field after detecting e
  Matrix block_g;

  double probability(Atom a) const { return a == Atom::Excited ? p_e : p_g; }
  // Normalized post-measurement field; DegenerateBranchError if p < 1e-14.
  DensityOperator field_after(Atom a) const;
};

Detection detect_atom(const JointState& s);

struct CatPreparation {
  double p_e = 0.0;
  double p_g = 0.0;
  std::optional<DensityOperator> field_e;  // empty when the branch never fires
  std::optional<DensityOperator> field_g;
};

// Inject |alpha>, send one atom through R1, C, R2 and detect it. Requires phi = pi.
CatPreparation prepare_cat(Complex alpha, const ProtocolConfig& config = {});

// Sends one atom prepared in e through R1, the conditional shift and R2
// with no field injection, and detects it.
Detection probe_atom(const DensityOperator& field, const ProtocolConfig& config);

// What sits in the cavity after the first atom.
enum class FirstAtomField {
  Cat,      // the projected superposition
  Mixture,  // the statistical mixture of |alpha>, |-alpha>, whatever the outcome
};

// Conditional probabilities are NaN when the conditioning outcome has zero
// probability.
struct ConditionalTable {
  double delay = 0.0;
  double p_e1 = 0.0;
  double p_g1 = 0.0;
  double p_e2_given_e1 = 0.0;
  double p_g2_given_e1 = 0.0;
  double p_e2_given_g1 = 0.0;
  double p_g2_given_g1 = 0.0;
  double p_e2 = 0.0;  // marginal of the second atom
  double p_g2 = 0.0;
};

ConditionalTable two_atom_conditional(Complex alpha, double delay, const DampingModel& model,
                                      const ProtocolConfig& config = {},
                                      FirstAtomField first = FirstAtomField::Cat);

}  // namespace cqed
