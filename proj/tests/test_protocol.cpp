#include <gtest/gtest.h>

#include <cmath>

#include "cqed/protocol.hpp"

using namespace cqed;

namespace {

// |<psi|rho|psi>| for a pure reference; insensitive to global phase.
double fidelity(const DensityOperator& rho, const Vector& psi) {
  return psi.dot(rho.matrix() * psi).real();
}

double overlap_abs(const Vector& a, const Vector& b) { return std::abs(a.dot(b)); }

// Closed forms at zero temperature for the field left by the first atom.
double p_e2_given_e1(double n, double kt) {
  const double c = std::exp(-2.0 * n * (1.0 - std::exp(-kt)));
  const double tail = std::exp(-2.0 * n * std::exp(-kt));
  return 0.5 * (1.0 + (c - tail) / (1.0 - std::exp(-2.0 * n)));
}

double p_g2_given_g1(double n, double kt) {
  const double c = std::exp(-2.0 * n * (1.0 - std::exp(-kt)));
  const double tail = std::exp(-2.0 * n * std::exp(-kt));
  return 0.5 * (1.0 + (c + tail) / (1.0 + std::exp(-2.0 * n)));
}

}  // namespace

TEST(AtomState, Validation) {
  EXPECT_NO_THROW(AtomState::excited().validate());
  EXPECT_THROW((AtomState{{1.0, 0.0}, {0.1, 0.0}}.validate()), InvariantError);
}

TEST(Ramsey, FirstPulseOnExcitedVacuum) {
  const HilbertSpec spec(4);
  const JointState s = ramsey_pulse(JointState::product(AtomState::excited(), fock_state(spec, 0)),
                                    RamseyZone::R1, ProtocolConfig{});
  EXPECT_NEAR(std::abs(s.amplitude(Atom::Excited, 0) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitude(Atom::Ground, 0) - 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
}

TEST(Ramsey, MatrixMapping) {
  const Eigen::Matrix2cd u = ramsey_matrix(0.0);
  const double r = 1.0 / std::sqrt(2.0);
  // Columns are the images of e and g.
  EXPECT_NEAR(std::abs(u(0, 0) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(1, 0) - r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(0, 1) + r), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(u(1, 1) - r), 0.0, 1e-15);
  for (const double chi : {0.0, 0.4, 2.0}) {
    const Eigen::Matrix2cd v = ramsey_matrix(chi);
    EXPECT_LT((v.adjoint() * v - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Ramsey, TwoPulsesAreAPiPulseInEmptyCavity) {
  const ProtocolConfig cfg;
  JointState s = JointState::product(AtomState::excited(), fock_state(HilbertSpec(3), 0));
  s = ramsey_pulse(ramsey_pulse(s, RamseyZone::R1, cfg), RamseyZone::R2, cfg);
  EXPECT_NEAR(std::abs(s.amplitude(Atom::Ground, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.amplitude(Atom::Excited, 0)), 0.0, 1e-15);
}

TEST(Ramsey, EtaAppliesOnGroundBeforeSecondPulse) {
  ProtocolConfig cfg;
  cfg.eta = 0.7;
  const JointState s = JointState::product(AtomState::ground(), fock_state(HilbertSpec(3), 0));
  const JointState out = ramsey_pulse(s, RamseyZone::R2, cfg);
  const double r = 1.0 / std::sqrt(2.0);
  const Complex ph = std::polar(1.0, 0.7);
  EXPECT_NEAR(std::abs(out.amplitude(Atom::Excited, 0) + r * ph), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(out.amplitude(Atom::Ground, 0) - r * ph), 0.0, 1e-15);
}

TEST(Ramsey, Unitarity) {
  const HilbertSpec spec(20);
  ProtocolConfig cfg;
  cfg.eta = 1.1;
  cfg.ramsey_phase = 0.3;
  const AtomState atom{{0.6, 0.0}, {0.0, 0.8}};
  JointState s = JointState::product(atom, coherent_state(spec, Complex(1.0, 0.5)));
  s = ramsey_pulse(s, RamseyZone::R1, cfg);
  EXPECT_NEAR(s.weight(), 1.0, 1e-12);
  s = ramsey_pulse(s, RamseyZone::R2, cfg);
  EXPECT_NEAR(s.weight(), 1.0, 1e-12);
}

TEST(DispersiveShift, ExcitedFlipsCoherentState) {
  const Complex a(1.2, -0.4);
  const HilbertSpec spec = HilbertSpec::for_amplitude(std::abs(a));
  const JointState s = dispersive_shift(JointState::product(AtomState::excited(), coherent_state(spec, a)),
                                        ProtocolConfig{});
  const Vector e_part = s.amplitudes().head(spec.dim());
  EXPECT_LT((e_part - coherent_state(spec, -a).amplitudes()).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(DispersiveShift, GroundUnchanged) {
  const Complex a(0.9, 0.9);
  const HilbertSpec spec = HilbertSpec::for_amplitude(std::abs(a));
  const JointState in = JointState::product(AtomState::ground(), coherent_state(spec, a));
  ProtocolConfig cfg;
  cfg.phi = 1.234;
  const JointState out = dispersive_shift(in, cfg);
  EXPECT_LT((out.amplitudes() - in.amplitudes()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DispersiveShift, EvenCatIsParityEigenstate) {
  const HilbertSpec spec = HilbertSpec::for_amplitude(2.0);
  const Vector cat = cat_state(spec, 2.0, 0.0).amplitudes();
  const JointState out =
      dispersive_shift(JointState::product(AtomState::excited(), FieldState(cat)), ProtocolConfig{});
  EXPECT_NEAR(overlap_abs(out.amplitudes().head(spec.dim()), cat), 1.0, 1e-12);
}

TEST(BruneShift, GroundRotatesByMinusQuarterTurn) {
  const Complex a(1.3, 0.2);
  const HilbertSpec spec = HilbertSpec::for_amplitude(std::abs(a));
  ProtocolConfig cfg;
  cfg.phi = kPi / 2;
  const JointState out = brune_variant_shift(JointState::product(AtomState::ground(), coherent_state(spec, a)), cfg);
  const Vector g_part = out.amplitudes().tail(spec.dim());
  // Equal up to the global phase of the half-photon term.
  EXPECT_NEAR(overlap_abs(g_part, coherent_state(spec, Complex(0.0, -1.0) * a).amplitudes()), 1.0, 1e-9);
}

TEST(BruneShift, SwappingLevelsConjugatesFieldPhase) {
  const Complex a(0.8, 0.6);
  const HilbertSpec spec = HilbertSpec::for_amplitude(std::abs(a));
  ProtocolConfig cfg;
  cfg.phi = 0.9;
  const JointState e = brune_variant_shift(JointState::product(AtomState::excited(), coherent_state(spec, a)), cfg);
  const JointState g = brune_variant_shift(JointState::product(AtomState::ground(), coherent_state(spec, std::conj(a))), cfg);
  const Vector ev = e.amplitudes().head(spec.dim());
  const Vector gv = g.amplitudes().tail(spec.dim());
  EXPECT_LT((ev - gv.conjugate()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Resonant2Pi, SignRules) {
  const HilbertSpec spec(4);
  const JointState e1 = resonant_2pi(JointState::product(AtomState::excited(), fock_state(spec, 1)));
  EXPECT_NEAR(std::abs(e1.amplitude(Atom::Excited, 1) + 1.0), 0.0, 1e-15);
  const JointState e0 = resonant_2pi(JointState::product(AtomState::excited(), fock_state(spec, 0)));
  EXPECT_NEAR(std::abs(e0.amplitude(Atom::Excited, 0) - 1.0), 0.0, 1e-15);
  const JointState g3 = resonant_2pi(JointState::product(AtomState::ground(), fock_state(spec, 3)));
  EXPECT_NEAR(std::abs(g3.amplitude(Atom::Ground, 3) - 1.0), 0.0, 1e-15);
}

TEST(Resonant2Pi, MatchesParityOnLowSubspace) {
  const HilbertSpec spec(5);
  Vector f = Vector::Zero(5);
  f[0] = Complex(0.6, 0.0);
  f[1] = Complex(0.0, 0.8);
  const AtomState atom{{std::sqrt(0.3), 0.0}, {0.0, std::sqrt(0.7)}};
  const JointState s = JointState::product(atom, FieldState(f));
  const JointState a = resonant_2pi(s);
  const JointState b = dispersive_shift(s, ProtocolConfig{});
  EXPECT_LT((a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Resonant2Pi, RejectsHigherPhotonNumbers) {
  const HilbertSpec spec(4);
  EXPECT_THROW(resonant_2pi(JointState::product(AtomState::excited(), fock_state(spec, 2))), SubspaceError);
  EXPECT_NO_THROW(resonant_2pi(JointState::product(AtomState::ground(), fock_state(spec, 2))));
}

TEST(Detection, CorrelatedStateBranches) {
  const double alpha = 2.0;
  const HilbertSpec spec = HilbertSpec::for_amplitude(alpha);
  JointState s = JointState::product(AtomState::excited(), coherent_state(spec, alpha));
  s = dispersive_shift(ramsey_pulse(s, RamseyZone::R1, ProtocolConfig{}), ProtocolConfig{});
  const Detection det = detect_atom(s);
  EXPECT_NEAR(det.p_e, 0.5, 1e-12);
  EXPECT_NEAR(det.p_g, 0.5, 1e-12);
  EXPECT_NEAR(fidelity(det.field_after(Atom::Ground), coherent_state(spec, alpha).amplitudes()), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(det.field_after(Atom::Excited), coherent_state(spec, -alpha).amplitudes()), 1.0, 1e-12);
}

TEST(Detection, DegenerateBranch) {
  const JointState s = JointState::product(AtomState::excited(), fock_state(HilbertSpec(3), 0));
  const Detection det = detect_atom(s);
  EXPECT_DOUBLE_EQ(det.p_e + det.p_g, 1.0);
  EXPECT_THROW(det.field_after(Atom::Ground), DegenerateBranchError);
}

TEST(PrepareCat, AlphaThreeFidelity) {
  const CatPreparation prep = prepare_cat(3.0);
  const HilbertSpec spec = HilbertSpec::for_amplitude(3.0);
  ASSERT_TRUE(prep.field_g && prep.field_e);
  EXPECT_GE(fidelity(*prep.field_g, cat_state(spec, 3.0, 0.0).amplitudes()), 1.0 - 1e-9);
  EXPECT_GE(fidelity(*prep.field_e, cat_state(spec, 3.0, kPi).amplitudes()), 1.0 - 1e-9);
}

TEST(PrepareCat, BranchProbabilitiesMatchBranchNorms) {
  for (const Complex a : {Complex(0.3, 0.0), Complex(0.7, 0.5), Complex(1.5, 0.0)}) {
    const CatPreparation prep = prepare_cat(a);
    const double overlap = std::exp(-2.0 * std::norm(a));
    EXPECT_NEAR(prep.p_g, 0.5 * (1.0 + overlap), 1e-10);
    EXPECT_NEAR(prep.p_e, 0.5 * (1.0 - overlap), 1e-10);
    // Brute force: the g branch is (|a> + |-a>)/2 before normalization.
    const HilbertSpec spec = HilbertSpec::for_amplitude(std::abs(a));
    const Vector branch = 0.5 * (coherent_state(spec, a).amplitudes() + coherent_state(spec, -a).amplitudes());
    EXPECT_NEAR(prep.p_g, branch.squaredNorm(), 1e-10);
  }
}

TEST(PrepareCat, EmptyCavityGivesGround) {
  const CatPreparation prep = prepare_cat(0.0);
  EXPECT_NEAR(prep.p_g, 1.0, 1e-15);
  EXPECT_NEAR(prep.p_e, 0.0, 1e-15);
  EXPECT_FALSE(prep.field_e.has_value());
}

TEST(PrepareCat, RequiresPiShift) {
  ProtocolConfig cfg;
  cfg.phi = kPi / 2;
  EXPECT_THROW(prepare_cat(1.0, cfg), DomainError);
}

TEST(TwoAtom, ZeroDelayPerfectCorrelation) {
  const ConditionalTable t = two_atom_conditional(3.0, 0.0, DampingModel(1.0));
  EXPECT_NEAR(t.p_e2_given_e1, 1.0, 1e-6);
  EXPECT_NEAR(t.p_g2_given_g1, 1.0, 1e-6);
}

TEST(TwoAtom, MatchesClosedForm) {
  const double n = 5.0;
  for (const double t : {0.0, 0.05, 0.1, 0.3, 1.0, 3.0}) {
    const ConditionalTable table = two_atom_conditional(std::sqrt(n), t, DampingModel(1.0));
    EXPECT_NEAR(table.p_e2_given_e1, p_e2_given_e1(n, t), 1e-7) << "t=" << t;
    EXPECT_NEAR(table.p_g2_given_g1, p_g2_given_g1(n, t), 1e-7) << "t=" << t;
    EXPECT_NEAR(table.p_e2 + table.p_g2, 1.0, 1e-10);
  }
}

TEST(TwoAtom, MixtureGivesHalf) {
  // The mixture reads (1 - e^{-2|alpha|^2})/2, so one half to 1e-9 needs |alpha|^2 >= 10.
  const ConditionalTable big = two_atom_conditional(std::sqrt(11.0), 0.0, DampingModel(1.0), {},
                                                    FirstAtomField::Mixture);
  EXPECT_NEAR(big.p_e2_given_e1, 0.5, 1e-9);
  EXPECT_NEAR(big.p_e2_given_g1, 0.5, 1e-9);
  const ConditionalTable three = two_atom_conditional(3.0, 0.0, DampingModel(1.0), {}, FirstAtomField::Mixture);
  EXPECT_NEAR(three.p_e2_given_e1, 0.5 * (1.0 - std::exp(-18.0)), 1e-12);
}

TEST(TwoAtom, LongDelayGoesToZero) {
  const ConditionalTable t = two_atom_conditional(std::sqrt(5.0), 8.0, DampingModel(1.0));
  EXPECT_LT(t.p_e2_given_e1, 0.02);
}

TEST(TwoAtom, MonotoneCurve) {
  double previous = 2.0;
  for (int i = 0; i <= 20; ++i) {
    const double delay = 0.05 * i * i;
    const double p = two_atom_conditional(std::sqrt(5.0), delay, DampingModel(1.0)).p_e2_given_e1;
    EXPECT_LE(p, previous + 1e-9) << "delay=" << delay;
    previous = p;
  }
}

TEST(TwoAtom, FirstHalfIsPrepareCat) {
  const CatPreparation prep = prepare_cat(Complex(1.0, 1.0));
  const ConditionalTable t = two_atom_conditional(Complex(1.0, 1.0), 0.0, DampingModel(1.0));
  EXPECT_DOUBLE_EQ(t.p_e1, prep.p_e);
  EXPECT_DOUBLE_EQ(t.p_g1, prep.p_g);
}

TEST(TwoAtom, EmptyBranchIsNaN) {
  const ConditionalTable t = two_atom_conditional(0.0, 0.5, DampingModel(1.0));
  EXPECT_TRUE(std::isnan(t.p_e2_given_e1));
  EXPECT_NEAR(t.p_g2_given_g1, 1.0, 1e-12);
}
