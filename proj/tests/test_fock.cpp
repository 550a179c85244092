#include <gtest/gtest.h>

#include <cmath>

#include "cqed/fock.hpp"

using namespace cqed;

namespace {

// Independent Fock-series coherent amplitudes e^{-|a|^2/2} a^n / sqrt(n!), no renormalization.
Vector series(int dim, Complex a) {
  Vector v(dim);
  for (int n = 0; n < dim; ++n) {
    v[n] = std::exp(-0.5 * std::norm(a) - 0.5 * std::lgamma(n + 1.0)) * std::pow(a, n);
  }
  return v;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(HilbertSpec, RejectsDimBelowTwo) {
  EXPECT_THROW(HilbertSpec(1), DomainError);
  EXPECT_NO_THROW(HilbertSpec(2));
}

TEST(HilbertSpec, TruncationRule) {
  EXPECT_EQ(HilbertSpec::for_amplitude(3.0).dim(), 46);
  EXPECT_EQ(HilbertSpec::for_amplitude(std::sqrt(5.0)).dim(), 30);
  EXPECT_TRUE(within_truncation_guard(HilbertSpec(36), 3.0));
  EXPECT_FALSE(within_truncation_guard(HilbertSpec(35), 3.0));
}

TEST(Annihilation, TwoLevelMatrix) {
  const Matrix a = annihilation(HilbertSpec(2)).matrix();
  EXPECT_EQ(a(0, 1), Complex(1.0, 0.0));
  EXPECT_EQ(a(0, 0), Complex(0.0, 0.0));
  EXPECT_EQ(a(1, 0), Complex(0.0, 0.0));
  EXPECT_EQ(a(1, 1), Complex(0.0, 0.0));
}

TEST(Annihilation, LadderElements) {
  const Matrix a = annihilation(HilbertSpec(4)).matrix();
  EXPECT_DOUBLE_EQ(a(2, 3).real(), std::sqrt(3.0));
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (j != i + 1) {
        EXPECT_EQ(a(i, j), Complex(0.0, 0.0));
      }
    }
  }
}

TEST(Annihilation, CanonicalCommutatorBelowTruncationEdge) {
  const HilbertSpec spec(12);
  const Matrix q = quadrature_q(spec).matrix();
  const Matrix p = quadrature_p(spec).matrix();
  const Matrix c = q * p - p * q;
  const int k = spec.dim() - 1;
  EXPECT_LT(max_abs(c.topLeftCorner(k, k) - kI * Matrix::Identity(k, k)), 1e-12);
}

TEST(Displacement, ZeroIsIdentity) {
  const HilbertSpec spec(10);
  EXPECT_LT(max_abs(displacement(spec, 0.0).matrix() - Matrix::Identity(10, 10)), 1e-14);
}

TEST(Displacement, VacuumMatchesFockSeries) {
  // The truncated generator's error sits on the top level (5e-7 at |alpha| = 1
  // with the default dim), so ten levels of headroom are added.
  for (const double r : {0.5, 1.0, 1.3, 2.0, 3.0}) {
    const Complex a = std::polar(r, -0.32);
    const HilbertSpec spec(HilbertSpec::for_amplitude(r).dim() + 10);
    const Vector d0 = displacement(spec, a).matrix().col(0);
    EXPECT_LT((d0 - series(spec.dim(), a)).cwiseAbs().maxCoeff(), 1e-8) << "r=" << r;
    EXPECT_LT((d0 - coherent_state(spec, a).amplitudes()).cwiseAbs().maxCoeff(), 1e-8) << "r=" << r;
  }
}

TEST(Displacement, TruncationErrorConfinedToTopLevels) {
  const Complex a(1.0, 0.0);
  const HilbertSpec spec = HilbertSpec::for_amplitude(1.0);
  const Vector diff = displacement(spec, a).matrix().col(0) - series(spec.dim(), a);
  EXPECT_LT(diff.head(spec.dim() - 4).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Displacement, InverseAndUnitarity) {
  const HilbertSpec spec(40);
  const Complex a(1.2, 0.9);
  const Matrix d = displacement(spec, a).matrix();
  const Matrix dm = displacement(spec, -a).matrix();
  EXPECT_LT(max_abs(d * dm - Matrix::Identity(40, 40)), 1e-8);
  EXPECT_LT(max_abs(d.adjoint() * d - Matrix::Identity(40, 40)), 1e-8);
}

TEST(Displacement, GuardRaisesTruncationError) {
  EXPECT_THROW(displacement(HilbertSpec(10), 2.0), TruncationError);
  EXPECT_THROW(coherent_state(HilbertSpec(10), Complex(0.0, 1.7)), TruncationError);
}

TEST(Displacement, CompositionPhase) {
  // Compared on low Fock columns, away from the truncation edge.
  const HilbertSpec spec(80);
  const Complex a(0.8, 0.3);
  const Complex b(-0.4, 0.9);
  const Matrix lhs = displacement(spec, a).matrix() * displacement(spec, b).matrix();
  const Matrix rhs = std::polar(1.0, std::imag(a * std::conj(b))) * displacement(spec, a + b).matrix();
  EXPECT_LT(max_abs((lhs - rhs).topLeftCorner(20, 20)), 1e-7);
}

TEST(Displacement, ParityConjugation) {
  const HilbertSpec spec(40);
  const Complex a(1.0, -0.5);
  const Matrix p = parity(spec).matrix();
  EXPECT_LT(max_abs(p * displacement(spec, a).matrix() * p - displacement(spec, -a).matrix()), 1e-8);
}

TEST(Displacement, VectorActionMatchesDenseExponential) {
  const HilbertSpec spec(60);
  const Complex a(1.3, 0.4);
  Matrix v = Matrix::Zero(60, 3);
  v(0, 0) = 1.0;
  v(1, 1) = 1.0;
  v(2, 2) = std::sqrt(0.5);
  v(4, 2) = Complex(0.0, std::sqrt(0.5));
  const Matrix dense = displacement(spec, a).matrix() * v;
  EXPECT_LT(max_abs(apply_displacement(spec, a, v) - dense), 1e-12);
}

TEST(CoherentState, ZeroIsVacuum) {
  const FieldState s = coherent_state(HilbertSpec(6), 0.0);
  EXPECT_DOUBLE_EQ(std::abs(s.amplitudes()[0]), 1.0);
  EXPECT_DOUBLE_EQ(s.amplitudes().tail(5).norm(), 0.0);
}

TEST(CoherentState, MeanPhotonNumber) {
  for (const Complex a : {Complex(1.0, 0.0), Complex(0.5, 1.5), Complex(-2.0, 1.0)}) {
    const FieldState s = coherent_state(HilbertSpec::for_amplitude(std::abs(a)), a);
    EXPECT_NEAR(s.mean_photon_number(), std::norm(a), 1e-8);
    EXPECT_LT(s.truncation_correction(), 1e-8);
  }
}

TEST(CoherentState, OverlapMatchesSeries) {
  const Complex a(1.0, 0.4);
  const Complex b(-0.3, 1.1);
  const HilbertSpec spec(40);
  const Complex brute = series(40, b).dot(series(40, a));
  const Complex analytic = std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(b) * a);
  const Complex got = coherent_state(spec, b).overlap(coherent_state(spec, a));
  EXPECT_LT(std::abs(got - brute), 1e-10);
  EXPECT_LT(std::abs(got - analytic), 1e-10);
}

TEST(CoherentState, TruncationConvergence) {
  const Complex a(1.5, -1.0);
  const int base = HilbertSpec::for_amplitude(std::abs(a)).dim();
  const Vector small = coherent_state(HilbertSpec(base), a).amplitudes();
  const Vector big = coherent_state(HilbertSpec(base + 30), a).amplitudes();
  EXPECT_LT((big.head(base) - small).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(FockState, Basics) {
  const FieldState one = fock_state(HilbertSpec(8), 1);
  EXPECT_EQ(one.amplitudes()[1], Complex(1.0, 0.0));
  EXPECT_DOUBLE_EQ(one.amplitudes().norm(), 1.0);
  EXPECT_DOUBLE_EQ(fock_state(HilbertSpec(8), 5).mean_photon_number(), 5.0);
  EXPECT_EQ(fock_state(HilbertSpec(8), 0).amplitudes()[0], Complex(1.0, 0.0));
  EXPECT_THROW(fock_state(HilbertSpec(8), 8), IndexError);
  EXPECT_THROW(fock_state(HilbertSpec(8), -1), IndexError);
}

TEST(Parity, DiagonalAndInvolution) {
  const Matrix p3 = parity(HilbertSpec(3)).matrix();
  EXPECT_EQ(p3(0, 0), Complex(1.0, 0.0));
  EXPECT_EQ(p3(1, 1), Complex(-1.0, 0.0));
  EXPECT_EQ(p3(2, 2), Complex(1.0, 0.0));
  const Matrix p = parity(HilbertSpec(9)).matrix();
  EXPECT_LT(max_abs(p * p - Matrix::Identity(9, 9)), 1e-15);
}

TEST(Parity, FlipsQuadratures) {
  const HilbertSpec spec(10);
  const Matrix p = parity(spec).matrix();
  EXPECT_LT(max_abs(p * quadrature_q(spec).matrix() * p + quadrature_q(spec).matrix()), 1e-12);
  EXPECT_LT(max_abs(p * quadrature_p(spec).matrix() * p + quadrature_p(spec).matrix()), 1e-12);
}

TEST(Parity, ReflectsCoherentState) {
  const Complex a(1.4, 0.6);
  const HilbertSpec spec = HilbertSpec::for_amplitude(std::abs(a));
  const Vector flipped = parity(spec).matrix() * coherent_state(spec, a).amplitudes();
  EXPECT_LT((flipped - coherent_state(spec, -a).amplitudes()).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(CatState, ZeroAmplitudeEvenCatIsVacuum) {
  EXPECT_DOUBLE_EQ(cat_normalization(0.0, 0.0), 2.0);
  const FieldState c = cat_state(HilbertSpec(6), 0.0, 0.0);
  EXPECT_NEAR(std::abs(c.amplitudes()[0]), 1.0, 1e-15);
}

TEST(CatState, NormalizationMatchesBruteForce) {
  const HilbertSpec spec = HilbertSpec::for_amplitude(1.0);
  const double n1 = cat_normalization(1.0, 0.0);
  EXPECT_NEAR(n1, std::sqrt(2.0 * (1.0 + std::exp(-2.0))), 1e-15);
  const Vector sum = series(spec.dim(), 1.0) + series(spec.dim(), -1.0);
  EXPECT_NEAR(sum.norm(), n1, 1e-10);
  EXPECT_NEAR(cat_state(spec, 1.0, 0.0).amplitudes().norm(), 1.0, 1e-10);
}

TEST(CatState, ParitySupport) {
  const HilbertSpec spec = HilbertSpec::for_amplitude(2.0);
  const Vector even = cat_state(spec, 2.0, 0.0).amplitudes();
  const Vector odd = cat_state(spec, 2.0, kPi).amplitudes();
  for (int n = 0; n < spec.dim(); ++n) {
    EXPECT_LT(std::abs(n % 2 == 1 ? even[n] : odd[n]), 1e-15);
  }
}

TEST(CatState, DegenerateOddCatAtZero) {
  EXPECT_THROW(cat_state(HilbertSpec(6), 0.0, kPi), DegenerateStateError);
  EXPECT_THROW(cat_state(HilbertSpec(6), 1e-8, kPi), DegenerateStateError);
}

TEST(DensityOperator, PureVacuum) {
  const DensityOperator rho = pure_to_density(fock_state(HilbertSpec(4), 0));
  EXPECT_EQ(rho.matrix()(0, 0), Complex(1.0, 0.0));
  EXPECT_DOUBLE_EQ(rho.matrix().cwiseAbs().sum(), 1.0);
  EXPECT_NEAR(rho.purity(), 1.0, 1e-15);
}

TEST(DensityOperator, InvariantChecks) {
  Matrix m = Matrix::Zero(3, 3);
  m(0, 0) = 0.5;
  m(1, 1) = 0.4;
  EXPECT_THROW(DensityOperator{m}, InvariantError);  // trace
  m(2, 2) = 0.1;
  m(0, 1) = Complex(0.0, 0.1);
  EXPECT_THROW(DensityOperator{m}, InvariantError);  // hermiticity
  m(1, 0) = Complex(0.0, -0.1);
  EXPECT_NO_THROW(DensityOperator{m});
  Matrix neg = Matrix::Zero(2, 2);
  neg(0, 0) = 1.2;
  neg(1, 1) = -0.2;
  EXPECT_THROW(DensityOperator{neg}, InvariantError);  // positivity
}

TEST(Mix, FiftyFiftyMixtureAtThree) {
  const HilbertSpec spec = HilbertSpec::for_amplitude(3.0);
  const std::pair<FieldState, double> halves[] = {{coherent_state(spec, 3.0), 0.5}, {coherent_state(spec, -3.0), 0.5}};
  const DensityOperator rho = mix(halves);
  const Vector p = coherent_state(spec, 3.0).amplitudes();
  const Vector m = coherent_state(spec, -3.0).amplitudes();
  const Matrix direct = 0.5 * (p * p.adjoint() + m * m.adjoint());
  EXPECT_LT(max_abs(rho.matrix() - direct), 1e-15);
  // Tr(rho^2) = (1 + |<3|-3>|^2) / 2.
  EXPECT_NEAR(rho.purity(), 0.5 * (1.0 + std::exp(-4.0 * 9.0)), 1e-12);
  EXPECT_NEAR(rho.purity(), (direct * direct).trace().real(), 1e-12);
}

TEST(Mix, WeightValidation) {
  const HilbertSpec spec(4);
  const std::pair<FieldState, double> bad_sum[] = {{fock_state(spec, 0), 0.5}, {fock_state(spec, 1), 0.6}};
  EXPECT_THROW(mix(bad_sum), WeightError);
  const std::pair<FieldState, double> negative[] = {{fock_state(spec, 0), 1.5}, {fock_state(spec, 1), -0.5}};
  EXPECT_THROW(mix(negative), WeightError);
}
