#include "cqed/hermite.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

namespace cqed {

RealVector hermite_functions(int count, double x) {
  RealVector psi(std::max(count, 1));
  psi[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (count > 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int n = 1; n + 1 < count; ++n) {
    psi[n + 1] = std::sqrt(2.0 / (n + 1)) * x * psi[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * psi[n - 1];
  }
  return psi.head(count);
}

namespace {

GaussHermiteRule build_rule(int order) {
  // Jacobi matrix of the orthonormal Hermite polynomials: off-diagonal sqrt(k/2).
  RealVector diag = RealVector::Zero(order);
  RealVector sub(order - 1);
  for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(0.5 * k);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);

  GaussHermiteRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(order);
  rule.scaled_weights.resize(order);
  for (int i = 0; i < order; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = std::sqrt(kPi) * v0 * v0;
    // Christoffel form of w_i exp(x_i^2): 1 / sum_k psi_k(x_i)^2, free of
    // the underflow in w_i for large |x_i|.
    const RealVector psi = hermite_functions(order, rule.nodes[i]);
    rule.scaled_weights[i] = 1.0 / psi.squaredNorm();
  }
  return rule;
}

}  // namespace

std::shared_ptr<const GaussHermiteRule> gauss_hermite(int order) {
  if (order < 2) throw DomainError("gauss_hermite: order must be >= 2");
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const GaussHermiteRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_shared<const GaussHermiteRule>(build_rule(order));
  return slot;
}

}  // namespace cqed
