#pragma once

#include <memory>
#include <vector>

#include "cqed/types.hpp"

namespace cqed {

// Oscillator eigenfunctions <x|n> = pi^{-1/4} (2^n n!)^{-1/2} H_n(x) exp(-x^2/2)
// for n = 0 .. count-1, by the normalized upward recurrence.
RealVector hermite_functions(int count, double x);

// N-point Gauss-Hermite rule for the weight exp(-x^2). `scaled_weights` holds
// w_i exp(x_i^2), so sum_i scaled_weights[i] f(x_i) approximates the
// unweighted integral of a function that decays like a Gaussian.
struct GaussHermiteRule {
  RealVector nodes;
  RealVector weights;
  RealVector scaled_weights;
};

// Golub-Welsch construction. Rules are cached per order and shared; the
// returned pointer stays valid for the life of the process.
std::shared_ptr<const GaussHermiteRule> gauss_hermite(int order);

}  // namespace cqed
