#pragma once

// Roots of the characteristic polynomial p(t) = sum_l a_l t^l, with
// multiplicities, and the root basis k^{j-1} lambda^k built from them.

#include <vector>

#include "refrec/scalar.hpp"
#include "refrec/sequence.hpp"

namespace refrec {

struct RootOptions {
  int max_iterations = 200;
  /// Approximations closer than this (relative) are treated as one root.
  double cluster_tol = 1e-6;
  /// Polished roots must be at least this far apart (relative).
  double distinct_tol = 1e-8;
};

struct CharacteristicRoots {
  std::vector<Complex> roots;
  std::vector<int> multiplicities;

  int degree() const;
  /// k^j lambda_l^k for j in 0..h_l-1, ordered by root then by j.
  std::vector<Sequence<Complex>> basis() const;
};

/// Aberth-Ehrlich simultaneous iteration on a_0..a_n (a_n != 0).
/// Throws NoConvergence when max_iterations is exhausted.
CharacteristicRoots characteristic_roots(const std::vector<Complex>& coeffs, RootOptions opts = {});

/// p(z) and p'(z) by Horner's rule.
Complex poly_eval(const std::vector<Complex>& coeffs, Complex z);

}  // namespace refrec
