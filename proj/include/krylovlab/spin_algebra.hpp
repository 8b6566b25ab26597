#pragma once

#include "krylovlab/dense_operator.hpp"

namespace klab {

/// Rescaled spin operators S_i / S on the (2S+1)-dimensional space,
/// satisfying [x, y] = i hbar_eff z (cyclic) with hbar_eff = 1/S.
struct SpinTriple {
  double spin = 0.0;
  double hbar_eff = 0.0;
  DenseOperator x_hat, y_hat, z_hat;

  Eigen::Index dim() const { return z_hat.rows(); }
};

/// Matrices in the |S, m> basis ordered by descending m, so z_hat is
/// diag(1, (S-1)/S, ..., -1).
SpinTriple build_spin_triple(double spin);

/// Throws unless 2S is a positive integer (within 1e-9).
void validate_spin(double spin);

}  // namespace klab
