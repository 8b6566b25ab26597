#pragma once

#include "krylovlab/spin_algebra.hpp"

namespace klab {

/// H = x + J z^2 built from rescaled spin-S operators; h_tilde = S * H absorbs
/// the effective Planck constant into the generator of Heisenberg evolution.
struct LmgModel {
  double spin = 0.0;
  double coupling = 0.0;
  SpinTriple ops;
  DenseOperator h, h_tilde;
};

/// Two coupled tops H = (1+c)(x1 + x2) + 4(1-c) z1 z2 on the (2s+1)^2 space.
struct FpModel {
  double spin = 0.0;
  double c = 0.0;
  SpinTriple site_ops;
  DenseOperator h, h_tilde;
};

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // unitary, column k pairs with eigenvalues[k]
  bool real = false;             // eigenvectors carry exactly zero imaginary part

  Eigen::Index dim() const { return eigenvalues.size(); }
};

LmgModel build_lmg(double spin, double coupling);

/// Requires c in [-1, 1].
FpModel build_fp(double spin, double c);

/// Dense Hermitian eigendecomposition with a deterministic phase convention:
/// each eigenvector is rotated so its first significant component is positive
/// real. Throws on non-Hermitian input.
SpectralDecomposition eigendecompose(const DenseOperator& h);

}  // namespace klab
