#include "krylovlab/models.hpp"

#include <cmath>
#include <stdexcept>

namespace klab {

LmgModel build_lmg(double spin, double coupling) {
  if (!std::isfinite(coupling)) throw std::invalid_argument("build_lmg: coupling must be finite");
  LmgModel m;
  m.spin = spin;
  m.coupling = coupling;
  m.ops = build_spin_triple(spin);
  m.h = m.ops.x_hat + coupling * (m.ops.z_hat * m.ops.z_hat);
  m.h_tilde = spin * m.h;
  return m;
}

FpModel build_fp(double spin, double c) {
  if (!std::isfinite(c) || c < -1.0 || c > 1.0) {
    throw std::invalid_argument("build_fp: coupling c must lie in [-1, 1]");
  }
  FpModel m;
  m.spin = spin;
  m.c = c;
  m.site_ops = build_spin_triple(spin);
  const Eigen::Index d = m.site_ops.dim();
  const DenseOperator eye = DenseOperator::Identity(d, d);
  const DenseOperator x1 = tensor_product(m.site_ops.x_hat, eye);
  const DenseOperator x2 = tensor_product(eye, m.site_ops.x_hat);
  const DenseOperator z1z2 = tensor_product(m.site_ops.z_hat, m.site_ops.z_hat);
  m.h = (1.0 + c) * (x1 + x2) + 4.0 * (1.0 - c) * z1z2;
  m.h_tilde = spin * m.h;
  return m;
}

namespace {

// First component with |v_i| above a fixed fraction of the peak; rotating it
// to the positive real axis pins the otherwise arbitrary eigenvector phase.
template <typename Vec>
Eigen::Index first_significant(const Vec& v) {
  const double peak = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-3 * peak) return i;
  }
  return 0;
}

}  // namespace

SpectralDecomposition eigendecompose(const DenseOperator& h) {
  require_square(h, "eigendecompose");
  if (!is_hermitian(h)) throw std::invalid_argument("eigendecompose: operator is not Hermitian");

  SpectralDecomposition out;
  if (is_exactly_real(h)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.real());
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");
    Eigen::MatrixXd v = es.eigenvectors();
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
      if (v(first_significant(v.col(k)), k) < 0.0) v.col(k) = -v.col(k);
    }
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = v.cast<Complex>();
    out.real = true;
  } else {
    Eigen::SelfAdjointEigenSolver<DenseOperator> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecompose: solver failed");
    DenseOperator v = es.eigenvectors();
    for (Eigen::Index k = 0; k < v.cols(); ++k) {
      const Complex pivot = v(first_significant(v.col(k)), k);
      const double mag = std::abs(pivot);
      if (mag > 0.0) v.col(k) *= std::conj(pivot) / mag;
    }
    out.eigenvalues = es.eigenvalues();
    out.eigenvectors = v;
    out.real = false;
  }
  return out;
}

}  // namespace klab
