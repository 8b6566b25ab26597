#include "krylovlab/dense_operator.hpp"

#include <stdexcept>
#include <string>

namespace klab {

bool is_hermitian(const DenseOperator& a, double tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  const double dev = (a - a.adjoint()).cwiseAbs().maxCoeff();
  return dev <= tol * scale;
}

bool is_exactly_real(const DenseOperator& a) {
  return (a.imag().array() == 0.0).all();
}

void require_square(const DenseOperator& a, const char* what) {
  if (a.rows() < 1 || a.rows() != a.cols()) {
    throw std::invalid_argument(std::string(what) + ": operator must be a square matrix of dim >= 1");
  }
}

void require_same_dim(const DenseOperator& a, const DenseOperator& b, const char* what) {
  require_square(a, what);
  require_square(b, what);
  if (a.rows() != b.rows()) {
    throw std::invalid_argument(std::string(what) + ": operator dimensions differ (" +
                                std::to_string(a.rows()) + " vs " + std::to_string(b.rows()) + ")");
  }
}

Complex hs_inner(const DenseOperator& a, const DenseOperator& b) {
  require_same_dim(a, b, "hs_inner");
  return (a.adjoint() * b).trace() / static_cast<double>(a.rows());
}

DenseOperator commutator(const DenseOperator& a, const DenseOperator& b) {
  require_same_dim(a, b, "commutator");
  return a * b - b * a;
}

DenseOperator tensor_product(const DenseOperator& a, const DenseOperator& b) {
  const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
  DenseOperator out(ra * rb, ca * cb);
  for (Eigen::Index i = 0; i < ra; ++i)
    for (Eigen::Index j = 0; j < ca; ++j) out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
  return out;
}

}  // namespace klab
