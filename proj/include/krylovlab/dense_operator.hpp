#pragma once

#include <complex>
#include <Eigen/Dense>

namespace klab {

using Complex = std::complex<double>;

/// Dense complex matrix acting on a D-dimensional Hilbert space.
using DenseOperator = Eigen::MatrixXcd;

/// max |A - A^dag| <= tol * max|A| (an all-zero matrix counts as Hermitian).
bool is_hermitian(const DenseOperator& a, double tol = 1e-12);

/// True when every imaginary part is exactly zero. Operators assembled from
/// real data keep exact zeros through sums and products, so this picks the
/// real fast paths without any tolerance guesswork.
bool is_exactly_real(const DenseOperator& a);

void require_square(const DenseOperator& a, const char* what);
void require_same_dim(const DenseOperator& a, const DenseOperator& b, const char* what);

/// Normalized Hilbert-Schmidt inner product Tr(A^dag B) / D.
Complex hs_inner(const DenseOperator& a, const DenseOperator& b);

/// AB - BA.
DenseOperator commutator(const DenseOperator& a, const DenseOperator& b);

/// Kronecker product, dim = dim(A) * dim(B).
DenseOperator tensor_product(const DenseOperator& a, const DenseOperator& b);

}  // namespace klab
