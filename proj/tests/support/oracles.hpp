#pragma once

#include <vector>

#include "krylovlab/dense_operator.hpp"
#include "krylovlab/models.hpp"

namespace klab::oracle {

/// Brute-force Lanczos coefficients for tiny systems: the Liouvillian is
/// materialized as a D^2 x D^2 matrix, the power sequence L^j O_0 is
/// enumerated explicitly, Gram-Schmidt runs under the given form, and the
/// coefficients are read off as b_j = (q_j | L q_{j-1}). Entirely independent
/// of the production engine's eigenbasis representation.
///
/// `window`: empty = infinite temperature (norm D); otherwise microcanonical
/// eigenindices of `spec` (norm = window size).
std::vector<double> brute_force_lanczos(const DenseOperator& h_tilde, const DenseOperator& seed,
                                        const std::vector<Eigen::Index>& window,
                                        const SpectralDecomposition* spec, int max_n,
                                        double tol = 1e-10);

/// sigma* by direct numerical quadrature of dz / sqrt(-y_E^2(z)) from the
/// largest turning point to infinity (adaptive Simpson on two smooth charts).
double sigma_star_quadrature(double energy, double coupling);

/// Monte-Carlo uniform sphere average of a callable f(x, y, z).
template <typename F>
double mc_sphere_average(F&& f, int samples, unsigned seed);

/// max / min of x + J z^2 over a fine grid on the unit sphere.
std::pair<double, double> lmg_classical_range_grid(double coupling, int grid = 2000);

}  // namespace klab::oracle
