#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "krylovlab/inner_product.hpp"

namespace klab {

enum class LanczosTermination {
  BreakdownZero,      // b_n fell below breakdown_tol * b_1 (Krylov space exhausted)
  MaxIterations,      // hit the requested max_n
  DimensionBound,     // hit the D^2 - D + 1 bound on the Krylov dimension
  DegreeCapExceeded,  // classical polynomial Lanczos only
};

const char* to_string(LanczosTermination t);

struct LanczosOutput {
  std::vector<double> b;  // b[0] is b_1 (paper indexing starts at b_1)
  Eigen::Index krylov_dim = 1;
  LanczosTermination termination = LanczosTermination::BreakdownZero;
  std::optional<std::vector<DenseOperator>> basis;
};

/// Lanczos recursion on operator space with the Liouvillian [H_tilde, .]:
/// the seed is normalized to (O|O) = 1, then
///   A_n = [H_tilde, O_{n-1}] - b_{n-1} O_{n-2},  b_n = sqrt((A_n|A_n)),
/// with full reorthogonalization against all prior basis elements (a second
/// pass runs when the first-pass correction is above 1e-8 relative).
/// Stops when b_n < breakdown_tol * b_1, after max_n coefficients, or at the
/// Krylov dimension bound. A non-positive norm (possible for the semidefinite
/// microcanonical form) terminates as BreakdownZero.
LanczosOutput lanczos(const DenseOperator& h_tilde, const DenseOperator& seed,
                      const InnerProductSpec& inner, Eigen::Index max_n,
                      double breakdown_tol = 1e-8, bool store_basis = false);

/// Least-squares line b_n ~ alpha n + beta over a window of coefficient
/// indices (1-based, inclusive). The optional sublinear fields hold a
/// b_n ~ prefactor * n^delta fit when fit_sublinear produced the value.
struct SlopeFit {
  double alpha = 0.0;
  double intercept = 0.0;
  int n_begin = 0, n_end = 0;
  double residual = 0.0;  // RMS deviation over the window
  std::optional<double> sublinear_delta;
  std::optional<double> sublinear_prefactor;
};

SlopeFit fit_linear_slope(const std::vector<double>& b, int n_begin, int n_end);

/// Power-law fit b_n ~ a n^delta via least squares on ln b vs ln n.
SlopeFit fit_sublinear(const std::vector<double>& b, int n_begin, int n_end);

/// Split b_n = f(n) + (-1)^n g(n) with the two-point smoothing
/// f(n) = (b_n + b_{n+1})/2, g(n) = (-1)^n (b_n - f(n)).
/// Entry k of each output corresponds to n = k + 1; sizes are b.size() - 1.
std::pair<std::vector<double>, std::vector<double>> decompose_oscillation(
    const std::vector<double>& b);

}  // namespace klab
