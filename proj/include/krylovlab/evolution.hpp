#pragma once

#include <string>

#include "krylovlab/inner_product.hpp"
#include "krylovlab/lanczos.hpp"

namespace klab {

/// Uniform grid on [0, t_max] with `points` samples (first sample at t = 0).
Eigen::VectorXd make_time_grid(double t_max, Eigen::Index points);

/// Amplitudes phi_n(t_k) on the Krylov chain; row n, column k.
/// The amplitudes are real for real coefficients b, and conserve
/// sum_n phi_n(t)^2 = 1 on every grid point.
struct KrylovWavefunction {
  Eigen::VectorXd times;
  Eigen::MatrixXd amplitudes;

  Eigen::Index krylov_dim() const { return amplitudes.rows(); }
};

/// Exact evolution of d/dt phi_n = b_n phi_{n-1} - b_{n+1} phi_{n+1} via the
/// eigendecomposition of the symmetric tridiagonal hopping matrix.
/// An empty b (Krylov dimension 1) gives the frozen phi_0 = 1.
KrylovWavefunction evolve_wavefunction(const std::vector<double>& b, const Eigen::VectorXd& times);

/// Fixed-step RK4 integration of the same chain, step h <= 0.1 / max b.
/// Retained as an independent cross-check of the spectral route.
KrylovWavefunction evolve_wavefunction_rk4(const std::vector<double>& b,
                                           const Eigen::VectorXd& times);

struct ComplexityCurve {
  Eigen::VectorXd times;
  Eigen::VectorXd k;
};

/// K(t) = sum_n n phi_n(t)^2.
ComplexityCurve k_complexity(const KrylovWavefunction& w);

/// C(t) = phi_0(t).
Eigen::VectorXd autocorrelation_from_wavefunction(const KrylovWavefunction& w);

/// Probability sum_n phi_n(t)^2 per grid point (should be 1 within 1e-8).
Eigen::VectorXd probability_sum(const KrylovWavefunction& w);

/// C(t) = (O|O(t)) evaluated from eigenphases of H_tilde = H / hbar_eff,
/// with the seed normalized so C(0) = 1. `eigen` decomposes H in order-one
/// units; `inner` must reference the same decomposition when microcanonical.
Eigen::VectorXcd autocorrelation_direct(const SpectralDecomposition& eigen, const DenseOperator& op,
                                        const InnerProductSpec& inner, double hbar_eff,
                                        const Eigen::VectorXd& times);

struct OtocCurve {
  Eigen::VectorXd times;
  Eigen::VectorXd values;
};

/// OTOC(t) = Tr([O(t), O] [O(t), O]^dag) / (hbar_eff^2 Tr(1)) with
/// O(t) = exp(i H t / hbar_eff) O exp(-i H t / hbar_eff).
OtocCurve otoc(const SpectralDecomposition& eigen, const DenseOperator& op, double hbar_eff,
               const Eigen::VectorXd& times);

struct ExponentFit {
  double lambda = 0.0;
  double r2 = 0.0;
  double t_begin = 0.0, t_end = 0.0;
  std::string method = "log-linear-ls";
};

/// Least squares on ln(values) over times in [t_begin, t_end]; lambda is the
/// slope. Throws when the window holds non-positive values or < 3 samples.
ExponentFit fit_exponential(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                            double t_begin, double t_end);

struct SpectralFunction {
  Eigen::VectorXd omega;
  Eigen::VectorXd values;
};

/// Discrete Fourier transform with trapezoidal weights of a real curve on a
/// uniform symmetric grid. A Hann window is applied when |C| at the grid ends
/// exceeds 1e-3. Frequencies are the DFT-natural 2 pi j / (N dt), j = 0..N/2.
SpectralFunction spectral_function(const Eigen::VectorXd& times, const Eigen::VectorXd& values);

}  // namespace klab
