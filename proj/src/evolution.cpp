#include "krylovlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace klab {

Eigen::VectorXd make_time_grid(double t_max, Eigen::Index points) {
  if (!(t_max >= 0.0) || points < 1) throw std::invalid_argument("make_time_grid: bad grid");
  return Eigen::VectorXd::LinSpaced(points, 0.0, t_max);
}

namespace {

void check_times(const Eigen::VectorXd& times) {
  if (times.size() < 1 || times[0] != 0.0) {
    throw std::invalid_argument("evolve_wavefunction: time grid must start at 0");
  }
}

}  // namespace

KrylovWavefunction evolve_wavefunction(const std::vector<double>& b, const Eigen::VectorXd& times) {
  check_times(times);
  const Eigen::Index dim = static_cast<Eigen::Index>(b.size()) + 1;
  const Eigen::Index nt = times.size();

  KrylovWavefunction w;
  w.times = times;
  if (dim == 1) {
    w.amplitudes = Eigen::MatrixXd::Ones(1, nt);
    return w;
  }

  // The hopping generator L (L_{n,n-1} = b_n = -L_{n-1,n}) is a diagonal
  // phase rotation away from the symmetric tridiagonal T with off-diagonals
  // b_n: exp(Lt) = D^dag exp(-iTt) D, D = diag(i^-n). With T = V Lam V^T that
  // collapses to the all-real form
  //   phi_n(t) = sum_k V_{nk} V_{0k} cos(lam_k t - n pi/2).
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  Eigen::Map<const Eigen::VectorXd> sub(b.data(), dim - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("evolve_wavefunction: tridiagonal eigensolver failed");
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();

  Eigen::MatrixXd weights = v.array().rowwise() * v.row(0).array();  // V_{nk} V_{0k}
  Eigen::MatrixXd cos_mat(dim, nt), sin_mat(dim, nt);
  for (Eigen::Index k = 0; k < nt; ++k) {
    cos_mat.col(k) = (lam.array() * times[k]).cos();
    sin_mat.col(k) = (lam.array() * times[k]).sin();
  }
  Eigen::MatrixXd mc(dim, nt), ms(dim, nt);
  mc.noalias() = weights * cos_mat;
  ms.noalias() = weights * sin_mat;

  w.amplitudes.resize(dim, nt);
  for (Eigen::Index n = 0; n < dim; ++n) {
    switch (n % 4) {  // cos(x - n pi/2) cycles through cos, sin, -cos, -sin
      case 0: w.amplitudes.row(n) = mc.row(n); break;
      case 1: w.amplitudes.row(n) = ms.row(n); break;
      case 2: w.amplitudes.row(n) = -mc.row(n); break;
      default: w.amplitudes.row(n) = -ms.row(n); break;
    }
  }
  return w;
}

KrylovWavefunction evolve_wavefunction_rk4(const std::vector<double>& b,
                                           const Eigen::VectorXd& times) {
  check_times(times);
  const Eigen::Index dim = static_cast<Eigen::Index>(b.size()) + 1;
  const Eigen::Index nt = times.size();

  KrylovWavefunction w;
  w.times = times;
  w.amplitudes.resize(dim, nt);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(dim);
  phi[0] = 1.0;
  w.amplitudes.col(0) = phi;
  if (dim == 1) {
    w.amplitudes.setOnes();
    return w;
  }

  const double b_max = *std::max_element(b.begin(), b.end());
  const double h_cap = 0.1 / std::max(b_max, 1e-300);
  const auto rhs = [&](const Eigen::VectorXd& p, Eigen::VectorXd& dp) {
    dp[0] = -b[0] * p[1];
    for (Eigen::Index n = 1; n < dim - 1; ++n) dp[n] = b[n - 1] * p[n - 1] - b[n] * p[n + 1];
    dp[dim - 1] = b[dim - 2] * p[dim - 2];
  };

  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  for (Eigen::Index j = 1; j < nt; ++j) {
    const double span = times[j] - times[j - 1];
    const auto steps = static_cast<Eigen::Index>(std::ceil(span / h_cap));
    const double h = span / static_cast<double>(steps);
    for (Eigen::Index s = 0; s < steps; ++s) {
      rhs(phi, k1);
      tmp = phi + 0.5 * h * k1;
      rhs(tmp, k2);
      tmp = phi + 0.5 * h * k2;
      rhs(tmp, k3);
      tmp = phi + h * k3;
      rhs(tmp, k4);
      phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    w.amplitudes.col(j) = phi;
  }
  return w;
}

ComplexityCurve k_complexity(const KrylovWavefunction& w) {
  ComplexityCurve c;
  c.times = w.times;
  const Eigen::VectorXd n = Eigen::VectorXd::LinSpaced(w.krylov_dim(), 0.0,
                                                       static_cast<double>(w.krylov_dim() - 1));
  c.k = (w.amplitudes.array().square().colwise() * n.array()).colwise().sum();
  return c;
}

Eigen::VectorXd autocorrelation_from_wavefunction(const KrylovWavefunction& w) {
  return w.amplitudes.row(0);
}

Eigen::VectorXd probability_sum(const KrylovWavefunction& w) {
  return w.amplitudes.array().square().colwise().sum();
}

Eigen::VectorXcd autocorrelation_direct(const SpectralDecomposition& eigen, const DenseOperator& op,
                                        const InnerProductSpec& inner, double hbar_eff,
                                        const Eigen::VectorXd& times) {
  if (!(hbar_eff > 0.0)) throw std::invalid_argument("autocorrelation_direct: hbar_eff must be > 0");
  require_square(op, "autocorrelation_direct");
  const Eigen::Index d = eigen.dim();
  if (op.rows() != d) throw std::invalid_argument("autocorrelation_direct: dimension mismatch");

  std::vector<Eigen::Index> all;
  const std::vector<Eigen::Index>* window = &inner.window_states;
  if (inner.kind == InnerKind::InfiniteTemperature) {
    all.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) all[i] = i;
    window = &all;
  } else if (inner.spectrum && inner.spectrum->dim() != d) {
    throw std::invalid_argument("autocorrelation_direct: inner product spectrum mismatch");
  }

  // In the H eigenbasis, (O|O(t)) = (1/norm) sum_{n in W, k} |M_{kn}|^2
  // e^{i (E_k - E_n) t / hbar}, already normalized so C(0) = 1.
  const Eigen::MatrixXcd m = eigen.eigenvectors.adjoint() * op * eigen.eigenvectors;
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(times.size());
  double norm0 = 0.0;
  for (const Eigen::Index n : *window) {
    for (Eigen::Index k = 0; k < d; ++k) {
      const double weight = std::norm(m(k, n));
      if (weight == 0.0) continue;
      norm0 += weight;
      const double freq = (eigen.eigenvalues[k] - eigen.eigenvalues[n]) / hbar_eff;
      for (Eigen::Index j = 0; j < times.size(); ++j) {
        const double ph = freq * times[j];
        c[j] += weight * Complex(std::cos(ph), std::sin(ph));
      }
    }
  }
  if (!(norm0 > 0.0)) {
    throw std::invalid_argument("autocorrelation_direct: seed has zero norm in the window");
  }
  return c / norm0;
}

OtocCurve otoc(const SpectralDecomposition& eigen, const DenseOperator& op, double hbar_eff,
               const Eigen::VectorXd& times) {
  if (!(hbar_eff > 0.0)) throw std::invalid_argument("otoc: hbar_eff must be > 0");
  require_square(op, "otoc");
  if (!is_hermitian(op)) throw std::invalid_argument("otoc: operator must be Hermitian");
  const Eigen::Index d = eigen.dim();
  if (op.rows() != d) throw std::invalid_argument("otoc: dimension mismatch");

  OtocCurve out;
  out.times = times;
  out.values.resize(times.size());
  const double prefactor = 1.0 / (hbar_eff * hbar_eff * static_cast<double>(d));

  Eigen::MatrixXd freq(d, d);
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i)
      freq(i, j) = (eigen.eigenvalues[i] - eigen.eigenvalues[j]) / hbar_eff;

  if (eigen.real && is_exactly_real(op)) {
    // O(t) = P + iQ with P, Q real; Tr(c c^dag) = |[P,M]|_F^2 + |[Q,M]|_F^2.
    const Eigen::MatrixXd v = eigen.eigenvectors.real();
    const Eigen::MatrixXd m = v.transpose() * op.real() * v;
    Eigen::MatrixXd p(d, d), q(d, d), cm(d, d);
    for (Eigen::Index j = 0; j < times.size(); ++j) {
      p = ((freq * times[j]).array().cos() * m.array()).matrix();
      q = ((freq * times[j]).array().sin() * m.array()).matrix();
      cm.noalias() = p * m;
      cm.noalias() -= m * p;
      double total = cm.squaredNorm();
      cm.noalias() = q * m;
      cm.noalias() -= m * q;
      total += cm.squaredNorm();
      out.values[j] = prefactor * total;
    }
  } else {
    const Eigen::MatrixXcd m = eigen.eigenvectors.adjoint() * op * eigen.eigenvectors;
    Eigen::MatrixXcd ot(d, d), cm(d, d);
    for (Eigen::Index j = 0; j < times.size(); ++j) {
      for (Eigen::Index col = 0; col < d; ++col)
        for (Eigen::Index row = 0; row < d; ++row) {
          const double ph = freq(row, col) * times[j];
          ot(row, col) = m(row, col) * Complex(std::cos(ph), std::sin(ph));
        }
      cm.noalias() = ot * m;
      cm.noalias() -= m * ot;
      out.values[j] = prefactor * cm.squaredNorm();
    }
  }
  return out;
}

ExponentFit fit_exponential(const Eigen::VectorXd& times, const Eigen::VectorXd& values,
                            double t_begin, double t_end) {
  if (times.size() != values.size()) throw std::invalid_argument("fit_exponential: size mismatch");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  Eigen::Index m = 0;
  for (Eigen::Index j = 0; j < times.size(); ++j) {
    if (times[j] < t_begin || times[j] > t_end) continue;
    if (!(values[j] > 0.0)) {
      throw std::invalid_argument("fit_exponential: non-positive value inside the fit window");
    }
    const double x = times[j], y = std::log(values[j]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
    ++m;
  }
  if (m < 3) throw std::invalid_argument("fit_exponential: fewer than 3 samples in the window");
  ExponentFit fit;
  fit.t_begin = t_begin;
  fit.t_end = t_end;
  const double det = m * sxx - sx * sx;
  fit.lambda = (m * sxy - sx * sy) / det;
  const double intercept = (sy * sxx - sx * sxy) / det;
  double ss_res = 0.0;
  const double mean_y = sy / m;
  double ss_tot = syy - m * mean_y * mean_y;
  for (Eigen::Index j = 0; j < times.size(); ++j) {
    if (times[j] < t_begin || times[j] > t_end) continue;
    const double r = std::log(values[j]) - (fit.lambda * times[j] + intercept);
    ss_res += r * r;
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

SpectralFunction spectral_function(const Eigen::VectorXd& times, const Eigen::VectorXd& values) {
  const Eigen::Index n = times.size();
  if (n < 3 || values.size() != n) throw std::invalid_argument("spectral_function: bad input curve");
  const double dt = times[1] - times[0];
  for (Eigen::Index j = 1; j < n; ++j) {
    if (std::abs(times[j] - times[j - 1] - dt) > 1e-9 * std::max(1.0, std::abs(dt))) {
      throw std::invalid_argument("spectral_function: time grid is not uniform");
    }
  }
  const double t_end = std::max(std::abs(times[0]), std::abs(times[n - 1]));

  Eigen::VectorXd weighted = values;
  const double edge = std::max(std::abs(values[0]), std::abs(values[n - 1]));
  if (edge > 1e-3) {
    for (Eigen::Index j = 0; j < n; ++j) {
      weighted[j] *= 0.5 * (1.0 + std::cos(M_PI * times[j] / t_end));
    }
  }
  weighted[0] *= 0.5;  // trapezoidal end weights
  weighted[n - 1] *= 0.5;

  SpectralFunction s;
  const Eigen::Index n_omega = n / 2 + 1;
  s.omega.resize(n_omega);
  s.values.resize(n_omega);
  const double d_omega = 2.0 * M_PI / (static_cast<double>(n) * dt);
  for (Eigen::Index k = 0; k < n_omega; ++k) {
    const double w = d_omega * static_cast<double>(k);
    double acc = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) acc += weighted[j] * std::cos(w * times[j]);
    s.omega[k] = w;
    s.values[k] = dt * acc;
  }
  return s;
}

}  // namespace klab
