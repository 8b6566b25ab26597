#include "krylovlab/lanczos.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace klab {

const char* to_string(LanczosTermination t) {
  switch (t) {
    case LanczosTermination::BreakdownZero: return "breakdown_zero";
    case LanczosTermination::MaxIterations: return "max_iterations";
    case LanczosTermination::DimensionBound: return "dimension_bound";
    case LanczosTermination::DegreeCapExceeded: return "degree_cap_exceeded";
  }
  return "unknown";
}

InnerProductSpec microcanonical_inner_spec(std::shared_ptr<const SpectralDecomposition> spectrum,
                                           double energy, double half_width) {
  if (!spectrum || spectrum->dim() < 1) {
    throw std::invalid_argument("microcanonical_inner_spec: missing spectral decomposition");
  }
  if (!(half_width >= 0.0) || !std::isfinite(energy)) {
    throw std::invalid_argument("microcanonical_inner_spec: bad window parameters");
  }
  InnerProductSpec spec;
  spec.kind = InnerKind::Microcanonical;
  spec.spectrum = spectrum;
  spec.energy = energy;
  spec.half_width = half_width;
  const auto& ev = spectrum->eigenvalues;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    if (std::abs(ev[k] - energy) <= half_width) spec.window_states.push_back(k);
  }
  if (spec.window_states.empty()) {
    double nearest = ev[0];
    for (Eigen::Index k = 1; k < ev.size(); ++k) {
      if (std::abs(ev[k] - energy) < std::abs(nearest - energy)) nearest = ev[k];
    }
    std::ostringstream msg;
    msg << "microcanonical_inner_spec: empty window [" << energy - half_width << ", "
        << energy + half_width << "]; nearest eigenvalue is " << nearest;
    throw std::domain_error(msg.str());
  }
  return spec;
}

namespace {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct CoreResult {
  std::vector<double> b;
  LanczosTermination termination = LanczosTermination::BreakdownZero;
  Mat<Scalar> basis;  // one column per Krylov basis element
  Eigen::Index count = 0;
};

// Lanczos iteration on a flattened vector space where the Liouvillian acts
// elementwise as multiplication by `omega`. The inner product is the scaled
// Euclidean one, (a|b) = inv_n * a.dot(b); for the window-restricted
// microcanonical representation the restriction is already baked into the
// vectors, so the same core serves both inner products.
template <typename Scalar>
CoreResult<Scalar> lanczos_core(const Eigen::VectorXd& omega, Vec<Scalar> seed, double inv_n,
                                Eigen::Index max_b, Eigen::Index bound_b, double breakdown_tol) {
  const Eigen::Index len = seed.size();
  CoreResult<Scalar> res;

  const auto form_norm = [&](const Vec<Scalar>& v) { return std::sqrt(v.squaredNorm() * inv_n); };

  const double seed_norm = form_norm(seed);
  if (!(seed_norm > 0.0)) {
    throw std::invalid_argument("lanczos: seed has zero norm under the chosen inner product");
  }
  seed /= seed_norm;

  Eigen::Index capacity = std::min<Eigen::Index>(bound_b + 1, 64);
  res.basis.resize(len, capacity);
  res.basis.col(0) = seed;
  res.count = 1;

  Vec<Scalar> cur = seed;
  Vec<Scalar> prev = Vec<Scalar>::Zero(len);
  Vec<Scalar> work(len);
  Vec<Scalar> coeff;
  double b_prev = 0.0;
  double b1 = 0.0;
  // b_1 = 0 means the seed commutes with H_tilde; anything at roundoff level
  // of the Liouvillian scale counts as zero.
  const double abs_floor = 1e-13 * (omega.size() ? omega.cwiseAbs().maxCoeff() : 0.0);

  res.termination = LanczosTermination::BreakdownZero;
  while (true) {
    if (static_cast<Eigen::Index>(res.b.size()) >= max_b) {
      res.termination = max_b < bound_b ? LanczosTermination::MaxIterations
                                        : LanczosTermination::DimensionBound;
      break;
    }

    work = omega.cast<Scalar>().cwiseProduct(cur);
    if (b_prev != 0.0) work.noalias() -= b_prev * prev;
    const double pre_norm = form_norm(work);

    // Full reorthogonalization, second pass only when the first one removed
    // a non-negligible component.
    auto basis_view = res.basis.leftCols(res.count);
    coeff.noalias() = basis_view.adjoint() * work;
    coeff *= inv_n;
    work.noalias() -= basis_view * coeff;
    if (coeff.norm() > 1e-8 * pre_norm) {
      coeff.noalias() = basis_view.adjoint() * work;
      coeff *= inv_n;
      work.noalias() -= basis_view * coeff;
    }

    const double bn = form_norm(work);
    if (res.b.empty()) {
      b1 = bn;
      if (!(b1 > abs_floor)) break;
    } else if (!(bn >= breakdown_tol * b1)) {
      break;
    }

    if (res.count == capacity) {
      capacity = std::min(bound_b + 1, capacity * 2);
      res.basis.conservativeResize(Eigen::NoChange, capacity);
    }
    res.basis.col(res.count) = work / bn;
    prev = cur;
    cur = res.basis.col(res.count);
    res.b.push_back(bn);
    b_prev = bn;
    ++res.count;
  }

  res.basis.conservativeResize(Eigen::NoChange, res.count);
  return res;
}

// Masked variant for the microcanonical inner product on full-length vectors:
// the metric reads only the window columns, while iteration and basis storage
// keep whole operators. Used when the caller wants the basis back.
template <typename Scalar>
CoreResult<Scalar> lanczos_core_masked(const Eigen::VectorXd& omega, Vec<Scalar> seed,
                                       const std::vector<Eigen::Index>& window, Eigen::Index dim,
                                       double inv_n, Eigen::Index max_b, Eigen::Index bound_b,
                                       double breakdown_tol) {
  const Eigen::Index len = seed.size();
  CoreResult<Scalar> res;

  const auto masked_dot = [&](const Vec<Scalar>& a, const Vec<Scalar>& b) {
    Scalar acc = Scalar(0);
    for (const Eigen::Index col : window) {
      acc += a.segment(col * dim, dim).dot(b.segment(col * dim, dim));
    }
    return acc * Scalar(inv_n);
  };
  const auto form_norm = [&](const Vec<Scalar>& v) {
    return std::sqrt(std::max(0.0, std::real(masked_dot(v, v))));
  };

  const double seed_norm = form_norm(seed);
  if (!(seed_norm > 0.0)) {
    throw std::invalid_argument("lanczos: seed has zero norm under the chosen inner product");
  }
  seed /= seed_norm;

  res.basis.resize(len, std::min<Eigen::Index>(bound_b + 1, 64));
  res.basis.col(0) = seed;
  res.count = 1;

  Vec<Scalar> cur = seed;
  Vec<Scalar> prev = Vec<Scalar>::Zero(len);
  Vec<Scalar> work(len);
  double b_prev = 0.0;
  double b1 = 0.0;
  const double abs_floor = 1e-13 * (omega.size() ? omega.cwiseAbs().maxCoeff() : 0.0);

  res.termination = LanczosTermination::BreakdownZero;
  while (true) {
    if (static_cast<Eigen::Index>(res.b.size()) >= max_b) {
      res.termination = max_b < bound_b ? LanczosTermination::MaxIterations
                                        : LanczosTermination::DimensionBound;
      break;
    }

    work = omega.cast<Scalar>().cwiseProduct(cur);
    if (b_prev != 0.0) work.noalias() -= b_prev * prev;
    const double pre_norm = form_norm(work);

    for (int pass = 0; pass < 2; ++pass) {
      double corr = 0.0;
      for (Eigen::Index i = 0; i < res.count; ++i) {
        const Scalar c = masked_dot(res.basis.col(i), work);
        work.noalias() -= c * res.basis.col(i);
        corr += std::norm(Complex(c));
      }
      if (std::sqrt(corr) <= 1e-8 * pre_norm) break;
    }

    const double bn = form_norm(work);
    if (res.b.empty()) {
      b1 = bn;
      if (!(b1 > abs_floor)) break;
    } else if (!(bn >= breakdown_tol * b1)) {
      break;
    }

    if (res.count == res.basis.cols()) {
      res.basis.conservativeResize(Eigen::NoChange,
                                   std::min(bound_b + 1, res.basis.cols() * 2));
    }
    res.basis.col(res.count) = work / bn;
    prev = cur;
    cur = res.basis.col(res.count);
    res.b.push_back(bn);
    b_prev = bn;
    ++res.count;
  }

  res.basis.conservativeResize(Eigen::NoChange, res.count);
  return res;
}

Eigen::VectorXd liouvillian_frequencies(const Eigen::VectorXd& evals,
                                        const std::vector<Eigen::Index>* window) {
  const Eigen::Index d = evals.size();
  if (!window) {
    Eigen::VectorXd omega(d * d);
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < d; ++i) omega[j * d + i] = evals[i] - evals[j];
    return omega;
  }
  const Eigen::Index n = static_cast<Eigen::Index>(window->size());
  Eigen::VectorXd omega(d * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double ej = evals[(*window)[j]];
    for (Eigen::Index i = 0; i < d; ++i) omega[j * d + i] = evals[i] - ej;
  }
  return omega;
}

}  // namespace

LanczosOutput lanczos(const DenseOperator& h_tilde, const DenseOperator& seed,
                      const InnerProductSpec& inner, Eigen::Index max_n, double breakdown_tol,
                      bool store_basis) {
  require_same_dim(h_tilde, seed, "lanczos");
  if (!is_hermitian(h_tilde)) throw std::invalid_argument("lanczos: H_tilde is not Hermitian");
  if (seed.cwiseAbs().maxCoeff() == 0.0) throw std::invalid_argument("lanczos: seed is zero");
  if (!(breakdown_tol > 0.0)) throw std::invalid_argument("lanczos: breakdown_tol must be > 0");
  if (max_n < 0) throw std::invalid_argument("lanczos: max_n must be >= 0");

  const Eigen::Index d = h_tilde.rows();
  const bool micro = inner.kind == InnerKind::Microcanonical;
  if (micro) {
    if (!inner.spectrum || inner.spectrum->dim() != d) {
      throw std::invalid_argument("lanczos: inner product spectrum does not match H_tilde");
    }
    if (inner.window_states.empty()) {
      throw std::invalid_argument("lanczos: microcanonical window is empty");
    }
  }

  // Work in the eigenbasis of H_tilde, where the Liouvillian is elementwise
  // multiplication by the frequency differences. The inner products are
  // basis-independent, so the coefficients are unaffected.
  const SpectralDecomposition es = eigendecompose(h_tilde);
  const bool real_path = es.real && is_exactly_real(seed);
  const Eigen::Index bound_b = d * d - d;  // K <= D^2 - D + 1
  const Eigen::Index max_b = std::min<Eigen::Index>(max_n, bound_b);
  const double inv_n = micro ? 1.0 / static_cast<double>(inner.window_count())
                             : 1.0 / static_cast<double>(d);

  LanczosOutput out;
  const auto finalize = [&](auto&& core, auto&& to_operator) {
    out.b = std::move(core.b);
    out.krylov_dim = core.count;
    out.termination = core.termination;
    if (store_basis) {
      std::vector<DenseOperator> ops;
      ops.reserve(core.count);
      for (Eigen::Index i = 0; i < core.count; ++i) ops.push_back(to_operator(core.basis.col(i)));
      out.basis = std::move(ops);
    }
  };

  if (real_path) {
    const Eigen::MatrixXd v = es.eigenvectors.real();
    const Eigen::MatrixXd m = v.transpose() * seed.real() * v;
    if (micro && !store_basis) {
      const Eigen::Index n = inner.window_count();
      Eigen::MatrixXd cols(d, n);
      for (Eigen::Index j = 0; j < n; ++j) cols.col(j) = m.col(inner.window_states[j]);
      auto core = lanczos_core<double>(liouvillian_frequencies(es.eigenvalues, &inner.window_states),
                                       Eigen::Map<const Eigen::VectorXd>(cols.data(), d * n), inv_n,
                                       max_b, bound_b, breakdown_tol);
      finalize(core, [](const auto&) { return DenseOperator(); });
    } else {
      const Eigen::VectorXd omega = liouvillian_frequencies(es.eigenvalues, nullptr);
      const Eigen::Map<const Eigen::VectorXd> flat(m.data(), d * d);
      auto core = micro ? lanczos_core_masked<double>(omega, flat, inner.window_states, d, inv_n,
                                                      max_b, bound_b, breakdown_tol)
                        : lanczos_core<double>(omega, flat, inv_n, max_b, bound_b, breakdown_tol);
      finalize(core, [&](const auto& col) {
        const Eigen::Map<const Eigen::MatrixXd> mat(col.data(), d, d);
        return DenseOperator((v * mat * v.transpose()).cast<Complex>());
      });
    }
  } else {
    const Eigen::MatrixXcd& v = es.eigenvectors;
    const Eigen::MatrixXcd m = v.adjoint() * seed * v;
    if (micro && !store_basis) {
      const Eigen::Index n = inner.window_count();
      Eigen::MatrixXcd cols(d, n);
      for (Eigen::Index j = 0; j < n; ++j) cols.col(j) = m.col(inner.window_states[j]);
      auto core = lanczos_core<Complex>(liouvillian_frequencies(es.eigenvalues, &inner.window_states),
                                        Eigen::Map<const Eigen::VectorXcd>(cols.data(), d * n), inv_n,
                                        max_b, bound_b, breakdown_tol);
      finalize(core, [](const auto&) { return DenseOperator(); });
    } else {
      const Eigen::VectorXd omega = liouvillian_frequencies(es.eigenvalues, nullptr);
      const Eigen::Map<const Eigen::VectorXcd> flat(m.data(), d * d);
      auto core = micro ? lanczos_core_masked<Complex>(omega, flat, inner.window_states, d, inv_n,
                                                       max_b, bound_b, breakdown_tol)
                        : lanczos_core<Complex>(omega, flat, inv_n, max_b, bound_b, breakdown_tol);
      finalize(core, [&](const auto& col) {
        const Eigen::Map<const Eigen::MatrixXcd> mat(col.data(), d, d);
        return DenseOperator(v * mat * v.adjoint());
      });
    }
  }
  return out;
}

namespace {

void check_window(std::size_t size, int n_begin, int n_end, const char* what) {
  if (n_begin < 1 || n_end > static_cast<int>(size) || n_end - n_begin + 1 < 3) {
    throw std::invalid_argument(std::string(what) + ": window [" + std::to_string(n_begin) + ", " +
                                std::to_string(n_end) + "] is degenerate for " +
                                std::to_string(size) + " coefficients");
  }
}

}  // namespace

SlopeFit fit_linear_slope(const std::vector<double>& b, int n_begin, int n_end) {
  check_window(b.size(), n_begin, n_end, "fit_linear_slope");
  const int m = n_end - n_begin + 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n = n_begin; n <= n_end; ++n) {
    const double x = n, y = b[static_cast<std::size_t>(n) - 1];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  SlopeFit fit;
  fit.n_begin = n_begin;
  fit.n_end = n_end;
  const double det = m * sxx - sx * sx;
  fit.alpha = (m * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;
  double ss = 0;
  for (int n = n_begin; n <= n_end; ++n) {
    const double r = b[static_cast<std::size_t>(n) - 1] - (fit.alpha * n + fit.intercept);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

SlopeFit fit_sublinear(const std::vector<double>& b, int n_begin, int n_end) {
  check_window(b.size(), n_begin, n_end, "fit_sublinear");
  const int m = n_end - n_begin + 1;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n = n_begin; n <= n_end; ++n) {
    const double y = b[static_cast<std::size_t>(n) - 1];
    if (!(y > 0.0)) throw std::invalid_argument("fit_sublinear: non-positive coefficient in window");
    const double lx = std::log(static_cast<double>(n)), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  SlopeFit fit;
  fit.n_begin = n_begin;
  fit.n_end = n_end;
  const double det = m * sxx - sx * sx;
  const double delta = (m * sxy - sx * sy) / det;
  const double ln_a = (sy * sxx - sx * sxy) / det;
  fit.sublinear_delta = delta;
  fit.sublinear_prefactor = std::exp(ln_a);
  double ss = 0;
  for (int n = n_begin; n <= n_end; ++n) {
    const double r = b[static_cast<std::size_t>(n) - 1] -
                     *fit.sublinear_prefactor * std::pow(static_cast<double>(n), delta);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

std::pair<std::vector<double>, std::vector<double>> decompose_oscillation(
    const std::vector<double>& b) {
  if (b.size() < 4) throw std::invalid_argument("decompose_oscillation: need at least 4 coefficients");
  std::vector<double> f(b.size() - 1), g(b.size() - 1);
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    const int n = static_cast<int>(k) + 1;  // b[k] is b_n
    f[k] = 0.5 * (b[k] + b[k + 1]);
    g[k] = (n % 2 == 0 ? 1.0 : -1.0) * (b[k] - f[k]);
  }
  return {std::move(f), std::move(g)};
}

}  // namespace klab
