#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace klab::oracle {

namespace {

Eigen::MatrixXcd liouvillian_matrix(const DenseOperator& h_tilde) {
  const Eigen::Index d = h_tilde.rows();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d * d, d * d);
  // column-major vec: [H, A] = (I (x) H - H^T (x) I) vec(A)
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index k = 0; k < d; ++k) {
        m(j * d + i, j * d + k) += h_tilde(i, k);  // (HA)(i,j) from A(k,j)
        m(j * d + i, k * d + i) -= h_tilde(k, j);  // (AH)(i,j) from A(i,k)
      }
    }
  }
  return m;
}

}  // namespace

std::vector<double> brute_force_lanczos(const DenseOperator& h_tilde, const DenseOperator& seed,
                                        const std::vector<Eigen::Index>& window,
                                        const SpectralDecomposition* spec, int max_n, double tol) {
  const Eigen::Index d = h_tilde.rows();
  const Eigen::Index len = d * d;
  const Eigen::MatrixXcd liou = liouvillian_matrix(h_tilde);

  // form matrix G: infinite temperature G = I/D; microcanonical
  // G = (P^T (x) I)/N with P the projector onto the window eigenstates
  Eigen::MatrixXcd g;
  if (window.empty()) {
    g = Eigen::MatrixXcd::Identity(len, len) / static_cast<double>(d);
  } else {
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
    for (const auto k : window) {
      p += spec->eigenvectors.col(k) * spec->eigenvectors.col(k).adjoint();
    }
    g = Eigen::MatrixXcd::Zero(len, len);
    const Eigen::MatrixXcd pt = p.transpose();
    for (Eigen::Index bj = 0; bj < d; ++bj)
      for (Eigen::Index bi = 0; bi < d; ++bi)
        for (Eigen::Index k = 0; k < d; ++k)
          g(bi * d + k, bj * d + k) += pt(bi, bj) / static_cast<double>(window.size());
  }
  const auto form = [&](const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
    return Complex(a.adjoint() * g * b);
  };

  // explicit power sequence, normalized per step to keep the scales tame
  std::vector<Eigen::VectorXcd> krylov;
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(seed.data(), len);
  for (int j = 0; j <= max_n; ++j) {
    krylov.push_back(v);
    v = liou * v;
    const double scale = v.norm();
    if (scale == 0.0) break;
    v /= scale;
  }

  // two-pass Gram-Schmidt under the form
  std::vector<Eigen::VectorXcd> q;
  for (const auto& kv : krylov) {
    Eigen::VectorXcd w = kv;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& qi : q) w -= form(qi, w) * qi;
    }
    const double norm = std::sqrt(std::max(0.0, std::real(form(w, w))));
    const double ref = std::sqrt(std::max(0.0, std::real(form(kv, kv))));
    if (norm <= tol * std::max(1.0, ref)) break;  // Krylov space exhausted
    q.push_back(w / norm);
  }

  std::vector<double> b;
  for (std::size_t j = 1; j < q.size(); ++j) {
    b.push_back(std::real(form(q[j], liou * q[j - 1])));
  }
  return b;
}

namespace {

template <typename F>
double simpson_adaptive(F&& f, double a, double b, double tol, int depth = 24) {
  struct Helper {
    double operator()(F& f, double a, double m, double b, double fa, double fm, double fb,
                      double whole, double tol, int depth) const {
      const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
      const double flm = f(lm), frm = f(rm);
      const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
      }
      return (*this)(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             (*this)(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Helper{}(f, a, m, b, fa, fm, fb, whole, tol, depth);
}

}  // namespace

double sigma_star_quadrature(double energy, double coupling) {
  const double j = coupling;
  const double disc = 4.0 * j * j - 4.0 * energy * j + 1.0;
  if (disc < 0.0) throw std::domain_error("sigma_star_quadrature: outside the classical range");
  const double root = std::sqrt(disc);
  const double rp = ((2.0 * j * energy - 1.0) + root) / (2.0 * j * j);
  const double rm = ((2.0 * j * energy - 1.0) - root) / (2.0 * j * j);
  if (!(rp > 0.0)) throw std::domain_error("sigma_star_quadrature: no real turning point");
  const double z0 = std::sqrt(rp);

  // chart 1: z = z0 + s^2 soaks up the 1/sqrt(z - z0) endpoint
  const double s_max = 1.0;
  const auto f1 = [&](double s) {
    const double z = z0 + s * s;
    return 2.0 / std::sqrt(j * j * (z + z0) * (z * z - rm));
  };
  // chart 2: z = 1/u covers the tail out to infinity
  const double z_split = z0 + s_max * s_max;
  const auto f2 = [&](double u) {
    return 1.0 / std::sqrt(j * j * (1.0 - rp * u * u) * (1.0 - rm * u * u));
  };
  return simpson_adaptive(f1, 0.0, s_max, 1e-12) +
         simpson_adaptive(f2, 0.0, 1.0 / z_split, 1e-12);
}

std::pair<double, double> lmg_classical_range_grid(double coupling, int grid) {
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i <= grid; ++i) {
    const double z = -1.0 + 2.0 * static_cast<double>(i) / grid;
    const double x = std::sqrt(std::max(0.0, 1.0 - z * z));
    for (const double sx : {-1.0, 1.0}) {
      const double e = sx * x + coupling * z * z;
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  }
  return {lo, hi};
}

}  // namespace klab::oracle
