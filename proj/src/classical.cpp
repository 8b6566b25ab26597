#include "krylovlab/classical.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <boost/numeric/odeint.hpp>

namespace klab {

namespace odeint = boost::numeric::odeint;

double lmg_energy(const Eigen::Vector3d& s, double coupling) {
  return s[0] + coupling * s[2] * s[2];
}

double fp_energy(const Vector6d& s, double c) {
  return (1.0 + c) * (s[0] + s[3]) + 4.0 * (1.0 - c) * s[2] * s[5];
}

namespace {

template <std::size_t N, typename Rhs>
Trajectory integrate(const Eigen::Matrix<double, N, 1>& state0, Rhs rhs, double t_end,
                     Eigen::Index samples) {
  if (!(t_end >= 0.0) || samples < 2) throw std::invalid_argument("integrate: bad time range");

  using state_t = std::array<double, N>;
  state_t s;
  for (std::size_t i = 0; i < N; ++i) s[i] = state0[static_cast<Eigen::Index>(i)];

  Trajectory tr;
  tr.times = Eigen::VectorXd::LinSpaced(samples, 0.0, t_end);
  tr.states.resize(samples, static_cast<Eigen::Index>(N));
  std::vector<double> stamps(tr.times.data(), tr.times.data() + samples);

  Eigen::Index row = 0;
  const auto observer = [&](const state_t& v, double) {
    for (std::size_t i = 0; i < N; ++i) tr.states(row, static_cast<Eigen::Index>(i)) = v[i];
    ++row;
  };
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<state_t>>(1e-12, 1e-12);
  odeint::integrate_times(stepper, rhs, s, stamps.begin(), stamps.end(), 1e-4, observer);
  return tr;
}

void require_on_sphere(double r2, const char* what) {
  if (std::abs(r2 - 1.0) > 1e-12) {
    throw std::invalid_argument(std::string(what) + ": initial state is off the unit sphere");
  }
}

}  // namespace

Trajectory integrate_lmg(const Eigen::Vector3d& state0, double coupling, double t_end,
                         Eigen::Index samples) {
  require_on_sphere(state0.squaredNorm(), "integrate_lmg");
  const double j = coupling;
  const auto rhs = [j](const std::array<double, 3>& s, std::array<double, 3>& ds, double) {
    ds[0] = -2.0 * j * s[1] * s[2];
    ds[1] = -s[2] + 2.0 * j * s[0] * s[2];
    ds[2] = s[1];
  };
  return integrate<3>(state0, rhs, t_end, samples);
}

Trajectory integrate_fp(const Vector6d& state0, double c, double t_end, Eigen::Index samples) {
  require_on_sphere(state0.head<3>().squaredNorm(), "integrate_fp (site 1)");
  require_on_sphere(state0.tail<3>().squaredNorm(), "integrate_fp (site 2)");
  const double a = 1.0 + c, b = 4.0 * (1.0 - c);
  const auto rhs = [a, b](const std::array<double, 6>& s, std::array<double, 6>& ds, double) {
    ds[0] = -b * s[1] * s[5];
    ds[1] = -a * s[2] + b * s[0] * s[5];
    ds[2] = a * s[1];
    ds[3] = -b * s[4] * s[2];
    ds[4] = -a * s[5] + b * s[3] * s[2];
    ds[5] = a * s[4];
  };
  return integrate<6>(state0, rhs, t_end, samples);
}

Eigen::Matrix3d lmg_jacobian(const Eigen::Vector3d& s, double coupling) {
  const double j = coupling;
  Eigen::Matrix3d m;
  m << 0.0, -2.0 * j * s[2], -2.0 * j * s[1],
       2.0 * j * s[2], 0.0, 2.0 * j * s[0] - 1.0,
       0.0, 1.0, 0.0;
  return m;
}

Eigen::Matrix<double, 6, 6> fp_jacobian(const Vector6d& s, double c) {
  const double a = 1.0 + c, b = 4.0 * (1.0 - c);
  Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
  // site 1 rows
  m(0, 1) = -b * s[5];
  m(0, 5) = -b * s[1];
  m(1, 0) = b * s[5];
  m(1, 2) = -a;
  m(1, 5) = b * s[0];
  m(2, 1) = a;
  // site 2 rows
  m(3, 4) = -b * s[2];
  m(3, 2) = -b * s[4];
  m(4, 3) = b * s[2];
  m(4, 5) = -a;
  m(4, 2) = b * s[3];
  m(5, 4) = a;
  return m;
}

namespace {

template <typename Mat>
SaddlePoint classify(const Eigen::VectorXd& coords, const Mat& jac) {
  SaddlePoint p;
  p.coords = coords;
  Eigen::EigenSolver<Eigen::MatrixXd> es(jac, false);
  Eigen::VectorXcd ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + ev.size(), [](const auto& l, const auto& r) {
    if (l.real() != r.real()) return l.real() < r.real();
    return l.imag() < r.imag();
  });
  p.jacobian_eigenvalues = ev;
  double max_re = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) max_re = std::max(max_re, ev[i].real());
  p.omega_saddle = max_re > 1e-12 ? max_re : 0.0;
  return p;
}

}  // namespace

std::vector<SaddlePoint> find_saddles_lmg(double coupling) {
  if (!std::isfinite(coupling)) throw std::invalid_argument("find_saddles_lmg: bad coupling");
  std::vector<SaddlePoint> out;
  const auto add = [&](double x, double y, double z) {
    Eigen::Vector3d s(x, y, z);
    out.push_back(classify(Eigen::VectorXd(s), Eigen::MatrixXd(lmg_jacobian(s, coupling))));
  };
  add(1.0, 0.0, 0.0);
  add(-1.0, 0.0, 0.0);
  if (std::abs(coupling) >= 0.5) {
    const double x = 1.0 / (2.0 * coupling);
    const double z = std::sqrt(std::max(0.0, 1.0 - x * x));
    add(x, 0.0, z);
    add(x, 0.0, -z);
  }
  return out;
}

std::vector<SaddlePoint> find_saddles_fp(double c) {
  if (!std::isfinite(c) || c < -1.0 || c > 1.0) {
    throw std::invalid_argument("find_saddles_fp: coupling c must lie in [-1, 1]");
  }
  std::vector<SaddlePoint> out;
  for (const double x : {1.0, -1.0}) {
    Vector6d s;
    s << x, 0.0, 0.0, x, 0.0, 0.0;
    out.push_back(classify(Eigen::VectorXd(s), Eigen::MatrixXd(fp_jacobian(s, c))));
  }
  return out;
}

}  // namespace klab
