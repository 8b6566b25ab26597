#pragma once

#include <vector>

#include <Eigen/Dense>

namespace klab {

using Vector6d = Eigen::Matrix<double, 6, 1>;

/// Sampled phase-space trajectory; states has one row per time, 3 columns
/// (x, y, z) for the single top or 6 (x1, y1, z1, x2, y2, z2) for two.
struct Trajectory {
  Eigen::VectorXd times;
  Eigen::MatrixXd states;
};

double lmg_energy(const Eigen::Vector3d& s, double coupling);
double fp_energy(const Vector6d& s, double c);

/// dx/dt = -2J y z, dy/dt = -z + 2J x z, dz/dt = y, integrated with an
/// adaptive embedded Runge-Kutta pair at 1e-12 tolerances. No per-step
/// renormalization: sphere-constraint drift stays observable as a diagnostic.
/// Throws when state0 is off the unit sphere by more than 1e-12.
Trajectory integrate_lmg(const Eigen::Vector3d& state0, double coupling, double t_end,
                         Eigen::Index samples = 1001);

/// Two coupled tops: dx1/dt = -4(1-c) y1 z2, dy1/dt = -(1+c) z1 + 4(1-c) x1 z2,
/// dz1/dt = (1+c) y1, and the same with sites swapped.
Trajectory integrate_fp(const Vector6d& state0, double c, double t_end,
                        Eigen::Index samples = 1001);

struct SaddlePoint {
  Eigen::VectorXd coords;
  Eigen::VectorXcd jacobian_eigenvalues;  // sorted by (re, im)
  double omega_saddle = 0.0;              // largest real part, 0 if none
};

/// Fixed points of the LMG flow: (+-1, 0, 0) always, plus
/// (1/2J, 0, +-sqrt(1 - 1/4J^2)) when |J| >= 1/2.
std::vector<SaddlePoint> find_saddles_lmg(double coupling);

/// The two aligned fixed points (+-1,0,0)x(+-1,0,0) of the FP flow. The
/// continuous gamma-family of neutrally stable fixed points is not
/// enumerated here (CLI reports describe it).
std::vector<SaddlePoint> find_saddles_fp(double c);

Eigen::Matrix3d lmg_jacobian(const Eigen::Vector3d& s, double coupling);
Eigen::Matrix<double, 6, 6> fp_jacobian(const Vector6d& s, double c);

}  // namespace klab
