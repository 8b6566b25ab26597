#include "krylovlab/spin_algebra.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace klab {

void validate_spin(double spin) {
  const double two_s = 2.0 * spin;
  if (!(spin > 0.0) || !std::isfinite(spin) || std::abs(two_s - std::round(two_s)) > 1e-9) {
    throw std::invalid_argument("spin must be a positive half-integer, got " + std::to_string(spin));
  }
}

SpinTriple build_spin_triple(double spin) {
  validate_spin(spin);
  const auto dim = static_cast<Eigen::Index>(std::llround(2.0 * spin)) + 1;

  SpinTriple t;
  t.spin = spin;
  t.hbar_eff = 1.0 / spin;
  t.x_hat = DenseOperator::Zero(dim, dim);
  t.y_hat = DenseOperator::Zero(dim, dim);
  t.z_hat = DenseOperator::Zero(dim, dim);

  // Row/column k corresponds to m = S - k.  S+ |S,m> = sqrt(S(S+1) - m(m+1)) |S,m+1>,
  // so the only nonzero S+ entries sit on the first superdiagonal.
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double m = spin - static_cast<double>(k);
    t.z_hat(k, k) = m / spin;
    if (k > 0) {
      const double amp = std::sqrt(spin * (spin + 1.0) - m * (m + 1.0));
      t.x_hat(k - 1, k) = 0.5 * amp / spin;
      t.x_hat(k, k - 1) = 0.5 * amp / spin;
      t.y_hat(k - 1, k) = Complex(0.0, -0.5) * amp / spin;
      t.y_hat(k, k - 1) = Complex(0.0, 0.5) * amp / spin;
    }
  }
  return t;
}

}  // namespace klab
