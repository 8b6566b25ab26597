#include "krylovlab/classical_alpha.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace klab {

double elliptic_K(double m) {
  if (!(m < 1.0)) {
    std::ostringstream msg;
    msg << "elliptic_K: parameter m = " << m << " is outside (-inf, 1)";
    throw std::domain_error(msg.str());
  }
  if (m < 0.0) return elliptic_K(m / (m - 1.0)) / std::sqrt(1.0 - m);
  double a = 1.0;
  double g = std::sqrt(1.0 - m);
  for (int it = 0; it < 64 && std::abs(a - g) > 4e-16 * a; ++it) {
    const double an = 0.5 * (a + g);
    g = std::sqrt(a * g);
    a = an;
  }
  return M_PI / (2.0 * a);
}

namespace {

void validate_coupling(double coupling) {
  if (!(coupling > 0.0) || !std::isfinite(coupling)) {
    throw std::domain_error("alpha(E): coupling J must be positive and finite");
  }
}

}  // namespace

double classical_energy_min(double coupling) {
  validate_coupling(coupling);
  return -1.0;
}

double classical_energy_max(double coupling) {
  validate_coupling(coupling);
  return coupling >= 0.5 ? coupling + 0.25 / coupling : 1.0;
}

double sigma_star(double energy, double coupling) {
  validate_coupling(coupling);
  const double lo = classical_energy_min(coupling);
  const double hi = classical_energy_max(coupling);
  if (!(energy > lo && energy < hi)) {
    std::ostringstream msg;
    msg << "sigma_star: energy " << energy << " is outside the classical range (" << lo << ", "
        << hi << ") for J = " << coupling;
    throw std::domain_error(msg.str());
  }
  const double j = coupling;
  const double disc = 4.0 * j * j - 4.0 * energy * j + 1.0;  // zero only at E = E_max
  const double root = std::sqrt(std::max(0.0, disc));
  const double den = root + 2.0 * energy * j - 1.0;  // positive strictly inside the range
  // The elliptic parameter is generically negative here: the denominator
  // 1 - 2EJ - root is < 0 for most of the range, so the m < 0 branch of
  // elliptic_K is the common path, not an edge case.
  const double m = (1.0 - 2.0 * energy * j + root) / (1.0 - 2.0 * energy * j - root);
  return std::sqrt(2.0) * elliptic_K(m) / std::sqrt(den);
}

double alpha_of_E(double energy, double coupling) {
  return M_PI / (4.0 * sigma_star(energy, coupling));
}

SupAlpha sup_alpha(double coupling) {
  validate_coupling(coupling);
  const double margin = 1e-6;
  const double lo = classical_energy_min(coupling) + margin;
  const double hi = classical_energy_max(coupling) - margin;

  // Coarse scan guards against multimodality, golden section then refines.
  const int grid = 512;
  double best_e = lo, best_a = -1.0;
  for (int i = 0; i <= grid; ++i) {
    const double e = lo + (hi - lo) * static_cast<double>(i) / grid;
    const double a = alpha_of_E(e, coupling);
    if (a > best_a) {
      best_a = a;
      best_e = e;
    }
  }
  const double cell = (hi - lo) / grid;
  double a_lo = std::max(lo, best_e - 2.0 * cell);
  double b_hi = std::min(hi, best_e + 2.0 * cell);
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b_hi - inv_phi * (b_hi - a_lo);
  double x2 = a_lo + inv_phi * (b_hi - a_lo);
  double f1 = alpha_of_E(x1, coupling);
  double f2 = alpha_of_E(x2, coupling);
  while (b_hi - a_lo > 1e-12) {
    if (f1 < f2) {
      a_lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = a_lo + inv_phi * (b_hi - a_lo);
      f2 = alpha_of_E(x2, coupling);
    } else {
      b_hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = b_hi - inv_phi * (b_hi - a_lo);
      f1 = alpha_of_E(x1, coupling);
    }
  }
  SupAlpha s;
  s.energy = 0.5 * (a_lo + b_hi);
  s.alpha = alpha_of_E(s.energy, coupling);
  if (best_a > s.alpha) {
    s.energy = best_e;
    s.alpha = best_a;
  }
  return s;
}

double fp_saddle_exponent(double c) {
  if (!std::isfinite(c) || c < -1.0 || c > 1.0) {
    throw std::domain_error("fp_saddle_exponent: c must lie in [-1, 1]");
  }
  if (c > 0.6) return 0.0;  // the aligned saddle exists only for c <= 3/5
  return std::sqrt(std::max(0.0, (1.0 + c) * (3.0 - 5.0 * c)));
}

double fp_lower_bound_alpha(double c) {
  if (!(c > -1.0 && c < 1.0)) {
    throw std::domain_error("fp_lower_bound_alpha: c must lie strictly inside (-1, 1)");
  }
  const double j = 2.0 * (1.0 - c) / (1.0 + c);
  return 2.0 * (1.0 + c) * sup_alpha(j).alpha;
}

}  // namespace klab
