#pragma once

namespace klab {

/// Complete elliptic integral of the first kind in the PARAMETER convention,
/// K(m) = int_0^{pi/2} dtheta / sqrt(1 - m sin^2 theta), m < 1, computed by
/// the arithmetic-geometric mean; m < 0 goes through K(m) = K(m/(m-1))/sqrt(1-m).
double elliptic_K(double m);

/// Classical energy range (E_min, E_max) of x + J z^2 on the unit sphere,
/// J > 0: E_min = -1, E_max = J + 1/(4J) for J >= 1/2 and 1 otherwise.
double classical_energy_min(double coupling);
double classical_energy_max(double coupling);

/// Imaginary part of the complex-time singularity of z_E(t) nearest the real
/// axis. Requires E strictly inside the classical energy range.
double sigma_star(double energy, double coupling);

/// Microcanonical growth-rate curve alpha(E) = pi / (4 sigma*).
double alpha_of_E(double energy, double coupling);

struct SupAlpha {
  double energy = 0.0;  // argmax
  double alpha = 0.0;   // max of alpha(E)
};

/// Maximum of alpha(E) over the open energy range (grid scan plus
/// golden-section refinement, margin 1e-6 from the endpoints).
SupAlpha sup_alpha(double coupling);

/// Unstable exponent omega(c) = sqrt((1+c)(3-5c)) of the aligned saddle for
/// c in [-1, 3/5], zero elsewhere in [-1, 1].
double fp_saddle_exponent(double c);

/// Lower bound on the FP K-complexity growth exponent 2*alpha, from the
/// equal-spin reduction: 2 (1+c) sup_E alpha_LMG(E; J = 2(1-c)/(1+c)).
/// Requires c strictly inside (-1, 1).
double fp_lower_bound_alpha(double c);

}  // namespace klab
