#pragma once

#include <array>
#include <map>
#include <vector>

#include "krylovlab/lanczos.hpp"

namespace klab {

/// Real polynomial in the classical sphere variables (x1, y1, z1, x2, y2, z2),
/// kept in the canonical form with z-exponent <= 1 per sphere via the
/// constraint z^2 = 1 - x^2 - y^2. Single-top polynomials simply leave the
/// second sphere's exponents at zero.
class SpherePolynomial {
 public:
  using Monomial = std::array<int, 6>;  // exponents of x1, y1, z1, x2, y2, z2

  SpherePolynomial() = default;
  static SpherePolynomial constant(double value);
  /// sphere in {0, 1}, axis in {0 = x, 1 = y, 2 = z}.
  static SpherePolynomial variable(int sphere, int axis);

  SpherePolynomial& operator+=(const SpherePolynomial& o);
  SpherePolynomial& operator-=(const SpherePolynomial& o);
  SpherePolynomial& operator*=(double scale);
  friend SpherePolynomial operator+(SpherePolynomial a, const SpherePolynomial& b) { return a += b; }
  friend SpherePolynomial operator-(SpherePolynomial a, const SpherePolynomial& b) { return a -= b; }
  friend SpherePolynomial operator*(SpherePolynomial a, double s) { return a *= s; }
  friend SpherePolynomial operator*(double s, SpherePolynomial a) { return a *= s; }
  SpherePolynomial operator*(const SpherePolynomial& o) const;

  const std::map<Monomial, double>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int degree() const;
  /// Drops coefficients with |c| <= tol * max|c|.
  void prune(double tol = 0.0);

  void add_term(const Monomial& m, double coeff);  // reduces to canonical form

 private:
  std::map<Monomial, double> terms_;
};

/// {p, q} with the classical su(2) relations {x, y} = z (cyclic) on each
/// sphere, extended by bilinearity and the Leibniz rule; the Casimir
/// x^2 + y^2 + z^2 brackets to zero with everything.
SpherePolynomial poisson_bracket(const SpherePolynomial& p, const SpherePolynomial& q);

/// Uniform average over the sphere(s): a monomial vanishes unless every
/// exponent is even, otherwise contributes
/// (a-1)!!(b-1)!!(c-1)!!/(a+b+c+1)!! per sphere.
double sphere_average(const SpherePolynomial& p);

/// (p|q) = sphere_average(p * q).
double poly_inner(const SpherePolynomial& p, const SpherePolynomial& q);

struct ClassicalLanczosOutput {
  std::vector<double> b;
  Eigen::Index krylov_dim = 1;
  LanczosTermination termination = LanczosTermination::BreakdownZero;
  std::vector<SpherePolynomial> basis;
};

/// Lanczos recursion with commutators replaced by Poisson brackets and the
/// trace inner product by the uniform sphere average. Iteration stops early
/// (DegreeCapExceeded) when the next basis polynomial would exceed degree_cap.
ClassicalLanczosOutput classical_lanczos(const SpherePolynomial& hamiltonian,
                                         const SpherePolynomial& seed, int max_n,
                                         int degree_cap = 40, double breakdown_tol = 1e-8);

}  // namespace klab
