#include "krylovlab/sphere_poly.hpp"

#include <cmath>
#include <stdexcept>

namespace klab {

SpherePolynomial SpherePolynomial::constant(double value) {
  SpherePolynomial p;
  p.add_term({0, 0, 0, 0, 0, 0}, value);
  return p;
}

SpherePolynomial SpherePolynomial::variable(int sphere, int axis) {
  if (sphere < 0 || sphere > 1 || axis < 0 || axis > 2) {
    throw std::invalid_argument("SpherePolynomial::variable: sphere in {0,1}, axis in {0,1,2}");
  }
  SpherePolynomial p;
  Monomial m{0, 0, 0, 0, 0, 0};
  m[static_cast<std::size_t>(3 * sphere + axis)] = 1;
  p.add_term(m, 1.0);
  return p;
}

void SpherePolynomial::add_term(const Monomial& m, double coeff) {
  if (coeff == 0.0) return;
  for (int sphere = 0; sphere < 2; ++sphere) {
    const std::size_t zi = static_cast<std::size_t>(3 * sphere + 2);
    if (m[zi] >= 2) {
      // z^2 = 1 - x^2 - y^2, applied recursively until z-exponent <= 1
      Monomial r = m;
      r[zi] -= 2;
      add_term(r, coeff);
      r[zi - 2] += 2;
      add_term(r, -coeff);
      r[zi - 2] -= 2;
      r[zi - 1] += 2;
      add_term(r, -coeff);
      return;
    }
  }
  auto [it, inserted] = terms_.try_emplace(m, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0.0) terms_.erase(it);
  }
}

SpherePolynomial& SpherePolynomial::operator+=(const SpherePolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

SpherePolynomial& SpherePolynomial::operator-=(const SpherePolynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

SpherePolynomial& SpherePolynomial::operator*=(double scale) {
  if (scale == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= scale;
  return *this;
}

SpherePolynomial SpherePolynomial::operator*(const SpherePolynomial& o) const {
  SpherePolynomial out;
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m;
      for (std::size_t i = 0; i < 6; ++i) m[i] = ma[i] + mb[i];
      out.add_term(m, ca * cb);
    }
  }
  return out;
}

int SpherePolynomial::degree() const {
  int deg = 0;
  for (const auto& [m, c] : terms_) {
    deg = std::max(deg, m[0] + m[1] + m[2] + m[3] + m[4] + m[5]);
  }
  return deg;
}

void SpherePolynomial::prune(double tol) {
  double peak = 0.0;
  for (const auto& [m, c] : terms_) peak = std::max(peak, std::abs(c));
  for (auto it = terms_.begin(); it != terms_.end();) {
    it = std::abs(it->second) <= tol * peak ? terms_.erase(it) : std::next(it);
  }
}

namespace {

// d/d(axis) as a formal partial derivative, per sphere
SpherePolynomial partial(const SpherePolynomial& p, std::size_t var) {
  SpherePolynomial out;
  for (const auto& [m, c] : p.terms()) {
    if (m[var] == 0) continue;
    SpherePolynomial::Monomial r = m;
    r[var] -= 1;
    out.add_term(r, c * static_cast<double>(m[var]));
  }
  return out;
}

}  // namespace

SpherePolynomial poisson_bracket(const SpherePolynomial& p, const SpherePolynomial& q) {
  // {f, g} = sum_spheres sum_cyclic x_c (d_a f d_b g - d_b f d_a g)
  // with (a, b, c) running over cyclic permutations of (x, y, z).
  SpherePolynomial out;
  for (int sphere = 0; sphere < 2; ++sphere) {
    const std::size_t base = static_cast<std::size_t>(3 * sphere);
    for (int cyc = 0; cyc < 3; ++cyc) {
      const std::size_t a = base + static_cast<std::size_t>(cyc);
      const std::size_t b = base + static_cast<std::size_t>((cyc + 1) % 3);
      const std::size_t c = base + static_cast<std::size_t>((cyc + 2) % 3);
      SpherePolynomial term = partial(p, a) * partial(q, b) - partial(p, b) * partial(q, a);
      if (term.empty()) continue;
      SpherePolynomial xc = SpherePolynomial::variable(sphere, static_cast<int>(c - base));
      out += xc * term;
    }
  }
  return out;
}

namespace {

// <x^a y^b z^c> over one sphere; zero for odd exponents, else
// (a-1)!!(b-1)!!(c-1)!!/(a+b+c+1)!! built as a product of ratios to stay
// within double range at large degree.
double monomial_average(int a, int b, int c) {
  if (a % 2 || b % 2 || c % 2) return 0.0;
  double value = 1.0;
  int denom_arg = 1;  // running (a+b+c+1) as exponents accumulate
  for (const int e : {a, b, c}) {
    for (int k = 2; k <= e; k += 2) {
      value *= static_cast<double>(k - 1) / static_cast<double>(denom_arg + 2);
      denom_arg += 2;
    }
  }
  return value;
}

}  // namespace

double sphere_average(const SpherePolynomial& p) {
  double acc = 0.0;
  for (const auto& [m, c] : p.terms()) {
    const double f1 = monomial_average(m[0], m[1], m[2]);
    if (f1 == 0.0) continue;
    const double f2 = monomial_average(m[3], m[4], m[5]);
    acc += c * f1 * f2;
  }
  return acc;
}

double poly_inner(const SpherePolynomial& p, const SpherePolynomial& q) {
  // expand avg(p*q) pairwise; parity kills most cross terms up front
  double acc = 0.0;
  for (const auto& [ma, ca] : p.terms()) {
    for (const auto& [mb, cb] : q.terms()) {
      const double f1 = monomial_average(ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]);
      if (f1 == 0.0) continue;
      const double f2 = monomial_average(ma[3] + mb[3], ma[4] + mb[4], ma[5] + mb[5]);
      acc += ca * cb * f1 * f2;
    }
  }
  return acc;
}

ClassicalLanczosOutput classical_lanczos(const SpherePolynomial& hamiltonian,
                                         const SpherePolynomial& seed, int max_n, int degree_cap,
                                         double breakdown_tol) {
  if (max_n < 0) throw std::invalid_argument("classical_lanczos: max_n must be >= 0");
  if (degree_cap < 1) throw std::invalid_argument("classical_lanczos: degree_cap must be >= 1");
  if (!(breakdown_tol > 0.0)) {
    throw std::invalid_argument("classical_lanczos: breakdown_tol must be > 0");
  }

  const double seed_norm2 = poly_inner(seed, seed);
  if (!(seed_norm2 > 0.0)) {
    throw std::invalid_argument("classical_lanczos: seed is zero in canonical form");
  }

  ClassicalLanczosOutput out;
  SpherePolynomial cur = seed * (1.0 / std::sqrt(seed_norm2));
  out.basis.push_back(cur);
  SpherePolynomial prev;
  double b_prev = 0.0;
  double b1 = 0.0;

  out.termination = LanczosTermination::BreakdownZero;
  while (static_cast<int>(out.b.size()) < max_n) {
    SpherePolynomial work = poisson_bracket(hamiltonian, cur);
    if (work.degree() > degree_cap) {
      out.termination = LanczosTermination::DegreeCapExceeded;
      break;
    }
    if (b_prev != 0.0) work -= b_prev * prev;
    const double pre_norm = std::sqrt(std::max(0.0, poly_inner(work, work)));

    for (int pass = 0; pass < 2; ++pass) {
      double corr = 0.0;
      for (const auto& q : out.basis) {
        const double c = poly_inner(q, work);
        work -= c * q;
        corr += c * c;
      }
      if (std::sqrt(corr) <= 1e-8 * pre_norm) break;
    }
    work.prune(1e-15);

    const double bn = std::sqrt(std::max(0.0, poly_inner(work, work)));
    if (out.b.empty()) {
      b1 = bn;
      if (!(b1 > 1e-13)) break;
    } else if (!(bn >= breakdown_tol * b1)) {
      break;
    }
    work *= 1.0 / bn;
    prev = cur;
    cur = work;
    out.basis.push_back(cur);
    out.b.push_back(bn);
    b_prev = bn;
  }
  if (static_cast<int>(out.b.size()) >= max_n &&
      out.termination == LanczosTermination::BreakdownZero) {
    out.termination = LanczosTermination::MaxIterations;
  }
  out.krylov_dim = static_cast<Eigen::Index>(out.basis.size());
  return out;
}

}  // namespace klab
