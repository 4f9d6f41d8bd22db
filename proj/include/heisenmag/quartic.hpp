#pragma once

#include <array>
#include <complex>
#include <string>

namespace heisenmag {

// Initial velocity x0 e1 + y0 e2 + z0 e3 at the identity for the force F_{e1,rho}.
struct InitialData {
  double x0 = 0, y0 = 0, z0 = 0, rho = 0;

  double eta0() const { return z0 + rho; }
  double normSq() const { return x0 * x0 + (y0 + 1) * (y0 + 1); }
  // h(x) = x^2/2 + (z0+rho) x + y0 + 1
  double h(double x) const { return 0.5 * x * x + eta0() * x + y0 + 1; }
  double dh(double x) const { return x + eta0(); }
  bool trivial() const;
};

enum class Branch {
  NEG,
  POS_LOW,
  POS_HIGH,
  ZERO_MU_POS,
  ZERO_MU_NEG_RIGHT,
  ZERO_MU_NEG_LEFT,
  ZERO_CUSP,
  TRIVIAL
};

const char* branch_name(Branch b);
Branch branch_from_name(const std::string& s);

struct QuarticProfile {
  InitialData data;
  double p0 = 0, q0 = 0, delta = 0;
  double scale = 0;        // coefficient scale: p0 ~ scale, q0 ~ scale^2, rho ~ scale^{3/2}
  bool boundary = false;   // |delta| < 1e-9 scale^6
  // reals first ascending; for delta < 0 the pair (r2, r3) follows with Im r3 > 0
  std::array<std::complex<double>, 4> roots{};
  std::array<std::complex<double>, 4> raw_roots{};  // polished eigenvalues, unordered
  double r1 = 0, r2 = 0, r3 = 0, r4 = 0;  // r2, r3 real only when delta >= 0
  std::complex<double> r2c{}, r3c{};
  double delta1 = 0, delta4 = 0, k = 0, k1 = 0;
  double mu = 0, r_double = 0;
  Branch branch = Branch::TRIVIAL;
};

// Q(eta) = eta^4 + 2 p0 eta^2 - 8 rho eta + q0, P = -Q/4.
double quartic_P(const QuarticProfile& prof, double eta);
double quartic_dP(const QuarticProfile& prof, double eta);
double discriminant(double p0, double q0, double rho);

QuarticProfile build_profile(const InitialData& d);

// Roots with |Im| below tol * sqrt(scale) count as real.
int count_real_roots(const QuarticProfile& prof, double tol = 1e-7);

enum class Interval { LOW, HIGH };
Interval locate_interval(const QuarticProfile& prof, double z0rho);

struct MuRForms {
  double r_formula = 0;
  double mu_from_r = 0;          // (p0 + 3 r^2)/2
  double mu_sixth_form = 0; // (9 rho^2 - p0 q0)/(p0^2 + 3 q0) + p0/12
  double mu_full_form = 0;  // 6 (9 rho^2 - p0 q0)/(p0^2 + 3 q0) + p0/2
};

MuRForms mu_r_closed_forms(const QuarticProfile& prof);

}  // namespace heisenmag
