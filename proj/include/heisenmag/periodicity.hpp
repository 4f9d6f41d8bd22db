#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "heisenmag/group.hpp"
#include "heisenmag/quartic.hpp"
#include "heisenmag/trajectory.hpp"

namespace heisenmag {

// Endpoints of a root-finding bracket, kept for reproducibility.
struct Bracket {
  std::string what;
  double lo = 0, hi = 0;
};
using BracketLog = std::vector<Bracket>;

// (c, d, e) chart of the Delta < 0 initial data.
struct CdeCoordinates {
  double c = 0, d = 0, e = 0, rho = 0;

  InitialData initial() const;
  double energy() const;
  double psi() const;
  // r1, r4, and the complex pair r2 = re - i im, r3 = re + i im
  double r1() const;
  double r4() const;
  double delta1() const;
  double delta4() const;
};

CdeCoordinates cde_from_initial(const InitialData& d);
InitialData initial_from_cde(double c, double d, double e, double rho);

double psi_tilde(double c, double d, double rho);
double psi(double c, double d, double rho);
double energy_cde(double c, double d, double rho);
// d -> 0 limit of psi_tilde
double psi_tilde_limit(double c, double rho);

struct YOmega {
  double quadrature = 0;
  std::optional<double> closed_form;
};

YOmega y_omega(const TrajectorySolution& sol);

double solve_dc(double c, double rho, BracketLog* log = nullptr);
double energy_of_c(double c, double rho);
double solve_c_for_energy(double E, double rho, BracketLog* log = nullptr);

struct PeriodicResult {
  CdeCoordinates cde;
  InitialData data;
  std::shared_ptr<const TrajectorySolution> sol;
  double omega = 0;
  double closure = 0;       // max(|x(omega)|, |y(omega)|, |z(omega)|)
  double energy_error = 0;  // |energy(data) - E|
  BracketLog brackets;
};

PeriodicResult build_periodic(double E, double e, double rho);

struct EquienergyRelation {
  double C = 0;
  HeisenbergPoint translation;  // sigma1(C)^{-1}
  double residual = 0;          // max |sigma1(C)^{-1} sigma1(t+C) - sigma2(t)| over one period
};

// Finds C with sigma2(t) = sigma1(C)^{-1} sigma1(t + C).
EquienergyRelation equienergy_relation(const TrajectorySolution& s1, const TrajectorySolution& s2);

struct ExactFamily {
  double rho = 0, E = 0, z0 = 0, radius2 = 0;
  InitialData member(double angle) const;
  double period() const;
};

std::optional<ExactFamily> exact_periodic_family(double E, double rho);

// lambda = exp(x1 e1 + y1 e2 + z1 e3); k > 0 tags membership in Gamma_k.
struct LatticeElement {
  double x1 = 0, y1 = 0, z1 = 0;
  int k = 0;
  HeisenbergPoint point() const { return {x1, y1, z1}; }
};

// max residual of the three coordinate conditions on t in [0, window].
double lambda_periodic_residual(const Curve& curve, const LatticeElement& lam, double omega,
                                double window, int samples = 64);
bool lambda_periodic_test(const Curve& curve, const LatticeElement& lam, double omega,
                          double tol = 1e-7, double window = -1, int samples = 64);

struct LambdaPeriodic {
  LatticeElement lam;
  int n = 1;
  double a = 0;           // conjugator exp(a e1)
  double omega = 0;       // x-period of the base curve
  double omega_total = 0; // n * omega
  HeisenbergPoint lambda1;
  CdeCoordinates cde;
  std::shared_ptr<const TrajectorySolution> sol;
  Curve curve;
  double residual = 0;
  BracketLog brackets;
};

LambdaPeriodic find_lambda_periodic(const LatticeElement& lam, double E, double rho);

struct PrimitivePeriod {
  LatticeElement lambda0;
  double omega0 = 0;
  int multiple = 0;  // omega0 / x-period
};

PrimitivePeriod primitive_period(const Curve& curve, double x_period, int k, int max_multiple = 64);

bool in_gamma_k(const HeisenbergPoint& g, int k, double tol = 1e-7);
HeisenbergPoint reduce_to_fundamental_domain(const HeisenbergPoint& p, int k);
// distance of q p^{-1} to Gamma_k: zero iff p and q define the same point of Gamma_k \ H3
double quotient_residual(const HeisenbergPoint& p, const HeisenbergPoint& q, int k);

// True iff a nonzero integer combination of the columns has vanishing first coordinate.
bool lattice_obstruction_check(const Mat2& basis, double center_step, long radius = 10000);

}  // namespace heisenmag
