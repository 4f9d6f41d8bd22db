#pragma once

#include <vector>

#include "heisenmag/group.hpp"
#include "heisenmag/quartic.hpp"

namespace heisenmag {

// (x, y, z, x', y', z') in exponential coordinates.
struct StateVector {
  double x = 0, y = 0, z = 0, dx = 0, dy = 0, dz = 0;
};

struct OracleConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = 0.05;
};

struct SampledTrajectory {
  std::vector<double> t;
  std::vector<StateVector> s;
  // max |w - beta x - alpha y - w(0)| at the identity-based curve, w = z' + (x'y - xy')/2
  double constraint_drift = 0;
};

std::vector<double> uniform_grid(double t0, double t1, double dt);

// e3 component of the velocity in the left-invariant frame.
double vertical_speed(const StateVector& s);
// g(gamma', gamma') = x'^2 + y'^2 + w^2
double metric_speed2(const StateVector& s);

// Right-hand side of the magnetic system: returns (x'', y'', z'').
std::array<double, 3> magnetic_acceleration(const LorentzForce& F, const StateVector& s);

SampledTrajectory integrate_general(const LorentzForce& F, const StateVector& s0,
                                    const std::vector<double>& times, const OracleConfig& cfg = {});

struct ReducedTrajectory {
  std::vector<double> t, x, dx;
  double drift = 0;  // max |x'^2 + h(x)^2 - 2 rho x - normSq|
};

ReducedTrajectory integrate_reduced(const InitialData& d, const std::vector<double>& times,
                                    const OracleConfig& cfg = {});

double lagrangian_value(const LorentzForce& F, const StateVector& s);

struct ELResidual {
  std::vector<double> t;  // interior times
  std::vector<std::array<double, 3>> r;
  double max_x = 0, max_y = 0, max_z = 0;
  double max() const;
};

// d/dt(dL/dq') - dL/dq by central 4th-order differences on a uniform grid.
ELResidual euler_lagrange_residual(const LorentzForce& F, const std::vector<double>& t,
                                   const std::vector<StateVector>& s);

}  // namespace heisenmag
