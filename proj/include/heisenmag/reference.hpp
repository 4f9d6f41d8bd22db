#pragma once

#include <functional>

#include "heisenmag/elliptic.hpp"

// Quadrature of the defining integrals. These never call the Carlson/AGM/Landen
// code and serve as the independent side of every elliptic-kernel check.

namespace heisenmag::reference {

EllipticEval integrate(const std::function<double(double)>& f, double a, double b,
                       double tol = 1e-14);

EllipticEval K_by_quadrature(double k);
EllipticEval E_by_quadrature(double k);
EllipticEval Pi_by_quadrature(double alpha2, double k);
EllipticEval F_by_quadrature(double phi, double k);

// Substitutes theta = am(s): ds = dtheta / sqrt(1 - k^2 sin^2), cn = cos theta.
EllipticEval I1_by_quadrature(double A, double B, double k);
EllipticEval I2_by_quadrature(double A, double B, double k);

}  // namespace heisenmag::reference
