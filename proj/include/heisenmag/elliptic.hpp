#pragma once

// Elliptic integrals and Jacobi functions, modulus convention (k, not m = k^2).

namespace heisenmag {

struct EllipticEval {
  double value = 0;
  double estimated_error = 0;
};

double carlson_RF(double x, double y, double z);
double carlson_RD(double x, double y, double z);
double carlson_RC(double x, double y);
// p > 0 only.
double carlson_RJ(double x, double y, double z, double p);

double complete_K(double k);
double complete_E(double k);
// Pi(alpha2, k) = int_0^{pi/2} dt / ((1 - alpha2 sin^2 t) sqrt(1 - k^2 sin^2 t)), alpha2 < 1.
double complete_Pi(double alpha2, double k);

// Incomplete integrals for any real amplitude phi (quasi-periodic extension).
double elliptic_F(double phi, double k);
double elliptic_E(double phi, double k);
double elliptic_Pi(double phi, double alpha2, double k);

struct Jacobi {
  double sn, cn, dn, am;
};

Jacobi jacobi(double u, double k);
double jacobi_am(double u, double k);
double jacobi_sn(double u, double k);
double jacobi_cn(double u, double k);
double jacobi_dn(double u, double k);

// u in [0, 2K] with cn(u) = v.
double inverse_cn(double v, double k);
// u in [-K, K] with sn(u) = v.
double inverse_sn(double v, double k);

struct CnIntegrals {
  double I1 = 0;  // int_0^{4K} ds / (A cn(s,k) + B)
  double I2 = 0;  // int_0^{4K} ds / (A cn(s,k) + B)^2
};

CnIntegrals cn_integrals(double A, double B, double k);
// The k = 0 reductions, written with elementary functions.
CnIntegrals cn_integrals_k0(double A, double B);

}  // namespace heisenmag
