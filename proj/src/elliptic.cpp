#include "heisenmag/elliptic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "heisenmag/errors.hpp"

namespace heisenmag {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kErrTol = 1e-3;

void check_modulus(double k, const char* what) {
  if (!(k >= 0.0 && k < 1.0))
    throw DomainError(std::string(what) + ": modulus must satisfy 0 <= k < 1, got " +
                      std::to_string(k));
}

double complementary(double k) { return std::sqrt((1.0 - k) * (1.0 + k)); }

}  // namespace

double carlson_RF(double x, double y, double z) {
  if (std::min({x, y, z}) < 0 || std::min({x + y, x + z, y + z}) <= 0)
    throw DomainError("carlson_RF: invalid arguments");
  double xt = x, yt = y, zt = z, ave, dx, dy, dz;
  do {
    double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
    double lam = sx * (sy + sz) + sy * sz;
    xt = 0.25 * (xt + lam);
    yt = 0.25 * (yt + lam);
    zt = 0.25 * (zt + lam);
    ave = (xt + yt + zt) / 3.0;
    dx = (ave - xt) / ave;
    dy = (ave - yt) / ave;
    dz = (ave - zt) / ave;
  } while (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) > kErrTol);
  double e2 = dx * dy - dz * dz, e3 = dx * dy * dz;
  return (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / std::sqrt(ave);
}

double carlson_RD(double x, double y, double z) {
  if (std::min(x, y) < 0 || x + y <= 0 || z <= 0)
    throw DomainError("carlson_RD: invalid arguments");
  constexpr double C1 = 3.0 / 14.0, C2 = 1.0 / 6.0, C3 = 9.0 / 22.0, C4 = 3.0 / 26.0;
  constexpr double C5 = 0.25 * C3, C6 = 1.5 * C4;
  double xt = x, yt = y, zt = z, sum = 0, fac = 1, ave, dx, dy, dz;
  do {
    double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
    double lam = sx * (sy + sz) + sy * sz;
    sum += fac / (sz * (zt + lam));
    fac *= 0.25;
    xt = 0.25 * (xt + lam);
    yt = 0.25 * (yt + lam);
    zt = 0.25 * (zt + lam);
    ave = 0.2 * (xt + yt + 3.0 * zt);
    dx = (ave - xt) / ave;
    dy = (ave - yt) / ave;
    dz = (ave - zt) / ave;
  } while (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) > kErrTol);
  double ea = dx * dy, eb = dz * dz, ec = ea - eb, ed = ea - 6.0 * eb, ee = ed + ec + ec;
  return 3.0 * sum + fac *
                         (1.0 + ed * (-C1 + C5 * ed - C6 * dz * ee) +
                          dz * (C2 * ee + dz * (-C3 * ec + dz * C4 * ea))) /
                         (ave * std::sqrt(ave));
}

double carlson_RC(double x, double y) {
  if (x < 0 || y <= 0) throw DomainError("carlson_RC: invalid arguments");
  double xt = x, yt = y, ave, s;
  do {
    double lam = 2.0 * std::sqrt(xt) * std::sqrt(yt) + yt;
    xt = 0.25 * (xt + lam);
    yt = 0.25 * (yt + lam);
    ave = (xt + yt + yt) / 3.0;
    s = (yt - ave) / ave;
  } while (std::abs(s) > kErrTol);
  return (1.0 + s * s * (0.3 + s * (1.0 / 7.0 + s * (0.375 + s * 9.0 / 22.0)))) / std::sqrt(ave);
}

double carlson_RJ(double x, double y, double z, double p) {
  if (std::min({x, y, z}) < 0 || std::min({x + y, x + z, y + z}) <= 0 || p <= 0)
    throw DomainError("carlson_RJ: invalid arguments");
  constexpr double C1 = 3.0 / 14.0, C2 = 1.0 / 3.0, C3 = 3.0 / 22.0, C4 = 3.0 / 26.0;
  constexpr double C5 = 0.75 * C3, C6 = 1.5 * C4, C7 = 0.5 * C2, C8 = C3 + C3;
  double xt = x, yt = y, zt = z, pt = p, sum = 0, fac = 1, ave, dx, dy, dz, dp;
  do {
    double sx = std::sqrt(xt), sy = std::sqrt(yt), sz = std::sqrt(zt);
    double lam = sx * (sy + sz) + sy * sz;
    double a = pt * (sx + sy + sz) + sx * sy * sz;
    double b = pt * (pt + lam) * (pt + lam);
    sum += fac * carlson_RC(a * a, b);
    fac *= 0.25;
    xt = 0.25 * (xt + lam);
    yt = 0.25 * (yt + lam);
    zt = 0.25 * (zt + lam);
    pt = 0.25 * (pt + lam);
    ave = 0.2 * (xt + yt + zt + pt + pt);
    dx = (ave - xt) / ave;
    dy = (ave - yt) / ave;
    dz = (ave - zt) / ave;
    dp = (ave - pt) / ave;
  } while (std::max({std::abs(dx), std::abs(dy), std::abs(dz), std::abs(dp)}) > kErrTol);
  double ea = dx * (dy + dz) + dy * dz, eb = dx * dy * dz, ec = dp * dp;
  double ed = ea - 3.0 * ec, ee = eb + 2.0 * dp * (ea - ec);
  return 3.0 * sum + fac *
                         (1.0 + ed * (-C1 + C5 * ed - C6 * ee) + eb * (C7 + dp * (-C8 + dp * C4)) +
                          dp * ea * (C2 - dp * C3) - C2 * dp * ec) /
                         (ave * std::sqrt(ave));
}

double complete_K(double k) {
  check_modulus(k, "complete_K");
  double a = 1.0, b = complementary(k);
  for (int i = 0; i < 64 && std::abs(a - b) > 2e-16 * a; ++i) {
    double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return pi / (2.0 * a);
}

double complete_E(double k) {
  check_modulus(k, "complete_E");
  double a = 1.0, b = complementary(k), c = k;
  double sum = 0.5 * c * c, pow2 = 0.5;
  for (int i = 0; i < 64 && std::abs(c) > 1e-17 * a; ++i) {
    double an = 0.5 * (a + b);
    c = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  return pi / (2.0 * a) * (1.0 - sum);
}

double complete_Pi(double alpha2, double k) {
  check_modulus(k, "complete_Pi");
  if (!(alpha2 < 1.0)) throw DomainError("complete_Pi: requires alpha^2 < 1");
  double kc2 = (1.0 - k) * (1.0 + k);
  return carlson_RF(0.0, kc2, 1.0) + alpha2 / 3.0 * carlson_RJ(0.0, kc2, 1.0, 1.0 - alpha2);
}

namespace {

// phi = n pi + phi_r with |phi_r| <= pi/2
struct Reduced {
  double n, s, c2;
};

Reduced reduce(double phi) {
  double n = std::round(phi / pi);
  double r = phi - n * pi;
  double c = std::cos(r);
  return {n, std::sin(r), c * c};
}

}  // namespace

double elliptic_F(double phi, double k) {
  check_modulus(k, "elliptic_F");
  Reduced r = reduce(phi);
  double part = r.s == 0.0 ? 0.0 : r.s * carlson_RF(r.c2, 1.0 - k * k * r.s * r.s, 1.0);
  return r.n == 0.0 ? part : 2.0 * r.n * complete_K(k) + part;
}

double elliptic_E(double phi, double k) {
  check_modulus(k, "elliptic_E");
  Reduced r = reduce(phi);
  double part = 0.0;
  if (r.s != 0.0) {
    double q = 1.0 - k * k * r.s * r.s;
    part = r.s * carlson_RF(r.c2, q, 1.0) -
           k * k * r.s * r.s * r.s / 3.0 * carlson_RD(r.c2, q, 1.0);
  }
  return r.n == 0.0 ? part : 2.0 * r.n * complete_E(k) + part;
}

double elliptic_Pi(double phi, double alpha2, double k) {
  check_modulus(k, "elliptic_Pi");
  if (!(alpha2 < 1.0)) throw DomainError("elliptic_Pi: requires alpha^2 < 1");
  Reduced r = reduce(phi);
  double part = 0.0;
  if (r.s != 0.0) {
    double s2 = r.s * r.s, q = 1.0 - k * k * s2;
    part = r.s * carlson_RF(r.c2, q, 1.0) +
           alpha2 * s2 * r.s / 3.0 * carlson_RJ(r.c2, q, 1.0, 1.0 - alpha2 * s2);
  }
  return r.n == 0.0 ? part : 2.0 * r.n * complete_Pi(alpha2, k) + part;
}

Jacobi jacobi(double u, double k) {
  check_modulus(k, "jacobi");
  double phi;
  if (k == 0.0) {
    phi = u;
  } else {
    // descending Landen / AGM scheme
    double a[64], c[64];
    double b = complementary(k);
    a[0] = 1.0;
    c[0] = k;
    int n = 0;
    while (std::abs(c[n]) > 1e-16 * a[n] && n < 62) {
      a[n + 1] = 0.5 * (a[n] + b);
      c[n + 1] = 0.5 * (a[n] - b);
      b = std::sqrt(a[n] * b);
      ++n;
    }
    phi = std::ldexp(a[n] * u, n);
    for (int i = n; i >= 1; --i) phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  double sn = std::sin(phi), cn = std::cos(phi);
  double dn = std::sqrt((1.0 - k * sn) * (1.0 + k * sn));
  return {sn, cn, dn, phi};
}

double jacobi_am(double u, double k) { return jacobi(u, k).am; }
double jacobi_sn(double u, double k) { return jacobi(u, k).sn; }
double jacobi_cn(double u, double k) { return jacobi(u, k).cn; }
double jacobi_dn(double u, double k) { return jacobi(u, k).dn; }

double inverse_cn(double v, double k) {
  if (std::abs(v) > 1.0 + 1e-12) throw DomainError("inverse_cn: |v| > 1");
  v = std::clamp(v, -1.0, 1.0);
  return elliptic_F(std::acos(v), k);
}

double inverse_sn(double v, double k) {
  if (std::abs(v) > 1.0 + 1e-12) throw DomainError("inverse_sn: |v| > 1");
  v = std::clamp(v, -1.0, 1.0);
  return elliptic_F(std::asin(v), k);
}

CnIntegrals cn_integrals(double A, double B, double k) {
  check_modulus(k, "cn_integrals");
  const double A2 = A * A, B2 = B * B;
  if (!(A2 > 0.0 && A2 < B2)) throw DomainError("cn_integrals: requires 0 < A^2 < B^2");
  const double k2 = k * k;
  const double D = B2 - A2;
  const double M = (1.0 - k2) * A2 + k2 * B2;
  const double Pi = complete_Pi(-A2 / D, k);
  CnIntegrals out;
  out.I1 = 4.0 * B / D * Pi;
  out.I2 = 4.0 * B2 * ((1.0 - 2.0 * k2) * A2 + 2.0 * k2 * B2) / (D * D * M) * Pi +
           4.0 * A2 * complete_E(k) / (D * M) - 4.0 * complete_K(k) / D;
  return out;
}

CnIntegrals cn_integrals_k0(double A, double B) {
  const double D = B * B - A * A;
  if (!(A * A > 0.0 && D > 0.0)) throw DomainError("cn_integrals_k0: requires 0 < A^2 < B^2");
  return {std::copysign(2.0 * pi / std::sqrt(D), B), 2.0 * std::abs(B) * pi / std::pow(D, 1.5)};
}

}  // namespace heisenmag
