#include "heisenmag/quartic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "heisenmag/errors.hpp"

namespace heisenmag {

using cplx = std::complex<double>;

bool InitialData::trivial() const {
  double lhs = (y0 + 1) * eta0();
  double tol = 1e-12 * std::max({std::abs(lhs), std::abs(rho), 1.0});
  return x0 == 0.0 && std::abs(lhs - rho) <= tol;
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::NEG: return "NEG";
    case Branch::POS_LOW: return "POS_LOW";
    case Branch::POS_HIGH: return "POS_HIGH";
    case Branch::ZERO_MU_POS: return "ZERO_MU_POS";
    case Branch::ZERO_MU_NEG_RIGHT: return "ZERO_MU_NEG_RIGHT";
    case Branch::ZERO_MU_NEG_LEFT: return "ZERO_MU_NEG_LEFT";
    case Branch::ZERO_CUSP: return "ZERO_CUSP";
    default: return "TRIVIAL";
  }
}

Branch branch_from_name(const std::string& s) {
  for (Branch b : {Branch::NEG, Branch::POS_LOW, Branch::POS_HIGH, Branch::ZERO_MU_POS,
                   Branch::ZERO_MU_NEG_RIGHT, Branch::ZERO_MU_NEG_LEFT, Branch::ZERO_CUSP,
                   Branch::TRIVIAL})
    if (s == branch_name(b)) return b;
  throw DomainError("unknown branch '" + s + "'");
}

namespace {

template <class T>
T Q(double p0, double q0, double rho, T eta) {
  T e2 = eta * eta;
  return e2 * e2 + 2.0 * p0 * e2 - 8.0 * rho * eta + q0;
}

template <class T>
T dQ(double p0, double rho, T eta) {
  return 4.0 * eta * eta * eta + 4.0 * p0 * eta - 8.0 * rho;
}

}  // namespace

double quartic_P(const QuarticProfile& prof, double eta) {
  return -0.25 * Q(prof.p0, prof.q0, prof.data.rho, eta);
}

double quartic_dP(const QuarticProfile& prof, double eta) {
  return -0.25 * dQ(prof.p0, prof.data.rho, eta);
}

double discriminant(double p0, double q0, double rho) {
  double p2 = p0 * p0, r2 = rho * rho;
  return q0 * p2 * p2 - 8.0 * r2 * p2 * p0 - 432.0 * r2 * r2 + 72.0 * r2 * q0 * p0 -
         2.0 * q0 * q0 * p2 + q0 * q0 * q0;
}

QuarticProfile build_profile(const InitialData& d) {
  QuarticProfile prof;
  prof.data = d;
  const double rho = d.rho, eta0 = d.eta0();
  prof.p0 = 2.0 * (d.y0 + 1) - eta0 * eta0;
  prof.q0 = prof.p0 * prof.p0 + 8.0 * rho * eta0 - 4.0 * d.normSq();
  prof.delta = discriminant(prof.p0, prof.q0, rho);
  prof.scale = std::max({std::abs(prof.p0), std::sqrt(std::abs(prof.q0)),
                         std::cbrt(rho * rho), 1e-300});
  const double s6 = std::pow(prof.scale, 6);
  prof.boundary = std::abs(prof.delta) < 1e-9 * s6;
  const double lam = std::sqrt(prof.scale);

  // companion matrix of eta^4 + 2 p0 eta^2 - 8 rho eta + q0
  Eigen::Matrix4d C = Eigen::Matrix4d::Zero();
  C(1, 0) = C(2, 1) = C(3, 2) = 1.0;
  C(0, 3) = -prof.q0;
  C(1, 3) = 8.0 * rho;
  C(2, 3) = -2.0 * prof.p0;
  Eigen::EigenSolver<Eigen::Matrix4d> es(C, false);
  for (int i = 0; i < 4; ++i) {
    cplx z = es.eigenvalues()(i);
    for (int it = 0; it < 2; ++it) {
      cplx f = Q(prof.p0, prof.q0, rho, z), df = dQ(prof.p0, rho, z);
      if (std::abs(df) == 0.0) break;
      cplx zn = z - f / df;
      if (std::abs(Q(prof.p0, prof.q0, rho, zn)) < std::abs(f)) z = zn;
    }
    prof.raw_roots[i] = z;
  }

  if (d.trivial()) {
    prof.branch = Branch::TRIVIAL;
    auto r = prof.raw_roots;
    std::sort(r.begin(), r.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    prof.roots = r;
    return prof;
  }

  if (!prof.boundary && prof.delta < 0) {
    auto r = prof.raw_roots;
    std::sort(r.begin(), r.end(),
              [](cplx a, cplx b) { return std::abs(a.imag()) < std::abs(b.imag()); });
    double a = r[0].real(), b = r[1].real();
    prof.r1 = std::min(a, b);
    prof.r4 = std::max(a, b);
    cplx up = r[2].imag() > 0 ? r[2] : r[3];
    cplx dn = r[2].imag() > 0 ? r[3] : r[2];
    prof.r3c = 0.5 * (up + std::conj(dn));
    prof.r2c = std::conj(prof.r3c);
    prof.roots = {cplx(prof.r1), cplx(prof.r4), prof.r2c, prof.r3c};
    prof.delta1 = std::abs(prof.r1 - prof.r2c);
    prof.delta4 = std::abs(prof.r4 - prof.r2c);
    double dd = prof.delta4 - prof.delta1, w = prof.r4 - prof.r1;
    double k2 = (w * w - dd * dd) / (4.0 * prof.delta1 * prof.delta4);
    prof.k = std::sqrt(std::clamp(k2, 0.0, 1.0));
    prof.branch = Branch::NEG;
    return prof;
  }

  if (!prof.boundary && prof.delta > 0) {
    std::array<double, 4> r;
    for (int i = 0; i < 4; ++i) r[i] = prof.raw_roots[i].real();
    std::sort(r.begin(), r.end());
    prof.r1 = r[0];
    prof.r2 = r[1];
    prof.r3 = r[2];
    prof.r4 = r[3];
    for (int i = 0; i < 4; ++i) prof.roots[i] = r[i];
    prof.r2c = prof.r2;
    prof.r3c = prof.r3;
    prof.delta1 = std::sqrt((r[1] - r[0]) * (r[2] - r[0]));
    prof.delta4 = std::sqrt((r[3] - r[2]) * (r[3] - r[1]));
    double dd = prof.delta4 - prof.delta1, w = r[3] - r[0];
    prof.k = std::sqrt((w * w - dd * dd) / (4.0 * prof.delta1 * prof.delta4));
    prof.k1 = std::sqrt((r[3] - r[2]) * (r[1] - r[0]) / ((r[3] - r[1]) * (r[2] - r[0])));
    prof.branch = locate_interval(prof, eta0) == Interval::LOW ? Branch::POS_LOW : Branch::POS_HIGH;
    return prof;
  }

  // repeated root: start from the closest pair and polish as a simple root of Q'
  int bi = 0, bj = 1;
  double best = INFINITY;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (std::abs(prof.raw_roots[i] - prof.raw_roots[j]) < best) {
        best = std::abs(prof.raw_roots[i] - prof.raw_roots[j]);
        bi = i;
        bj = j;
      }
  const bool cusp = std::abs(prof.p0 * prof.p0 + 3.0 * prof.q0) <= 1e-9 * prof.scale * prof.scale;
  double r;
  if (cusp) {
    r = -std::cbrt(rho);
    prof.mu = 0.0;
  } else {
    r = 0.5 * (prof.raw_roots[bi].real() + prof.raw_roots[bj].real());
    for (int it = 0; it < 50; ++it) {
      double f = r * r * r + prof.p0 * r - 2.0 * rho, df = 3.0 * r * r + prof.p0;
      if (df == 0.0) break;
      double step = f / df;
      r -= step;
      if (std::abs(step) <= 1e-16 * std::max(std::abs(r), lam)) break;
    }
    prof.mu = 0.5 * (prof.p0 + 3.0 * r * r);
  }
  prof.r_double = r;
  double disc = std::sqrt(std::max(0.0, -2.0 * (prof.p0 + r * r)));
  prof.r2 = -r - disc;
  prof.r3 = -r + disc;
  std::array<double, 4> all{r, r, prof.r2, prof.r3};
  std::sort(all.begin(), all.end());
  for (int i = 0; i < 4; ++i) prof.roots[i] = all[i];
  prof.r1 = all[0];
  prof.r4 = all[3];
  prof.r2c = prof.r2;
  prof.r3c = prof.r3;
  if (cusp)
    prof.branch = Branch::ZERO_CUSP;
  else if (prof.mu > 0)
    prof.branch = Branch::ZERO_MU_POS;
  else
    prof.branch = eta0 > r ? Branch::ZERO_MU_NEG_RIGHT : Branch::ZERO_MU_NEG_LEFT;
  return prof;
}

int count_real_roots(const QuarticProfile& prof, double tol) {
  const double t = tol * std::sqrt(prof.scale);
  int n = 0;
  for (const auto& z : prof.raw_roots)
    if (std::abs(z.imag()) <= t) ++n;
  return n;
}

Interval locate_interval(const QuarticProfile& prof, double z0rho) {
  const double tol = 1e-9 * std::sqrt(prof.scale);
  bool low = z0rho >= prof.r1 - tol && z0rho <= prof.r2 + tol;
  bool high = z0rho >= prof.r3 - tol && z0rho <= prof.r4 + tol;
  if (low && high) {
    // only possible when r2 and r3 nearly coincide; pick the nearer interior
    return std::abs(z0rho - prof.r2) > std::abs(z0rho - prof.r3) ? Interval::HIGH : Interval::LOW;
  }
  if (low) return Interval::LOW;
  if (high) return Interval::HIGH;
  throw VerificationError("locate_interval: z0+rho=" + std::to_string(z0rho) +
                          " lies in neither [r1,r2] nor [r3,r4]");
}

MuRForms mu_r_closed_forms(const QuarticProfile& prof) {
  const double p0 = prof.p0, q0 = prof.q0, rho = prof.data.rho;
  const double den = p0 * p0 * p0 - p0 * q0 + 36.0 * rho * rho;
  const double s = p0 * p0 + 3.0 * q0;
  if (den == 0.0 || s == 0.0) throw DomainError("mu_r_closed_forms: vanishing denominator");
  MuRForms out;
  out.r_formula = 2.0 * rho * s / den;
  out.mu_from_r = 0.5 * (p0 + 3.0 * out.r_formula * out.r_formula);
  out.mu_sixth_form = (9.0 * rho * rho - p0 * q0) / s + p0 / 12.0;
  out.mu_full_form = 6.0 * (9.0 * rho * rho - p0 * q0) / s + p0 / 2.0;
  return out;
}

}  // namespace heisenmag
