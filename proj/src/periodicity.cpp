#include "heisenmag/periodicity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "heisenmag/elliptic.hpp"
#include "heisenmag/errors.hpp"

namespace heisenmag {

namespace {

constexpr double pi = std::numbers::pi;

struct PsiParts {
  double R, k;
};

PsiParts psi_parts(double c, double d, double rho) {
  if (!(c > 0) || !(d > 0 && d < 1))
    throw DomainError("psi: requires c > 0 and 0 < d < 1");
  const double c6 = std::pow(c, 6), r2 = rho * rho;
  const double R = (r2 + c6) * (r2 + c6) - 4 * r2 * d * d * c6;
  if (!(R > 0)) throw DomainError("psi: (rho^2+c^6)^2 - 4 rho^2 d^2 c^6 is not positive");
  const double k2 = (2 * c6 * d * d - r2 - c6) / (2 * std::sqrt(R)) + 0.5;
  if (k2 < -1e-14 || !(k2 < 1)) throw DomainError("psi: modulus outside [0,1)");
  return {R, std::sqrt(std::max(0.0, k2))};
}

}  // namespace

double psi_tilde(double c, double d, double rho) {
  PsiParts p = psi_parts(c, d, rho);
  const double c4 = c * c * c * c;
  return complete_E(p.k) - ((rho * rho + c4) / (2 * std::sqrt(p.R)) + 0.5) * complete_K(p.k);
}

double psi(double c, double d, double rho) {
  PsiParts p = psi_parts(c, d, rho);
  return 8 / (c * c) * std::pow(p.R, 0.25) * psi_tilde(c, d, rho);
}

double psi_tilde_limit(double c, double rho) {
  const double c4 = std::pow(c, 4), c6 = std::pow(c, 6);
  return c4 * (c * c - 1) * pi / (4 * (rho * rho + c6));
}

double energy_cde(double c, double d, double rho) {
  const double c2 = c * c, c4 = c2 * c2;
  return (c4 + rho * rho) * (c4 + 4 * c2 * d * d - 2 * c2 + 1) / (2 * c4);
}

InitialData CdeCoordinates::initial() const { return initial_from_cde(c, d, e, rho); }
double CdeCoordinates::energy() const { return energy_cde(c, d, rho); }
double CdeCoordinates::psi() const { return heisenmag::psi(c, d, rho); }
double CdeCoordinates::r1() const { return rho / (c * c) - 2 * c * d; }
double CdeCoordinates::r4() const { return rho / (c * c) + 2 * c * d; }
double CdeCoordinates::delta1() const {
  return 2 / (c * c) * std::sqrt(rho * rho + std::pow(c, 6) - 2 * rho * d * c * c * c);
}
double CdeCoordinates::delta4() const {
  return 2 / (c * c) * std::sqrt(rho * rho + std::pow(c, 6) + 2 * rho * d * c * c * c);
}

InitialData initial_from_cde(double c, double d, double e, double rho) {
  if (!(c > 0) || !(d > 0 && d < 1) || !(e >= -1 && e <= 1))
    throw DomainError("initial_from_cde: requires c > 0, 0 < d < 1, -1 <= e <= 1");
  const double c3 = c * c * c, c6 = c3 * c3;
  const double u = c3 * d * e + rho;
  InitialData out;
  out.rho = rho;
  out.x0 = 2 * d / c * std::sqrt(1 - e * e) * std::sqrt(u * u + (1 - d * d) * c6);
  out.y0 = c * c * (2 * d * d * e * e - 2 * d * d + 1) + 2 * d * e * rho / c - 1;
  out.z0 = rho / (c * c) + 2 * c * d * e - rho;
  return out;
}

CdeCoordinates cde_from_initial(const InitialData& data) {
  QuarticProfile prof = build_profile(data);
  if (prof.branch != Branch::NEG)
    throw DomainError("cde_from_initial: requires Delta < 0 (branch " +
                      std::string(branch_name(prof.branch)) + ")");
  const double r1 = prof.r1, r4 = prof.r4;
  const double S = std::sqrt(2 * prof.p0 + r1 * r1 + r4 * r4);
  CdeCoordinates out;
  out.rho = data.rho;
  out.c = S / 2;
  out.d = (r4 - r1) / (2 * S);
  out.e = std::clamp(2 / (r4 - r1) * (data.eta0() - (r1 + r4) / 2), -1.0, 1.0);
  return out;
}

YOmega y_omega(const TrajectorySolution& sol) {
  if (!sol.x_period()) throw DomainError("y_omega: branch has no period");
  YOmega out;
  out.quadrature = *sol.y_period_increment();
  const auto& P = sol.profile();
  switch (P.branch) {
    case Branch::NEG: {
      const double dd = P.delta1 * P.delta4, s = P.r1 + P.r4;
      out.closed_form = 4 * std::sqrt(dd) *
                        (complete_E(P.k) - (s * s + dd + 4) / (2 * dd) * complete_K(P.k));
      break;
    }
    case Branch::POS_LOW:
    case Branch::POS_HIGH: {
      const double g = (P.r4 - P.r2) * (P.r3 - P.r1), s = P.r2 + P.r3;
      const double K = complete_K(P.k1);
      out.closed_form = 2 * std::sqrt(g) * (complete_E(P.k1) - K - (4 + s * s) / g * K);
      break;
    }
    case Branch::ZERO_MU_POS:
      out.closed_form =
          (P.p0 + P.r_double * P.r_double - 2) * pi / std::sqrt(P.mu);
      break;
    default:
      break;
  }
  return out;
}

double solve_dc(double c, double rho, BracketLog* log) {
  if (!(c > 1)) throw DomainError("solve_dc: no root for c <= 1");
  double lo = 1e-12, hi = 1 - 1e-15;
  double flo = psi_tilde(c, lo, rho), fhi = psi_tilde(c, hi, rho);
  if (!(flo > 0 && fhi < 0))
    throw VerificationError("solve_dc: no sign change of psi_tilde on (0,1)");
  if (log) log->push_back({"d_c", lo, hi});
  for (int it = 0; it < 200 && hi - lo > 2e-16; ++it) {
    double mid = 0.5 * (lo + hi), f = psi_tilde(c, mid, rho);
    if (f > 0) {
      lo = mid;
      flo = f;
    } else {
      hi = mid;
      fhi = f;
    }
  }
  // one secant step inside the final bracket
  double d = (flo - fhi) != 0 ? lo - flo * (hi - lo) / (fhi - flo) : 0.5 * (lo + hi);
  if (!(d >= lo && d <= hi)) d = 0.5 * (lo + hi);
  if (std::abs(psi_tilde(c, d, rho)) > 1e-12)
    throw VerificationError("solve_dc: residual above 1e-12");
  return d;
}

double energy_of_c(double c, double rho) { return energy_cde(c, solve_dc(c, rho), rho); }

double solve_c_for_energy(double E, double rho, BracketLog* log) {
  if (!(E > 0)) throw DomainError("solve_c_for_energy: requires E > 0");
  double lo = 1, hi = 2;
  while (energy_of_c(hi, rho) < E) {
    lo = hi;
    hi *= 2;
    if (hi > 1e8) throw VerificationError("solve_c_for_energy: no bracket");
  }
  if (log) log->push_back({"c_E", lo, hi});
  for (int it = 0; it < 200 && hi - lo > 2e-16 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (energy_of_c(mid, rho) < E)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

PeriodicResult build_periodic(double E, double e, double rho) {
  if (rho < 0) throw DomainError("build_periodic: requires rho >= 0");
  PeriodicResult out;
  const double c = solve_c_for_energy(E, rho, &out.brackets);
  const double d = solve_dc(c, rho, &out.brackets);
  out.cde = {c, d, e, rho};
  out.data = initial_from_cde(c, d, e, rho);
  out.sol = std::make_shared<TrajectorySolution>(out.data);
  if (out.sol->branch() != Branch::NEG || !out.sol->x_period())
    throw VerificationError("build_periodic: initial data did not land on the Delta<0 branch");
  out.omega = *out.sol->x_period();
  HeisenbergPoint end = out.sol->point(out.omega);
  out.closure = std::max({std::abs(end.x), std::abs(end.y), std::abs(end.z)});
  out.energy_error = std::abs(energy(out.data) - E);
  return out;
}

EquienergyRelation equienergy_relation(const TrajectorySolution& s1, const TrajectorySolution& s2) {
  if (!s1.x_period()) throw DomainError("equienergy_relation: first curve has no period");
  const double w = *s1.x_period();
  const double target = s2.data().z0 - s1.data().z0;
  const double xt = s2.data().x0;
  auto f = [&](double t) { return s1.x(t) - target; };
  auto g = [&](double t) { return s1.dx(t); };
  auto bisect = [](auto fn, double a, double b) {
    double fa = fn(a);
    for (int i = 0; i < 100; ++i) {
      double m = 0.5 * (a + b), fm = fn(m);
      if ((fm > 0) == (fa > 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  };
  // roots of x1 - target, plus turning points for the tangential case x~0 = 0
  std::vector<double> cand;
  const int N = 4000;
  for (int i = 0; i < N; ++i) {
    double a = w * i / N, b = w * (i + 1) / N;
    if ((f(a) > 0) != (f(b) > 0)) cand.push_back(bisect(f, a, b));
    if ((g(a) > 0) != (g(b) > 0)) cand.push_back(bisect(g, a, b));
  }
  if (cand.empty()) throw NotFound("equienergy_relation: no shift C found");
  double best = INFINITY, C = 0;
  for (double t : cand) {
    double score = std::abs(f(t)) + std::abs(g(t) - xt);
    if (score < best) {
      best = score;
      C = t;
    }
  }
  EquienergyRelation out;
  out.C = C;
  out.translation = group_inverse(s1.point(C));
  for (int i = 0; i <= 200; ++i) {
    double t = w * i / 200;
    HeisenbergPoint a = out.translation * s1.point(t + C), b = s2.point(t);
    out.residual = std::max({out.residual, std::abs(a.x - b.x), std::abs(a.y - b.y),
                             std::abs(a.z - b.z)});
  }
  return out;
}

InitialData ExactFamily::member(double angle) const {
  const double r = std::sqrt(radius2);
  return {r * std::cos(angle), r * std::sin(angle), z0, rho};
}

double ExactFamily::period() const { return 2 * pi / std::abs(z0 + rho); }

std::optional<ExactFamily> exact_periodic_family(double E, double rho) {
  if (rho == 0) throw DomainError("exact_periodic_family: requires rho != 0");
  if (!(E > 0 && E < rho * rho / 2)) return std::nullopt;
  ExactFamily f;
  f.rho = rho;
  f.E = E;
  f.z0 = -rho + std::copysign(std::sqrt(rho * rho - 2 * E), rho);
  f.radius2 = 2 * E - f.z0 * f.z0;
  return f;
}

double lambda_periodic_residual(const Curve& curve, const LatticeElement& lam, double omega,
                                double window, int samples) {
  if (lam.x1 == 0 && lam.y1 == 0 && lam.z1 == 0)
    throw DomainError("lambda_periodic_test: lambda must differ from the identity");
  if (window < 0) window = omega;
  double res = 0;
  for (int i = 0; i <= samples; ++i) {
    double t = window * i / samples;
    HeisenbergPoint a = curve(t), b = curve(t + omega);
    res = std::max({res, std::abs(a.x + lam.x1 - b.x), std::abs(a.y + lam.y1 - b.y),
                    std::abs(a.z + lam.z1 + 0.5 * (lam.x1 * a.y - lam.y1 * a.x) - b.z)});
  }
  return res;
}

bool lambda_periodic_test(const Curve& curve, const LatticeElement& lam, double omega, double tol,
                          double window, int samples) {
  double res = lambda_periodic_residual(curve, lam, omega, window, samples);
  // kernel condition: the first coordinate of lambda must vanish
  return std::abs(lam.x1) <= tol && res <= tol;
}

namespace {

// h_E(c): the d with En(c, d) = E
std::optional<double> h_E(double c, double E, double rho) {
  const double c2 = c * c, c4 = c2 * c2;
  const double num = 2 * c4 * E - (c4 + rho * rho) * (c2 - 1) * (c2 - 1);
  if (num <= 0) return std::nullopt;
  double d = std::sqrt(num / ((c4 + rho * rho) * 4 * c2));
  if (!(d > 0 && d < 1)) return std::nullopt;
  return d;
}

std::optional<double> psi_on_surface(double c, double E, double rho) {
  auto d = h_E(c, E, rho);
  if (!d) return std::nullopt;
  try {
    return psi(c, *d, rho);
  } catch (const DomainError&) {
    return std::nullopt;
  }
}

}  // namespace

LambdaPeriodic find_lambda_periodic(const LatticeElement& lam, double E, double rho) {
  const double tol = 1e-12;
  if (std::abs(lam.x1) > tol || std::abs(lam.y1) <= tol)
    throw NotFound("find_lambda_periodic: no lambda-periodic trajectory when x1 != 0 or y1 = 0");
  if (!(E > 0) || rho < 0) throw DomainError("find_lambda_periodic: requires E > 0, rho >= 0");

  LambdaPeriodic out;
  out.lam = lam;
  const double cE = solve_c_for_energy(E, rho, &out.brackets);
  const double sgn = lam.y1 > 0 ? 1.0 : -1.0;

  // walk away from c_E on the side where psi has the sign of y1
  const int steps = 400;
  double cfar = cE, best = 0, cbest = cE;
  double step = 1e-3 * cE;
  for (int i = 1; i <= steps; ++i) {
    double c = cE + sgn * step * i;
    if (c <= 0) break;
    auto v = psi_on_surface(c, E, rho);
    if (!v) break;
    cfar = c;
    if (sgn * *v > best) {
      best = sgn * *v;
      cbest = c;
    }
  }
  if (!(best > 0)) throw NotFound("find_lambda_periodic: empty attainable window on S_E");
  out.brackets.push_back({"psi window", std::min(cE, cfar), std::max(cE, cfar)});

  int n = static_cast<int>(std::floor(std::abs(lam.y1) / best)) + 1;
  const double target = lam.y1 / n;
  double lo = cE, hi = cbest;
  out.brackets.push_back({"c for psi=y1/n", std::min(lo, hi), std::max(lo, hi)});
  auto F = [&](double c) { return *psi_on_surface(c, E, rho) - target; };
  double flo = -target;  // psi(c_E) = 0
  for (int it = 0; it < 200 && std::abs(hi - lo) > 2e-16 * cE; ++it) {
    double mid = 0.5 * (lo + hi), fm = F(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  const double c = 0.5 * (lo + hi);
  out.cde = {c, *h_E(c, E, rho), 0.0, rho};
  out.n = n;
  out.sol = std::make_shared<TrajectorySolution>(out.cde.initial());
  if (!out.sol->x_period()) throw VerificationError("find_lambda_periodic: base curve not periodic");
  out.omega = *out.sol->x_period();
  out.omega_total = n * out.omega;
  out.lambda1 = out.sol->point(out.omega);
  const double z2 = out.lambda1.z;
  out.a = (lam.z1 - n * z2) / lam.y1;
  const HeisenbergPoint p{out.a, 0, 0};
  auto sol = out.sol;
  out.curve = [sol, p](double t) { return p * sol->point(t); };
  out.residual = lambda_periodic_residual(out.curve, lam, out.omega_total, out.omega_total);
  return out;
}

bool in_gamma_k(const HeisenbergPoint& g, int k, double tol) {
  if (k <= 0) throw DomainError("in_gamma_k: k must be positive");
  auto near_int = [tol](double v) { return std::abs(v - std::round(v)) <= tol; };
  return near_int(g.x) && near_int(g.y) && near_int(g.z * 2 * k);
}

PrimitivePeriod primitive_period(const Curve& curve, double x_period, int k, int max_multiple) {
  if (!(x_period > 0)) throw DomainError("primitive_period: x-period must be positive");
  const HeisenbergPoint inv0 = group_inverse(curve(0));
  for (int m = 1; m <= max_multiple; ++m) {
    const double w = m * x_period;
    HeisenbergPoint g = curve(w) * inv0;
    if (!in_gamma_k(g, k)) continue;
    LatticeElement lam{std::round(g.x), std::round(g.y), std::round(g.z * 2 * k) / (2.0 * k), k};
    if (lam.x1 == 0 && lam.y1 == 0 && lam.z1 == 0) continue;
    if (!lambda_periodic_test(curve, lam, w)) continue;
    return {lam, w, m};
  }
  throw NotFound("primitive_period: no lattice recurrence below the scan horizon");
}

HeisenbergPoint reduce_to_fundamental_domain(const HeisenbergPoint& p, int k) {
  if (k <= 0) throw DomainError("reduce_to_fundamental_domain: k must be positive");
  HeisenbergPoint lam{std::floor(p.x), std::floor(p.y), 0};
  HeisenbergPoint q = group_inverse(lam) * p;
  const double s = 1.0 / (2 * k);
  q.z -= std::floor(q.z / s) * s;
  return q;
}

double quotient_residual(const HeisenbergPoint& p, const HeisenbergPoint& q, int k) {
  if (k <= 0) throw DomainError("quotient_residual: k must be positive");
  HeisenbergPoint g = q * group_inverse(p);
  HeisenbergPoint lam{std::round(g.x), std::round(g.y), 0};
  HeisenbergPoint rmd = group_inverse(lam) * g;
  const double s = 1.0 / (2 * k);
  double dz = rmd.z - std::round(rmd.z / s) * s;
  return std::max({std::abs(rmd.x), std::abs(rmd.y), std::abs(dz)});
}

bool lattice_obstruction_check(const Mat2& basis, double center_step, long radius) {
  if (!(center_step > 0)) throw DomainError("lattice_obstruction_check: center step must be > 0");
  const double a = basis[0][0], b = basis[0][1];
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0) return true;
  if (std::abs(a) <= 1e-12 * scale || std::abs(b) <= 1e-12 * scale) return true;
  // m a + n b = 0 needs -b/a = m/n rational: walk the continued-fraction convergents
  double x = -b / a;
  double h0 = 1, h1 = std::floor(x), k0 = 0, k1 = 1;
  double frac = x - std::floor(x);
  for (int it = 0; it < 64; ++it) {
    const double m = h1, n = k1;
    if (std::abs(m) > radius || std::abs(n) > radius) break;
    if (std::abs(m * a + n * b) <= 1e-13 * (std::abs(m * a) + std::abs(n * b))) return true;
    if (frac < 1e-15) break;
    double inv = 1 / frac;
    double q = std::floor(inv);
    frac = inv - q;
    double h2 = q * h1 + h0, k2 = q * k1 + k0;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
  }
  return false;
}

}  // namespace heisenmag
