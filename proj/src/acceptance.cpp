#include "heisenmag/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <future>
#include <numbers>
#include <random>
#include <sstream>

#include "heisenmag/elliptic.hpp"
#include "heisenmag/errors.hpp"
#include "heisenmag/oracle.hpp"
#include "heisenmag/periodicity.hpp"
#include "heisenmag/quartic.hpp"
#include "heisenmag/reference.hpp"
#include "heisenmag/trajectory.hpp"

namespace heisenmag {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.2e", v); }

LorentzForce e1_force(double rho) { return {0, 1, rho}; }

StateVector initial_state(const InitialData& d) { return {0, 0, 0, d.x0, d.y0, d.z0}; }

struct Representative {
  Branch branch;
  InitialData data;
};

// The mu < 0 separatrix branches use rho = 0.05: the oracle error there grows like
// exp(sqrt(-mu) t), which at rho = 1 exceeds 1e-6 before t = 20.
std::vector<Representative> branch_representatives() {
  std::vector<Representative> out;
  for (Branch b : {Branch::NEG, Branch::POS_LOW, Branch::POS_HIGH, Branch::ZERO_CUSP,
                   Branch::ZERO_MU_POS})
    out.push_back({b, branch_representative(b, 1.0)});
  for (Branch b : {Branch::ZERO_MU_NEG_RIGHT, Branch::ZERO_MU_NEG_LEFT})
    out.push_back({b, branch_representative(b, 0.05)});
  return out;
}

template <class F>
CriterionResult timed(int id, const char* name, F&& body, double max_seconds = INFINITY) {
  auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  r.id = id;
  r.name = name;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail += std::string(r.detail.empty() ? "" : "; ") + "exception: " + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (r.seconds >= max_seconds) {
    r.passed = false;
    r.detail += "; runtime over " + fmt("%.0f", max_seconds) + " s";
  }
  return r;
}

// Runs f(rng, i) for i in [0, n) split over worker threads; each chunk has its own stream.
template <class T, class F>
std::vector<T> parallel_samples(std::uint64_t seed, unsigned threads, int n, F f) {
  threads = std::max(1u, threads);
  std::vector<std::future<std::vector<T>>> parts;
  for (unsigned w = 0; w < threads; ++w) {
    parts.push_back(std::async(std::launch::async, [=] {
      std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(w)};
      std::mt19937_64 rng(ss);
      std::vector<T> v;
      for (int i = static_cast<int>(w); i < n; i += static_cast<int>(threads)) v.push_back(f(rng));
      return v;
    }));
  }
  std::vector<T> all;
  for (auto& p : parts) {
    auto v = p.get();
    all.insert(all.end(), v.begin(), v.end());
  }
  return all;
}

// Real roots of eta^4 + 2 p0 eta^2 - 8 rho eta + q0 counted from the critical values,
// without any eigenvalue solver.
int count_roots_by_critical_values(long double p0, long double q0, long double rho) {
  auto Q = [&](long double e) { return e * e * e * e + 2 * p0 * e * e - 8 * rho * e + q0; };
  // critical points: e^3 + p0 e - 2 rho = 0
  std::vector<long double> crit;
  const long double disc = p0 * p0 * p0 + 27 * rho * rho;
  if (disc < 0) {
    long double m = 2 * std::sqrt(-p0 / 3);
    long double th = std::acos(std::clamp(-3 * rho / p0 * std::sqrt(-3 / p0), -1.0L, 1.0L)) / 3;
    for (int j = 0; j < 3; ++j) crit.push_back(m * std::cos(th - 2 * std::numbers::pi_v<long double> * j / 3));
    std::sort(crit.begin(), crit.end());
  } else {
    long double s = std::sqrt(disc / 27);
    crit.push_back(std::cbrt(rho + s) + std::cbrt(rho - s));
  }
  int changes = 0;
  int prev = 1;
  for (long double c : crit) {
    long double v = Q(c);
    int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
    if (s == 0) return -1;  // repeated root
    if (s != prev) ++changes;
    prev = s;
  }
  if (prev != 1) ++changes;
  return changes;
}

}  // namespace

InitialData branch_representative(Branch b, double rho) {
  if (!(rho > 0)) throw DomainError("branch_representative: rho must be > 0");
  const double c = std::cbrt(rho), c2 = std::cbrt(2 * rho), m = 1.5 * std::cbrt(2.0) * c * c;
  switch (b) {
    case Branch::NEG: return {0, 0, -rho, rho};
    case Branch::POS_LOW: return {0, -2 * rho - 0.75, -rho - 1, rho};
    case Branch::POS_HIGH: return {0, -m - 2, -rho, rho};
    case Branch::ZERO_CUSP: return {0, 3 * c * c - 1, 3 * c - rho, rho};
    case Branch::ZERO_MU_POS: return {0, -m - 1, -rho, rho};
    case Branch::ZERO_MU_NEG_RIGHT: return {0, 2 * c2 * c2 - 1, 2.5 * c2 - rho, rho};
    case Branch::ZERO_MU_NEG_LEFT: return {0, 3 * c * c - 1, -3.75 * c - rho, rho};
    case Branch::TRIVIAL: return {0, 0, 0, rho};
  }
  return {0, 0, 0, rho};
}

BranchCheck check_branch(const InitialData& d, const OracleConfig& cfg) {
  BranchCheck out;
  TrajectorySolution sol(d);
  out.branch = branch_name(sol.branch());
  for (double t = 0; t <= 10 + 1e-12; t += 0.01) {
    double x = sol.x(t);
    out.ode_residual = std::max(out.ode_residual, std::abs(sol.ddx(t) + d.dh(x) * d.h(x) - d.rho));
  }
  out.window = sol.x_period() ? 2 * *sol.x_period() : 20.0;
  auto times = uniform_grid(0, out.window, 0.01);
  auto orc = integrate_general(e1_force(d.rho), initial_state(d), times, cfg);
  auto cf = sol.sample(times);
  const double I0 = d.normSq();
  for (size_t i = 0; i < times.size(); ++i) {
    out.oracle_distance = std::max({out.oracle_distance, std::abs(cf[i].x - orc.s[i].x),
                                    std::abs(cf[i].y - orc.s[i].y), std::abs(cf[i].z - orc.s[i].z)});
    double x = cf[i].x, dx = cf[i].dx, h = d.h(x);
    out.first_integral =
        std::max(out.first_integral, std::abs(dx * dx + h * h - 2 * d.rho * x - I0));
  }
  out.oracle_drift = orc.constraint_drift;
  return out;
}

CriterionResult criterion_closed_form(const AcceptanceOptions&) {
  return timed(1, "closed-form correctness", [](CriterionResult& r) {
    double worst_res = 0, worst_dist = 0;
    bool ok = true;
    std::ostringstream os;
    for (const auto& rep : branch_representatives()) {
      auto c = check_branch(rep.data);
      bool good = c.branch == branch_name(rep.branch) && c.ode_residual < 1e-8 && c.oracle_distance < 1e-6;
      ok = ok && good;
      worst_res = std::max(worst_res, c.ode_residual);
      worst_dist = std::max(worst_dist, c.oracle_distance);
      if (!good) os << " " << branch_name(rep.branch) << "(got " << c.branch << ", res " << sci(c.ode_residual)
                    << ", dist " << sci(c.oracle_distance) << ")";
    }
    // the rho = 1 separatrix tuple: reported, not scored (unstable equilibrium)
    auto diag = check_branch(branch_representative(Branch::ZERO_MU_NEG_RIGHT, 1.0));
    r.passed = ok;
    r.detail = "7 branches, max ODE residual " + sci(worst_res) + " (<1e-8), max oracle distance " +
               sci(worst_dist) + " (<1e-6); info: mu<0 tuple at rho=1 distance " +
               sci(diag.oracle_distance) + os.str();
  }, 30);
}

CriterionResult criterion_first_integral(const AcceptanceOptions&) {
  return timed(2, "first integral", [](CriterionResult& r) {
    double worst = 0, drift = 0;
    for (const auto& rep : branch_representatives()) {
      auto c = check_branch(rep.data);
      worst = std::max(worst, c.first_integral);
      drift = std::max(drift, c.oracle_drift);
    }
    r.passed = worst < 1e-9 && drift < 1e-9;
    r.detail = "closed-form drift " + sci(worst) + ", oracle drift " + sci(drift) + " (<1e-9)";
  });
}

CriterionResult criterion_discriminant(const AcceptanceOptions& o) {
  return timed(3, "discriminant classification", [&](CriterionResult& r) {
    struct Sample {
      bool band = false, agree = true;
      double viete = 0;
    };
    auto samples = parallel_samples<Sample>(o.seed, o.threads, 10000, [](std::mt19937_64& g) {
      std::uniform_real_distribution<double> U(-3, 3), R(0, 3);
      InitialData d{U(g), U(g), U(g), R(g)};
      Sample s;
      auto P = build_profile(d);
      if (P.branch == Branch::TRIVIAL) return s;
      if (std::abs(P.delta) < 1e-9 * std::pow(P.scale, 6)) {
        s.band = true;
        return s;
      }
      int n = count_roots_by_critical_values(P.p0, P.q0, d.rho);
      s.agree = (P.delta < 0 && n == 2) || (P.delta > 0 && n == 4);
      std::complex<double> e1 = 0, e2 = 0, e3 = 0, e4 = 1;
      const auto& z = P.roots;
      for (int i = 0; i < 4; ++i) {
        e1 += z[i];
        e4 *= z[i];
        for (int j = i + 1; j < 4; ++j) {
          e2 += z[i] * z[j];
          for (int k = j + 1; k < 4; ++k) e3 += z[i] * z[j] * z[k];
        }
      }
      const double sc = std::max(P.scale, 1e-300);
      s.viete = std::max({std::abs(e1) / std::sqrt(sc), std::abs(e2 - 2 * P.p0) / sc,
                          std::abs(e3 - 8 * d.rho) / std::pow(sc, 1.5), std::abs(e4 - P.q0) / (sc * sc)});
      return s;
    });
    int band = 0, disagree = 0;
    double viete = 0;
    for (const auto& s : samples) {
      band += s.band;
      disagree += !s.agree;
      viete = std::max(viete, s.viete);
    }
    r.passed = disagree == 0 && viete < 1e-9;
    r.detail = "10000 samples, " + std::to_string(disagree) + " disagreements, " +
               std::to_string(band) + " in boundary band, max Viete residual " + sci(viete) +
               " (<1e-9)";
  }, 10);
}

CriterionResult criterion_periodicity(const AcceptanceOptions& o) {
  return timed(4, "periodicity criterion", [&](CriterionResult& r) {
    // Delta < 0: closed form vs quadrature
    auto neg = parallel_samples<double>(o.seed + 1, o.threads, 100, [](std::mt19937_64& g) {
      std::uniform_real_distribution<double> U(-2, 2), R(0, 2);
      for (;;) {
        InitialData d{U(g), U(g), U(g), R(g)};
        auto P = build_profile(d);
        if (P.boundary || P.branch != Branch::NEG) continue;
        auto y = y_omega(TrajectorySolution(d));
        return std::abs(y.quadrature - *y.closed_form);
      }
    });
    // Delta > 0: largest y(omega)
    auto pos = parallel_samples<double>(o.seed + 2, o.threads, 100, [](std::mt19937_64& g) {
      std::uniform_real_distribution<double> U(-3, 3), R(0, 2);
      for (;;) {
        InitialData d{U(g), U(g), U(g), R(g)};
        auto P = build_profile(d);
        if (P.boundary || (P.branch != Branch::POS_LOW && P.branch != Branch::POS_HIGH)) continue;
        return y_omega(TrajectorySolution(d)).quadrature;
      }
    });
    // Delta = 0, mu > 0: built from a double root r with mu = (p0 + 3 r^2)/2 > 0
    auto zero = parallel_samples<double>(o.seed + 3, o.threads, 100, [](std::mt19937_64& g) {
      std::uniform_real_distribution<double> Rr(0.1, 2), Rd(-2.5, -0.2), Ue(0, 1);
      for (;;) {
        double rho = Rr(g), r = Rd(g) * std::cbrt(rho);
        double p0 = (2 * rho - r * r * r) / r, q0 = -r * r * r * r - 2 * p0 * r * r + 8 * rho * r;
        if (p0 + 3 * r * r <= 0) continue;
        // pick eta0 on the orbit interval, then y0 and x0 from p0, q0
        double disc = -(2 * p0 + 3 * r * r) + r * r;  // remaining quadratic eta^2 + 2 r eta + (2p0+3r^2)
        if (disc <= 0) continue;
        double lo = -r - std::sqrt(disc), hi = -r + std::sqrt(disc);
        double eta0 = lo + (hi - lo) * Ue(g);
        double Y = (p0 + eta0 * eta0) / 2;
        double x2 = (p0 * p0 + 8 * rho * eta0 - q0) / 4 - Y * Y;
        if (x2 < 0) continue;
        InitialData d{std::sqrt(x2), Y - 1, eta0 - rho, rho};
        auto P = build_profile(d);
        if (P.branch != Branch::ZERO_MU_POS) continue;
        return y_omega(TrajectorySolution(d)).quadrature;
      }
    });
    double worst = 0, pos_max = -INFINITY, zero_max = -INFINITY;
    for (double v : neg) worst = std::max(worst, v);
    for (double v : pos) pos_max = std::max(pos_max, v);
    for (double v : zero) zero_max = std::max(zero_max, v);
    r.passed = worst < 1e-8 && pos_max < 0 && zero_max < 0;
    r.detail = "Delta<0 max |closed-quad| " + sci(worst) + " (<1e-8); Delta>0 max y(w) " +
               fmt("%.4g", pos_max) + "; Delta=0,mu>0 max y(w) " + fmt("%.4g", zero_max) + " (<0)";
  });
}

CriterionResult criterion_dc_energy(const AcceptanceOptions&) {
  return timed(5, "unique d_c and monotone energy", [](CriterionResult& r) {
    const double rho = 1;
    double worst = 0;
    bool mono = true;
    double prev_d = 0, prev_E = 0;
    for (int i = 11; i <= 50; ++i) {
      double c = i / 10.0;
      double dc = solve_dc(c, rho);
      worst = std::max(worst, std::abs(psi_tilde(c, dc, rho)));
      double E = energy_cde(c, dc, rho);
      if (i > 11 && (dc <= prev_d || E <= prev_E)) mono = false;
      prev_d = dc;
      prev_E = E;
    }
    double E0 = energy_of_c(1 + 1e-4, rho);
    r.passed = worst < 1e-12 && mono && E0 < 1e-3;
    r.detail = "c in {1.1..5}: max |Psi~| " + sci(worst) + " (<1e-12), monotone " +
               (mono ? "yes" : "no") + ", En(1+1e-4) " + sci(E0) + " (<1e-3)";
  });
}

CriterionResult criterion_closed_every_energy(const AcceptanceOptions&) {
  return timed(6, "closed trajectories at every energy", [](CriterionResult& r) {
    double closure = 0, eerr = 0;
    for (double E : {0.1, 1.0, 10.0})
      for (double e : {-1.0, 0.0, 1.0}) {
        auto p = build_periodic(E, e, 1.0);
        closure = std::max(closure, p.closure);
        eerr = std::max(eerr, p.energy_error);
      }
    r.passed = closure < 1e-7 && eerr < 1e-9;
    r.detail = "9 cases, max closure " + sci(closure) + " (<1e-7), max energy error " + sci(eerr) +
               " (<1e-9)";
  });
}

CriterionResult criterion_exact_threshold(const AcceptanceOptions&) {
  return timed(7, "exact-case threshold", [](CriterionResult& r) {
    auto fam = exact_periodic_family(1.9, 2.0);
    double closure = INFINITY;
    if (fam) {
      closure = 0;
      for (double a : {0.0, 1.0, 2.5, 4.0}) {
        auto d = fam->member(a);
        auto p = exact_trajectory(d, fam->period());
        closure = std::max({closure, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
      }
    }
    bool empty = !exact_periodic_family(2.0, 2.0).has_value();
    r.passed = fam.has_value() && closure < 1e-8 && empty;
    r.detail = std::string("rho=2 E=1.9 closure ") + sci(closure) + " (<1e-8); E=2 family " +
               (empty ? "empty" : "non-empty");
  });
}

CriterionResult criterion_lambda_periodic(const AcceptanceOptions&) {
  return timed(8, "lambda-periodicity", [](CriterionResult& r) {
    auto L = find_lambda_periodic({0, 1, 0.5, 1}, 1.0, 1.0);
    double res = lambda_periodic_residual(L.curve, L.lam, L.omega_total, L.omega_total, 128);
    bool nf = false;
    try {
      find_lambda_periodic({1, 0, 0, 1}, 1.0, 1.0);
    } catch (const NotFound&) {
      nf = true;
    }
    r.passed = res < 1e-7 && nf;
    r.detail = "lambda=(0,1,1/2): n=" + std::to_string(L.n) + ", residual " + sci(res) +
               " (<1e-7); lambda=(1,0,0) " + (nf ? "not-found" : "FOUND");
  });
}

CriterionResult criterion_lattice_obstruction(const AcceptanceOptions&) {
  return timed(9, "lattice obstruction", [](CriterionResult& r) {
    const double s = std::sqrt(3.0) / 2;
    bool rotated = lattice_obstruction_check(Mat2{{{s, -0.5}, {0.5, s}}}, 1.0);
    bool standard = lattice_obstruction_check(Mat2{{{1, 0}, {0, 1}}}, 0.5);
    r.passed = !rotated && standard;
    r.detail = std::string("rotated -> ") + (rotated ? "true" : "false") + ", standard Gamma_1 -> " +
               (standard ? "true" : "false");
  });
}

CriterionResult criterion_lagrangian(const AcceptanceOptions&) {
  return timed(10, "Lagrangian equivalence", [](CriterionResult& r) {
    const std::vector<std::pair<LorentzForce, StateVector>> cases = {
        {{0, 1, 1}, {0, 0, 0, 0.3, 0.2, -0.4}},
        {{0.5, -0.7, 0.3}, {0.1, -0.2, 0.4, 0.8, -0.1, 0.6}},
        {{0, 0, 2}, {0, 0, 0, 1, 0.5, -1}},
        {{1.2, 0.4, 0}, {0.5, 0.5, 0, -0.3, 0.9, 0.2}},
    };
    const auto t = uniform_grid(0, 10, 1e-3);
    double worst = 0;
    for (const auto& [F, s0] : cases) {
      auto orc = integrate_general(F, s0, t, {1e-11, 1e-11, 0.01});
      worst = std::max(worst, euler_lagrange_residual(F, t, orc.s).max());
    }
    std::vector<StateVector> line;
    for (double tt : t) line.push_back({tt, tt, 0, 1, 1, 0});
    double control = euler_lagrange_residual({0, 1, 1}, t, line).max();
    r.passed = worst < 1e-5 && control > 1e-2;
    r.detail = "oracle EL residual " + sci(worst) + " (<1e-5), control (t,t,0) " + sci(control) +
               " (>1e-2)";
  });
}

CriterionResult criterion_elliptic(const AcceptanceOptions&) {
  return timed(11, "elliptic kernel", [](CriterionResult& r) {
    double legendre = 0;
    for (int i = 1; i <= 50; ++i) {
      double k = i / 51.0, kp = std::sqrt(1 - k * k);
      double K = complete_K(k), E = complete_E(k), Kp = complete_K(kp), Ep = complete_E(kp);
      legendre = std::max(legendre, std::abs(E * Kp + Ep * K - K * Kp - pi / 2));
    }
    struct Case {
      double A, B, k;
    };
    std::vector<Case> grid;
    for (double k : {0.0, 0.3, 0.6, 0.85, 0.95})
      for (auto [A, B] : {std::pair{0.5, 1.0}, {-0.7, 1.2}, {1.0, -2.5}, {0.2, 3.0}})
        grid.push_back({A, B, k});
    double app = 0, k0 = 0;
    for (const auto& c : grid) {
      auto v = cn_integrals(c.A, c.B, c.k);
      double q1 = reference::I1_by_quadrature(c.A, c.B, c.k).value;
      double q2 = reference::I2_by_quadrature(c.A, c.B, c.k).value;
      app = std::max({app, std::abs(v.I1 - q1) / std::max(1.0, std::abs(q1)),
                      std::abs(v.I2 - q2) / std::max(1.0, std::abs(q2))});
      if (c.k == 0) {
        double D = c.B * c.B - c.A * c.A;
        double f1 = std::copysign(2 * pi / std::sqrt(D), c.B), f2 = 2 * std::abs(c.B) * pi / std::pow(D, 1.5);
        k0 = std::max({k0, std::abs(v.I1 - f1), std::abs(v.I2 - f2), std::abs(q1 - f1),
                       std::abs(q2 - f2)});
      }
    }
    r.passed = legendre < 1e-12 && app < 1e-10 && k0 < 1e-10;
    r.detail = "Legendre " + sci(legendre) + " (<1e-12), cn integrals vs quadrature " + sci(app) +
               " (<1e-10) on 20 cases, k=0 closed forms " + sci(k0);
  });
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o, const std::vector<int>& ids) {
  using Fn = CriterionResult (*)(const AcceptanceOptions&);
  static const Fn all[] = {criterion_closed_form,         criterion_first_integral,
                           criterion_discriminant,        criterion_periodicity,
                           criterion_dc_energy,           criterion_closed_every_energy,
                           criterion_exact_threshold,     criterion_lambda_periodic,
                           criterion_lattice_obstruction, criterion_lagrangian,
                           criterion_elliptic};
  std::vector<CriterionResult> out;
  for (int i = 1; i <= 11; ++i)
    if (ids.empty() || std::find(ids.begin(), ids.end(), i) != ids.end()) out.push_back(all[i - 1](o));
  return out;
}

std::string format_result_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] %2d %-38s %7.2fs  ", r.passed ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.seconds);
  return head + r.detail;
}

}  // namespace heisenmag
