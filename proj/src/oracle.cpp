#include "heisenmag/oracle.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "heisenmag/errors.hpp"

namespace heisenmag {

namespace odeint = boost::numeric::odeint;

std::vector<double> uniform_grid(double t0, double t1, double dt) {
  if (!(dt > 0)) throw DomainError("uniform_grid: dt must be positive");
  std::vector<double> out;
  if (t1 < t0) return out;
  auto n = static_cast<long>(std::floor((t1 - t0) / dt + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(t0 + static_cast<double>(i) * dt);
  if (t1 - out.back() > 1e-9 * dt)
    out.push_back(t1);
  else
    out.back() = t1;
  return out;
}

double vertical_speed(const StateVector& s) { return s.dz + 0.5 * (s.dx * s.y - s.x * s.dy); }

double metric_speed2(const StateVector& s) {
  double w = vertical_speed(s);
  return s.dx * s.dx + s.dy * s.dy + w * w;
}

std::array<double, 3> magnetic_acceleration(const LorentzForce& F, const StateVector& s) {
  const double w = vertical_speed(s);
  const double ax = F.rho * F.beta - (w + F.rho) * (s.dy + F.beta);
  const double ay = F.rho * F.alpha + (w + F.rho) * (s.dx - F.alpha);
  const double az = F.beta * s.dx + F.alpha * s.dy - 0.5 * (ax * s.y - s.x * ay);
  return {ax, ay, az};
}

namespace {

using State6 = std::array<double, 6>;
using State2 = std::array<double, 2>;

StateVector to_state(const State6& u) { return {u[0], u[1], u[2], u[3], u[4], u[5]}; }

template <class State, class System, class Observer>
void run(System sys, State x0, const std::vector<double>& times, const OracleConfig& cfg,
         Observer obs) {
  if (!(cfg.rel_tol > 0 && cfg.abs_tol > 0 && cfg.max_step > 0))
    throw DomainError("oracle: tolerances must be positive");
  if (times.empty()) return;
  auto stepper = odeint::make_controlled(cfg.abs_tol, cfg.rel_tol, cfg.max_step,
                                         odeint::runge_kutta_fehlberg78<State>());
  // odeint clamps dt to +max_step, so a descending grid runs in s = -t
  const bool backward = times.size() > 1 && times[1] < times[0];
  std::vector<double> grid = times;
  if (backward)
    for (double& t : grid) t = -t;
  double dt = grid.size() > 1 ? (grid[1] - grid[0]) : cfg.max_step;
  if (dt == 0) dt = cfg.max_step;
  dt = std::min(std::abs(dt), cfg.max_step);
  auto rsys = [&](const State& x, State& dx, double s) {
    sys(x, dx, backward ? -s : s);
    if (backward)
      for (auto& v : dx) v = -v;
  };
  auto robs = [&](const State& x, double s) { obs(x, backward ? -s : s); };
  try {
    odeint::integrate_times(stepper, rsys, x0, grid.begin(), grid.end(), dt, robs,
                            odeint::max_step_checker(1000000));
  } catch (const std::exception& e) {
    throw OracleError(std::string("oracle integration failed: ") + e.what());
  }
}

}  // namespace

SampledTrajectory integrate_general(const LorentzForce& F, const StateVector& s0,
                                    const std::vector<double>& times, const OracleConfig& cfg) {
  // left-translate to the identity; the frame components of the velocity are invariant
  const HeisenbergPoint p{s0.x, s0.y, s0.z};
  const double w0 = vertical_speed(s0);
  State6 u0{0, 0, 0, s0.dx, s0.dy, w0};

  auto sys = [&F](const State6& u, State6& du, double) {
    StateVector s = to_state(u);
    auto a = magnetic_acceleration(F, s);
    du = {u[3], u[4], u[5], a[0], a[1], a[2]};
  };

  SampledTrajectory out;
  out.t.reserve(times.size());
  out.s.reserve(times.size());
  auto obs = [&](const State6& u, double t) {
    StateVector s = to_state(u);
    double c = vertical_speed(s) - F.beta * s.x - F.alpha * s.y - w0;
    out.constraint_drift = std::max(out.constraint_drift, std::abs(c));
    HeisenbergPoint q = p * HeisenbergPoint{s.x, s.y, s.z};
    StateVector g{q.x, q.y, q.z, s.dx, s.dy, s.dz + 0.5 * (p.x * s.dy - p.y * s.dx)};
    out.t.push_back(t);
    out.s.push_back(g);
  };
  run(sys, u0, times, cfg, obs);
  return out;
}

ReducedTrajectory integrate_reduced(const InitialData& d, const std::vector<double>& times,
                                    const OracleConfig& cfg) {
  auto sys = [&d](const State2& u, State2& du, double) {
    du = {u[1], d.rho - d.dh(u[0]) * d.h(u[0])};
  };
  ReducedTrajectory out;
  const double n0 = d.normSq();
  auto obs = [&](const State2& u, double t) {
    out.t.push_back(t);
    out.x.push_back(u[0]);
    out.dx.push_back(u[1]);
    double hx = d.h(u[0]);
    double fi = u[1] * u[1] + hx * hx - 2.0 * d.rho * u[0] - n0;
    out.drift = std::max(out.drift, std::abs(fi));
  };
  run(sys, State2{0.0, d.x0}, times, cfg, obs);
  return out;
}

double lagrangian_value(const LorentzForce& F, const StateVector& s) {
  const double w = vertical_speed(s);
  const double x = s.x, y = s.y;
  return 0.5 * (s.dx * s.dx + s.dy * s.dy + w * w) +
         (F.rho * y / 2 - F.beta * x * y / 2) * s.dx +
         (-F.rho * x / 2 + F.alpha * x * y / 2) * s.dy - (F.beta * x + F.alpha * y) * s.dz;
}

namespace {

std::array<double, 3> momenta(const LorentzForce& F, const StateVector& s) {
  const double w = vertical_speed(s);
  const double x = s.x, y = s.y;
  return {s.dx + 0.5 * w * y + F.rho * y / 2 - F.beta * x * y / 2,
          s.dy - 0.5 * w * x - F.rho * x / 2 + F.alpha * x * y / 2,
          w - F.beta * x - F.alpha * y};
}

std::array<double, 3> position_gradient(const LorentzForce& F, const StateVector& s) {
  const double w = vertical_speed(s);
  const double x = s.x, y = s.y;
  return {-0.5 * w * s.dy - F.beta * y / 2 * s.dx + (-F.rho / 2 + F.alpha * y / 2) * s.dy -
              F.beta * s.dz,
          0.5 * w * s.dx + (F.rho / 2 - F.beta * x / 2) * s.dx + F.alpha * x / 2 * s.dy -
              F.alpha * s.dz,
          0.0};
}

}  // namespace

double ELResidual::max() const { return std::max({max_x, max_y, max_z}); }

ELResidual euler_lagrange_residual(const LorentzForce& F, const std::vector<double>& t,
                                   const std::vector<StateVector>& s) {
  if (t.size() != s.size() || t.size() < 5)
    throw DomainError("euler_lagrange_residual: need at least 5 samples");
  const double h = t[1] - t[0];
  for (size_t i = 1; i < t.size(); ++i)
    if (std::abs((t[i] - t[i - 1]) - h) > 1e-9 * std::abs(h))
      throw DomainError("euler_lagrange_residual: samples must be uniformly spaced");
  std::vector<std::array<double, 3>> p(s.size());
  for (size_t i = 0; i < s.size(); ++i) p[i] = momenta(F, s[i]);
  ELResidual out;
  for (size_t i = 2; i + 2 < s.size(); ++i) {
    auto g = position_gradient(F, s[i]);
    std::array<double, 3> r;
    for (int c = 0; c < 3; ++c) {
      double dp = (-p[i + 2][c] + 8.0 * p[i + 1][c] - 8.0 * p[i - 1][c] + p[i - 2][c]) / (12.0 * h);
      r[c] = dp - g[c];
    }
    out.t.push_back(t[i]);
    out.r.push_back(r);
    out.max_x = std::max(out.max_x, std::abs(r[0]));
    out.max_y = std::max(out.max_y, std::abs(r[1]));
    out.max_z = std::max(out.max_z, std::abs(r[2]));
  }
  return out;
}

}  // namespace heisenmag
