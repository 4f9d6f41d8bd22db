#include <doctest.h>

#include <cmath>

#include "heisenmag/errors.hpp"
#include "heisenmag/oracle.hpp"
#include "heisenmag/trajectory.hpp"

using namespace heisenmag;
using doctest::Approx;

TEST_SUITE("ode-oracle") {
  TEST_CASE("uniform grid includes the endpoint") {
    auto g = uniform_grid(0, 1, 0.3);
    CHECK(g.front() == 0);
    CHECK(g.back() == 1);
    auto h = uniform_grid(0, 1, 0.25);
    CHECK(h.size() == 5);
    CHECK(h.back() == 1);
    CHECK(uniform_grid(0, 0, 0.1).size() == 1);
    CHECK_THROWS_AS(uniform_grid(0, 1, 0), DomainError);
  }

  TEST_CASE("zero force: central direction is a straight line") {
    auto t = uniform_grid(0, 5, 0.1);
    auto o = integrate_general({0, 0, 0}, {0, 0, 0, 0, 0, 1.7}, t);
    for (size_t i = 0; i < t.size(); ++i) {
      CHECK(std::abs(o.s[i].x) < 1e-14);
      CHECK(std::abs(o.s[i].y) < 1e-14);
      CHECK(o.s[i].z == Approx(1.7 * t[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("metric speed and the first integral are conserved") {
    const LorentzForce F{0.4, -0.9, 1.3};
    StateVector s0{0.2, -0.5, 1.0, 0.7, 0.1, -0.3};
    auto t = uniform_grid(0, 20, 0.05);
    auto o = integrate_general(F, s0, t, {1e-11, 1e-11, 0.05});
    const double g0 = metric_speed2(s0);
    for (const auto& s : o.s) CHECK(std::abs(metric_speed2(s) - g0) < 1e-9);
    CHECK(o.constraint_drift < 1e-9);
  }

  TEST_CASE("reversibility") {
    const LorentzForce F{0, 1, 0.8};
    StateVector s0{0, 0, 0, 0.6, -0.2, 0.4};
    const double tol = 1e-11;
    auto fw = integrate_general(F, s0, {0.0, 6.0}, {tol, tol, 0.02});
    auto bw = integrate_general(F, fw.s.back(), {6.0, 0.0}, {tol, tol, 0.02});
    const auto& e = bw.s.back();
    CHECK(std::abs(e.x - s0.x) < 10 * tol);
    CHECK(std::abs(e.y - s0.y) < 10 * tol);
    CHECK(std::abs(e.z - s0.z) < 10 * tol);
    CHECK(std::abs(e.dx - s0.dx) < 10 * tol);
  }

  TEST_CASE("exact force matches the rotation formula") {
    InitialData d{0.5, 0.8, -0.6, 2.0};
    auto t = uniform_grid(0, 10, 0.05);
    auto o = integrate_general({0, 0, 2.0}, {0, 0, 0, d.x0, d.y0, d.z0}, t, {1e-11, 1e-11, 0.02});
    double m = 0;
    for (size_t i = 0; i < t.size(); ++i) {
      auto p = exact_trajectory(d, t[i]);
      m = std::max({m, std::abs(p.x - o.s[i].x), std::abs(p.y - o.s[i].y), std::abs(p.z - o.s[i].z)});
    }
    CHECK(m < 1e-8);
  }

  TEST_CASE("reduced equation: trivial data and drift") {
    auto t = uniform_grid(0, 20, 0.05);
    auto r0 = integrate_reduced({0, 1, -1, 2}, t);
    for (double x : r0.x) CHECK(x == 0);
    CHECK(r0.drift == 0);
    InitialData d{0.4, 0.3, -0.5, 1};
    auto r = integrate_reduced(d, t, {1e-11, 1e-11, 0.05});
    CHECK(r.drift < 1e-9);
  }

  TEST_CASE("reduced equation agrees with the mu > 0 closed form") {
    InitialData d{0, -1.5 * std::cbrt(2.0) - 1, -1, 1};
    TrajectorySolution s(d);
    REQUIRE(s.branch() == Branch::ZERO_MU_POS);
    auto t = uniform_grid(0, 2 * *s.x_period(), 0.02);
    auto r = integrate_reduced(d, t, {1e-12, 1e-12, 0.02});
    double m = 0;
    for (size_t i = 0; i < t.size(); ++i) m = std::max(m, std::abs(r.x[i] - s.x(t[i])));
    CHECK(m < 1e-7);
  }

  TEST_CASE("Lagrangian value") {
    CHECK(lagrangian_value({1, 2, 3}, {}) == 0);
    // alpha = beta = 0: kinetic part plus the rotational potential
    StateVector s{0.3, -0.4, 0.2, 1.0, 0.5, -0.2};
    double w = vertical_speed(s), rho = 1.5;
    double expect = 0.5 * (1.0 + 0.25 + w * w) + rho * s.y / 2 * s.dx - rho * s.x / 2 * s.dy;
    CHECK(lagrangian_value({0, 0, rho}, s) == Approx(expect));
    // L varies along a trajectory while the energy does not
    const LorentzForce F{0, 1, 1};
    auto t = uniform_grid(0, 5, 0.1);
    auto o = integrate_general(F, {0, 0, 0, 0.6, 0.3, -0.2}, t);
    double lmin = 1e300, lmax = -1e300;
    for (const auto& q : o.s) {
      double L = lagrangian_value(F, q);
      lmin = std::min(lmin, L);
      lmax = std::max(lmax, L);
    }
    CHECK(lmax - lmin > 1e-3);
  }

  TEST_CASE("Euler-Lagrange residuals") {
    const LorentzForce F{0.3, 0.8, -0.6};
    auto t = uniform_grid(0, 8, 1e-3);
    auto o = integrate_general(F, {0.1, 0.2, -0.3, 0.5, -0.4, 0.9}, t, {1e-11, 1e-11, 0.01});
    auto el = euler_lagrange_residual(F, t, o.s);
    CHECK(el.max() < 1e-5);
    CHECK(el.t.size() + 4 == t.size());
    // res_z is the left side of the third magnetic equation
    std::vector<StateVector> c;
    for (double tt : t) c.push_back({std::sin(tt), tt * tt, 0.3 * tt, std::cos(tt), 2 * tt, 0.3});
    auto ec = euler_lagrange_residual(F, t, c);
    for (size_t i = 0; i < ec.t.size(); i += 997) {
      double tt = ec.t[i];
      double x = std::sin(tt), y = tt * tt, dx = std::cos(tt), dy = 2 * tt, ddx = -std::sin(tt), ddy = 2;
      double third = 0 + 0.5 * (ddx * y - x * ddy) - (F.beta * dx + F.alpha * dy);
      CHECK(ec.r[i][2] == Approx(third).epsilon(1e-6));
    }
    // negative control
    std::vector<StateVector> line;
    for (double tt : t) line.push_back({tt, tt, 0, 1, 1, 0});
    CHECK(euler_lagrange_residual({0, 1, 1}, t, line).max() > 1e-2);
    std::vector<double> few{0, 1, 2};
    CHECK_THROWS(euler_lagrange_residual(F, few, std::vector<StateVector>(3)));
  }
}
