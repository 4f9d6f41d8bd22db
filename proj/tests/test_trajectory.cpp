#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "heisenmag/acceptance.hpp"
#include "heisenmag/oracle.hpp"
#include "heisenmag/trajectory.hpp"

using namespace heisenmag;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

const Branch kBranches[] = {Branch::NEG,          Branch::POS_LOW,           Branch::POS_HIGH,
                            Branch::ZERO_MU_POS,  Branch::ZERO_MU_NEG_RIGHT, Branch::ZERO_MU_NEG_LEFT,
                            Branch::ZERO_CUSP};

double max_distance(const std::vector<StateVector>& a, const std::vector<StateVector>& b) {
  double m = 0;
  for (size_t i = 0; i < a.size(); ++i)
    m = std::max({m, std::abs(a[i].x - b[i].x), std::abs(a[i].y - b[i].y), std::abs(a[i].z - b[i].z)});
  return m;
}

// first t > t0 where x' changes sign from + to -, by bisection
double next_maximum(const TrajectorySolution& s, double t0, double step) {
  double a = t0, fa = s.dx(a);
  for (double b = t0 + step;; b += step) {
    double fb = s.dx(b);
    if (fa > 0 && fb <= 0) {
      for (int i = 0; i < 200 && b - a > 1e-15; ++i) {
        double m = 0.5 * (a + b);
        (s.dx(m) > 0 ? a : b) = m;
      }
      return 0.5 * (a + b);
    }
    a = b;
    fa = fb;
  }
}

}  // namespace

TEST_SUITE("trajectory-engine") {
  TEST_CASE("each branch: initial conditions, ODE residual, first integral") {
    for (double rho : {0.05, 0.3, 1.0, 2.5}) {
      for (Branch b : kBranches) {
        auto d = branch_representative(b, rho);
        TrajectorySolution s(d);
        CAPTURE(branch_name(b));
        CAPTURE(rho);
        REQUIRE(s.branch() == b);
        CHECK(std::abs(s.x(0)) < 1e-10);
        CHECK(std::abs(s.dx(0) - d.x0) < 1e-10);
        const double h = 1e-5;
        CHECK(std::abs((s.x(h) - s.x(-h)) / (2 * h) - s.dx(0)) < 1e-8);
        for (double t = 0; t <= 10; t += 0.05) {
          double x = s.x(t), hx = d.h(x);
          CHECK(std::abs(s.ddx(t) + d.dh(x) * hx - d.rho) < 1e-8);
          CHECK(std::abs(s.dx(t) * s.dx(t) + hx * hx - 2 * d.rho * x - d.normSq()) < 1e-9);
        }
      }
    }
  }

  TEST_CASE("nonzero x0 on the periodic branches") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> U(-2, 2), R(0.1, 2);
    int seen = 0;
    while (seen < 60) {
      InitialData d{U(g), U(g), U(g), R(g)};
      auto P = build_profile(d);
      if (P.boundary || P.branch == Branch::TRIVIAL) continue;
      ++seen;
      TrajectorySolution s(d);
      CHECK(std::abs(s.x(0)) < 1e-10);
      CHECK(std::abs(s.dx(0) - d.x0) < 1e-10);
      auto [lo, hi] = s.image();
      const double w = *s.x_period();
      for (double t = 0; t < 2 * w; t += w / 37) {
        CHECK(s.x(t) >= lo - 1e-9);
        CHECK(s.x(t) <= hi + 1e-9);
        CHECK(std::abs(s.x(t + w) - s.x(t)) < 1e-10);
      }
    }
  }

  TEST_CASE("closed form against the ODE oracle") {
    for (Branch b : kBranches) {
      // separatrix branches: see branch_representative; the oracle diverges at rho = 1
      const double rho = (b == Branch::ZERO_MU_NEG_LEFT || b == Branch::ZERO_MU_NEG_RIGHT) ? 0.05 : 1.0;
      auto c = check_branch(branch_representative(b, rho));
      CAPTURE(branch_name(b));
      CHECK(c.oracle_distance < 1e-6);
      CHECK(c.oracle_drift < 1e-9);
    }
  }

  TEST_CASE("table periods match the detected recurrence of x") {
    for (Branch b : {Branch::NEG, Branch::POS_LOW, Branch::POS_HIGH, Branch::ZERO_MU_POS}) {
      auto d = branch_representative(b, 1.0);
      d.x0 = 0.05;  // move off the turning point
      TrajectorySolution s(d);
      if (!s.x_period()) continue;
      double t1 = next_maximum(s, 0, 0.01);
      double t2 = next_maximum(s, t1 + 0.05, 0.01);
      CAPTURE(branch_name(s.branch()));
      CHECK(std::abs(t2 - t1 - *s.x_period()) < 1e-7 * *s.x_period());
    }
  }

  TEST_CASE("cusp: x = 4/(1+(t+C7)^2) - 4 at rho = 1") {
    TrajectorySolution s({0, 2, 2, 1});
    REQUIRE(s.branch() == Branch::ZERO_CUSP);
    const double C7 = s.constant().phase0;
    // r = -1, z0 + rho = 3: C7 = -sqrt((3r+3)/(r-3)) = 0
    CHECK(std::abs(C7) < 1e-12);
    for (double t : {0.0, 0.5, 2.0, 7.0})
      CHECK(s.x(t) == Approx(4 / (1 + (t + C7) * (t + C7)) - 4).epsilon(1e-13));
  }

  TEST_CASE("nominal constant corrected only by a sign flip") {
    TrajectorySolution a({0.7, 0.3, 0.2, 1}), b({-0.7, 0.3, 0.2, 1});
    CHECK(a.constant().name == "C1");
    CHECK(b.constant().sign_flipped != a.constant().sign_flipped);
    CHECK(std::abs(std::abs(a.constant().phase0) - std::abs(a.constant().nominal)) < 1e-7);
  }

  TEST_CASE("trivial branch is a one-parameter subgroup") {
    InitialData d{0, 1, -1, 2};
    TrajectorySolution s(d);
    REQUIRE(s.branch() == Branch::TRIVIAL);
    for (double t : {0.0, 0.7, 3.0}) {
      auto p = s.point(t);
      CHECK(p.x == 0);
      CHECK(p.y == Approx(d.y0 * t));
      CHECK(p.z == Approx(d.z0 * t));
    }
  }

  TEST_CASE("y and z at t = 0 and dy/dt") {
    TrajectorySolution s({0.4, -0.3, 0.6, 1.2});
    CHECK(s.y(0) == 0);
    CHECK(std::abs(s.z(0)) < 1e-15);
    const auto& d = s.data();
    for (double t : {0.3, 2.0, 9.0}) {
      // 4th-order central stencil
      double h = 1e-3, x = s.x(t);
      double dy = (-s.y(t + 2 * h) + 8 * s.y(t + h) - 8 * s.y(t - h) + s.y(t - 2 * h)) / (12 * h);
      CHECK(std::abs(dy - (0.5 * x * x + d.eta0() * x + d.y0)) < 1e-9);
    }
    // periodic increment caching agrees with direct quadrature
    const double w = *s.x_period();
    CHECK(s.y(3.5 * w) == Approx(s.y_integral(0, 3.5 * w)).epsilon(1e-11));
  }

  TEST_CASE("exact force: closed form, rotation period, straight line") {
    InitialData d{0.6, -0.2, 0.3, 1.5};
    const LorentzForce F{0, 0, 1.5};
    auto t = uniform_grid(0, 8, 0.01);
    auto orc = integrate_general(F, {0, 0, 0, d.x0, d.y0, d.z0}, t, {1e-12, 1e-12, 0.01});
    std::vector<StateVector> cf;
    for (double tt : t) cf.push_back(exact_state(d, tt));
    CHECK(max_distance(cf, orc.s) < 1e-9);
    auto p = exact_trajectory(d, 2 * pi / (d.z0 + d.rho));
    CHECK(std::abs(p.x) < 1e-12);
    CHECK(std::abs(p.y) < 1e-12);
    for (double tt : t) CHECK(metric_speed2(exact_state(d, tt)) == Approx(2 * energy(d)).epsilon(1e-12));
    InitialData line{0.6, -0.2, -1.5, 1.5};
    auto q = exact_trajectory(line, 2.0);
    CHECK(q.x == Approx(1.2));
    CHECK(q.y == Approx(-0.4));
    CHECK(q.z == Approx(-3.0));
  }

  TEST_CASE("negative x0: the |x0| convention reproduces the oracle") {
    for (auto d : {InitialData{-0.7, 0.3, 0.2, 1}, InitialData{-1, -2.5, -2, 1}, InitialData{-1.2, 0.5, 1, 0.4}}) {
      auto R = reflect_for_negative_x0(d);
      CHECK(R.convention == "abs-x0");
      CHECK(R.oracle_distance < 1e-7);
      const double h = 1e-5;
      auto a = R.curve(h), b = R.curve(-h);
      CHECK(std::abs((a.x - b.x) / (2 * h) - d.x0) < 1e-8);
      CHECK(std::abs((a.y - b.y) / (2 * h) - d.y0) < 1e-8);
      CHECK(energy(R.source) == Approx(energy(d)));
      // and agrees with the direct closed form for x0 < 0
      TrajectorySolution s(d);
      for (double t : {0.5, 3.0, 6.0}) {
        auto p = R.curve(t), q = s.point(t);
        CHECK(std::abs(p.x - q.x) + std::abs(p.y - q.y) + std::abs(p.z - q.z) < 1e-9);
      }
    }
    auto Z = reflect_for_negative_x0({0, 0, -1, 1});
    CHECK(Z.convention == "identity");
  }

  TEST_CASE("left translation is again a magnetic trajectory") {
    InitialData d{0.3, 0.2, -0.4, 1};
    TrajectorySolution s(d);
    HeisenbergPoint p{0.5, -1.0, 2.0};
    auto c = translate(s, p);
    auto c0 = c(0);
    CHECK(std::abs(c0.x - p.x) < 1e-14);
    CHECK(std::abs(c0.y - p.y) < 1e-14);
    CHECK(std::abs(c0.z - p.z) < 1e-14);
    auto id = translate(s, {});
    CHECK(id(1.3).y == Approx(s.point(1.3).y));
    auto t = uniform_grid(0, 6, 0.02);
    auto orc = integrate_general({0, 1, 1}, {p.x, p.y, p.z, d.x0, d.y0, d.z0 + 0.5 * (p.x * d.y0 - p.y * d.x0)}, t,
                                 {1e-12, 1e-12, 0.01});
    double m = 0;
    for (size_t i = 0; i < t.size(); ++i) {
      auto q = c(t[i]);
      m = std::max({m, std::abs(q.x - orc.s[i].x), std::abs(q.y - orc.s[i].y), std::abs(q.z - orc.s[i].z)});
    }
    CHECK(m < 1e-8);
  }

  TEST_CASE("energy") {
    CHECK(energy({0, 0, 0, 1}) == 0);
    CHECK(energy({1, 2, 2, 1}) == 4.5);
  }
}
