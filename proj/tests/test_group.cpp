#include <doctest.h>

#include <cmath>
#include <random>

#include "heisenmag/group.hpp"

using namespace heisenmag;
using doctest::Approx;

namespace {

bool same(const HeisenbergPoint& a, const HeisenbergPoint& b, double tol = 1e-12) {
  return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol && std::abs(a.z - b.z) <= tol;
}

bool same(const LorentzForce& a, const LorentzForce& b, double tol) {
  return std::abs(a.alpha - b.alpha) <= tol && std::abs(a.beta - b.beta) <= tol &&
         std::abs(a.rho - b.rho) <= tol;
}

const AlgebraVector kBasis[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

}  // namespace

TEST_SUITE("group-core") {
  TEST_CASE("product examples") {
    CHECK(same(HeisenbergPoint{} * HeisenbergPoint{1.5, -2, 3}, {1.5, -2, 3}));
    CHECK(same(HeisenbergPoint{1, 0, 0} * HeisenbergPoint{0, 1, 0}, {1, 1, 0.5}));
    HeisenbergPoint p{2, -3, 5};
    CHECK(same(group_inverse(p), {-2, 3, -5}));
    CHECK(same(p * group_inverse(p), {}));
    CHECK(same(group_product(p, p), {4, -6, 10}));
  }

  TEST_CASE("property: associativity and inverses") {
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> U(-5, 5);
    for (int i = 0; i < 1000; ++i) {
      HeisenbergPoint a{U(g), U(g), U(g)}, b{U(g), U(g), U(g)}, c{U(g), U(g), U(g)};
      CHECK(same((a * b) * c, a * (b * c), 1e-12 * 50));
      CHECK(same(group_inverse(a * b), group_inverse(b) * group_inverse(a), 1e-12 * 50));
    }
  }

  TEST_CASE("bracket and j map") {
    auto e3 = bracket(kBasis[0], kBasis[1]);
    CHECK(e3.c == 1);
    CHECK(e3.a == 0);
    CHECK(bracket(kBasis[0], kBasis[2]).c == 0);
    auto v = j_map(1, kBasis[0]);
    CHECK(v.a == 0);
    CHECK(v.b == 1);
    auto w = j_map(2.5, kBasis[1]);
    CHECK(w.a == -2.5);
    CHECK(w.b == 0);
    auto z = j_map(0, {3, -4, 0});
    CHECK(z.a == 0);
    CHECK(z.b == 0);
    // <j(Z)U, V> = <Z, [U, V]>
    for (const auto& u : {kBasis[0], kBasis[1]})
      for (const auto& x : {kBasis[0], kBasis[1]})
        CHECK(inner(j_map(1.7, u), x) == Approx(inner({0, 0, 1.7}, bracket(u, x))));
  }

  TEST_CASE("force matrix is skew and the 2-form is closed") {
    std::mt19937_64 g(2);
    std::uniform_real_distribution<double> U(-3, 3);
    for (int i = 0; i < 200; ++i) {
      LorentzForce F{U(g), U(g), U(g)};
      auto M = force_matrix(F);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) CHECK(M[a][b] == -M[b][a]);
      for (const auto& u : kBasis)
        for (const auto& v : kBasis)
          for (const auto& w : kBasis) CHECK(std::abs(closedness_cyclic_sum(F, u, v, w)) < 1e-14);
      // omega_F(e1, e2) = rho, (e1, e3) = beta, (e2, e3) = alpha
      CHECK(two_form(F, kBasis[0], kBasis[1]) == Approx(F.rho));
      CHECK(two_form(F, kBasis[0], kBasis[2]) == Approx(F.beta));
      CHECK(two_form(F, kBasis[1], kBasis[2]) == Approx(F.alpha));
    }
  }

  TEST_CASE("classification examples") {
    auto a = classify_force({4, 3, 2});
    CHECK(a.tag == CanonicalForce::Tag::A);
    CHECK(a.rho == Approx(0.4));
    CHECK(a.witness_r == Approx(0.2));
    auto b = classify_force({0, 0, -3});
    CHECK(b.tag == CanonicalForce::Tag::B);
    CHECK(b.rho == 1);
    auto c = classify_force({0, 1, 0});
    CHECK(c.tag == CanonicalForce::Tag::A);
    CHECK(c.rho == 0);
    CHECK(c.witness_r == 1);
    CHECK(c.witness_B[0][0] == 1);
    CHECK(c.witness_B[1][1] == 1);
    CHECK(classify_force({0, 0, 0}).tag == CanonicalForce::Tag::Zero);
  }

  TEST_CASE("property: witness soundness and idempotence") {
    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> U(-4, 4);
    for (int i = 0; i < 1000; ++i) {
      LorentzForce F{U(g), U(g), U(g)};
      if (i % 10 == 0) F.alpha = F.beta = 0;
      auto c = classify_force(F);
      auto G = act(c.witness_B, c.witness_r, F);
      CHECK(same(G, c.force(), 1e-10));
      auto again = classify_force(c.force());
      CHECK(again.tag == c.tag);
      CHECK(again.rho == Approx(c.rho));
      CHECK(again.witness_r == Approx(1.0));
      CHECK(std::abs(det(c.witness_B)) == Approx(1.0));
    }
  }

  TEST_CASE("different rho give different orbits") {
    auto a = classify_force({0, 1, 0.5}), b = classify_force({0, 1, 0.7});
    CHECK(a.tag == b.tag);
    CHECK(a.rho != Approx(b.rho));
  }

  TEST_CASE("isotropy of F_{e1,rho}") {
    const Mat2 I{{{1, 0}, {0, 1}}}, S = reflection_S();
    Mat2 mS = S, mI = I;
    for (auto& row : mS)
      for (auto& v : row) v = -v;
    for (auto& row : mI)
      for (auto& v : row) v = -v;
    LorentzForce F{0, 1, 2};
    CHECK(isotropy_member(F, I, 1));
    // the reflection fixing e1 (= -S) pairs with r = -1; S itself moves e1
    CHECK(isotropy_member(F, mS, -1));
    CHECK_FALSE(isotropy_member(F, S, -1));
    CHECK_FALSE(isotropy_member(F, mI, -1));
    CHECK_FALSE(isotropy_member(F, I, 2));
    // rho = 0 has the larger group
    LorentzForce F0{0, 1, 0};
    CHECK(isotropy_member(F0, mI, -1));
    CHECK(isotropy_member(F0, S, 1));
    CHECK(isotropy_member(F0, mS, -1));
    CHECK_FALSE(isotropy_member(F0, rotation(0.3), 1));
    // exact force: every rotation with r = 1
    for (double a : {0.1, 1.0, 2.9}) CHECK(isotropy_member({0, 0, 1}, rotation(a), 1));
    CHECK_FALSE(isotropy_member({0, 0, 1}, S, 1));
  }

  TEST_CASE("potential one-form") {
    auto t = potential_one_form({0, 0, 2}, {0.4, -1.2, 3});
    CHECK(t[0] == Approx(1.2));
    CHECK(t[1] == Approx(0.4));
    CHECK(t[2] == 0);
    auto o = potential_one_form({1, 2, 3}, {0, 0, 0});
    CHECK(o[0] == 0);
    CHECK(o[1] == 0);
    CHECK(o[2] == 0);
    CHECK(two_form_coordinates({1, 1, 1}, {1, 1, 0})[0] == Approx(0.0));
  }

  TEST_CASE("property: finite-difference d(theta) reproduces omega_F") {
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> U(-2, 2);
    const double h = 1e-4;
    for (int i = 0; i < 100; ++i) {
      LorentzForce F{U(g), U(g), U(g)};
      HeisenbergPoint p{U(g), U(g), U(g)};
      auto d = [&](int comp, int axis) {
        HeisenbergPoint a = p, b = p;
        (axis == 0 ? a.x : axis == 1 ? a.y : a.z) += h;
        (axis == 0 ? b.x : axis == 1 ? b.y : b.z) -= h;
        return (potential_one_form(F, a)[comp] - potential_one_form(F, b)[comp]) / (2 * h);
      };
      auto w = two_form_coordinates(F, p);
      CHECK(std::abs(d(1, 0) - d(0, 1) - w[0]) < 1e-8);
      CHECK(std::abs(d(2, 0) - d(0, 2) - w[1]) < 1e-8);
      CHECK(std::abs(d(2, 1) - d(1, 2) - w[2]) < 1e-8);
    }
  }

  TEST_CASE("action composes and preserves the canonical scale") {
    LorentzForce F{0.3, -1.1, 0.8};
    auto G = act(rotation(0.7), 1, F);
    CHECK(std::hypot(G.alpha, G.beta) == Approx(std::hypot(F.alpha, F.beta)));
    CHECK(G.rho == Approx(F.rho));
    auto H = act(rotation(-0.7), 1, G);
    CHECK(same(H, F, 1e-14));
  }
}
