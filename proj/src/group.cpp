#include "heisenmag/group.hpp"

#include <algorithm>
#include <cmath>

namespace heisenmag {

HeisenbergPoint group_product(const HeisenbergPoint& p, const HeisenbergPoint& q) {
  // <J v1, v2> with J(x,y) = (-y,x)
  double omega = p.x * q.y - p.y * q.x;
  return {p.x + q.x, p.y + q.y, p.z + q.z + 0.5 * omega};
}

HeisenbergPoint group_inverse(const HeisenbergPoint& p) { return {-p.x, -p.y, -p.z}; }

HeisenbergPoint operator*(const HeisenbergPoint& p, const HeisenbergPoint& q) {
  return group_product(p, q);
}

AlgebraVector bracket(const AlgebraVector& u, const AlgebraVector& v) {
  return {0, 0, u.a * v.b - u.b * v.a};
}

double inner(const AlgebraVector& u, const AlgebraVector& v) {
  return u.a * v.a + u.b * v.b + u.c * v.c;
}

AlgebraVector j_map(double zc, const AlgebraVector& v) { return {-zc * v.b, zc * v.a, 0}; }

Mat3 force_matrix(const LorentzForce& F) {
  return {{{0, -F.rho, -F.beta}, {F.rho, 0, -F.alpha}, {F.beta, F.alpha, 0}}};
}

AlgebraVector apply(const LorentzForce& F, const AlgebraVector& v) {
  Mat3 m = force_matrix(F);
  return {m[0][0] * v.a + m[0][1] * v.b + m[0][2] * v.c,
          m[1][0] * v.a + m[1][1] * v.b + m[1][2] * v.c,
          m[2][0] * v.a + m[2][1] * v.b + m[2][2] * v.c};
}

double two_form(const LorentzForce& F, const AlgebraVector& u, const AlgebraVector& v) {
  return inner(apply(F, u), v);
}

double closedness_cyclic_sum(const LorentzForce& F, const AlgebraVector& u,
                             const AlgebraVector& v, const AlgebraVector& w) {
  return inner(bracket(u, v), apply(F, w)) + inner(bracket(v, w), apply(F, u)) +
         inner(bracket(w, u), apply(F, v));
}

double det(const Mat2& B) { return B[0][0] * B[1][1] - B[0][1] * B[1][0]; }

Mat2 rotation(double angle) {
  double c = std::cos(angle), s = std::sin(angle);
  return {{{c, -s}, {s, c}}};
}

Mat2 reflection_S() { return {{{-1, 0}, {0, 1}}}; }

LorentzForce act(const Mat2& B, double r, const LorentzForce& F) {
  double s = r * det(B);
  double bu0 = B[0][0] * F.beta + B[0][1] * F.alpha;
  double bu1 = B[1][0] * F.beta + B[1][1] * F.alpha;
  return {s * bu1, s * bu0, s * F.rho};
}

double force_scale(const LorentzForce& F) {
  return std::max({std::abs(F.alpha), std::abs(F.beta), std::abs(F.rho), 1.0});
}

LorentzForce CanonicalForce::force() const {
  switch (tag) {
    case Tag::A: return {0, 1, rho};
    case Tag::B: return {0, 0, 1};
    default: return {0, 0, 0};
  }
}

const char* tag_name(CanonicalForce::Tag t) {
  switch (t) {
    case CanonicalForce::Tag::A: return "A";
    case CanonicalForce::Tag::B: return "B";
    default: return "Zero";
  }
}

CanonicalForce classify_force(const LorentzForce& F) {
  const double tol = 1e-12 * force_scale(F);
  const double nu = std::hypot(F.beta, F.alpha);
  CanonicalForce out;
  if (nu > tol) {
    // rotate U/|U| onto e1; a negative rho is first flipped by (-Id,-1)
    double c = F.beta / nu, s = F.alpha / nu;
    Mat2 R{{{c, s}, {-s, c}}};
    double r = 1.0 / nu;
    bool flip = F.rho < -tol;
    if (flip) {
      R = {{{-c, -s}, {s, -c}}};
      r = -r;
    }
    out.tag = CanonicalForce::Tag::A;
    out.rho = std::abs(F.rho) > tol ? std::abs(F.rho) / nu : 0.0;
    out.witness_B = R;
    out.witness_r = r;
    return out;
  }
  if (std::abs(F.rho) > tol) {
    out.tag = CanonicalForce::Tag::B;
    out.rho = 1;
    out.witness_r = 1.0 / F.rho;
    return out;
  }
  return out;
}

bool isotropy_member(const LorentzForce& F, const Mat2& B, double r) {
  const double tol = 1e-12 * force_scale(F);
  if (std::abs(std::abs(r) - 1) > 1e-12) return false;
  LorentzForce G = act(B, r, F);
  return std::abs(G.alpha - F.alpha) <= tol && std::abs(G.beta - F.beta) <= tol &&
         std::abs(G.rho - F.rho) <= tol;
}

std::array<double, 3> potential_one_form(const LorentzForce& F, const HeisenbergPoint& p) {
  const double x = p.x, y = p.y;
  return {-F.rho * y / 2 + F.beta * x * y / 2, F.rho * x / 2 - F.alpha * x * y / 2,
          F.beta * x + F.alpha * y};
}

std::array<double, 3> two_form_coordinates(const LorentzForce& F, const HeisenbergPoint& p) {
  // e^1 = dx, e^2 = dy, e^3 = dz + (y dx - x dy)/2
  return {F.rho - F.beta * p.x / 2 - F.alpha * p.y / 2, F.beta, F.alpha};
}

}  // namespace heisenmag
