#pragma once

#include <array>

namespace heisenmag {

// Point of H3 in exponential coordinates: exp(x e1 + y e2 + z e3).
struct HeisenbergPoint {
  double x = 0, y = 0, z = 0;
};

HeisenbergPoint group_product(const HeisenbergPoint& p, const HeisenbergPoint& q);
HeisenbergPoint group_inverse(const HeisenbergPoint& p);

HeisenbergPoint operator*(const HeisenbergPoint& p, const HeisenbergPoint& q);

// Element a e1 + b e2 + c e3 of the Lie algebra.
struct AlgebraVector {
  double a = 0, b = 0, c = 0;
};

AlgebraVector bracket(const AlgebraVector& u, const AlgebraVector& v);
double inner(const AlgebraVector& u, const AlgebraVector& v);

// j(zc e3) restricted to span{e1,e2}: rotation by +90 degrees scaled by zc.
AlgebraVector j_map(double zc, const AlgebraVector& v);

using Mat2 = std::array<std::array<double, 2>, 2>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// F_{U,rho} with U = beta e1 + alpha e2.
struct LorentzForce {
  double alpha = 0, beta = 0, rho = 0;
};

Mat3 force_matrix(const LorentzForce& F);
AlgebraVector apply(const LorentzForce& F, const AlgebraVector& v);

// omega_F(u, v) = <F u, v>.
double two_form(const LorentzForce& F, const AlgebraVector& u, const AlgebraVector& v);

// <[U,V],FW> + <[V,W],FU> + <[W,U],FV>; vanishes for every F on this algebra.
double closedness_cyclic_sum(const LorentzForce& F, const AlgebraVector& u,
                             const AlgebraVector& v, const AlgebraVector& w);

// (B, r) . F = r det(B) F_{BU, rho}, B in O(2) acting on v and by det(B) on z.
LorentzForce act(const Mat2& B, double r, const LorentzForce& F);

double force_scale(const LorentzForce& F);

struct CanonicalForce {
  enum class Tag { A, B, Zero };
  Tag tag = Tag::Zero;
  double rho = 0;
  Mat2 witness_B{{{1, 0}, {0, 1}}};
  double witness_r = 1;

  LorentzForce force() const;
};

const char* tag_name(CanonicalForce::Tag t);

CanonicalForce classify_force(const LorentzForce& F);

// True iff r = +-1 and psi F psi^{-1} = r F, psi acting as B on v and det(B) on z.
bool isotropy_member(const LorentzForce& F, const Mat2& B, double r);

// theta with d(theta) = omega_F, in coordinates (dx, dy, dz).
std::array<double, 3> potential_one_form(const LorentzForce& F, const HeisenbergPoint& p);

// omega_F written in coordinates: coefficients of dx^dy, dx^dz, dy^dz at p.
std::array<double, 3> two_form_coordinates(const LorentzForce& F, const HeisenbergPoint& p);

double det(const Mat2& B);
Mat2 rotation(double angle);
// S(e1) = -e1, S(e2) = e2.
Mat2 reflection_S();

}  // namespace heisenmag
