#include "heisenmag/reference.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

namespace heisenmag::reference {

EllipticEval integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  double err = 0;
  double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, tol, &err);
  err *= 0.5 * std::abs(b - a);
  return {v, err};
}

namespace {
constexpr double pi = std::numbers::pi;

double w(double t, double k) {
  double s = std::sin(t);
  return std::sqrt(1.0 - k * k * s * s);
}
}  // namespace

EllipticEval K_by_quadrature(double k) {
  return integrate([k](double t) { return 1.0 / w(t, k); }, 0, pi / 2);
}

EllipticEval E_by_quadrature(double k) {
  return integrate([k](double t) { return w(t, k); }, 0, pi / 2);
}

EllipticEval Pi_by_quadrature(double alpha2, double k) {
  return integrate(
      [=](double t) {
        double s = std::sin(t);
        return 1.0 / ((1.0 - alpha2 * s * s) * w(t, k));
      },
      0, pi / 2);
}

EllipticEval F_by_quadrature(double phi, double k) {
  return integrate([k](double t) { return 1.0 / w(t, k); }, 0, phi);
}

EllipticEval I1_by_quadrature(double A, double B, double k) {
  return integrate([=](double t) { return 1.0 / ((A * std::cos(t) + B) * w(t, k)); }, 0, 2 * pi);
}

EllipticEval I2_by_quadrature(double A, double B, double k) {
  return integrate(
      [=](double t) {
        double d = A * std::cos(t) + B;
        return 1.0 / (d * d * w(t, k));
      },
      0, 2 * pi);
}

}  // namespace heisenmag::reference
