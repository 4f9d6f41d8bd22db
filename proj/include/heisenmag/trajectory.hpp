#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heisenmag/group.hpp"
#include "heisenmag/oracle.hpp"
#include "heisenmag/quartic.hpp"

namespace heisenmag {

using Curve = std::function<HeisenbergPoint(double)>;

// How the nominal integration constant was adjusted to get x(0)=0 and sign x'(0) = sign x0.
struct ConstantRecord {
  std::string name;        // C1, C21, C31, C4, C5, C6, C7
  double nominal = 0;      // value of the nominal expression
  double phase0 = 0;       // phase actually used at t = 0
  bool sign_flipped = false;
};

// Closed-form magnetic trajectory through the identity for F_{e1,rho}.
class TrajectorySolution {
 public:
  explicit TrajectorySolution(const InitialData& d);

  const InitialData& data() const { return data_; }
  const QuarticProfile& profile() const { return prof_; }
  Branch branch() const { return prof_.branch; }
  const ConstantRecord& constant() const { return constant_; }

  double x(double t) const;
  double dx(double t) const;
  double ddx(double t) const;
  double y(double t) const;
  double z(double t) const;
  HeisenbergPoint point(double t) const;
  StateVector state(double t) const;

  // Evaluates along an ascending grid with cumulative quadrature for y.
  std::vector<StateVector> sample(const std::vector<double>& times) const;

  std::optional<double> x_period() const { return period_; }
  // y over one x-period, by quadrature (cached at construction).
  std::optional<double> y_period_increment() const { return y_period_; }
  // Image interval of x(t) from the branch table.
  std::pair<double, double> image() const { return image_; }

  // int_a^b (x^2/2 + (z0+rho) x + y0) ds
  double y_integral(double a, double b) const;

 private:
  double eta(double phase) const;
  double deta(double phase) const;
  double ddeta(double phase) const;
  double y_direct(double t) const;

  InitialData data_;
  QuarticProfile prof_;
  ConstantRecord constant_;
  double rate_ = 0;
  // branch coefficients
  double c_[6] = {0, 0, 0, 0, 0, 0};
  double mod_ = 0;
  std::optional<double> period_;
  std::optional<double> y_period_;
  std::pair<double, double> image_{0, 0};
};

// Exact force F_{0,rho}: closed-form solution through the identity.
HeisenbergPoint exact_trajectory(const InitialData& d, double t);
StateVector exact_state(const InitialData& d, double t);

double energy(const InitialData& d);

Curve translate(const TrajectorySolution& sol, const HeisenbergPoint& p);

struct ReflectedTrajectory {
  InitialData requested;
  InitialData source;            // data the closed form is built from
  std::string convention;        // "identity", "abs-x0" or "flip-yz"
  double oracle_distance = 0;    // max distance to the oracle on the check window
  Curve curve;
};

// sigma(t) = (x_s(-t), -y_s(-t), -z_s(-t)) built from a source with nonnegative x0.
ReflectedTrajectory reflect_for_negative_x0(const InitialData& d);

}  // namespace heisenmag
