#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heisenmag/oracle.hpp"
#include "heisenmag/quartic.hpp"

namespace heisenmag {

// Closed form against the ODE oracle for one initial condition (force F_{e1,rho}).
struct BranchCheck {
  std::string branch;
  double ode_residual = 0;     // |x'' + h'(x) h(x) - rho| on [0, 10]
  double oracle_distance = 0;  // over two x-periods, or [0, 20] when there is none
  double first_integral = 0;
  double oracle_drift = 0;
  double window = 0;
};

BranchCheck check_branch(const InitialData& d, const OracleConfig& cfg = {1e-10, 1e-10, 0.01});

// An initial condition on the requested branch for this rho (rho > 0).
InitialData branch_representative(Branch b, double rho);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

struct AcceptanceOptions {
  std::uint64_t seed = 20240611;
  unsigned threads = 4;  // randomized suites only
};

CriterionResult criterion_closed_form(const AcceptanceOptions& o);       // 1
CriterionResult criterion_first_integral(const AcceptanceOptions& o);    // 2
CriterionResult criterion_discriminant(const AcceptanceOptions& o);      // 3
CriterionResult criterion_periodicity(const AcceptanceOptions& o);       // 4
CriterionResult criterion_dc_energy(const AcceptanceOptions& o);         // 5
CriterionResult criterion_closed_every_energy(const AcceptanceOptions& o);  // 6
CriterionResult criterion_exact_threshold(const AcceptanceOptions& o);   // 7
CriterionResult criterion_lambda_periodic(const AcceptanceOptions& o);   // 8
CriterionResult criterion_lattice_obstruction(const AcceptanceOptions& o);  // 9
CriterionResult criterion_lagrangian(const AcceptanceOptions& o);        // 10
CriterionResult criterion_elliptic(const AcceptanceOptions& o);          // 11

// ids empty = all eleven, in order
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& o,
                                            const std::vector<int>& ids = {});

std::string format_result_line(const CriterionResult& r);

}  // namespace heisenmag
