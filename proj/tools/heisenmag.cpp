#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "heisenmag/acceptance.hpp"
#include "heisenmag/elliptic.hpp"
#include "heisenmag/errors.hpp"
#include "heisenmag/group.hpp"
#include "heisenmag/io.hpp"
#include "heisenmag/oracle.hpp"
#include "heisenmag/periodicity.hpp"
#include "heisenmag/quartic.hpp"
#include "heisenmag/reference.hpp"
#include "heisenmag/trajectory.hpp"

using namespace heisenmag;

namespace {

constexpr int kDomain = 1, kVerification = 2, kUsage = 64;

// HEISENMAG_TOL replaces the default oracle tolerance; --tol wins over both.
double oracle_tolerance(std::optional<double> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("HEISENMAG_TOL")) {
    char* end = nullptr;
    double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0))
      throw DomainError(std::string("HEISENMAG_TOL must be a positive number, got '") + env + "'");
    return v;
  }
  return 1e-10;
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << j.dump(2) << "\n";
  if (!os) throw std::runtime_error("write failed for " + path);
}

struct IcFlags {
  double x0 = 0, y0 = 0, z0 = 0, rho = 1;
  void add(CLI::App* app) {
    app->add_option("--x0", x0, "initial e1 velocity")->required();
    app->add_option("--y0", y0, "initial e2 velocity")->required();
    app->add_option("--z0", z0, "initial e3 velocity")->required();
    app->add_option("--rho", rho, "vertical component of the force")->required();
  }
  InitialData data() const { return {x0, y0, z0, rho}; }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heisenmag: magnetic trajectories on the Heisenberg group"};
  app.require_subcommand(1);
  std::string out_path;
  app.add_option("-o,--output", out_path, "write to this file instead of stdout");

  // classify
  auto* cls = app.add_subcommand("classify", "canonical form of a left-invariant Lorentz force");
  LorentzForce F;
  cls->add_option("--alpha", F.alpha)->required();
  cls->add_option("--beta", F.beta)->required();
  cls->add_option("--rho", F.rho)->required();

  // classify-ic
  auto* cic = app.add_subcommand("classify-ic", "quartic profile and branch of initial data");
  IcFlags ic;
  ic.add(cic);

  // sample
  auto* smp = app.add_subcommand("sample", "sample the closed-form trajectory through the identity");
  IcFlags sic;
  sic.add(smp);
  double t_max = 10, dt = 0.01;
  std::string format = "csv";
  bool exact = false, use_oracle = false;
  std::optional<double> tol;
  smp->add_option("--t-max", t_max)->check(CLI::NonNegativeNumber);
  smp->add_option("--dt", dt)->check(CLI::PositiveNumber);
  smp->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
  smp->add_flag("--exact", exact, "use the exact force F_{0,rho} instead of F_{e1,rho}");
  smp->add_flag("--oracle", use_oracle, "sample the ODE oracle instead of the closed form");
  smp->add_option("--tol", tol, "oracle tolerance")->check(CLI::PositiveNumber);

  // periodic
  auto* per = app.add_subcommand("periodic", "closed trajectory with the given energy");
  double p_rho = 1, p_E = 1, p_e = 0;
  per->add_option("--rho", p_rho)->required()->check(CLI::NonNegativeNumber);
  per->add_option("--energy", p_E)->required()->check(CLI::PositiveNumber);
  per->add_option("--e", p_e)->check(CLI::Range(-1.0, 1.0));

  // lattice
  auto* lat = app.add_subcommand("lattice", "lambda-periodic trajectory for a lattice element");
  int l_k = 1;
  std::vector<double> l_lambda;
  double l_E = 1, l_rho = 1;
  lat->add_option("--k", l_k)->required()->check(CLI::PositiveNumber);
  lat->add_option("--lambda", l_lambda, "y1,z1 (x1 = 0) or x1,y1,z1")
      ->required()
      ->delimiter(',')
      ->expected(2, 3);
  lat->add_option("--energy", l_E)->required()->check(CLI::PositiveNumber);
  lat->add_option("--rho", l_rho)->check(CLI::NonNegativeNumber);

  // lattice-obstruction
  auto* obs = app.add_subcommand("lattice-obstruction", "does the lattice contain lambda with x1 = 0");
  std::vector<double> basis;
  double center_step = 0.5;
  long radius = 10000;
  obs->add_option("--basis", basis, "a,b,c,d: rows (a b; c d), columns span the lattice")
      ->required()
      ->delimiter(',')
      ->expected(4);
  obs->add_option("--center-step", center_step)->check(CLI::PositiveNumber);
  obs->add_option("--radius", radius)->check(CLI::PositiveNumber);

  // verify
  auto* ver = app.add_subcommand("verify", "acceptance suite or one branch cross-validation");
  std::string suite;
  std::string vcase;
  double v_rho = 1;
  std::uint64_t seed = AcceptanceOptions{}.seed;
  unsigned threads = 4;
  std::optional<double> vtol;
  auto* o_suite = ver->add_option("--suite", suite, "all, or comma separated criterion ids");
  auto* o_case = ver->add_option("--case", vcase, "branch name, e.g. NEG or ZERO_CUSP");
  o_suite->excludes(o_case);
  ver->add_option("--rho", v_rho)->check(CLI::PositiveNumber);
  ver->add_option("--seed", seed);
  ver->add_option("--threads", threads)->check(CLI::PositiveNumber);
  ver->add_option("--tol", vtol, "oracle tolerance for --case")->check(CLI::PositiveNumber);

  // elliptic
  auto* ell = app.add_subcommand("elliptic", "elliptic kernel self-check");
  bool check = false;
  ell->add_flag("--check", check)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*cls) {
      auto c = classify_force(F);
      json j = to_json(c);
      j["input"] = to_json(F);
      emit(j, out_path);
    } else if (*cic) {
      auto P = build_profile(ic.data());
      json j = to_json(P);
      j["trivial"] = ic.data().trivial();
      if (P.branch != Branch::TRIVIAL && !P.boundary && P.delta != 0) {
        j["real_root_count"] = count_real_roots(P);
      }
      if (P.boundary && P.branch != Branch::ZERO_CUSP) {
        auto m = mu_r_closed_forms(P);
        j["mu_forms"] = {{"r_formula", m.r_formula},
                         {"mu_from_r", m.mu_from_r},
                         {"mu_sixth_form", m.mu_sixth_form},
                         {"mu_full_form", m.mu_full_form}};
      }
      emit(j, out_path);
    } else if (*smp) {
      const InitialData d = sic.data();
      const auto times = uniform_grid(0, t_max, dt);
      SampleTable table;
      table.columns = {"t", "x", "y", "z", "energy_residual"};
      const double E = energy(d);
      std::vector<StateVector> states;
      if (use_oracle) {
        double tl = oracle_tolerance(tol);
        LorentzForce G = exact ? LorentzForce{0, 0, d.rho} : LorentzForce{0, 1, d.rho};
        states = integrate_general(G, {0, 0, 0, d.x0, d.y0, d.z0}, times, {tl, tl, 0.05}).s;
      } else if (exact) {
        for (double t : times) states.push_back(exact_state(d, t));
      } else {
        states = TrajectorySolution(d).sample(times);
      }
      for (size_t i = 0; i < times.size(); ++i) {
        const auto& s = states[i];
        table.rows.push_back({times[i], s.x, s.y, s.z, 0.5 * metric_speed2(s) - E});
      }
      if (format == "json") {
        emit(to_json(table), out_path);
      } else if (out_path.empty()) {
        write_csv(std::cout, table);
      } else {
        write_csv(out_path, table);
      }
    } else if (*per) {
      auto R = build_periodic(p_E, p_e, p_rho);
      json j = {{"energy", p_E},
                {"e", p_e},
                {"rho", p_rho},
                {"cde", to_json(R.cde)},
                {"initial", to_json(R.data)},
                {"period", R.omega},
                {"closure_residual", R.closure},
                {"energy_error", R.energy_error},
                {"endpoint", to_json(R.sol->point(R.omega))},
                {"brackets", to_json(R.brackets)}};
      emit(j, out_path);
      if (!(R.closure < 1e-7)) return kVerification;
    } else if (*lat) {
      LatticeElement lam;
      lam.k = l_k;
      if (l_lambda.size() == 2) {
        lam.y1 = l_lambda[0];
        lam.z1 = l_lambda[1];
      } else {
        lam.x1 = l_lambda[0];
        lam.y1 = l_lambda[1];
        lam.z1 = l_lambda[2];
      }
      if (!in_gamma_k(lam.point(), l_k))
        throw DomainError("lattice: lambda is not an element of Gamma_" + std::to_string(l_k));
      auto L = find_lambda_periodic(lam, l_E, l_rho);
      auto prim = primitive_period(L.curve, L.omega, l_k);
      json j = {{"lambda", to_json(lam.point())},
                {"k", l_k},
                {"energy", l_E},
                {"rho", l_rho},
                {"n", L.n},
                {"conjugator_a", L.a},
                {"x_period", L.omega},
                {"lambda_period", L.omega_total},
                {"lambda1", to_json(L.lambda1)},
                {"cde", to_json(L.cde)},
                {"initial", to_json(L.sol->data())},
                {"residual", L.residual},
                {"primitive", {{"lambda0", to_json(prim.lambda0.point())},
                               {"omega0", prim.omega0},
                               {"multiple", prim.multiple}}},
                {"brackets", to_json(L.brackets)}};
      emit(j, out_path);
      if (!(L.residual < 1e-7)) return kVerification;
    } else if (*obs) {
      Mat2 B{{{basis[0], basis[1]}, {basis[2], basis[3]}}};
      bool found = lattice_obstruction_check(B, center_step, radius);
      json j = {{"basis", {{basis[0], basis[1]}, {basis[2], basis[3]}}},
                {"center_step", center_step},
                {"radius", radius},
                {"has_kernel_element", found},
                {"noncontractible_closed_candidates", found}};
      emit(j, out_path);
    } else if (*ver) {
      if (!vcase.empty()) {
        Branch b = branch_from_name(vcase);
        InitialData d = branch_representative(b, v_rho);
        double tl = oracle_tolerance(vtol);
        auto c = check_branch(d, {tl, tl, 0.01});
        bool ok = c.branch == vcase && c.ode_residual < 1e-8 && c.oracle_distance < 1e-6 &&
                  c.first_integral < 1e-9;
        json j = {{"case", vcase},
                  {"initial", to_json(d)},
                  {"branch", c.branch},
                  {"ode_residual", c.ode_residual},
                  {"oracle_distance", c.oracle_distance},
                  {"window", c.window},
                  {"first_integral_drift", c.first_integral},
                  {"oracle_constraint_drift", c.oracle_drift},
                  {"oracle_tolerance", tl},
                  {"passed", ok}};
        emit(j, out_path);
        return ok ? 0 : kVerification;
      }
      std::vector<int> ids;
      if (!suite.empty() && suite != "all") {
        std::string tok;
        for (char ch : suite + ",") {
          if (ch == ',') {
            if (!tok.empty()) ids.push_back(std::stoi(tok));
            tok.clear();
          } else {
            tok += ch;
          }
        }
        for (int id : ids)
          if (id < 1 || id > 11) throw DomainError("verify: criterion ids are 1..11");
      }
      AcceptanceOptions opt;
      opt.seed = seed;
      opt.threads = threads;
      int failed = 0;
      json arr = json::array();
      for (const auto& r : run_acceptance(opt, ids)) {
        std::cerr << format_result_line(r) << "\n";
        arr.push_back({{"id", r.id},
                       {"name", r.name},
                       {"passed", r.passed},
                       {"detail", r.detail},
                       {"seconds", r.seconds}});
        failed += !r.passed;
      }
      emit({{"seed", seed}, {"criteria", arr}, {"failed", failed}}, out_path);
      return failed ? kVerification : 0;
    } else if (*ell) {
      auto r = criterion_elliptic({});
      json rows = json::array();
      bool ok = r.passed;
      for (double k : {0.0, 0.3, 0.7, 0.9, 0.99}) {
        double K = complete_K(k), E = complete_E(k);
        double Kq = reference::K_by_quadrature(k).value, Eq = reference::E_by_quadrature(k).value;
        bool pass = std::abs(K - Kq) < 1e-12 * Kq && std::abs(E - Eq) < 1e-12 * std::max(1.0, Eq);
        ok = ok && pass;
        rows.push_back({{"k", k}, {"K", K}, {"K_quadrature", Kq}, {"E", E}, {"E_quadrature", Eq},
                        {"passed", pass}});
      }
      std::cerr << format_result_line(r) << "\n";
      emit({{"complete", rows}, {"cn_integrals", {{"passed", r.passed}, {"detail", r.detail}}},
            {"passed", ok}},
           out_path);
      return ok ? 0 : kVerification;
    }
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kDomain;
  } catch (const NotFound& e) {
    std::cerr << "not found: " << e.what() << "\n";
    return kDomain;
  } catch (const VerificationError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kVerification;
  } catch (const OracleError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kVerification;
  } catch (const QuadratureError& e) {
    std::cerr << "verification failure: " << e.what() << "\n";
    return kVerification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return 0;
}
