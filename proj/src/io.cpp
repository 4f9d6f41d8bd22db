#include "heisenmag/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "heisenmag/errors.hpp"

namespace heisenmag {

json to_json(const LorentzForce& F) { return {{"alpha", F.alpha}, {"beta", F.beta}, {"rho", F.rho}}; }

LorentzForce force_from_json(const json& j) {
  return {j.at("alpha").get<double>(), j.at("beta").get<double>(), j.at("rho").get<double>()};
}

json to_json(const CanonicalForce& c) {
  const auto& B = c.witness_B;
  return {{"tag", tag_name(c.tag)},
          {"rho", c.rho},
          {"witness", {{"B", {{B[0][0], B[0][1]}, {B[1][0], B[1][1]}}}, {"r", c.witness_r}}}};
}

json to_json(const InitialData& d) {
  return {{"x0", d.x0}, {"y0", d.y0}, {"z0", d.z0}, {"rho", d.rho}};
}

json to_json(const QuarticProfile& p) {
  json roots = json::array();
  for (const auto& r : p.roots) roots.push_back({{"re", r.real()}, {"im", r.imag()}});
  json j = {{"initial", to_json(p.data)},
            {"p0", p.p0},
            {"q0", p.q0},
            {"delta", p.delta},
            {"boundary", p.boundary},
            {"roots", roots},
            {"branch", branch_name(p.branch)}};
  switch (p.branch) {
    case Branch::NEG:
      j["r1"] = p.r1;
      j["r4"] = p.r4;
      j["delta1"] = p.delta1;
      j["delta4"] = p.delta4;
      j["k"] = p.k;
      break;
    case Branch::POS_LOW:
    case Branch::POS_HIGH:
      j["r"] = {p.r1, p.r2, p.r3, p.r4};
      j["delta1"] = p.delta1;
      j["delta4"] = p.delta4;
      j["k1"] = p.k1;
      break;
    case Branch::TRIVIAL:
      break;
    default:
      j["r_double"] = p.r_double;
      j["mu"] = p.mu;
      break;
  }
  return j;
}

json to_json(const CdeCoordinates& c) {
  return {{"c", c.c}, {"d", c.d}, {"e", c.e}, {"rho", c.rho}};
}

json to_json(const HeisenbergPoint& p) { return {p.x, p.y, p.z}; }

json to_json(const BracketLog& log) {
  json a = json::array();
  for (const auto& b : log) a.push_back({{"what", b.what}, {"lo", b.lo}, {"hi", b.hi}});
  return a;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(std::ostream& os, const SampleTable& table) {
  for (size_t i = 0; i < table.columns.size(); ++i)
    os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

void write_csv(const std::string& path, const SampleTable& table) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error(path + ": cannot open for writing: " + std::strerror(errno));
  write_csv(f, table);
  if (!f) throw std::runtime_error(path + ": write failed");
}

SampleTable read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error(path + ": cannot open for reading: " + std::strerror(errno));
  SampleTable t;
  std::string line;
  if (!std::getline(f, line)) throw std::runtime_error(path + ": missing header");
  {
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, ',')) t.columns.push_back(col);
  }
  int lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      char* end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str())
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
      row.push_back(v);
    }
    if (row.size() != t.columns.size())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": column count mismatch");
    t.rows.push_back(std::move(row));
  }
  return t;
}

json to_json(const SampleTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    json o;
    for (size_t i = 0; i < r.size(); ++i) o[table.columns[i]] = r[i];
    rows.push_back(o);
  }
  return {{"columns", table.columns}, {"rows", rows}};
}

}  // namespace heisenmag
