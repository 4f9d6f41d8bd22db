#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "heisenmag/group.hpp"
#include "heisenmag/periodicity.hpp"
#include "heisenmag/quartic.hpp"

namespace heisenmag {

using json = nlohmann::json;

json to_json(const LorentzForce& F);
LorentzForce force_from_json(const json& j);
json to_json(const CanonicalForce& c);
json to_json(const InitialData& d);
json to_json(const QuarticProfile& p);
json to_json(const CdeCoordinates& c);
json to_json(const HeisenbergPoint& p);
json to_json(const BracketLog& log);

// 17 significant digits, round-trips through strtod.
std::string format_double(double v);

// Table with a header row; every row has the same number of columns.
struct SampleTable {
  std::vector<std::string> columns;  // starts with t,x,y,z
  std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& os, const SampleTable& table);
void write_csv(const std::string& path, const SampleTable& table);
SampleTable read_csv(const std::string& path);
json to_json(const SampleTable& table);

}  // namespace heisenmag
