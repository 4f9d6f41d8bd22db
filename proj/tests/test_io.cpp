#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "heisenmag/io.hpp"

using namespace heisenmag;

namespace {

std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE("cli-io") {
  TEST_CASE("format_double round trips") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
      double v = u(rng) * std::pow(10.0, (i % 41) - 20);
      CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    CHECK(format_double(0.5) == "0.5");
    CHECK(std::strtod(format_double(std::numeric_limits<double>::denorm_min()).c_str(), nullptr) ==
          std::numeric_limits<double>::denorm_min());
  }

  TEST_CASE("csv write and read is bit exact") {
    SampleTable t{{"t", "x", "y", "z", "energy_residual"}, {}};
    for (int i = 0; i < 50; ++i) {
      double s = 0.1 * i;
      t.rows.push_back({s, std::sin(s) / 3, std::exp(-s), M_PI * s, 1e-17 * i});
    }
    auto path = temp_path("heisenmag_io_roundtrip.csv");
    write_csv(path, t);
    SampleTable b = read_csv(path);
    CHECK(b.columns == t.columns);
    REQUIRE(b.rows.size() == t.rows.size());
    for (size_t i = 0; i < t.rows.size(); ++i) CHECK(b.rows[i] == t.rows[i]);
    std::filesystem::remove(path);
  }

  TEST_CASE("empty table keeps its header") {
    SampleTable t{{"t", "x", "y", "z"}, {}};
    std::ostringstream os;
    write_csv(os, t);
    CHECK(os.str() == "t,x,y,z\n");
    auto path = temp_path("heisenmag_io_empty.csv");
    write_csv(path, t);
    SampleTable b = read_csv(path);
    CHECK(b.columns.size() == 4);
    CHECK(b.rows.empty());
    std::filesystem::remove(path);
  }

  TEST_CASE("json mirrors the csv rows") {
    SampleTable t{{"t", "x", "y", "z"}, {{0, 1, 2, 3}, {0.5, -1, 0.25, 4}}};
    json j = to_json(t);
    CHECK(j["columns"].size() == 4);
    REQUIRE(j["rows"].size() == 2);
    CHECK(j["rows"][1]["y"].get<double>() == 0.25);
    CHECK(j["rows"][0]["z"].get<double>() == 3);
  }

  TEST_CASE("read errors name the file") {
    auto missing = temp_path("heisenmag_io_missing.csv");
    std::filesystem::remove(missing);
    try {
      read_csv(missing);
      FAIL("no throw");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find(missing) != std::string::npos);
    }
    auto bad = temp_path("heisenmag_io_bad.csv");
    {
      std::ofstream f(bad);
      f << "t,x\n0,1\n1,abc\n";
    }
    try {
      read_csv(bad);
      FAIL("no throw");
    } catch (const std::runtime_error& e) {
      std::string m = e.what();
      CHECK(m.find(bad + ":3") != std::string::npos);
    }
    {
      std::ofstream f(bad);
      f << "t,x\n0,1,2\n";
    }
    CHECK_THROWS_AS(read_csv(bad), std::runtime_error);
    std::filesystem::remove(bad);
  }

  TEST_CASE("force json round trip") {
    LorentzForce F{0.25, -1.5, 3};
    LorentzForce G = force_from_json(to_json(F));
    CHECK(G.alpha == F.alpha);
    CHECK(G.beta == F.beta);
    CHECK(G.rho == F.rho);
    CHECK_THROWS(force_from_json(json{{"alpha", 1}}));
  }
}
