// One line per acceptance criterion; exit status is the number of failures.
#include <cstdio>
#include <cstdlib>

#include "heisenmag/acceptance.hpp"

int main(int argc, char** argv) {
  heisenmag::AcceptanceOptions opt;
  if (argc > 1) opt.seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  for (const auto& r : heisenmag::run_acceptance(opt)) {
    std::printf("%s\n", heisenmag::format_result_line(r).c_str());
    std::fflush(stdout);
    failed += !r.passed;
  }
  std::printf("%d/11 criteria passed\n", 11 - failed);
  return failed == 0 ? 0 : 1;
}
