#include <cstdio>
#include <cstdlib>
#include <string>

#include "holonomy/acceptance.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20260101;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  int failed = 0;
  for (const auto& result : holonomy::acceptance::run_all(seed)) {
    std::printf("%s\n", holonomy::acceptance::format_line(result).c_str());
    failed += result.passed ? 0 : 1;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
