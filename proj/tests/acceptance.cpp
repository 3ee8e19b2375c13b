#include <chrono>
#include <cstdio>

#include "ergo/verify.hpp"

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto results = ergo::run_acceptance();
  int failed = 0;
  for (const auto& r : results) {
    std::puts(ergo::summary_line(r).c_str());
    failed += !r.passed;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%zu criteria, %d failed, %.1f s\n", results.size(), failed, secs);
  return failed == 0 ? 0 : 1;
}
