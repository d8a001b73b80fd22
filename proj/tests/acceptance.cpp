// Runs the validation suites behind each acceptance criterion and prints one
// PASS/FAIL line per criterion. Optional arguments restrict the criteria run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <string>

#include "egin/parallel.hpp"
#include "egin/validation.hpp"

using namespace egin;

namespace {

const char* kTitles[] = {
    "",
    "strong-regime bulk and depletion constants",
    "tau -> 0 reduces to the Ginibre formulas",
    "P_N and T_N agree with their difference forms",
    "finite-N formulas match the double-integral representations",
    "finite-N Monte Carlo conditional overlaps (N = 10)",
    "eGinOE depletion regime: finite N and Monte Carlo",
    "weak non-Hermiticity: finite N and Monte Carlo",
    "eigen-decomposition engine",
    "ensemble samplers",
    "bitwise determinism across worker counts",
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (c < 1 || c > 10) {
      std::fprintf(stderr, "usage: acceptance [criterion ...]  (1..10)\n");
      return 2;
    }
    wanted.insert(c);
  }
  if (wanted.empty())
    for (int c = 1; c <= 10; ++c) wanted.insert(c);

  validation::McOptions opt;
  std::printf("acceptance: %d worker threads\n", parallel::resolve_threads(0));
  std::fflush(stdout);

  std::map<std::string, validation::SuiteReport> cache;
  int failed = 0;
  for (int c : wanted) {
    bool ok = true;
    double seconds = 0;
    std::string worst;
    for (const std::string& name : validation::suites_for_criterion(c)) {
      auto it = cache.find(name);
      if (it == cache.end()) it = cache.emplace(name, validation::run_suite(name, opt)).first;
      const auto& rep = it->second;
      seconds += rep.seconds;
      for (const auto& chk : rep.for_criterion(c)) {
        std::printf("  [%s] %-4s %s: measured %.4g, tolerance %.4g %s\n", name.c_str(), chk.passed ? "ok" : "FAIL",
                    chk.name.c_str(), chk.measured, chk.tolerance, chk.detail.c_str());
        if (!chk.passed) {
          ok = false;
          if (worst.empty()) worst = chk.name;
        }
      }
    }
    std::printf("criterion %d: %s  %s (%.1f s)%s%s\n", c, ok ? "PASS" : "FAIL", kTitles[c], seconds,
                worst.empty() ? "" : "; first failure: ", worst.c_str());
    std::fflush(stdout);
    failed += !ok;
  }
  return failed == 0 ? 0 : 1;
}
