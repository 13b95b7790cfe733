#pragma once

// Shared helpers for the test binaries: a tiny deterministic RNG for
// hand-rolled property tests, fixture paths, and a popen wrapper for
// end-to-end CLI runs.

#include <cstdint>
#include <cstdio>
#include <string>
#include <sys/wait.h>

#include <catch2/catch_amalgamated.hpp>

#include "gsconvex/gsconvex.hpp"

namespace testsup {

// splitmix64 stream; good enough for generating test cases, deterministic
// across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  int below(int n) { return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n)); }

 private:
  std::uint64_t state_ = 0;
};

inline std::string fixture(const std::string& name) {
  return std::string(GSX_FIXTURE_DIR) + "/" + name;
}

struct CliResult {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI with the given arguments, capturing stdout; stderr is dropped.
inline CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(GSX_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.out.append(buf, n);
  int status = pclose(pipe);
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

inline gsconvex::BoxDomain box1(double lo, double hi) {
  gsconvex::BoxDomain d;
  d.lo = {lo};
  d.hi = {hi};
  return d;
}

inline gsconvex::SamplePlan plan_of(int pairs, double s, std::uint64_t seed = 0) {
  gsconvex::SamplePlan p;
  p.n_pairs = pairs;
  p.s = s;
  p.seed = seed;
  return p;
}

inline gsconvex::ModifierMap one_point(const std::string& text, int arity) {
  return {gsconvex::parse(text, arity), gsconvex::MapKind::one_point};
}

inline gsconvex::ModifierMap two_point(const std::string& text, int arity) {
  return {gsconvex::parse(text, 2 * arity), gsconvex::MapKind::two_point};
}

}  // namespace testsup
