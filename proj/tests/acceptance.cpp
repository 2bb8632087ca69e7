#include <cstdio>
#include <string>

#include "osa/checks.hpp"

int main(int argc, char** argv) {
  osa::CheckOptions opts;
  if (argc > 1) opts.seed = std::stoull(argv[1]);
  int failures = 0;
  for (const auto& c : osa::criteria()) {
    const auto r = osa::run_criterion(c, opts);
    std::printf("%s %2d %-17s %7.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    failures += !r.passed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(osa::criteria().size()) - failures,
              osa::criteria().size());
  return failures == 0 ? 0 : 1;
}
