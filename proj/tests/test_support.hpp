#ifndef DRUBA_TESTS_TEST_SUPPORT_HPP_
#define DRUBA_TESTS_TEST_SUPPORT_HPP_

#include <random>
#include <string>
#include <vector>

#include "druba/abstraction.hpp"
#include "druba/async_model.hpp"
#include "druba/program.hpp"

namespace druba_tests {

// Seeded generator of small finite async models: n <= 3 threads, shared
// domain <= 4, local domains <= 3, at most 8 rules per thread.
inline druba::AsyncSystem random_async_system(unsigned seed) {
  std::mt19937 rng(seed);
  auto pick = [&rng](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  druba::AsyncSystem sys;
  sys.shared_size = pick(2, 4);
  sys.init_shared = pick(0, sys.shared_size - 1);
  int n = pick(1, 3);
  for (int t = 0; t < n; ++t) {
    druba::AsyncTemplate tpl;
    tpl.name = "T" + std::to_string(t);
    tpl.copies = 1;
    tpl.locals = pick(1, 3);
    tpl.linit = pick(0, tpl.locals - 1);
    int rules = pick(1, 8);
    for (int r = 0; r < rules; ++r) {
      druba::AsyncRule rule;
      rule.from_shared = pick(0, sys.shared_size - 1);
      rule.from_local = pick(0, tpl.locals - 1);
      rule.to_shared = pick(0, sys.shared_size - 1);
      rule.to_local = pick(0, tpl.locals - 1);
      tpl.rules.push_back(rule);
    }
    sys.templates.push_back(std::move(tpl));
  }
  return sys;
}

inline druba::AsyncModel random_async_model(unsigned seed) {
  return druba::build_async(random_async_system(seed),
                            "random-" + std::to_string(seed));
}

// A deterministic error target: some shared value, often reachable, often
// not, so both verdicts occur across seeds.
inline int random_error_target(unsigned seed, const druba::AsyncSystem& sys) {
  std::mt19937 rng(seed ^ 0x9e3779b9u);
  return std::uniform_int_distribution<int>(0, sys.shared_size - 1)(rng);
}

}  // namespace druba_tests

#endif  // DRUBA_TESTS_TEST_SUPPORT_HPP_
