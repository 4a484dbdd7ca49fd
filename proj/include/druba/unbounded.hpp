/*
 * Copyright (c) 2026, The druba authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#ifndef DRUBA_UNBOUNDED_HPP_
#define DRUBA_UNBOUNDED_HPP_

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "druba/abstraction.hpp"
#include "druba/baselines.hpp"
#include "druba/explore.hpp"
#include "druba/program.hpp"

namespace druba {

/**
 * An n-indexed family of programs sharing one abstract domain. For the
 * parameterized convergence check the family supplies successor
 * enumerators for its disrespectful actions that are valid for every n
 * (thread 0 is the tracked thread; any other thread is symmetric), or none
 * when every action respects the abstraction.
 */
struct ModelFamily {
  std::string name;
  std::function<std::pair<Program, Abstraction>(int n)> instantiate;
  std::function<std::vector<AbstractState>(const AbstractState&,
                                           const std::string& action,
                                           ThreadId)>
      parametric_disrespectful;  // null when all actions respect alpha
};

struct UnboundedVerdict {
  Verdict verdict = Verdict::unknown;
  int n_plateau_at = 0;  // thread count where the abstract reach stabilized
  std::set<AbstractState> abs_states;
  std::map<int, VerdictReport> per_n;
  std::optional<ClosureCex> closure_cex;
  std::optional<Witness> witness;
  int witness_n = 0;
  std::string reason;
};

// Parameterized closure: quantify threads by symmetry class — the tracked
// thread and one representative other.
inline ClosureResult parametric_closure_test(
    const std::set<AbstractState>& A, const ModelFamily& family,
    const std::vector<std::string>& disrespectful) {
  ClosureResult res;
  if (disrespectful.empty()) return res;  // vacuous
  if (!family.parametric_disrespectful)
    throw std::logic_error("family '" + family.name +
                           "' lacks parametric successor enumerators");
  for (const AbstractState& a : A) {
    for (const std::string& x : disrespectful) {
      for (ThreadId t = 0; t <= 1; ++t) {
        for (const AbstractState& a2 :
             family.parametric_disrespectful(a, x, t)) {
          if (!A.count(a2)) {
            res.closed = false;
            res.cex = ClosureCex{a, x, t, a2};
            return res;
          }
        }
      }
    }
  }
  return res;
}

/**
 * The outer loop in the thread count: compute the abstract reach under
 * arbitrary interleavings for n = 2, 3, ... until it stabilizes once, then
 * certify the stable set with the parameterized closure check. Violations
 * at any fixed n are violations of the family. Round/delay bounds are only
 * ever varied inside each fixed-n run; the thread count never varies
 * within one.
 */
inline UnboundedVerdict verify_unbounded(const ModelFamily& family,
                                         const Property& prop, int n_max = 6,
                                         EngineOptions opts = {}) {
  UnboundedVerdict out;
  std::optional<std::set<AbstractState>> prev;
  std::optional<std::size_t> arity;
  for (int n = 2; n <= n_max; ++n) {
    auto [p, abs] = family.instantiate(n);
    if (!p.initial.empty()) {
      std::size_t a = abs.alpha(p.initial.front()).size();
      if (arity && *arity != a)
        throw std::logic_error("family '" + family.name +
                               "' has an n-dependent abstract domain");
      arity = a;
    }
    VerdictReport rep = verify(p, abs, prop, opts);
    std::set<AbstractState> reach(rep.abs_states.begin(),
                                  rep.abs_states.end());
    if (rep.verdict == Verdict::violation) {
      out.witness = rep.witness;
      out.witness_n = n;
      out.verdict = Verdict::violation;
      out.per_n.emplace(n, std::move(rep));
      return out;
    }
    if (rep.verdict == Verdict::unknown) {
      out.verdict = Verdict::unknown;
      out.reason = "fixed-thread analysis returned unknown at n = " +
                   std::to_string(n) +
                   (rep.reason.empty() ? "" : " (" + rep.reason + ")");
      out.closure_cex = rep.closure_cex;
      out.per_n.emplace(n, std::move(rep));
      return out;
    }
    bool plateau = prev && *prev == reach;
    out.per_n.emplace(n, std::move(rep));
    if (plateau) {
      out.n_plateau_at = n;
      out.abs_states = reach;
      auto dis = abs.disrespectful_actions();
      ClosureResult cl = parametric_closure_test(reach, family, dis);
      if (cl.closed) {
        out.verdict = Verdict::safe;
      } else {
        out.verdict = Verdict::unknown;
        out.reason = "parametric-closure-failed";
        out.closure_cex = cl.cex;
      }
      return out;
    }
    prev = std::move(reach);
  }
  out.verdict = Verdict::unknown;
  out.reason = "no thread plateau up to n = " + std::to_string(n_max);
  return out;
}

struct NonMonotonicityReport {
  bool containment_holds = true;
  std::optional<ProgramState> witness;  // a state of the smaller instance
  // whose shared part the larger instance cannot reach
};

/**
 * Compares the shared-state projections of R[r,d,n] and R[r,d,n+1] via the
 * from-scratch explorer and reports a containment failure witness, the
 * reason the thread count must stay in the outermost loop.
 */
inline NonMonotonicityReport check_rr_nonmonotonicity(
    const std::function<std::pair<Program, Abstraction>(int)>& family, int r,
    int d, int n) {
  NonMonotonicityReport rep;
  auto [p1, abs1] = family(n);
  auto [p2, abs2] = family(n + 1);
  GridCell c1 = naive_cell(p1, abs1, r, d);
  GridCell c2 = naive_cell(p2, abs2, r, d);
  std::set<Value> shared2;
  for (const ProgramState& s : c2.states) shared2.insert(s.shared);
  for (const ProgramState& s : c1.states) {
    if (!shared2.count(s.shared)) {
      rep.containment_holds = false;
      rep.witness = s;
      return rep;
    }
  }
  return rep;
}

}  // namespace druba

#endif  // DRUBA_UNBOUNDED_HPP_
