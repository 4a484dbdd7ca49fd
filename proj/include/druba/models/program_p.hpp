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

#ifndef DRUBA_MODELS_PROGRAM_P_HPP_
#define DRUBA_MODELS_PROGRAM_P_HPP_

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "druba/abstraction.hpp"
#include "druba/program.hpp"

namespace druba {
namespace models {

/**
 * n symmetric copies of
 *   0: m++
 *   1: if (m == 1) goto 2 else goto 4
 *   2: s++, l++           (one atomic statement)
 *   3: assert s == l; goto 2
 *   4: (done)
 * over shared ints m, s and a local int l per thread. Only the thread that
 * saw m == 1 ever enters the loop, so the assertion holds for every thread
 * count; proving that exercises mixed predicates.
 *
 * Locals are (pc, l); shared is (m, s).
 */
inline Program program_p_model(int n) {
  if (n < 1) throw std::invalid_argument("program-p needs n >= 1");
  Program p;
  p.name = "program-p";
  p.n = n;

  Action inc_m{"inc_m", [](const Value& sh, const Value& lo) {
                 std::vector<Effect> out;
                 if (lo[0] == 0)
                   out.emplace_back(Value{sh[0] + 1, sh[1]}, Value{1, lo[1]});
                 return out;
               }};
  Action branch{"branch", [](const Value& sh, const Value& lo) {
                  std::vector<Effect> out;
                  if (lo[0] == 1)
                    out.emplace_back(sh, Value{sh[0] == 1 ? 2 : 4, lo[1]});
                  return out;
                }};
  Action inc_sl{"inc_sl", [](const Value& sh, const Value& lo) {
                  std::vector<Effect> out;
                  if (lo[0] == 2)
                    out.emplace_back(Value{sh[0], sh[1] + 1},
                                     Value{3, lo[1] + 1});
                  return out;
                }};
  Action loop{"loop", [](const Value& sh, const Value& lo) {
                std::vector<Effect> out;
                if (lo[0] == 3) out.emplace_back(sh, Value{2, lo[1]});
                return out;
              }};
  for (int t = 0; t < n; ++t)
    p.threads.push_back(
        {"T" + std::to_string(t), {inc_m, branch, inc_sl, loop}});

  ProgramState init;
  init.shared = {0, 0};
  init.locals.assign(n, Value{0, 0});
  p.initial.push_back(std::move(init));

  // Audit slice: the quantification domain for respect audits and for the
  // closure-definition successors. It keeps only the data facts every run
  // maintains —
  //   - counters are nonnegative and s covers every thread's l,
  //   - a positive s means some thread is inside the loop (pc 2 or 3),
  //   - a thread 0 past line 0 means at least one increment happened —
  // and deliberately nothing stronger, so abstract successors stay as
  // coarse as hand derivation from the predicates alone would make them.
  p.bounded_states = [n](const AuditScope& scope) {
    std::vector<ProgramState> out;
    int m_max = std::max(scope.int_max, n + 2);
    int s_max = 3;
    std::vector<int> pcs(n, 0);
    std::vector<int> ls(n, 0);
    std::function<void(int, int)> rec_l = [&](int t, int s) {
      if (t == n) {
        ProgramState st;
        st.shared = {0, s};
        for (int i = 0; i < n; ++i) st.locals.push_back({pcs[i], ls[i]});
        int m_lo = pcs[0] != 0 ? 1 : 0;
        for (int m = m_lo; m <= m_max; ++m) {
          st.shared[0] = m;
          out.push_back(st);
        }
        return;
      }
      for (int l = 0; l <= s; ++l) {
        ls[t] = l;
        rec_l(t + 1, s);
      }
    };
    while (true) {
      bool looping = false;
      for (int t = 0; t < n; ++t) looping |= pcs[t] == 2 || pcs[t] == 3;
      for (int s = 0; s <= (looping ? s_max : 0); ++s) rec_l(0, s);
      int t = n - 1;
      while (t >= 0 && ++pcs[t] == 5) pcs[t--] = 0;
      if (t < 0) break;
    }
    return out;
  };
  return p;
}

/**
 * The three predicate abstractions over program P, tracking thread 0:
 *   variant 1: (pc0, s = l0)            — the branch disrespects it
 *   variant 2: (pc0, s = l0, m = 1)     — only m++ disrespects it
 *   variant 3: (pc0, s = l0, m = 1, m = 0) — every action respects it
 * Disrespectful successor sets are computed over the audit slice.
 */
inline Abstraction program_p_alpha(const Program& p, int variant) {
  if (variant < 1 || variant > 3)
    throw std::invalid_argument("program-p abstraction variant must be 1..3");
  std::vector<std::function<bool(const ProgramState&)>> evals;
  evals.push_back(
      [](const ProgramState& s) { return s.shared[1] == s.locals[0][1]; });
  if (variant >= 2)
    evals.push_back([](const ProgramState& s) { return s.shared[0] == 1; });
  if (variant >= 3)
    evals.push_back([](const ProgramState& s) { return s.shared[0] == 0; });
  Abstraction abs = make_predicate_abstraction(
      "alpha" + std::to_string(variant),
      [](const ProgramState& s) { return s.locals[0][0]; }, std::move(evals));
  abs.codomain_size = 5ull << (variant);  // 5 * 2^bits
  for (const std::string& id : action_ids(p)) abs.respects[id] = true;
  if (variant == 1) abs.respects["branch"] = false;
  if (variant == 2) abs.respects["inc_m"] = false;
  if (variant != 3) {
    auto brute = std::make_shared<BruteEnumerator>(p, abs.alpha, AuditScope{});
    abs.disrespectful_abs_successors =
        [brute](const AbstractState& a, const std::string& x, ThreadId t) {
          return (*brute)(a, x, t);
        };
  }
  return abs;
}

// Disrespectful successors valid for every thread count, for the
// parameterized closure check. Under variant 2 that is m++: the next pc is
// unambiguous, the mixed predicate is untouched, and m = 1 afterwards is
// possible exactly if m = 0 was. Under variant 1 it is the branch, whose
// outcome the tuple cannot predict.
inline std::function<std::vector<AbstractState>(
    const AbstractState&, const std::string&, ThreadId)>
program_p_parametric(int variant) {
  if (variant == 2) {
    return [](const AbstractState& a, const std::string& x, ThreadId t) {
      std::vector<AbstractState> out;
      if (x != "inc_m") return out;
      int pc0 = a[0], b = a[1], m1 = a[2];
      if (t == 0 && pc0 != 0) return out;
      int pc2 = t == 0 ? 1 : pc0;
      if (m1 == 1) {
        out.push_back({pc2, b, 0});
      } else {
        out.push_back({pc2, b, 1});
        out.push_back({pc2, b, 0});
      }
      return out;
    };
  }
  if (variant == 1) {
    return [](const AbstractState& a, const std::string& x, ThreadId t) {
      std::vector<AbstractState> out;
      if (x != "branch") return out;
      int pc0 = a[0], b = a[1];
      if (t == 0) {
        if (pc0 != 1) return out;
        out.push_back({2, b});
        out.push_back({4, b});
      } else {
        out.push_back({pc0, b});
      }
      return out;
    };
  }
  return nullptr;  // variant 3: every action respects alpha
}

}  // namespace models
}  // namespace druba

#endif  // DRUBA_MODELS_PROGRAM_P_HPP_
