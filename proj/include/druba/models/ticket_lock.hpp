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

#ifndef DRUBA_MODELS_TICKET_LOCK_HPP_
#define DRUBA_MODELS_TICKET_LOCK_HPP_

#include <algorithm>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "druba/abstraction.hpp"
#include "druba/program.hpp"

namespace druba {
namespace models {

/**
 * The Ticket Lock over shared ints s, t and a local ticket l per thread.
 * Each thread loops through three program points:
 *   0: while (s != l) ;        -- acquire: spin until served
 *   1: critical section        -- critical: the protected code
 *   2: inc(s); l := fetch_and_add(t); goto 0   -- release, one atomic block
 * Ticket fetching at thread creation is baked into the initial state:
 * t = n and l_i = i.
 *
 * Locals are (pc, l); shared is (s, t).
 */
inline Program ticket_lock_model(int n) {
  if (n < 2) throw std::invalid_argument("ticket-lock needs n >= 2");
  Program p;
  p.name = "ticket-lock";
  p.n = n;

  Action acquire{"acquire", [](const Value& sh, const Value& lo) {
                   std::vector<Effect> out;
                   if (lo[0] == 0 && sh[0] == lo[1])
                     out.emplace_back(sh, Value{1, lo[1]});
                   return out;
                 }};
  Action critical{"critical", [](const Value& sh, const Value& lo) {
                    std::vector<Effect> out;
                    if (lo[0] == 1) out.emplace_back(sh, Value{2, lo[1]});
                    return out;
                  }};
  Action release{"release", [](const Value& sh, const Value& lo) {
                   std::vector<Effect> out;
                   if (lo[0] == 2)
                     out.emplace_back(Value{sh[0] + 1, sh[1] + 1},
                                      Value{0, sh[1]});
                   return out;
                 }};
  for (int t = 0; t < n; ++t)
    p.threads.push_back(
        {"T" + std::to_string(t), {acquire, critical, release}});

  ProgramState init;
  init.shared = {0, n};
  for (int t = 0; t < n; ++t) init.locals.push_back({0, t});
  p.initial.push_back(std::move(init));

  // Audit slice: ticket-protocol shapes. Tickets are pairwise distinct and
  // below t, no ticket is below the serving counter, and a thread holding
  // or releasing the lock holds exactly the served ticket (which also
  // forces mutual exclusion).
  p.bounded_states = [n](const AuditScope& scope) {
    int v_max = std::max(scope.int_max, 4);
    std::vector<ProgramState> out;
    std::vector<int> pcs(n, 0), ls(n, 0);
    std::function<void(int)> rec_l = [&](int t) {
      if (t == n) {
        int in_cs = 0;
        for (int i = 0; i < n; ++i)
          if (pcs[i] != 0) ++in_cs;
        if (in_cs > 1) return;
        for (int s = 0; s <= v_max; ++s) {
          bool ok = true;
          for (int i = 0; i < n && ok; ++i) {
            if (ls[i] < s) ok = false;
            if (pcs[i] != 0 && ls[i] != s) ok = false;
          }
          if (!ok) continue;
          int l_hi = *std::max_element(ls.begin(), ls.end());
          for (int t_val = l_hi + 1; t_val <= l_hi + 3; ++t_val) {
            ProgramState st;
            st.shared = {s, t_val};
            for (int i = 0; i < n; ++i) st.locals.push_back({pcs[i], ls[i]});
            out.push_back(std::move(st));
          }
        }
        return;
      }
      for (int l = 0; l <= v_max; ++l) {
        bool dup = false;
        for (int i = 0; i < t; ++i)
          if (ls[i] == l) dup = true;
        if (dup) continue;
        ls[t] = l;
        rec_l(t + 1);
      }
    };
    std::function<void(int)> rec_pc = [&](int t) {
      if (t == n) {
        rec_l(0);
        return;
      }
      for (int pc = 0; pc <= 2; ++pc) {
        pcs[t] = pc;
        rec_pc(t + 1);
      }
    };
    rec_pc(0);
    return out;
  };
  return p;
}

/**
 * The abstraction (pc0, P1, P2, P3, P4) with
 *   P1: for all i, t > l_i
 *   P2: at least two threads hold the lock (pc = 1)  — the safety property
 *   P3: s = l0
 *   P4: for all i != 0, l0 != l_i
 * The acquire test is decided by P3 and the critical step only moves the
 * pc, so both respect the abstraction; only the release disrespects it.
 */
inline Abstraction ticket_lock_alpha(const Program& p) {
  std::vector<std::function<bool(const ProgramState&)>> evals;
  evals.push_back([](const ProgramState& s) {
    for (const Value& l : s.locals)
      if (s.shared[1] <= l[1]) return false;
    return true;
  });
  evals.push_back([](const ProgramState& s) {
    int in_cs = 0;
    for (const Value& l : s.locals)
      if (l[0] == 1) ++in_cs;
    return in_cs >= 2;
  });
  evals.push_back(
      [](const ProgramState& s) { return s.shared[0] == s.locals[0][1]; });
  evals.push_back([](const ProgramState& s) {
    for (std::size_t i = 1; i < s.locals.size(); ++i)
      if (s.locals[0][1] == s.locals[i][1]) return false;
    return true;
  });
  Abstraction abs = make_predicate_abstraction(
      "ticket-p1-p4", [](const ProgramState& s) { return s.locals[0][0]; },
      std::move(evals));
  abs.codomain_size = 3ull * 16;
  abs.respects["acquire"] = true;
  abs.respects["critical"] = true;
  abs.respects["release"] = false;
  auto brute = std::make_shared<BruteEnumerator>(p, abs.alpha, AuditScope{});
  abs.disrespectful_abs_successors =
      [brute](const AbstractState& a, const std::string& x, ThreadId t) {
        return (*brute)(a, x, t);
      };
  return abs;
}

// The mutual-exclusion property: P2 never holds.
inline Property ticket_lock_property() {
  Property prop;
  prop.name = "no-two-in-critical";
  prop.holds = [](const AbstractState& a) { return a[2] == 0; };
  return prop;
}

// Release successors valid for every thread count. A releasing thread
// holds the served ticket; afterwards its fresh ticket exceeds every other
// (P4 is kept), t stays ahead (P1 is kept), and s = l0 can go either way
// only when another thread releases past thread 0's pending ticket.
inline std::vector<AbstractState> ticket_lock_parametric_release(
    const AbstractState& a, const std::string& x, ThreadId t) {
  std::vector<AbstractState> out;
  if (x != "release") return out;
  int pc0 = a[0], p1 = a[1], p2 = a[2], p3 = a[3], p4 = a[4];
  if (p1 != 1 || p2 != 0 || p4 != 1) return out;  // no protocol state fits
  if (t == 0) {
    if (pc0 == 2 && p3 == 1) out.push_back({0, 1, 0, 0, 1});
    return out;
  }
  // another thread releases: it held l = s, so thread 0 cannot (pc0 = 0
  // and s != l0 are forced)
  if (pc0 == 0 && p3 == 0) {
    out.push_back({0, 1, 0, 0, 1});
    out.push_back({0, 1, 0, 1, 1});
  }
  return out;
}

/**
 * A seeded-bug variant: the release forgets to advance the ticket counter,
 * so two threads can end up holding equal tickets and enter the critical
 * section together. Used to exercise violation reporting end to end.
 */
inline Program ticket_lock_buggy_model(int n) {
  Program p = ticket_lock_model(n);
  for (Procedure& proc : p.threads)
    for (Action& a : proc.actions)
      if (a.id == "release")
        a.apply = [](const Value& sh, const Value& lo) {
          std::vector<Effect> out;
          if (lo[0] == 2)
            out.emplace_back(Value{sh[0] + 1, sh[1]}, Value{0, sh[1]});
          return out;
        };
  p.name = "ticket-lock-buggy";
  return p;
}

}  // namespace models
}  // namespace druba

#endif  // DRUBA_MODELS_TICKET_LOCK_HPP_
