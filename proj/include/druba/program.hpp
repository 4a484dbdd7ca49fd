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

#ifndef DRUBA_PROGRAM_HPP_
#define DRUBA_PROGRAM_HPP_

#include <algorithm>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "druba/state.hpp"

namespace druba {

// One effect of firing an action: new shared value, new local value of the
// executing thread. Locals of all other threads are unchanged by
// construction.
using Effect = std::pair<Value, Value>;

/**
 * A guarded, possibly nondeterministic transition of one thread. `apply`
 * returns the finite effect set at (shared, local); an empty set means the
 * action is disabled there.
 */
struct Action {
  std::string id;
  std::function<std::vector<Effect>(const Value& shared, const Value& local)>
      apply;
};

struct Procedure {
  std::string name;
  std::vector<Action> actions;
};

// Explicit enumeration of a finite state space: every shared value and, per
// thread, every local value.
struct FiniteDomain {
  std::vector<Value> shared;
  std::vector<std::vector<Value>> locals;  // one list per thread
};

// Bounds used when auditing an infinite-domain model over a finite slice.
struct AuditScope {
  int max_stack_depth = 3;
  int int_min = -5;
  int int_max = 5;
};

struct Diagnostic {
  std::string message;
  std::string action_id;  // empty when not rule-specific
  int line = -1;          // source line for file-based models
};

struct ParseError : std::runtime_error {
  ParseError(int line_, const std::string& msg)
      : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
        line(line_) {}
  int line;
};

/**
 * An n-thread asynchronous program: per-thread procedures over a shared
 * state, a finite nonempty set of initial states, and optional domain
 * descriptors. `domain` is set for finite-state models (and makes audits
 * conclusive); unbounded models instead supply `bounded_states`, which
 * enumerates a finite audit slice of the state space.
 */
struct Program {
  std::string name;
  int n = 0;
  std::vector<Procedure> threads;  // size n
  std::vector<ProgramState> initial;
  std::optional<FiniteDomain> domain;
  std::function<std::vector<ProgramState>(const AuditScope&)> bounded_states;
  std::function<void(const Program&, std::vector<Diagnostic>&)>
      frontend_checks;
};

// All successors of state s when thread t executes one enabled action. If
// every action of t is disabled at s, the thread stutters: result is {s}.
inline std::vector<ProgramState> thread_successors(const Program& p,
                                                   const ProgramState& s,
                                                   ThreadId t) {
  std::vector<ProgramState> out;
  std::set<ProgramState> seen;
  for (const Action& a : p.threads[t].actions) {
    for (Effect& e : a.apply(s.shared, s.locals[t])) {
      ProgramState ns;
      ns.shared = std::move(e.first);
      ns.locals = s.locals;
      ns.locals[t] = std::move(e.second);
      if (seen.insert(ns).second) out.push_back(std::move(ns));
    }
  }
  if (out.empty()) out.push_back(s);
  return out;
}

// Successors of s under one specific action of thread t. No stutter here: a
// disabled action yields no step.
inline std::vector<ProgramState> action_successors(const Program& p,
                                                   const ProgramState& s,
                                                   ThreadId t,
                                                   const std::string& action) {
  std::vector<ProgramState> out;
  for (const Action& a : p.threads[t].actions) {
    if (a.id != action) continue;
    for (Effect& e : a.apply(s.shared, s.locals[t])) {
      ProgramState ns;
      ns.shared = std::move(e.first);
      ns.locals = s.locals;
      ns.locals[t] = std::move(e.second);
      out.push_back(std::move(ns));
    }
  }
  return out;
}

inline std::vector<std::string> action_ids(const Program& p) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const Procedure& proc : p.threads)
    for (const Action& a : proc.actions)
      if (seen.insert(a.id).second) ids.push_back(a.id);
  return ids;
}

inline std::vector<ProgramState> enumerate_domain(const Program& p) {
  const FiniteDomain& d = *p.domain;
  std::vector<ProgramState> out;
  std::vector<std::size_t> idx(p.n, 0);
  for (const Value& g : d.shared) {
    std::fill(idx.begin(), idx.end(), 0);
    while (true) {
      ProgramState s;
      s.shared = g;
      s.locals.reserve(p.n);
      for (int t = 0; t < p.n; ++t) s.locals.push_back(d.locals[t][idx[t]]);
      out.push_back(std::move(s));
      int t = p.n - 1;
      while (t >= 0 && ++idx[t] == d.locals[t].size()) idx[t--] = 0;
      if (t < 0) break;
    }
  }
  return out;
}

// The state slice used by respect/closure audits: the full domain when the
// model is finite, the model's bounded enumeration otherwise.
inline std::vector<ProgramState> audit_states(const Program& p,
                                              const AuditScope& scope) {
  if (p.domain) return enumerate_domain(p);
  if (p.bounded_states) return p.bounded_states(scope);
  throw std::logic_error("model '" + p.name +
                         "' has neither a finite domain nor an audit slice");
}

/**
 * Structural validation: locals arity, nonempty finite initial set, and (for
 * finite-domain models) closure of every rule's endpoints within the
 * declared domain. Frontends attach their own rule-table checks via
 * `frontend_checks`.
 */
inline std::vector<Diagnostic> validate_program(const Program& p) {
  std::vector<Diagnostic> out;
  if (p.n <= 0) out.push_back({"program declares no threads", "", -1});
  if (static_cast<int>(p.threads.size()) != p.n)
    out.push_back({"thread list arity differs from declared n", "", -1});
  if (p.initial.empty())
    out.push_back({"initial-state set is empty (a finite nonempty set is "
                   "required)",
                   "", -1});
  for (const ProgramState& s : p.initial)
    if (static_cast<int>(s.locals.size()) != p.n)
      out.push_back({"initial state " + to_string(s) +
                         " has wrong locals arity",
                     "", -1});
  if (p.frontend_checks) p.frontend_checks(p, out);
  if (p.domain && static_cast<int>(p.threads.size()) == p.n) {
    std::set<Value> shared_dom(p.domain->shared.begin(),
                               p.domain->shared.end());
    std::vector<std::set<Value>> local_dom;
    for (const auto& ls : p.domain->locals)
      local_dom.emplace_back(ls.begin(), ls.end());
    for (const ProgramState& s : p.initial) {
      if (!shared_dom.count(s.shared))
        out.push_back({"initial shared value " + to_string(s.shared) +
                           " outside declared domain",
                       "", -1});
    }
    std::set<std::string> flagged;
    for (const ProgramState& s : enumerate_domain(p)) {
      for (int t = 0; t < p.n; ++t) {
        for (const Action& a : p.threads[t].actions) {
          if (flagged.count(a.id)) continue;
          for (const Effect& e : a.apply(s.shared, s.locals[t])) {
            if (!shared_dom.count(e.first)) {
              out.push_back({"action maps " + to_string(s.shared) +
                                 " to shared value " + to_string(e.first) +
                                 " outside the declared domain",
                             a.id, -1});
              flagged.insert(a.id);
              break;
            }
            if (!local_dom[t].count(e.second)) {
              out.push_back({"action maps a local of thread " +
                                 std::to_string(t) + " to " +
                                 to_string(e.second) +
                                 " outside the declared domain",
                             a.id, -1});
              flagged.insert(a.id);
              break;
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace druba

#endif  // DRUBA_PROGRAM_HPP_
