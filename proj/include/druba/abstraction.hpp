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

#ifndef DRUBA_ABSTRACTION_HPP_
#define DRUBA_ABSTRACTION_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "druba/program.hpp"
#include "druba/state.hpp"

namespace druba {

// A point of the finite abstract domain, as a flat comparable tuple.
// (Shares the Value representation; to_string in state.hpp renders it.)
using AbstractState = std::vector<int>;

/**
 * An abstraction bound to a program: the map alpha, a per-action respect
 * classification, and abstract successor enumerators for exactly the
 * disrespect-classified actions. Enumerators quantify over every concrete
 * state of the model with the given abstraction, per the closure
 * definition, not merely over reached witnesses.
 */
struct Abstraction {
  std::string name;
  std::function<AbstractState(const ProgramState&)> alpha;
  // action id -> true when the action respects alpha
  std::map<std::string, bool> respects;
  std::function<std::vector<AbstractState>(const AbstractState&,
                                           const std::string& action,
                                           ThreadId)>
      disrespectful_abs_successors;
  bool codomain_finite = true;
  std::optional<std::uint64_t> codomain_size;

  std::vector<std::string> disrespectful_actions() const {
    std::vector<std::string> out;
    for (const auto& [id, ok] : respects)
      if (!ok) out.push_back(id);
    return out;
  }
};

// A state property evaluated on abstract states (true = satisfied). Making
// properties functions of alpha(s) renders "prop respects alpha" true by
// construction.
struct Property {
  std::string name = "true";
  std::function<bool(const AbstractState&)> holds = [](const AbstractState&) {
    return true;
  };
};

inline Property always_safe() { return Property{}; }

inline std::set<AbstractState> alpha_image(const Abstraction& abs,
                                           const std::set<ProgramState>& S) {
  std::set<AbstractState> out;
  for (const ProgramState& s : S) out.insert(abs.alpha(s));
  return out;
}

struct ClosureCex {
  AbstractState from;
  std::string action;
  ThreadId thread = 0;
  AbstractState to;
};

struct ClosureResult {
  bool closed = true;
  std::optional<ClosureCex> cex;
};

/**
 * Checks that A is closed under the actions disrespecting alpha: for every
 * a in A, disrespectful action x and thread t, every abstract successor of
 * a under (x, t) is again in A. Returns the first violating triple.
 */
inline ClosureResult closure_test(const std::set<AbstractState>& A,
                                  const Abstraction& abs, const Program& p) {
  ClosureResult res;
  auto dis = abs.disrespectful_actions();
  if (dis.empty()) return res;  // vacuously closed
  if (!abs.disrespectful_abs_successors)
    throw std::logic_error("abstraction '" + abs.name +
                           "' classifies actions as disrespectful but "
                           "supplies no successor enumerator");
  for (const AbstractState& a : A) {
    for (const std::string& x : dis) {
      for (ThreadId t = 0; t < p.n; ++t) {
        std::vector<AbstractState> succs =
            abs.disrespectful_abs_successors(a, x, t);
        std::set<AbstractState> sorted(succs.begin(), succs.end());
        for (const AbstractState& a2 : sorted) {
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

struct RespectWitness {
  ProgramState s1, s2;
  ThreadId thread = 0;
  ProgramState s1_succ, s2_succ;
};

enum class RespectStatus { confirmed, bounded_confirmed, refuted };

struct RespectResult {
  RespectStatus status = RespectStatus::confirmed;
  std::optional<RespectWitness> witness;

  bool refuted() const { return status == RespectStatus::refuted; }
};

/**
 * Brute-force audit of the respect condition for action x: for all states
 * s1, s2 in scope with alpha(s1) = alpha(s2) and all threads i, all
 * x-successors of s1 and s2 must agree in alpha. Conclusive ("confirmed")
 * only when the scope is the model's full finite domain; otherwise the
 * answer is "bounded_confirmed".
 */
inline RespectResult verify_respect(const Program& p, const Abstraction& abs,
                                    const std::string& x,
                                    const AuditScope& scope = {}) {
  RespectResult res;
  res.status = p.domain ? RespectStatus::confirmed
                        : RespectStatus::bounded_confirmed;
  std::vector<ProgramState> states = audit_states(p, scope);
  for (ThreadId t = 0; t < p.n; ++t) {
    // Per alpha-class: all x-successor abstractions must coincide.
    std::map<AbstractState, std::pair<ProgramState, ProgramState>> first;
    std::map<AbstractState, AbstractState> first_abs;
    for (const ProgramState& s : states) {
      AbstractState a = abs.alpha(s);
      for (const ProgramState& s2 : action_successors(p, s, t, x)) {
        AbstractState a2 = abs.alpha(s2);
        auto it = first_abs.find(a);
        if (it == first_abs.end()) {
          first_abs.emplace(a, a2);
          first.emplace(a, std::make_pair(s, s2));
        } else if (it->second != a2) {
          res.status = RespectStatus::refuted;
          const auto& w = first.at(a);
          res.witness = RespectWitness{w.first, s, t, w.second, s2};
          return res;
        }
      }
    }
  }
  return res;
}

// The brute-force successor set of the closure definition, over the audit
// slice: { alpha(s') : alpha(s) = a, s -(t,x)-> s' }.
inline std::set<AbstractState> brute_force_abs_successors(
    const Program& p, const Abstraction& abs, const std::string& x, ThreadId t,
    const AbstractState& a, const AuditScope& scope = {}) {
  std::set<AbstractState> out;
  for (const ProgramState& s : audit_states(p, scope)) {
    if (abs.alpha(s) != a) continue;
    for (const ProgramState& s2 : action_successors(p, s, t, x))
      out.insert(abs.alpha(s2));
  }
  return out;
}

/**
 * Memoizing enumerator backed by brute force over the audit slice. Built-in
 * models use this for their fixed-n disrespectful successor functions; the
 * full (x, t) relation is computed once on first use.
 */
class BruteEnumerator {
 public:
  BruteEnumerator(Program p, std::function<AbstractState(const ProgramState&)>
                                 alpha,
                  AuditScope scope)
      : p_(std::move(p)), alpha_(std::move(alpha)), scope_(scope) {}

  std::vector<AbstractState> operator()(const AbstractState& a,
                                        const std::string& x,
                                        ThreadId t) const {
    auto key = x + "#" + std::to_string(t);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      std::map<AbstractState, std::set<AbstractState>> rel;
      for (const ProgramState& s : audit_states(p_, scope_)) {
        AbstractState as = alpha_(s);
        for (const ProgramState& s2 : action_successors(p_, s, t, x))
          rel[as].insert(alpha_(s2));
      }
      it = cache_.emplace(key, std::move(rel)).first;
    }
    auto jt = it->second.find(a);
    if (jt == it->second.end()) return {};
    return {jt->second.begin(), jt->second.end()};
  }

 private:
  Program p_;
  std::function<AbstractState(const ProgramState&)> alpha_;
  AuditScope scope_;
  mutable std::map<std::string, std::map<AbstractState, std::set<AbstractState>>>
      cache_;
};

/**
 * Predicate abstraction: alpha(s) = (pc of thread 0, one bit per
 * evaluator). Classification and successor enumerators are supplied by the
 * model definition afterwards.
 */
inline Abstraction make_predicate_abstraction(
    const std::string& name,
    std::function<int(const ProgramState&)> pc_extractor,
    std::vector<std::function<bool(const ProgramState&)>> evaluators) {
  Abstraction abs;
  abs.name = name;
  abs.alpha = [pc = std::move(pc_extractor),
               evs = std::move(evaluators)](const ProgramState& s) {
    AbstractState a;
    a.reserve(evs.size() + 1);
    a.push_back(pc(s));
    for (const auto& e : evs) a.push_back(e(s) ? 1 : 0);
    return a;
  };
  return abs;
}

// Identity on program states via an injective flattening (length-prefixed,
// so stacks of different depths stay distinct). Every deterministic action
// respects it; closure under disrespectful actions is vacuous.
inline Abstraction identity_abstraction(const Program& p) {
  Abstraction abs;
  abs.name = "identity";
  abs.alpha = [](const ProgramState& s) {
    AbstractState a;
    for (int v : s.shared) a.push_back(v);
    for (const Value& l : s.locals) {
      a.push_back(static_cast<int>(l.size()));
      for (int v : l) a.push_back(v);
    }
    return a;
  };
  for (const std::string& id : action_ids(p)) abs.respects[id] = true;
  abs.codomain_finite = p.domain.has_value();
  if (p.domain) {
    std::uint64_t size = p.domain->shared.size();
    for (const auto& ls : p.domain->locals) size *= ls.size();
    abs.codomain_size = size;
  }
  return abs;
}

}  // namespace druba

#endif  // DRUBA_ABSTRACTION_HPP_
