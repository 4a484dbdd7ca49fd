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

#ifndef DRUBA_CPDS_HPP_
#define DRUBA_CPDS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "druba/abstraction.hpp"
#include "druba/program.hpp"
#include "druba/state.hpp"

namespace druba {
namespace cpds {

// Stack words are Values, top first. The empty-stack marker in abstract
// tuples:
constexpr int kEmptyTop = -1;

enum class RuleKind { overwrite, push, pop };

struct CpdsRule {
  RuleKind kind = RuleKind::overwrite;
  int from_shared = 0;
  int from_top = 0;
  int to_shared = 0;
  int to_top = 0;     // overwrite / push (new top)
  int to_second = 0;  // push only
  int line = -1;
};

struct CpdsTemplate {
  std::string name;
  int copies = 1;
  int alphabet = 0;  // symbols 0..alphabet-1
  Value init_stack;  // top first
  std::vector<CpdsRule> rules;
};

struct CpdsSystem {
  int shared_size = 0;
  int init_shared = 0;
  std::vector<CpdsTemplate> templates;

  // thread index -> template index after copy expansion
  std::vector<int> thread_template;
};

/**
 * Closed-form abstract successors of a pop rule under the top-of-the-stack
 * abstraction: if the abstract state enables the rule for thread t, any
 * alphabet symbol — or emptiness — may surface as the new top, because a
 * concrete witness exists for each.
 */
inline std::vector<AbstractState> pop_abs_successors(const AbstractState& a,
                                                     const CpdsRule& rule,
                                                     ThreadId t,
                                                     int alphabet) {
  std::vector<AbstractState> out;
  if (rule.kind != RuleKind::pop) return out;
  int g = a[0];
  int top = a[1 + t];
  if (g != rule.from_shared || top != rule.from_top) return out;
  for (int sym = kEmptyTop; sym < alphabet; ++sym) {
    AbstractState a2 = a;
    a2[0] = rule.to_shared;
    a2[1 + t] = sym;
    out.push_back(std::move(a2));
  }
  return out;
}

namespace detail {

inline std::vector<Effect> apply_rule(const CpdsRule& r, const Value& shared,
                                      const Value& stack) {
  std::vector<Effect> out;
  if (shared[0] != r.from_shared || stack.empty() || stack[0] != r.from_top)
    return out;
  Value ns{r.to_shared};
  Value nstack = stack;
  switch (r.kind) {
    case RuleKind::overwrite:
      nstack[0] = r.to_top;
      break;
    case RuleKind::push:
      nstack[0] = r.to_second;
      nstack.insert(nstack.begin(), r.to_top);
      break;
    case RuleKind::pop:
      nstack.erase(nstack.begin());
      break;
  }
  out.emplace_back(std::move(ns), std::move(nstack));
  return out;
}

inline void stacks_up_to_depth(int alphabet, int depth, Value& cur,
                               std::vector<Value>& out) {
  out.push_back(cur);
  if (static_cast<int>(cur.size()) >= depth) return;
  for (int sym = 0; sym < alphabet; ++sym) {
    cur.push_back(sym);
    stacks_up_to_depth(alphabet, depth, cur, out);
    cur.pop_back();
  }
}

}  // namespace detail

struct CpdsModel {
  Program program;
  Abstraction abstraction;
  CpdsSystem system;
};

inline CpdsModel build(const CpdsSystem& sys, const std::string& name) {
  CpdsModel m;
  m.system = sys;
  Program& p = m.program;
  p.name = name;

  std::vector<int> thread_template;
  ProgramState init;
  init.shared = {sys.init_shared};
  for (std::size_t ti = 0; ti < sys.templates.size(); ++ti) {
    const CpdsTemplate& tpl = sys.templates[ti];
    for (int c = 0; c < tpl.copies; ++c) {
      Procedure proc;
      proc.name = tpl.copies > 1 ? tpl.name + std::to_string(c) : tpl.name;
      for (std::size_t ri = 0; ri < tpl.rules.size(); ++ri) {
        CpdsRule rule = tpl.rules[ri];
        Action a;
        a.id = tpl.name + ".r" + std::to_string(ri);
        a.apply = [rule](const Value& sh, const Value& st) {
          return detail::apply_rule(rule, sh, st);
        };
        proc.actions.push_back(std::move(a));
      }
      p.threads.push_back(std::move(proc));
      thread_template.push_back(static_cast<int>(ti));
      init.locals.push_back(tpl.init_stack);
    }
  }
  p.n = static_cast<int>(p.threads.size());
  p.initial.push_back(std::move(init));
  m.system.thread_template = thread_template;

  CpdsSystem sys2 = m.system;
  p.bounded_states = [sys2, n = p.n](const AuditScope& scope) {
    std::vector<std::vector<Value>> per_thread;
    for (int t = 0; t < n; ++t) {
      const CpdsTemplate& tpl = sys2.templates[sys2.thread_template[t]];
      std::vector<Value> stacks;
      Value cur;
      detail::stacks_up_to_depth(tpl.alphabet, scope.max_stack_depth, cur,
                                 stacks);
      per_thread.push_back(std::move(stacks));
    }
    std::vector<ProgramState> out;
    std::vector<std::size_t> idx(n, 0);
    for (int g = 0; g < sys2.shared_size; ++g) {
      std::fill(idx.begin(), idx.end(), 0);
      while (true) {
        ProgramState s;
        s.shared = {g};
        for (int t = 0; t < n; ++t) s.locals.push_back(per_thread[t][idx[t]]);
        out.push_back(std::move(s));
        int t = n - 1;
        while (t >= 0 && ++idx[t] == per_thread[t].size()) idx[t--] = 0;
        if (t < 0) break;
      }
    }
    return out;
  };
  p.frontend_checks = [sys2](const Program&, std::vector<Diagnostic>& out) {
    for (std::size_t ti = 0; ti < sys2.templates.size(); ++ti) {
      const CpdsTemplate& tpl = sys2.templates[ti];
      auto bad_shared = [&](int g) { return g < 0 || g >= sys2.shared_size; };
      auto bad_sym = [&](int s) { return s < 0 || s >= tpl.alphabet; };
      for (std::size_t ri = 0; ri < tpl.rules.size(); ++ri) {
        const CpdsRule& r = tpl.rules[ri];
        std::string id = tpl.name + ".r" + std::to_string(ri);
        if (bad_shared(r.from_shared) || bad_shared(r.to_shared))
          out.push_back({"rule shared state outside 0.." +
                             std::to_string(sys2.shared_size - 1),
                         id, r.line});
        if (bad_sym(r.from_top))
          out.push_back({"rule stack symbol outside alphabet", id, r.line});
        if (r.kind == RuleKind::overwrite && bad_sym(r.to_top))
          out.push_back({"overwrite target symbol outside alphabet", id,
                         r.line});
        if (r.kind == RuleKind::push &&
            (bad_sym(r.to_top) || bad_sym(r.to_second)))
          out.push_back({"push symbols outside alphabet", id, r.line});
      }
      for (int sym : tpl.init_stack)
        if (bad_sym(sym))
          out.push_back({"initial stack symbol outside alphabet",
                         tpl.name, -1});
      if (sys2.init_shared < 0 || sys2.init_shared >= sys2.shared_size)
        out.push_back({"initial shared state outside domain", "", -1});
    }
  };

  // Top-of-the-stack abstraction: (g, sigma_0 .. sigma_{n-1}).
  Abstraction& abs = m.abstraction;
  abs.name = "top-of-stack";
  abs.alpha = [](const ProgramState& s) {
    AbstractState a;
    a.reserve(s.locals.size() + 1);
    a.push_back(s.shared[0]);
    for (const Value& st : s.locals)
      a.push_back(st.empty() ? kEmptyTop : st[0]);
    return a;
  };
  std::map<std::string, std::pair<CpdsRule, int>> pop_rules;  // id -> rule+Γ
  for (const CpdsTemplate& tpl : sys.templates) {
    for (std::size_t ri = 0; ri < tpl.rules.size(); ++ri) {
      std::string id = tpl.name + ".r" + std::to_string(ri);
      bool is_pop = tpl.rules[ri].kind == RuleKind::pop;
      abs.respects[id] = !is_pop;
      if (is_pop) pop_rules.emplace(id, std::make_pair(tpl.rules[ri],
                                                       tpl.alphabet));
    }
  }
  // Per-thread ownership: a pop by thread t applies only when t was
  // instantiated from the rule's template.
  std::map<std::string, int> id_template;
  for (std::size_t ti = 0; ti < sys.templates.size(); ++ti)
    for (std::size_t ri = 0; ri < sys.templates[ti].rules.size(); ++ri)
      id_template[sys.templates[ti].name + ".r" + std::to_string(ri)] =
          static_cast<int>(ti);
  auto ttmpl = m.system.thread_template;
  abs.disrespectful_abs_successors =
      [pop_rules, id_template, ttmpl](const AbstractState& a,
                                      const std::string& x, ThreadId t) {
        auto it = pop_rules.find(x);
        if (it == pop_rules.end()) return std::vector<AbstractState>{};
        if (id_template.at(x) != ttmpl[t]) return std::vector<AbstractState>{};
        return pop_abs_successors(a, it->second.first, t, it->second.second);
      };
  std::uint64_t size = sys.shared_size;
  for (int t = 0; t < p.n; ++t)
    size *= static_cast<std::uint64_t>(
                sys.templates[m.system.thread_template[t]].alphabet) +
            1;
  abs.codomain_size = size;
  abs.codomain_finite = true;
  return m;
}

/**
 * Parses the line-based `.cpds` format:
 *
 *   cpds
 *   shared <k>
 *   init <g0>
 *   thread <name> copies <c>
 *     alphabet <m>
 *     stack <g...>         (initial word, top first; may be empty)
 *     rule <g> <y> -> <g'> over <y'>
 *     rule <g> <y> -> <g'> push <ytop> <ysecond>
 *     rule <g> <y> -> <g'> pop
 *   end
 *
 * `#` starts a comment. Throws ParseError with the offending line; domain
 * violations surface through validate_program on the result.
 */
inline CpdsModel parse_cpds(const std::string& text,
                            const std::string& name = "cpds") {
  CpdsSystem sys;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header = false, have_shared = false, have_init = false;
  CpdsTemplate* cur = nullptr;

  auto tokens_of = [](std::string l) {
    auto hash = l.find('#');
    if (hash != std::string::npos) l.erase(hash);
    std::istringstream ls(l);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    return toks;
  };
  auto to_int = [&lineno](const std::string& t) {
    try {
      std::size_t pos = 0;
      int v = std::stoi(t, &pos);
      if (pos != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (...) {
      throw ParseError(lineno, "expected an integer, found '" + t + "'");
    }
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = tokens_of(line);
    if (toks.empty()) continue;
    if (!header) {
      if (toks[0] != "cpds" || toks.size() != 1)
        throw ParseError(lineno, "file must start with 'cpds'");
      header = true;
      continue;
    }
    const std::string& kw = toks[0];
    if (kw == "shared") {
      if (toks.size() != 2) throw ParseError(lineno, "usage: shared <k>");
      sys.shared_size = to_int(toks[1]);
      have_shared = true;
    } else if (kw == "init") {
      if (toks.size() != 2) throw ParseError(lineno, "usage: init <g0>");
      sys.init_shared = to_int(toks[1]);
      have_init = true;
    } else if (kw == "thread") {
      if (toks.size() != 4 || toks[2] != "copies")
        throw ParseError(lineno, "usage: thread <name> copies <c>");
      sys.templates.push_back({});
      cur = &sys.templates.back();
      cur->name = toks[1];
      cur->copies = to_int(toks[3]);
      if (cur->copies < 1)
        throw ParseError(lineno, "thread copies must be at least 1");
    } else if (kw == "alphabet") {
      if (!cur) throw ParseError(lineno, "'alphabet' outside a thread block");
      if (toks.size() != 2) throw ParseError(lineno, "usage: alphabet <m>");
      cur->alphabet = to_int(toks[1]);
    } else if (kw == "stack") {
      if (!cur) throw ParseError(lineno, "'stack' outside a thread block");
      cur->init_stack.clear();
      for (std::size_t i = 1; i < toks.size(); ++i)
        cur->init_stack.push_back(to_int(toks[i]));
    } else if (kw == "rule") {
      if (!cur) throw ParseError(lineno, "'rule' outside a thread block");
      if (toks.size() < 6 || toks[3] != "->")
        throw ParseError(lineno, "usage: rule <g> <y> -> <g'> <kind> ...");
      CpdsRule r;
      r.line = lineno;
      r.from_shared = to_int(toks[1]);
      r.from_top = to_int(toks[2]);
      r.to_shared = to_int(toks[4]);
      const std::string& kind = toks[5];
      if (kind == "over") {
        if (toks.size() != 7)
          throw ParseError(lineno, "usage: ... over <y'>");
        r.kind = RuleKind::overwrite;
        r.to_top = to_int(toks[6]);
      } else if (kind == "push") {
        if (toks.size() != 8)
          throw ParseError(lineno, "usage: ... push <ytop> <ysecond>");
        r.kind = RuleKind::push;
        r.to_top = to_int(toks[6]);
        r.to_second = to_int(toks[7]);
      } else if (kind == "pop") {
        if (toks.size() != 6) throw ParseError(lineno, "usage: ... pop");
        r.kind = RuleKind::pop;
      } else {
        throw ParseError(lineno, "unknown rule kind '" + kind + "'");
      }
      cur->rules.push_back(r);
    } else if (kw == "end") {
      if (!cur) throw ParseError(lineno, "'end' outside a thread block");
      cur = nullptr;
    } else {
      throw ParseError(lineno, "unknown directive '" + kw + "'");
    }
  }
  if (!header) throw ParseError(lineno, "empty input, expected 'cpds'");
  if (cur) throw ParseError(lineno, "unterminated thread block");
  if (!have_shared) throw ParseError(lineno, "missing 'shared' declaration");
  if (!have_init) throw ParseError(lineno, "missing 'init' declaration");
  if (sys.templates.empty())
    throw ParseError(lineno, "at least one thread block is required");
  return build(sys, name);
}

}  // namespace cpds
}  // namespace druba

#endif  // DRUBA_CPDS_HPP_
