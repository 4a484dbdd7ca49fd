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

#ifndef DRUBA_ASYNC_MODEL_HPP_
#define DRUBA_ASYNC_MODEL_HPP_

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "druba/abstraction.hpp"
#include "druba/program.hpp"
#include "druba/state.hpp"

namespace druba {

struct AsyncRule {
  int from_shared = 0, from_local = 0;
  int to_shared = 0, to_local = 0;
  int line = -1;
};

struct AsyncTemplate {
  std::string name;
  int copies = 1;
  int locals = 1;  // local states 0..locals-1
  int linit = 0;
  std::vector<AsyncRule> rules;
};

struct AsyncSystem {
  int shared_size = 0;
  int init_shared = 0;
  std::vector<AsyncTemplate> templates;
  std::optional<int> error_shared;
};

struct AsyncModel {
  Program program;
  std::optional<int> error_shared;
  AsyncSystem system;
};

// The "shared-only" view: alpha keeps the shared state and hides locals.
// Every per-rule action respects it — a rule fixes the shared successor —
// so closure under disrespectful actions is vacuous.
inline Abstraction shared_only_abstraction(const Program& p) {
  Abstraction abs;
  abs.name = "shared-only";
  abs.alpha = [](const ProgramState& s) {
    return AbstractState(s.shared.begin(), s.shared.end());
  };
  for (const std::string& id : action_ids(p)) abs.respects[id] = true;
  abs.codomain_finite = true;
  if (p.domain) abs.codomain_size = p.domain->shared.size();
  return abs;
}

inline AsyncModel build_async(const AsyncSystem& sys, const std::string& name) {
  AsyncModel m;
  m.system = sys;
  m.error_shared = sys.error_shared;
  Program& p = m.program;
  p.name = name;

  FiniteDomain dom;
  for (int g = 0; g < sys.shared_size; ++g) dom.shared.push_back({g});

  ProgramState init;
  init.shared = {sys.init_shared};
  for (const AsyncTemplate& tpl : sys.templates) {
    for (int c = 0; c < tpl.copies; ++c) {
      Procedure proc;
      proc.name = tpl.copies > 1 ? tpl.name + std::to_string(c) : tpl.name;
      for (std::size_t ri = 0; ri < tpl.rules.size(); ++ri) {
        AsyncRule r = tpl.rules[ri];
        Action a;
        a.id = tpl.name + ".r" + std::to_string(ri);
        a.apply = [r](const Value& sh, const Value& lo) {
          std::vector<Effect> out;
          if (sh[0] == r.from_shared && lo[0] == r.from_local)
            out.emplace_back(Value{r.to_shared}, Value{r.to_local});
          return out;
        };
        proc.actions.push_back(std::move(a));
      }
      p.threads.push_back(std::move(proc));
      init.locals.push_back({tpl.linit});
      std::vector<Value> lvals;
      for (int l = 0; l < tpl.locals; ++l) lvals.push_back({l});
      dom.locals.push_back(std::move(lvals));
    }
  }
  p.n = static_cast<int>(p.threads.size());
  p.initial.push_back(std::move(init));
  p.domain = std::move(dom);

  AsyncSystem sys2 = sys;
  p.frontend_checks = [sys2](const Program&, std::vector<Diagnostic>& out) {
    auto bad_shared = [&](int g) { return g < 0 || g >= sys2.shared_size; };
    for (const AsyncTemplate& tpl : sys2.templates) {
      auto bad_local = [&](int l) { return l < 0 || l >= tpl.locals; };
      for (std::size_t ri = 0; ri < tpl.rules.size(); ++ri) {
        const AsyncRule& r = tpl.rules[ri];
        std::string id = tpl.name + ".r" + std::to_string(ri);
        if (bad_shared(r.from_shared) || bad_shared(r.to_shared))
          out.push_back({"rule shared endpoint outside 0.." +
                             std::to_string(sys2.shared_size - 1),
                         id, r.line});
        if (bad_local(r.from_local) || bad_local(r.to_local))
          out.push_back({"rule local endpoint outside 0.." +
                             std::to_string(tpl.locals - 1),
                         id, r.line});
      }
      if (bad_local(tpl.linit))
        out.push_back({"linit outside the local domain", tpl.name, -1});
    }
    if (bad_shared(sys2.init_shared))
      out.push_back({"init outside the shared domain", "", -1});
    if (sys2.error_shared && bad_shared(*sys2.error_shared))
      out.push_back({"error state outside the shared domain", "", -1});
  };
  return m;
}

// Property induced by an `error shared <g>` clause (or --error shared=g):
// safe states are those whose abstract tuple starts with a different shared
// value. Usable with abstractions that expose the shared state first.
inline Property error_shared_property(int g) {
  Property prop;
  prop.name = "shared!=" + std::to_string(g);
  prop.holds = [g](const AbstractState& a) { return a.empty() || a[0] != g; };
  return prop;
}

/**
 * Parses the line-based `async` format:
 *
 *   async
 *   shared <k>
 *   init <g0>
 *   thread <name> copies <c>
 *     locals <m>
 *     linit <l0>
 *     rule <g> <l> -> <g'> <l'>
 *   end
 *   [error shared <g>]
 */
inline AsyncModel parse_async_model(const std::string& text,
                                    const std::string& name = "async") {
  AsyncSystem sys;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool header = false, have_shared = false, have_init = false;
  AsyncTemplate* cur = nullptr;

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
      if (toks[0] != "async" || toks.size() != 1)
        throw ParseError(lineno, "file must start with 'async'");
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
    } else if (kw == "locals") {
      if (!cur) throw ParseError(lineno, "'locals' outside a thread block");
      if (toks.size() != 2) throw ParseError(lineno, "usage: locals <m>");
      cur->locals = to_int(toks[1]);
    } else if (kw == "linit") {
      if (!cur) throw ParseError(lineno, "'linit' outside a thread block");
      if (toks.size() != 2) throw ParseError(lineno, "usage: linit <l0>");
      cur->linit = to_int(toks[1]);
    } else if (kw == "rule") {
      if (!cur) throw ParseError(lineno, "'rule' outside a thread block");
      if (toks.size() != 6 || toks[3] != "->")
        throw ParseError(lineno, "usage: rule <g> <l> -> <g'> <l'>");
      AsyncRule r;
      r.line = lineno;
      r.from_shared = to_int(toks[1]);
      r.from_local = to_int(toks[2]);
      r.to_shared = to_int(toks[4]);
      r.to_local = to_int(toks[5]);
      cur->rules.push_back(r);
    } else if (kw == "end") {
      if (!cur) throw ParseError(lineno, "'end' outside a thread block");
      cur = nullptr;
    } else if (kw == "error") {
      if (cur) throw ParseError(lineno, "'error' inside a thread block");
      if (toks.size() != 3 || toks[1] != "shared")
        throw ParseError(lineno, "usage: error shared <g>");
      sys.error_shared = to_int(toks[2]);
    } else {
      throw ParseError(lineno, "unknown directive '" + kw + "'");
    }
  }
  if (!header) throw ParseError(lineno, "empty input, expected 'async'");
  if (cur) throw ParseError(lineno, "unterminated thread block");
  if (!have_shared) throw ParseError(lineno, "missing 'shared' declaration");
  if (!have_init) throw ParseError(lineno, "missing 'init' declaration");
  if (sys.templates.empty())
    throw ParseError(lineno, "at least one thread block is required");
  return build_async(sys, name);
}

}  // namespace druba

#endif  // DRUBA_ASYNC_MODEL_HPP_
