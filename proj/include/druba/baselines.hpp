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

#ifndef DRUBA_BASELINES_HPP_
#define DRUBA_BASELINES_HPP_

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "druba/abstraction.hpp"
#include "druba/explore.hpp"
#include "druba/program.hpp"
#include "druba/state.hpp"

namespace druba {

enum class BfsStatus { completed, violation, cap_exceeded };

struct BfsResult {
  BfsStatus status = BfsStatus::completed;
  std::set<ProgramState> states;
  std::optional<ProgramState> violating;
};

/**
 * Breadth-first closure under steps of every thread from every state: the
 * ground-truth reach set under free scheduling, for finite models (or
 * bounded variants of infinite ones, via the state cap).
 */
inline BfsResult free_bfs(const Program& p, const Abstraction& abs,
                          const Property& prop, std::uint64_t state_cap = 0) {
  BfsResult res;
  std::deque<ProgramState> work;
  for (const ProgramState& s : p.initial)
    if (res.states.insert(s).second) work.push_back(s);
  while (!work.empty()) {
    ProgramState s = std::move(work.front());
    work.pop_front();
    if (!prop.holds(abs.alpha(s))) {
      res.status = BfsStatus::violation;
      res.violating = s;
      return res;
    }
    for (ThreadId t = 0; t < p.n; ++t) {
      for (ProgramState& s2 : thread_successors(p, s, t)) {
        if (res.states.insert(s2).second) work.push_back(std::move(s2));
      }
    }
    if (state_cap && res.states.size() > state_cap) {
      res.status = BfsStatus::cap_exceeded;
      return res;
    }
  }
  return res;
}

struct GridCell {
  int r = 0;
  int d = 0;
  std::set<ProgramState> states;
  std::set<AbstractState> abs_states;
  std::uint64_t image_calls = 0;
};

/**
 * From-scratch exploration of one RR[r,d] cell. Deliberately a separate
 * implementation path from the frontier engine: full (state, finder,
 * rounds, delays) nodes, with delays branched nondeterministically, so that
 * agreement between the two is meaningful evidence.
 */
inline GridCell naive_cell(const Program& p, const Abstraction& abs, int r,
                           int d) {
  GridCell cell;
  cell.r = r;
  cell.d = d;
  using Node = std::tuple<ProgramState, ThreadId, int, int>;
  std::set<Node> seen;
  std::deque<Node> work;
  for (const ProgramState& s : p.initial) {
    Node n0{s, p.n - 1, 0, 0};
    if (seen.insert(n0).second) work.push_back(n0);
    cell.states.insert(s);
  }
  while (!work.empty()) {
    auto [s, finder, rt, dt] = std::move(work.front());
    work.pop_front();
    // execute the next scheduled thread
    {
      ThreadId t = (finder + 1) % p.n;
      int rt2 = rt + (t == 0 ? 1 : 0);
      if (rt2 <= r) {
        ++cell.image_calls;
        for (ProgramState& s2 : thread_successors(p, s, t)) {
          cell.states.insert(s2);
          Node nn{std::move(s2), t, rt2, dt};
          if (seen.insert(nn).second) work.push_back(std::move(nn));
        }
      }
    }
    // or delay it
    if (dt + 1 <= d) {
      ThreadId nf = (finder + 1) % p.n;
      int rt2 = rt + (nf == 0 ? 1 : 0);
      if (rt2 <= r) {
        Node nn{s, nf, rt2, dt + 1};
        if (seen.insert(nn).second) work.push_back(std::move(nn));
      }
    }
  }
  for (const ProgramState& s : cell.states)
    cell.abs_states.insert(abs.alpha(s));
  return cell;
}

inline std::map<std::pair<int, int>, GridCell> naive_grid(
    const Program& p, const Abstraction& abs, int r_max, int d_max) {
  std::map<std::pair<int, int>, GridCell> grid;
  for (int r = 0; r <= r_max; ++r)
    for (int d = 0; d <= d_max; ++d)
      grid.emplace(std::make_pair(r, d), naive_cell(p, abs, r, d));
  return grid;
}

// Image calls a non-frontier implementation spends recomputing every listed
// cell from the initial states.
inline std::uint64_t naive_walk_image_calls(
    const Program& p, const Abstraction& abs,
    const std::vector<std::pair<int, int>>& cells) {
  std::uint64_t total = 0;
  for (auto [r, d] : cells) total += naive_cell(p, abs, r, d).image_calls;
  return total;
}

/**
 * The eager-closure comparison engine: the same incremental exploration as
 * the plateau search, but after every bound increment the abstract state
 * set is checked for closure under *all* actions — respectful successors
 * from concrete reached witnesses, disrespectful ones from the model
 * enumerators — and the run stops at the first closed set.
 */
inline VerdictReport ai_style_verify(const Program& p, const Abstraction& abs,
                                     const Property& prop,
                                     EngineOptions opts = {}) {
  Engine eng(p, abs, prop, opts);
  VerdictReport rep;

  auto closed_under_all = [&]() {
    ++rep.closure_checks;
    const auto& A = eng.reached().abs_states();
    bool closed = true;
    eng.reached().for_each([&](const SchedState& s) {
      if (!closed) return;
      for (ThreadId t = 0; t < p.n && closed; ++t)
        for (ProgramState& s2 : thread_successors(p, s.prog, t))
          if (!A.count(abs.alpha(s2))) {
            closed = false;
            break;
          }
    });
    if (!closed) return false;
    auto dis = abs.disrespectful_actions();
    if (dis.empty()) return true;
    for (const AbstractState& a : A)
      for (const std::string& x : dis)
        for (ThreadId t = 0; t < p.n; ++t)
          for (const AbstractState& a2 :
               abs.disrespectful_abs_successors(a, x, t))
            if (!A.count(a2)) return false;
    return true;
  };

  try {
    bool done = false;
    while (!done) {
      bool new_abs;
      do {
        if (opts.max_r && eng.r() + 2 > opts.max_r)
          throw CapExceeded{"max-r"};
        new_abs = eng.advance_round(eng.r() + 2);
        if (closed_under_all()) {
          rep.verdict = Verdict::safe;
          done = true;
          break;
        }
      } while (new_abs);
      if (done) break;
      if (p.n == 1) {
        rep.verdict = Verdict::unknown;
        rep.reason = "closure-failed";
        break;
      }
      int quiet = 0;
      bool restart = false;
      while (quiet < p.n - 1) {
        if (opts.max_d && eng.d() + 1 > opts.max_d)
          throw CapExceeded{"max-d"};
        bool na = eng.advance_delay();
        if (closed_under_all()) {
          rep.verdict = Verdict::safe;
          done = true;
          break;
        }
        if (na) {
          restart = true;
          break;
        }
        ++quiet;
      }
      if (done) break;
      if (!restart) {
        rep.verdict = Verdict::unknown;
        rep.reason = "closure-failed";
        break;
      }
    }
  } catch (const ViolationSignal& v) {
    rep.verdict = Verdict::violation;
    rep.witness = eng.witness_for(v.state);
  } catch (const CapExceeded& c) {
    rep.verdict = Verdict::unknown;
    rep.reason = c.reason;
  }
  detail::fill_common(rep, eng);
  return rep;
}

struct TesterResult {
  bool found = false;
  std::optional<Witness> witness;
  int r = 0;  // cell where the violation was found
  int d = 0;
  std::uint64_t image_calls = 0;
};

/**
 * Pure delay-bounded testing: enumerate cells diagonal by diagonal in
 * increasing r+d, delay-major within a diagonal, and report the first
 * property violation with its witness schedule. No convergence testing.
 */
inline TesterResult delay_bounded_test(const Program& p,
                                       const Abstraction& abs,
                                       const Property& prop, int r_max,
                                       int d_max, EngineOptions opts = {}) {
  TesterResult res;
  for (int k = 0; k <= r_max + d_max; ++k) {
    for (int d = std::min(k, d_max); d >= 0; --d) {
      int r = k - d;
      if (r < 0 || r > r_max) continue;
      Engine eng(p, abs, prop, opts);
      try {
        for (int i = 0; i < r; ++i) eng.advance_round(eng.r() + 1);
        for (int i = 0; i < d; ++i) eng.advance_delay();
        res.image_calls += eng.image_calls();
      } catch (const ViolationSignal& v) {
        res.image_calls += eng.image_calls();
        res.found = true;
        res.witness = eng.witness_for(v.state);
        res.r = r;
        res.d = d;
        return res;
      }
    }
  }
  return res;
}

}  // namespace druba

#endif  // DRUBA_BASELINES_HPP_
