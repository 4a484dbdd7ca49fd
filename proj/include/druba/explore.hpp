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

#ifndef DRUBA_EXPLORE_HPP_
#define DRUBA_EXPLORE_HPP_

#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "druba/abstraction.hpp"
#include "druba/program.hpp"
#include "druba/schedule.hpp"
#include "druba/state.hpp"

namespace druba {

/**
 * A concrete state extended with scheduling bookkeeping. `finder` is the
 * thread whose action produced the state; `rounds_taken` / `delays_taken`
 * count rounds started and delays spent on the discovery path. Set
 * membership is keyed on (program variables, finder) only; the counters are
 * scheduling metadata and excluded from equality.
 */
struct SchedState {
  ProgramState prog;
  ThreadId finder = 0;
  int rounds_taken = 0;
  int delays_taken = 0;

  struct KeyHash {
    std::size_t operator()(const SchedState& s) const {
      std::size_t h = ProgramState::Hash{}(s.prog);
      combine_hash(std::hash<int>{}(s.finder), &h);
      return h;
    }
  };
  struct KeyEq {
    bool operator()(const SchedState& a, const SchedState& b) const {
      return a.finder == b.finder && a.prog == b.prog;
    }
  };
};

struct Witness {
  std::vector<ProgramState> path;  // path[0] is initial
  ScheduleFunction schedule;       // schedule.entries[i] executes step i
};

enum class Verdict { safe, violation, unknown };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::safe: return "safe";
    case Verdict::violation: return "violation";
    default: return "unknown";
  }
}

struct VerdictReport {
  Verdict verdict = Verdict::unknown;
  std::optional<Witness> witness;  // present iff verdict == violation
  std::size_t abs_state_count = 0;
  std::vector<AbstractState> abs_states;  // sorted
  int r_max = 0;
  int d_max = 0;
  std::uint64_t image_calls_total = 0;
  std::uint64_t image_calls_final_plateau = 0;
  std::uint64_t closure_checks = 0;
  std::optional<ClosureCex> closure_cex;
  std::string reason;  // machine-readable cause when unknown
  std::int64_t time_ms = 0;
  std::vector<std::pair<int, int>> visited_cells;
};

struct EngineOptions {
  std::uint64_t max_states = 0;  // 0 = unlimited
  int max_r = 0;
  int max_d = 0;
  std::int64_t timeout_ms = 0;
  bool snapshot_cells = false;  // keep per-cell projections for the oracle
};

// Signal types: a property violation is a verdict, not a failure.
struct ViolationSignal {
  SchedState state;
};
struct CapExceeded {
  std::string reason;
};

struct MergeOutcome {
  std::size_t inserted = 0;
  bool new_abstract = false;
};

/**
 * The set of states discovered so far, with the induced abstract-state set
 * and per-metadata frontier indices. Merging keeps already-present states
 * untouched, so each state retains the bookkeeping of its first discovery.
 */
class ReachSet {
 public:
  explicit ReachSet(const Abstraction* abs) : abs_(abs) {}

  // Returns {inserted, abstract image grew}. No-op for known keys.
  std::pair<bool, bool> insert(const SchedState& s) {
    auto [it, inserted] = states_.insert(s);
    if (!inserted) return {false, false};
    bool fresh_abs = abs_states_.insert(abs_->alpha(s.prog)).second;
    round_index_[s.rounds_taken].push_back(&*it);
    delay_index_[s.delays_taken].push_back(&*it);
    return {true, fresh_abs};
  }

  MergeOutcome merge(const std::vector<SchedState>& batch) {
    MergeOutcome out;
    for (const SchedState& s : batch) {
      auto [ins, fresh] = insert(s);
      out.inserted += ins;
      out.new_abstract |= fresh;
    }
    return out;
  }

  bool contains_key(const SchedState& s) const { return states_.count(s); }
  std::size_t size() const { return states_.size(); }

  const std::set<AbstractState>& abs_states() const { return abs_states_; }

  std::set<ProgramState> projected() const {
    std::set<ProgramState> out;
    for (const SchedState& s : states_) out.insert(s.prog);
    return out;
  }

  const std::map<int, std::vector<const SchedState*>>& round_index() const {
    return round_index_;
  }
  const std::map<int, std::vector<const SchedState*>>& delay_index() const {
    return delay_index_;
  }

  template <class F>
  void for_each(F&& f) const {
    for (const SchedState& s : states_) f(s);
  }

 private:
  const Abstraction* abs_;
  std::unordered_set<SchedState, SchedState::KeyHash, SchedState::KeyEq>
      states_;
  std::set<AbstractState> abs_states_;
  std::map<int, std::vector<const SchedState*>> round_index_;
  std::map<int, std::vector<const SchedState*>> delay_index_;
};

/**
 * Frontier-driven Round-Robin exploration. One engine owns the reached set,
 * the per-level work queues, the discovery tree for witness replay, and the
 * image-call counter. `advance_round` and `advance_delay` move the bounds;
 * the verification drivers compose them.
 */
class Engine {
 public:
  Engine(const Program& p, const Abstraction& abs, const Property& prop,
         EngineOptions opts = {})
      : p_(p),
        abs_(abs),
        prop_(prop),
        opts_(opts),
        reached_(&abs),
        start_(std::chrono::steady_clock::now()) {
    for (const ProgramState& s : p.initial) {
      // finder n-1 so that expanding an initial state starts with thread 0
      SchedState init{s, p.n - 1, 0, 0};
      if (!discovered_.emplace(init, Edge{}).second) continue;
      deliver(init, /*expandable=*/false);
    }
    record_cell();
  }

  int r() const { return r_; }
  int d() const { return d_; }
  int thread_count() const { return p_.n; }
  std::uint64_t image_calls() const { return image_calls_; }
  const ReachSet& reached() const { return reached_; }
  const std::vector<std::pair<int, int>>& visited_cells() const {
    return cells_;
  }
  const std::vector<std::set<ProgramState>>& cell_snapshots() const {
    return snapshots_;
  }

  // Successors of u in scheduling order: the next thread executes, the
  // finder advances, rounds_taken grows on wrap-around.
  std::vector<SchedState> image(const SchedState& u) {
    ++image_calls_;
    ThreadId t = (u.finder + 1) % p_.n;
    int rt = u.rounds_taken + (t == 0 ? 1 : 0);
    std::vector<SchedState> out;
    for (ProgramState& s : thread_successors(p_, u.prog, t))
      out.push_back(SchedState{std::move(s), t, rt, u.delays_taken});
    return out;
  }

  /**
   * Round-Robin exploration from `seed` up to round bound `bound` without
   * delaying, merging into the reached set as it goes. A state is expanded
   * while its finder precedes thread n-1 or its round count is below the
   * bound. Returns the states visited by this call (the seed included).
   * Throws ViolationSignal when a visited state falsifies the property.
   */
  std::vector<SchedState> finish_rounds(const SchedState& seed, int bound) {
    std::deque<SchedState> work{seed};
    std::vector<SchedState> visited;
    while (!work.empty()) {
      SchedState u = std::move(work.front());
      work.pop_front();
      if (!prop_.holds(abs_.alpha(u.prog))) throw ViolationSignal{u};
      bool inserted = deliver(u, /*expandable=*/true);
      visited.push_back(u);
      bool schedulable = u.finder < p_.n - 1 || u.rounds_taken < bound;
      if (!schedulable) {
        // frontier residue: revisited when the round bound grows past it
        if (inserted) pending_round_[u.rounds_taken].push_back(u);
        continue;
      }
      for (SchedState& v : image(u)) {
        if (discovered_.emplace(v, Edge{u, false}).second)
          work.push_back(std::move(v));
      }
      check_caps();
    }
    return visited;
  }

  /**
   * One round iteration: consume every pending frontier level below the new
   * bound (normally just the current one; after a restart also levels a
   * delay wrap pushed past the old bound) and finish rounds from each.
   * Returns whether the abstract-state set grew.
   */
  bool advance_round(int bound) {
    iter_new_abs_ = false;
    std::vector<SchedState> frontier;
    while (!pending_round_.empty() &&
           pending_round_.begin()->first < bound) {
      auto& batch = pending_round_.begin()->second;
      frontier.insert(frontier.end(), batch.begin(), batch.end());
      pending_round_.erase(pending_round_.begin());
    }
    r_ = bound;
    for (const SchedState& s : frontier) finish_rounds(s, bound);
    record_cell();
    return iter_new_abs_;
  }

  /**
   * One delay iteration: every state awaiting its first delay within the
   * current budget is delayed once (the scheduled thread is skipped), then
   * rounds are finished from the copy. Copies landing beyond the round
   * bound are merged but left for the round frontier to pick up. Newly
   * discovered states with spare delay budget cascade within the iteration.
   */
  bool advance_delay() {
    iter_new_abs_ = false;
    const int budget = d_;
    d_ += 1;  // the bound advances before the frontier is delayed
    while (!pending_delay_.empty() &&
           pending_delay_.begin()->first <= budget) {
      auto batch = std::move(pending_delay_.begin()->second);
      pending_delay_.erase(pending_delay_.begin());
      for (const SchedState& u : batch) {
        SchedState s = u;
        s.delays_taken++;
        s.finder = (s.finder + 1) % p_.n;
        if (s.finder == 0) s.rounds_taken++;
        if (!discovered_.emplace(s, Edge{u, true}).second) continue;
        if (s.rounds_taken > r_) {
          deliver(s, /*expandable=*/false);
          continue;
        }
        finish_rounds(s, r_);
        check_caps();
      }
    }
    record_cell();
    return iter_new_abs_;
  }

  // Reconstructs the discovery path of `u` as a schedule plus state path.
  // Delay edges contribute no step; the jump in the schedule encodes them.
  Witness witness_for(const SchedState& u) const {
    Witness w;
    w.schedule.n = p_.n;
    std::vector<SchedState> spine;
    spine.push_back(u);
    while (true) {
      auto it = discovered_.find(spine.back());
      if (it == discovered_.end() || !it->second.parent) break;
      const Edge& e = it->second;
      if (!e.via_delay) {
        w.path.push_back(spine.back().prog);
        w.schedule.entries.push_back(spine.back().finder);
      }
      spine.push_back(*e.parent);
    }
    w.path.push_back(spine.back().prog);
    std::reverse(w.path.begin(), w.path.end());
    std::reverse(w.schedule.entries.begin(), w.schedule.entries.end());
    return w;
  }

  std::int64_t elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

  void check_caps() const {
    if (opts_.max_states && reached_.size() > opts_.max_states)
      throw CapExceeded{"max-states"};
    if (opts_.timeout_ms && elapsed_ms() > opts_.timeout_ms)
      throw CapExceeded{"timeout"};
  }

  const Program& program() const { return p_; }
  const Abstraction& abstraction() const { return abs_; }
  const Property& property() const { return prop_; }
  const EngineOptions& options() const { return opts_; }

 private:
  struct Edge {
    std::optional<SchedState> parent;
    bool via_delay = false;
    Edge() = default;
    Edge(SchedState p, bool d) : parent(std::move(p)), via_delay(d) {}
  };

  // Insert into reached; index new states into the delay queue (every state
  // is delayable once) and, for unexpandable ones, the round queue.
  bool deliver(const SchedState& s, bool expandable) {
    auto [inserted, fresh_abs] = reached_.insert(s);
    if (inserted) {
      iter_new_abs_ |= fresh_abs;
      pending_delay_[s.delays_taken].push_back(s);
      if (!expandable) pending_round_[s.rounds_taken].push_back(s);
    }
    return inserted;
  }

  void record_cell() {
    cells_.emplace_back(r_, d_);
    if (opts_.snapshot_cells) snapshots_.push_back(reached_.projected());
  }

  const Program& p_;
  const Abstraction& abs_;
  const Property& prop_;
  EngineOptions opts_;
  ReachSet reached_;
  // discovery tree over state keys; doubles as the admission set
  std::unordered_map<SchedState, Edge, SchedState::KeyHash, SchedState::KeyEq>
      discovered_;
  std::map<int, std::vector<SchedState>> pending_round_;
  std::map<int, std::vector<SchedState>> pending_delay_;
  int r_ = 0;
  int d_ = 0;
  bool iter_new_abs_ = false;
  std::uint64_t image_calls_ = 0;
  std::vector<std::pair<int, int>> cells_;
  std::vector<std::set<ProgramState>> snapshots_;
  std::chrono::steady_clock::time_point start_;
};

namespace detail {

inline void fill_common(VerdictReport& rep, const Engine& eng) {
  rep.abs_state_count = eng.reached().abs_states().size();
  rep.abs_states.assign(eng.reached().abs_states().begin(),
                        eng.reached().abs_states().end());
  rep.r_max = eng.r();
  rep.d_max = eng.d();
  rep.image_calls_total = eng.image_calls();
  rep.visited_cells = eng.visited_cells();
  rep.time_ms = eng.elapsed_ms();
}

}  // namespace detail

/**
 * The round/delay plateau search: advance rounds until one iteration adds
 * no abstract state, then advance delays; any new abstract state under a
 * delay restarts the round loop. After a delay plateau of length n-1 the
 * reached abstract set is tested for closure under disrespectful actions —
 * success makes it exactly the abstract reach under free scheduling.
 */
inline VerdictReport verify(const Program& p, const Abstraction& abs,
                           const Property& prop, EngineOptions opts = {}) {
  Engine eng(p, abs, prop, opts);
  VerdictReport rep;
  std::uint64_t plateau_mark = 0;
  bool plateau_reached = false;
  try {
    while (true) {
      bool new_abs;
      do {
        if (opts.max_r && eng.r() + 2 > opts.max_r)
          throw CapExceeded{"max-r"};
        plateau_mark = eng.image_calls();
        new_abs = eng.advance_round(eng.r() + 2);
      } while (new_abs);
      if (p.n == 1) break;  // a delay plateau of length n-1 = 0 is immediate
      int quiet = 0;
      bool restart = false;
      while (quiet < p.n - 1) {
        if (opts.max_d && eng.d() + 1 > opts.max_d)
          throw CapExceeded{"max-d"};
        if (eng.advance_delay()) {
          restart = true;
          break;
        }
        ++quiet;
      }
      if (!restart) break;
    }
    plateau_reached = true;
    rep.closure_checks = 1;
    ClosureResult cl = closure_test(eng.reached().abs_states(), abs, p);
    if (cl.closed) {
      rep.verdict = Verdict::safe;
    } else {
      rep.verdict = Verdict::unknown;
      rep.closure_cex = cl.cex;
      rep.reason = "closure-failed";
    }
  } catch (const ViolationSignal& v) {
    rep.verdict = Verdict::violation;
    rep.witness = eng.witness_for(v.state);
  } catch (const CapExceeded& c) {
    rep.verdict = Verdict::unknown;
    rep.reason = c.reason;
  }
  detail::fill_common(rep, eng);
  if (plateau_reached)
    rep.image_calls_final_plateau = eng.image_calls() - plateau_mark;
  return rep;
}

}  // namespace druba

#endif  // DRUBA_EXPLORE_HPP_
