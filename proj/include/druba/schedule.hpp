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

#ifndef DRUBA_SCHEDULE_HPP_
#define DRUBA_SCHEDULE_HPP_

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "druba/program.hpp"
#include "druba/state.hpp"

namespace druba {

/**
 * A scheduling function f(0..l-1): the thread executing each step of a path.
 */
struct ScheduleFunction {
  std::vector<ThreadId> entries;
  int n = 1;  // thread count

  std::size_t length() const { return entries.size(); }
};

struct ScheduleCost {
  int delays = 0;  // total delay d_p of the schedule
  int rounds = 0;  // ceil((l + d_p) / n)
};

// Mathematical modulus: result in [0, n) for any a.
inline int mod_floor(int a, int n) {
  int r = a % n;
  return r < 0 ? r + n : r;
}

/**
 * Delay cost of a schedule: d_p = f(0) + sum((f(i) - f(i-1) - 1) mod n),
 * plus the round count ceil((l + d_p)/n). The empty schedule costs nothing.
 */
inline ScheduleCost delay_cost(const ScheduleFunction& f) {
  if (f.n < 1) throw std::invalid_argument("schedule needs n >= 1");
  for (ThreadId t : f.entries)
    if (t < 0 || t >= f.n)
      throw std::invalid_argument("schedule entry " + std::to_string(t) +
                                  " outside [0, " + std::to_string(f.n) + ")");
  ScheduleCost c;
  if (f.entries.empty()) return c;
  c.delays = f.entries[0];
  for (std::size_t i = 1; i < f.entries.size(); ++i)
    c.delays += mod_floor(f.entries[i] - f.entries[i - 1] - 1, f.n);
  int l = static_cast<int>(f.entries.size());
  c.rounds = (l + c.delays + f.n - 1) / f.n;
  return c;
}

struct PathCheck {
  bool ok = true;
  std::string reason;  // first failure, empty when ok
};

/**
 * Certifies a path as a Round-Robin execution within round bound r and
 * delay bound d: path[0] initial, step i taken by thread f(i), d_p <= d and
 * ceil((l + d_p)/n) <= r.
 */
inline PathCheck validate_rr_path(const Program& p,
                                  const std::vector<ProgramState>& path,
                                  const ScheduleFunction& f, int r, int d) {
  PathCheck res;
  auto fail = [&res](const std::string& why) {
    res.ok = false;
    res.reason = why;
    return res;
  };
  if (path.size() != f.entries.size() + 1)
    return fail("path length " + std::to_string(path.size()) +
                " does not match schedule length " +
                std::to_string(f.entries.size()) + " + 1");
  if (f.n != p.n) return fail("schedule thread count differs from program");
  if (path.empty()) return fail("path must contain at least the start state");
  if (std::find(p.initial.begin(), p.initial.end(), path[0]) ==
      p.initial.end())
    return fail("path does not start in an initial state");
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    ThreadId t = f.entries[i];
    if (t < 0 || t >= p.n)
      return fail("schedule entry " + std::to_string(t) + " out of range");
    auto succ = thread_successors(p, path[i], t);
    if (std::find(succ.begin(), succ.end(), path[i + 1]) == succ.end())
      return fail("step " + std::to_string(i) + " is not a step of thread " +
                  std::to_string(t));
  }
  ScheduleCost c = delay_cost(f);
  if (c.delays > d)
    return fail("schedule uses " + std::to_string(c.delays) +
                " delays, bound is " + std::to_string(d));
  if (c.rounds > r)
    return fail("schedule uses " + std::to_string(c.rounds) +
                " rounds, bound is " + std::to_string(r));
  return res;
}

}  // namespace druba

#endif  // DRUBA_SCHEDULE_HPP_
