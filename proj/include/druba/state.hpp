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

#ifndef DRUBA_STATE_HPP_
#define DRUBA_STATE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace druba {

// Index of a thread within a program, in [0, n).
using ThreadId = int;

// A flat tuple of small integers. Used both for shared state and for a
// single thread's local state (a pushdown stack is stored top-first).
using Value = std::vector<int>;

inline void combine_hash(std::size_t v, std::size_t* seed) {
  *seed ^= v + 0x9e3779b97f4a7c15ull + (*seed << 6) + (*seed >> 2);
}

inline std::size_t hash_value(const Value& v) {
  std::size_t h = v.size();
  for (int x : v) combine_hash(std::hash<int>{}(static_cast<int>(x)), &h);
  return h;
}

/**
 * A global program state: one shared value plus one local value per thread.
 */
struct ProgramState {
  Value shared;
  std::vector<Value> locals;

  bool operator==(const ProgramState& rhs) const {
    return shared == rhs.shared && locals == rhs.locals;
  }
  bool operator<(const ProgramState& rhs) const {
    if (shared != rhs.shared) return shared < rhs.shared;
    return locals < rhs.locals;
  }

  struct Hash {
    std::size_t operator()(const ProgramState& s) const {
      std::size_t h = hash_value(s.shared);
      for (const auto& l : s.locals) combine_hash(hash_value(l), &h);
      return h;
    }
  };
};

inline std::string to_string(const Value& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i];
  os << "]";
  return os.str();
}

inline std::string to_string(const ProgramState& s) {
  std::ostringstream os;
  os << "(" << to_string(s.shared) << " |";
  for (const auto& l : s.locals) os << " " << to_string(l);
  os << ")";
  return os.str();
}

inline std::ostream& operator<<(std::ostream& os, const ProgramState& s) {
  return os << to_string(s);
}

}  // namespace druba

#endif  // DRUBA_STATE_HPP_
