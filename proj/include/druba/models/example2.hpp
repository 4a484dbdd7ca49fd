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

#ifndef DRUBA_MODELS_EXAMPLE2_HPP_
#define DRUBA_MODELS_EXAMPLE2_HPP_

#include <string>
#include <utility>

#include "druba/abstraction.hpp"
#include "druba/async_model.hpp"
#include "druba/program.hpp"

namespace druba {
namespace models {

/**
 * Three threads over shared states {0,1,2}, trivial locals:
 * T0: 0 -> 1, T1: 0 -> 1, T2: 0 -> 2. Reaching 2 needs two delays (T0 and
 * T1 must both be skipped), which makes this the canonical exercise for the
 * delay loop. Extra threads beyond three are copies of T2.
 */
inline std::pair<Program, Abstraction> example2_model(int n = 3) {
  if (n < 3) throw std::invalid_argument("example2 needs n >= 3");
  Program p;
  p.name = "example2";
  p.n = n;

  auto guarded_set = [](int from, int to) {
    return [from, to](const Value& sh, const Value&) {
      std::vector<Effect> out;
      if (sh[0] == from) out.emplace_back(Value{to}, Value{});
      return out;
    };
  };
  p.threads.push_back({"T0", {{"T0.a", guarded_set(0, 1)}}});
  p.threads.push_back({"T1", {{"T1.a", guarded_set(0, 1)}}});
  for (int t = 2; t < n; ++t)
    p.threads.push_back(
        {"T" + std::to_string(t), {{"T2.a", guarded_set(0, 2)}}});

  ProgramState init;
  init.shared = {0};
  init.locals.assign(n, Value{});
  p.initial.push_back(std::move(init));

  FiniteDomain dom;
  dom.shared = {{0}, {1}, {2}};
  dom.locals.assign(n, {Value{}});
  p.domain = std::move(dom);

  Abstraction abs = shared_only_abstraction(p);
  abs.codomain_size = 3;
  return {std::move(p), std::move(abs)};
}

}  // namespace models
}  // namespace druba

#endif  // DRUBA_MODELS_EXAMPLE2_HPP_
