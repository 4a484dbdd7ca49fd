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

#ifndef DRUBA_MODELS_EXAMPLE3_HPP_
#define DRUBA_MODELS_EXAMPLE3_HPP_

#include <stdexcept>
#include <string>
#include <utility>

#include "druba/abstraction.hpp"
#include "druba/program.hpp"

namespace druba {
namespace models {

/**
 * n symmetric copies of
 *   0: t := !t
 *   1: if t goto 2 else goto 3
 *   2: s := 1
 *   3: (done)
 * over shared bools s, t. Under delay-free Round-Robin two threads keep
 * flipping t before either passes the guard, so s = 1 is reachable with one
 * thread but not with two — the non-monotonicity witness in the thread
 * count.
 */
inline std::pair<Program, Abstraction> example3_model(int n) {
  if (n < 1) throw std::invalid_argument("example3 needs n >= 1");
  Program p;
  p.name = "example3";
  p.n = n;

  Action flip{"flip", [](const Value& sh, const Value& lo) {
                std::vector<Effect> out;
                if (lo[0] == 0)
                  out.emplace_back(Value{sh[0], 1 - sh[1]}, Value{1});
                return out;
              }};
  Action branch{"branch", [](const Value& sh, const Value& lo) {
                  std::vector<Effect> out;
                  if (lo[0] == 1) out.emplace_back(sh, Value{sh[1] ? 2 : 3});
                  return out;
                }};
  Action set_s{"set", [](const Value& sh, const Value& lo) {
                 std::vector<Effect> out;
                 if (lo[0] == 2) out.emplace_back(Value{1, sh[1]}, Value{3});
                 return out;
               }};
  for (int t = 0; t < n; ++t)
    p.threads.push_back({"T" + std::to_string(t), {flip, branch, set_s}});

  ProgramState init;
  init.shared = {0, 0};
  init.locals.assign(n, Value{0});
  p.initial.push_back(std::move(init));

  FiniteDomain dom;
  for (int s = 0; s <= 1; ++s)
    for (int t = 0; t <= 1; ++t) dom.shared.push_back({s, t});
  std::vector<Value> pcs{{0}, {1}, {2}, {3}};
  dom.locals.assign(n, pcs);
  p.domain = std::move(dom);

  Abstraction abs = identity_abstraction(p);
  return {std::move(p), std::move(abs)};
}

}  // namespace models
}  // namespace druba

#endif  // DRUBA_MODELS_EXAMPLE3_HPP_
