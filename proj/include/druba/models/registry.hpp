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

#ifndef DRUBA_MODELS_REGISTRY_HPP_
#define DRUBA_MODELS_REGISTRY_HPP_

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "druba/abstraction.hpp"
#include "druba/models/example2.hpp"
#include "druba/models/example3.hpp"
#include "druba/models/program_p.hpp"
#include "druba/models/ticket_lock.hpp"
#include "druba/unbounded.hpp"

namespace druba {
namespace models {

struct BuiltinModel {
  Program program;
  Abstraction abstraction;
  Property default_property;
  std::optional<ModelFamily> family;
};

inline bool is_builtin(const std::string& name) {
  return name == "example2" || name == "example3" || name == "program-p" ||
         name == "ticket-lock" || name == "ticket-lock-buggy";
}

inline std::vector<std::string> builtin_names() {
  return {"example2", "example3", "program-p", "ticket-lock",
          "ticket-lock-buggy"};
}

/**
 * Instantiates a built-in model by name. `abstraction` selects among the
 * model's abstractions ("alpha1".."alpha3" for program-p, "identity" or
 * "shared-only" where meaningful; empty picks the model default).
 */
inline BuiltinModel make_builtin(const std::string& name, int n,
                                 const std::string& abstraction = "") {
  BuiltinModel m;
  if (name == "example2") {
    int nn = n > 0 ? n : 3;
    auto [p, abs] = example2_model(nn);
    m.program = std::move(p);
    if (abstraction == "identity")
      m.abstraction = identity_abstraction(m.program);
    else if (abstraction.empty() || abstraction == "shared-only")
      m.abstraction = abs;
    else
      throw std::invalid_argument("example2 has no abstraction '" +
                                  abstraction + "'");
    m.family = ModelFamily{
        "example2",
        [](int k) { return example2_model(std::max(k, 3)); },
        nullptr};
  } else if (name == "example3") {
    int nn = n > 0 ? n : 1;
    auto [p, abs] = example3_model(nn);
    m.program = std::move(p);
    if (!abstraction.empty() && abstraction != "identity")
      throw std::invalid_argument("example3 has no abstraction '" +
                                  abstraction + "'");
    m.abstraction = std::move(abs);
    m.family = ModelFamily{"example3",
                           [](int k) { return example3_model(k); }, nullptr};
  } else if (name == "program-p") {
    int nn = n > 0 ? n : 2;
    int variant = 2;
    if (abstraction == "alpha1")
      variant = 1;
    else if (abstraction == "alpha3")
      variant = 3;
    else if (!abstraction.empty() && abstraction != "alpha2")
      throw std::invalid_argument("program-p abstractions are alpha1..alpha3");
    m.program = program_p_model(nn);
    m.abstraction = program_p_alpha(m.program, variant);
    m.default_property.name = "assert-s-eq-l";
    m.default_property.holds = [](const AbstractState& a) {
      return !(a[0] == 3 && a[1] == 0);
    };
    ModelFamily fam;
    fam.name = "program-p/alpha" + std::to_string(variant);
    fam.instantiate = [variant](int k) {
      Program p = program_p_model(k);
      Abstraction abs = program_p_alpha(p, variant);
      return std::make_pair(std::move(p), std::move(abs));
    };
    fam.parametric_disrespectful = program_p_parametric(variant);
    m.family = std::move(fam);
  } else if (name == "ticket-lock" || name == "ticket-lock-buggy") {
    int nn = n > 0 ? n : 2;
    bool buggy = name == "ticket-lock-buggy";
    m.program = buggy ? ticket_lock_buggy_model(nn) : ticket_lock_model(nn);
    if (!abstraction.empty() && abstraction != "p1-p4")
      throw std::invalid_argument("ticket-lock uses the p1-p4 abstraction");
    m.abstraction = ticket_lock_alpha(m.program);
    m.default_property = ticket_lock_property();
    ModelFamily fam;
    fam.name = name;
    fam.instantiate = [buggy](int k) {
      Program p = buggy ? ticket_lock_buggy_model(k) : ticket_lock_model(k);
      Abstraction abs = ticket_lock_alpha(p);
      return std::make_pair(std::move(p), std::move(abs));
    };
    fam.parametric_disrespectful = ticket_lock_parametric_release;
    m.family = std::move(fam);
  } else {
    throw std::invalid_argument("unknown built-in model '" + name + "'");
  }
  return m;
}

}  // namespace models
}  // namespace druba

#endif  // DRUBA_MODELS_REGISTRY_HPP_
