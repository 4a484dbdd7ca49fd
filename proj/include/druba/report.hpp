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

#ifndef DRUBA_REPORT_HPP_
#define DRUBA_REPORT_HPP_

#include <string>

#include "json.hpp"

#include "druba/explore.hpp"
#include "druba/unbounded.hpp"

namespace druba {

using Json = nlohmann::ordered_json;

inline Json to_json(const ProgramState& s) {
  Json j;
  j["shared"] = s.shared;
  j["locals"] = s.locals;
  return j;
}

// Witness rows: the initial state carries thread -1, each step the thread
// that executed it.
inline Json witness_json(const Witness& w) {
  Json rows = Json::array();
  Json first;
  first["thread"] = -1;
  first["state"] = to_json(w.path[0]);
  rows.push_back(first);
  for (std::size_t i = 0; i < w.schedule.entries.size(); ++i) {
    Json row;
    row["thread"] = w.schedule.entries[i];
    row["state"] = to_json(w.path[i + 1]);
    rows.push_back(row);
  }
  return rows;
}

/**
 * The stable report object. Field names are fixed for downstream tooling:
 * model, mode, n, result, abs_states, r_max, d_max, image_calls_total,
 * image_calls_final_plateau, closure_checks, time_ms, witness.
 */
inline Json report_json(const std::string& model, const std::string& mode,
                        int n, const VerdictReport& rep) {
  Json j;
  j["model"] = model;
  j["mode"] = mode;
  j["n"] = n;
  j["result"] = to_string(rep.verdict);
  j["abs_states"] = rep.abs_state_count;
  j["r_max"] = rep.r_max;
  j["d_max"] = rep.d_max;
  j["image_calls_total"] = rep.image_calls_total;
  j["image_calls_final_plateau"] = rep.image_calls_final_plateau;
  j["closure_checks"] = rep.closure_checks;
  j["time_ms"] = rep.time_ms;
  if (rep.witness)
    j["witness"] = witness_json(*rep.witness);
  else
    j["witness"] = nullptr;
  if (!rep.reason.empty()) j["reason"] = rep.reason;
  if (rep.closure_cex) {
    Json c;
    c["from"] = rep.closure_cex->from;
    c["action"] = rep.closure_cex->action;
    c["thread"] = rep.closure_cex->thread;
    c["to"] = rep.closure_cex->to;
    j["closure_counterexample"] = c;
  }
  return j;
}

inline Json report_json(const std::string& model,
                        const UnboundedVerdict& uv) {
  Json j;
  j["model"] = model;
  j["mode"] = "verify-unbounded";
  j["n"] = uv.n_plateau_at;
  j["result"] = to_string(uv.verdict);
  j["abs_states"] = uv.abs_states.size();
  int r_max = 0, d_max = 0;
  std::uint64_t img = 0, cls = 0;
  std::int64_t ms = 0;
  for (const auto& [n, rep] : uv.per_n) {
    r_max = std::max(r_max, rep.r_max);
    d_max = std::max(d_max, rep.d_max);
    img += rep.image_calls_total;
    cls += rep.closure_checks;
    ms += rep.time_ms;
  }
  j["r_max"] = r_max;
  j["d_max"] = d_max;
  j["image_calls_total"] = img;
  j["image_calls_final_plateau"] = 0;
  j["closure_checks"] = cls;
  j["time_ms"] = ms;
  if (uv.witness)
    j["witness"] = witness_json(*uv.witness);
  else
    j["witness"] = nullptr;
  if (!uv.reason.empty()) j["reason"] = uv.reason;
  if (uv.closure_cex) {
    Json c;
    c["from"] = uv.closure_cex->from;
    c["action"] = uv.closure_cex->action;
    c["thread"] = uv.closure_cex->thread;
    c["to"] = uv.closure_cex->to;
    j["closure_counterexample"] = c;
  }
  Json per = Json::array();
  for (const auto& [n, rep] : uv.per_n) {
    Json e;
    e["n"] = n;
    e["result"] = to_string(rep.verdict);
    e["abs_states"] = rep.abs_state_count;
    e["r_max"] = rep.r_max;
    e["d_max"] = rep.d_max;
    per.push_back(e);
  }
  j["per_n"] = per;
  return j;
}

// Byte-stable rendering with the volatile timing fields zeroed; reports
// are otherwise deterministic for a fixed configuration.
inline std::string stable_render(Json j) {
  if (j.contains("time_ms")) j["time_ms"] = 0;
  if (j.contains("engines"))
    for (auto& e : j["engines"])
      if (e.contains("time_ms")) e["time_ms"] = 0;
  return j.dump(2);
}

}  // namespace druba

#endif  // DRUBA_REPORT_HPP_
