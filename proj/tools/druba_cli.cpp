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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "druba/async_model.hpp"
#include "druba/baselines.hpp"
#include "druba/cpds.hpp"
#include "druba/explore.hpp"
#include "druba/models/registry.hpp"
#include "druba/report.hpp"
#include "druba/unbounded.hpp"

namespace {

using namespace druba;

// exit codes: 0 safe, 1 violation, 2 unknown / bounds exhausted, 3 usage or
// model errors
constexpr int kExitSafe = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitError = 3;

struct Cli {
  std::string model;
  std::string abstraction;
  std::string error_spec;
  int n = 0;
  int max_r = 0;
  int max_d = 0;
  int max_n = 6;
  std::uint64_t max_states = 0;
  std::int64_t timeout_ms = 0;
  std::string out;
};

struct Loaded {
  Program program;
  Abstraction abstraction;
  Property property;
  std::optional<ModelFamily> family;
  std::string display_name;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<int> parse_error_spec(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  if (spec.rfind("shared=", 0) != 0)
    throw std::runtime_error("--error expects shared=<g>");
  return std::stoi(spec.substr(7));
}

Loaded load_model(const Cli& cli) {
  Loaded out;
  auto err = parse_error_spec(cli.error_spec);
  if (models::is_builtin(cli.model)) {
    auto m = models::make_builtin(cli.model, cli.n, cli.abstraction);
    out.program = std::move(m.program);
    out.abstraction = std::move(m.abstraction);
    out.property = std::move(m.default_property);
    out.family = std::move(m.family);
    out.display_name = cli.model;
    if (err) {
      if (cli.model != "example2" && cli.model != "example3")
        throw std::runtime_error(
            "--error shared=<g> applies to models whose abstraction exposes "
            "the shared state");
      out.property = error_shared_property(*err);
    }
    return out;
  }
  std::string text = read_file(cli.model);
  out.display_name = cli.model;
  std::string head;
  {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      if (ls >> head) break;
    }
  }
  if (head == "cpds") {
    cpds::CpdsModel m = cpds::parse_cpds(text, cli.model);
    out.program = std::move(m.program);
    if (cli.abstraction.empty() || cli.abstraction == "top-of-stack")
      out.abstraction = std::move(m.abstraction);
    else if (cli.abstraction == "identity")
      out.abstraction = identity_abstraction(out.program);
    else
      throw std::runtime_error("cpds abstractions: top-of-stack, identity");
    if (err) throw std::runtime_error("--error is not supported for cpds");
  } else if (head == "async") {
    AsyncModel m = parse_async_model(text, cli.model);
    out.program = std::move(m.program);
    if (cli.abstraction.empty() || cli.abstraction == "identity")
      out.abstraction = identity_abstraction(out.program);
    else if (cli.abstraction == "shared-only")
      out.abstraction = shared_only_abstraction(out.program);
    else
      throw std::runtime_error("async abstractions: identity, shared-only");
    if (err)
      out.property = error_shared_property(*err);
    else if (m.error_shared)
      out.property = error_shared_property(*m.error_shared);
  } else {
    throw std::runtime_error("'" + cli.model +
                             "': unknown model format (expected a built-in "
                             "name or a file starting with 'cpds'/'async')");
  }
  auto diags = validate_program(out.program);
  if (!diags.empty()) {
    for (const Diagnostic& d : diags) {
      std::cerr << cli.model;
      if (d.line >= 0) std::cerr << ":" << d.line;
      if (!d.action_id.empty()) std::cerr << " [" << d.action_id << "]";
      std::cerr << ": " << d.message << "\n";
    }
    throw std::runtime_error("model validation failed");
  }
  return out;
}

EngineOptions engine_options(const Cli& cli) {
  EngineOptions o;
  o.max_states = cli.max_states;
  o.max_r = cli.max_r;
  o.max_d = cli.max_d;
  o.timeout_ms = cli.timeout_ms;
  return o;
}

void emit(const Cli& cli, const Json& j) {
  if (cli.out.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::ofstream out(cli.out);
    out << j.dump(2) << "\n";
    std::cout << "report written to " << cli.out << "\n";
  }
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::safe: return kExitSafe;
    case Verdict::violation: return kExitViolation;
    default: return kExitUnknown;
  }
}

int run_verify(const Cli& cli) {
  Loaded m = load_model(cli);
  VerdictReport rep =
      verify(m.program, m.abstraction, m.property, engine_options(cli));
  Json j = report_json(m.display_name, "verify", m.program.n, rep);
  emit(cli, j);
  std::cout << "verify " << m.display_name << ": " << to_string(rep.verdict)
            << " (" << rep.abs_state_count << " abstract states, r_max "
            << rep.r_max << ", d_max " << rep.d_max << ")\n";
  return exit_code(rep.verdict);
}

int run_test(const Cli& cli) {
  Loaded m = load_model(cli);
  int r_max = cli.max_r > 0 ? cli.max_r : 10;
  int d_max = cli.max_d > 0 ? cli.max_d : 10;
  TesterResult res = delay_bounded_test(m.program, m.abstraction, m.property,
                                        r_max, d_max, engine_options(cli));
  VerdictReport rep;
  rep.image_calls_total = res.image_calls;
  if (res.found) {
    rep.verdict = Verdict::violation;
    rep.witness = res.witness;
    rep.r_max = res.r;
    rep.d_max = res.d;
  } else {
    rep.verdict = Verdict::unknown;
    rep.reason = "no-bug-within-bounds";
    rep.r_max = r_max;
    rep.d_max = d_max;
  }
  Json j = report_json(m.display_name, "test", m.program.n, rep);
  emit(cli, j);
  if (res.found)
    std::cout << "test " << m.display_name << ": violation of "
              << m.property.name << " at (r,d) = (" << res.r << "," << res.d
              << ")\n";
  else
    std::cout << "test " << m.display_name << ": no bug within (r,d) <= ("
              << r_max << "," << d_max << ")\n";
  return exit_code(rep.verdict);
}

int run_unbounded(const Cli& cli) {
  Loaded m = load_model(cli);
  if (!m.family)
    throw std::runtime_error("model '" + cli.model +
                             "' is not thread-parameterized");
  UnboundedVerdict uv =
      verify_unbounded(*m.family, m.property, cli.max_n, engine_options(cli));
  Json j = report_json(m.display_name, uv);
  emit(cli, j);
  std::cout << "verify-unbounded " << m.display_name << ": "
            << to_string(uv.verdict);
  if (uv.verdict == Verdict::safe)
    std::cout << " (" << uv.abs_states.size()
              << " abstract states, thread plateau at n = " << uv.n_plateau_at
              << ")";
  std::cout << "\n";
  return exit_code(uv.verdict);
}

int run_compare(const Cli& cli) {
  Loaded m = load_model(cli);
  VerdictReport frontier =
      verify(m.program, m.abstraction, m.property, engine_options(cli));
  std::uint64_t naive_calls = naive_walk_image_calls(
      m.program, m.abstraction, frontier.visited_cells);
  VerdictReport eager =
      ai_style_verify(m.program, m.abstraction, m.property,
                      engine_options(cli));

  Json j;
  j["model"] = m.display_name;
  j["mode"] = "compare";
  j["n"] = m.program.n;
  j["result"] = to_string(frontier.verdict);
  Json engines = Json::array();
  auto entry = [](const std::string& name, const VerdictReport& rep) {
    Json e;
    e["engine"] = name;
    e["result"] = to_string(rep.verdict);
    e["abs_states"] = rep.abs_state_count;
    e["image_calls"] = rep.image_calls_total;
    e["closure_checks"] = rep.closure_checks;
    e["time_ms"] = rep.time_ms;
    return e;
  };
  engines.push_back(entry("frontier", frontier));
  Json nv;
  nv["engine"] = "no-frontier";
  nv["result"] = to_string(frontier.verdict);
  nv["abs_states"] = frontier.abs_state_count;
  nv["image_calls"] = naive_calls;
  nv["closure_checks"] = 0;
  nv["time_ms"] = 0;
  engines.push_back(nv);
  engines.push_back(entry("eager-closure", eager));
  j["engines"] = engines;
  emit(cli, j);

  std::cout << "engine          result     abs   image_calls  closure_checks\n";
  auto line = [](const std::string& name, const std::string& res,
                 std::size_t abs, std::uint64_t img, std::uint64_t cls) {
    std::printf("%-15s %-10s %-5zu %-12llu %llu\n", name.c_str(), res.c_str(),
                abs, static_cast<unsigned long long>(img),
                static_cast<unsigned long long>(cls));
  };
  line("frontier", to_string(frontier.verdict), frontier.abs_state_count,
       frontier.image_calls_total, frontier.closure_checks);
  line("no-frontier", to_string(frontier.verdict), frontier.abs_state_count,
       naive_calls, 0);
  line("eager-closure", to_string(eager.verdict), eager.abs_state_count,
       eager.image_calls_total, eager.closure_checks);
  return exit_code(frontier.verdict);
}

int run_oracle(const Cli& cli) {
  Loaded m = load_model(cli);
  std::uint64_t cap = cli.max_states ? cli.max_states : 2000000;
  BfsResult res = free_bfs(m.program, m.abstraction, m.property, cap);
  VerdictReport rep;
  switch (res.status) {
    case BfsStatus::completed: rep.verdict = Verdict::safe; break;
    case BfsStatus::violation: rep.verdict = Verdict::violation; break;
    case BfsStatus::cap_exceeded:
      rep.verdict = Verdict::unknown;
      rep.reason = "max-states";
      break;
  }
  std::set<AbstractState> abs;
  for (const ProgramState& s : res.states) abs.insert(m.abstraction.alpha(s));
  rep.abs_state_count = abs.size();
  rep.abs_states.assign(abs.begin(), abs.end());
  Json j = report_json(m.display_name, "oracle", m.program.n, rep);
  j["states"] = res.states.size();
  emit(cli, j);
  std::cout << "oracle " << m.display_name << ": " << to_string(rep.verdict)
            << " (" << res.states.size() << " states, " << abs.size()
            << " abstract)\n";
  return exit_code(rep.verdict);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "druba - round- and delay-bounded exploration of asynchronous "
      "shared-memory programs, with abstraction-closure convergence "
      "detection"};
  app.require_subcommand(1);

  Cli cli;
  std::string mode;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("model", cli.model,
                    "built-in model name or path to a .cpds/.async file")
        ->required();
    sub->add_option("--n", cli.n, "thread count for built-in models");
    sub->add_option("--abstraction", cli.abstraction,
                    "abstraction selector (model-dependent)");
    sub->add_option("--error", cli.error_spec,
                    "error states, e.g. shared=2");
    sub->add_option("--max-r", cli.max_r, "round bound cap");
    sub->add_option("--max-d", cli.max_d, "delay bound cap");
    sub->add_option("--max-states", cli.max_states, "state count cap");
    sub->add_option("--timeout-ms", cli.timeout_ms, "wall clock cap");
    sub->add_option("--out", cli.out, "write the JSON report here");
  };
  CLI::App* verify = app.add_subcommand(
      "verify", "prove the property for all interleavings (fixed n)");
  add_common(verify);
  CLI::App* test = app.add_subcommand(
      "test", "bug hunting over the (r,d) grid, no convergence testing");
  add_common(test);
  CLI::App* unb = app.add_subcommand(
      "verify-unbounded", "verify for every thread count");
  add_common(unb);
  unb->add_option("--max-n", cli.max_n, "thread count cap (default 6)");
  CLI::App* cmp = app.add_subcommand(
      "compare", "frontier vs no-frontier vs eager-closure counters");
  add_common(cmp);
  CLI::App* oracle = app.add_subcommand(
      "oracle", "free-scheduling BFS ground truth (finite models)");
  add_common(oracle);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(verify)) return run_verify(cli);
    if (app.got_subcommand(test)) return run_test(cli);
    if (app.got_subcommand(unb)) return run_unbounded(cli);
    if (app.got_subcommand(cmp)) return run_compare(cli);
    if (app.got_subcommand(oracle)) return run_oracle(cli);
  } catch (const ParseError& e) {
    std::cerr << cli.model << ": " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
