#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "druba/abstraction.hpp"
#include "druba/cpds.hpp"
#include "druba/explore.hpp"

using namespace druba;
using namespace druba::cpds;

namespace {

std::string read_model(const std::string& name) {
  std::ifstream in(std::string(DRUBA_MODELS_DIR) + "/" + name);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("the single-pop system parses to one thread and one action") {
  CpdsModel m = parse_cpds(read_model("example1.cpds"), "example1");
  CHECK(m.program.n == 1);
  REQUIRE(m.program.threads.size() == 1);
  CHECK(m.program.threads[0].actions.size() == 1);
  CHECK(m.program.initial[0].locals[0] == Value{1, 0});
  CHECK(validate_program(m.program).empty());
  CHECK(m.abstraction.codomain_size == 1ull * 3);  // |G| * (|Γ|+1)^1
}

TEST_CASE("copies expand into distinct threads sharing rules") {
  CpdsModel m = parse_cpds(
      "cpds\nshared 1\ninit 0\nthread w copies 2\n  alphabet 1\n  stack "
      "0\n  rule 0 0 -> 0 over 0\nend\n");
  CHECK(m.program.n == 2);
  CHECK(m.program.threads[0].actions[0].id ==
        m.program.threads[1].actions[0].id);
}

TEST_CASE("rule symbols outside the alphabet are diagnosed") {
  CpdsModel m = parse_cpds(
      "cpds\nshared 1\ninit 0\nthread t copies 1\n  alphabet 4\n  stack "
      "0\n  rule 0 5 -> 0 pop\nend\n");
  auto diags = validate_program(m.program);
  REQUIRE_FALSE(diags.empty());
  CHECK(diags[0].line == 7);
}

TEST_CASE("syntax errors carry line numbers") {
  try {
    parse_cpds("cpds\nshared 1\ninit 0\nthread t copies 1\n  alphabet 2\n"
               "  rule 0 0 -> 0 shove 1\nend\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 6);
  }
  CHECK_THROWS_AS(parse_cpds("async\n"), ParseError);
  CHECK_THROWS_AS(parse_cpds("cpds\nshared 1\ninit 0\n"), ParseError);
}

TEST_CASE("stack semantics: overwrite, push, pop") {
  CpdsModel m = parse_cpds(
      "cpds\nshared 2\ninit 0\nthread t copies 1\n  alphabet 3\n  stack 1\n"
      "  rule 0 1 -> 0 over 2\n"
      "  rule 0 2 -> 1 push 0 2\n"
      "  rule 1 0 -> 0 pop\nend\n");
  const Program& p = m.program;
  ProgramState s = p.initial[0];

  auto succ = thread_successors(p, s, 0);  // overwrite 1 -> 2
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].locals[0] == Value{2});

  succ = thread_successors(p, succ[0], 0);  // push 0 2 replaces the top
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].shared == Value{1});
  CHECK(succ[0].locals[0] == Value{0, 2});

  succ = thread_successors(p, succ[0], 0);  // pop exposes 2
  REQUIRE(succ.size() == 1);
  CHECK(succ[0].shared == Value{0});
  CHECK(succ[0].locals[0] == Value{2});

  // empty stack: nothing fires, the thread stutters
  ProgramState empty = s;
  empty.locals[0] = {};
  succ = thread_successors(p, empty, 0);
  REQUIRE(succ.size() == 1);
  CHECK(succ[0] == empty);
}

TEST_CASE("pop abstract successors enumerate every exposable top") {
  CpdsRule pop;
  pop.kind = RuleKind::pop;
  pop.from_shared = 0;
  pop.from_top = 1;
  pop.to_shared = 0;

  auto succ = pop_abs_successors({0, 1}, pop, 0, 2);
  std::set<AbstractState> got(succ.begin(), succ.end());
  CHECK(got == std::set<AbstractState>{{0, -1}, {0, 0}, {0, 1}});

  CHECK(pop_abs_successors({0, kEmptyTop}, pop, 0, 2).empty());
  CHECK(pop_abs_successors({1, 1}, pop, 0, 2).empty());
}

TEST_CASE("the closed form matches brute force at depth two") {
  CpdsModel m = parse_cpds(read_model("example1.cpds"), "example1");
  const CpdsRule& pop = m.system.templates[0].rules[0];
  AuditScope scope;
  scope.max_stack_depth = 2;
  for (int g = 0; g < 1; ++g) {
    for (int top = kEmptyTop; top < 2; ++top) {
      AbstractState a{g, top};
      auto closed = pop_abs_successors(a, pop, 0, 2);
      std::set<AbstractState> closed_set(closed.begin(), closed.end());
      auto brute = brute_force_abs_successors(m.program, m.abstraction,
                                              "main.r0", 0, a, scope);
      CHECK(closed_set == brute);
    }
  }
}

TEST_CASE("pushes and overwrites respect the top view, pops do not") {
  CpdsModel m = parse_cpds(read_model("handoff.cpds"), "handoff");
  AuditScope scope;
  scope.max_stack_depth = 3;
  for (const auto& [id, respects] : m.abstraction.respects) {
    RespectResult res = verify_respect(m.program, m.abstraction, id, scope);
    INFO(id);
    CHECK(res.refuted() == !respects);
    if (!respects) REQUIRE(res.witness.has_value());
  }
}

TEST_CASE("the abstract codomain bound multiplies per-thread alphabets") {
  CpdsModel m = parse_cpds(read_model("handoff.cpds"), "handoff");
  // |G| = 1, three threads with |Γ| = 2 each: 1 * 3^3
  CHECK(m.abstraction.codomain_size == 27);
}

TEST_CASE("the drainable system converges safe under the top view") {
  CpdsModel m = parse_cpds(read_model("handoff.cpds"), "handoff");
  VerdictReport rep = verify(m.program, m.abstraction, Property{});
  CHECK(rep.verdict == Verdict::safe);
  CHECK(rep.abs_state_count == 12);
}
