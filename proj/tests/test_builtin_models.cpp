#include <catch2/catch_amalgamated.hpp>

#include "druba/baselines.hpp"
#include "druba/explore.hpp"
#include "druba/models/registry.hpp"

using namespace druba;
using namespace druba::models;

TEST_CASE("race model: naive cells reproduce the known values") {
  auto [p, abs] = example2_model();
  auto shared_of = [](const GridCell& c) {
    std::set<int> out;
    for (const ProgramState& s : c.states) out.insert(s.shared[0]);
    return out;
  };
  CHECK(shared_of(naive_cell(p, abs, 1, 1)) == std::set<int>{0, 1});
  CHECK(shared_of(naive_cell(p, abs, 1, 2)) == std::set<int>{0, 1, 2});
  CHECK(shared_of(naive_cell(p, abs, 2, 0)) == std::set<int>{0, 1});
}

TEST_CASE("flip-guard model: one thread reaches s=1, two do not") {
  auto [p1, abs1] = example3_model(1);
  BfsResult free1 = free_bfs(p1, abs1, Property{});
  bool has_s1 = false;
  for (const ProgramState& s : free1.states) has_s1 |= s.shared[0] == 1;
  CHECK(has_s1);

  auto cell_has_s1 = [](const Program& p, const Abstraction& a, int r) {
    GridCell c = naive_cell(p, a, r, 0);
    for (const ProgramState& s : c.states)
      if (s.shared[0] == 1) return true;
    return false;
  };
  auto [p2, abs2] = example3_model(2);
  CHECK(cell_has_s1(p1, abs1, 3));
  CHECK_FALSE(cell_has_s1(p2, abs2, 3));

  // free scheduling still reaches it with two threads
  BfsResult free2 = free_bfs(p2, abs2, Property{});
  bool has2 = false;
  for (const ProgramState& s : free2.states) has2 |= s.shared[0] == 1;
  CHECK(has2);
}

TEST_CASE("program P with two predicates proves the assertion for n = 2") {
  BuiltinModel m = make_builtin("program-p", 2, "alpha2");
  VerdictReport rep = verify(m.program, m.abstraction, m.default_property);
  CHECK(rep.verdict == Verdict::safe);
  CHECK(rep.abs_state_count == 12);

  std::vector<AbstractState> expected{
      {0, 0, 1}, {0, 1, 0}, {0, 1, 1}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1},
      {2, 1, 0}, {2, 1, 1}, {3, 1, 0}, {3, 1, 1}, {4, 0, 0}, {4, 1, 0}};
  CHECK(rep.abs_states == expected);
}

TEST_CASE("program P with one predicate gives up") {
  BuiltinModel m = make_builtin("program-p", 2, "alpha1");
  VerdictReport rep = verify(m.program, m.abstraction, m.default_property);
  CHECK(rep.verdict == Verdict::unknown);
  REQUIRE(rep.closure_cex.has_value());
  CHECK(rep.closure_cex->from == AbstractState{1, 0});
  CHECK(rep.closure_cex->action == "branch");
  CHECK(rep.closure_cex->to == AbstractState{2, 0});
}

TEST_CASE("program P respect classifications hold over the audit slice") {
  Program p = program_p_model(2);
  for (int variant : {1, 2, 3}) {
    Abstraction abs = program_p_alpha(p, variant);
    for (const auto& [id, respects] : abs.respects) {
      INFO("alpha" << variant << " action " << id);
      CHECK(verify_respect(p, abs, id).refuted() == !respects);
    }
  }
}

TEST_CASE("ticket lock: four abstract states at n = 2 and n = 3") {
  std::vector<AbstractState> expected{
      {0, 1, 0, 0, 1}, {0, 1, 0, 1, 1}, {1, 1, 0, 1, 1}, {2, 1, 0, 1, 1}};
  for (int n : {2, 3}) {
    BuiltinModel m = make_builtin("ticket-lock", n);
    VerdictReport rep = verify(m.program, m.abstraction, m.default_property);
    INFO("n = " << n);
    CHECK(rep.verdict == Verdict::safe);
    CHECK(rep.abs_states == expected);
  }
}

TEST_CASE("ticket lock classification: only the release is disrespectful") {
  Program p = ticket_lock_model(2);
  Abstraction abs = ticket_lock_alpha(p);
  CHECK_FALSE(verify_respect(p, abs, "acquire").refuted());
  CHECK_FALSE(verify_respect(p, abs, "critical").refuted());
  CHECK(verify_respect(p, abs, "release").refuted());
}

TEST_CASE("the dropped-ticket bug is caught with a replayable witness") {
  BuiltinModel m = make_builtin("ticket-lock-buggy", 2);

  // ground truth first: bounded free search reaches a double entry
  BfsResult oracle =
      free_bfs(m.program, m.abstraction, m.default_property, 200000);
  CHECK(oracle.status == BfsStatus::violation);

  VerdictReport rep = verify(m.program, m.abstraction, m.default_property);
  REQUIRE(rep.verdict == Verdict::violation);
  REQUIRE(rep.witness.has_value());
  CHECK(validate_rr_path(m.program, rep.witness->path, rep.witness->schedule,
                         rep.r_max, rep.d_max)
            .ok);
}

TEST_CASE("ticket lock audit slice is inductive and covers the start") {
  Program p = ticket_lock_model(2);
  std::vector<ProgramState> slice = p.bounded_states(AuditScope{});
  std::set<ProgramState> in_slice(slice.begin(), slice.end());
  CHECK(in_slice.count(p.initial[0]) == 1);
  std::size_t checked = 0;
  for (const ProgramState& s : slice) {
    for (ThreadId t = 0; t < p.n; ++t) {
      for (const ProgramState& s2 : thread_successors(p, s, t)) {
        if (s2 == s) continue;
        // successors stay inside the protocol shape (modulo the value
        // bounds of the enumeration)
        bool big = false;
        for (const Value& l : s2.locals) big |= l[1] > 5;
        big |= s2.shared[0] > 5 || s2.shared[1] > 8;
        if (!big) {
          ++checked;
          CHECK(in_slice.count(s2) == 1);
        }
      }
    }
  }
  CHECK(checked > 100);
}
