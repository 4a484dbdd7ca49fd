// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "druba/baselines.hpp"
#include "druba/cpds.hpp"
#include "druba/models/registry.hpp"
#include "druba/report.hpp"
#include "druba/schedule.hpp"
#include "druba/unbounded.hpp"
#include "test_support.hpp"

using namespace druba;
using namespace druba::models;

namespace {

int failures = 0;

struct Criterion {
  int id;
  std::string label;
  bool ok = true;
  std::vector<std::string> notes;
  std::int64_t ms = 0;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back(what);
    }
  }
};

void run(int id, const std::string& label, std::int64_t budget_ms,
         const std::function<void(Criterion&)>& body) {
  Criterion c{id, label, true, {}, 0};
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.notes.push_back(std::string("exception: ") + e.what());
  }
  c.ms = std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::steady_clock::now() - t0)
             .count();
  if (budget_ms > 0 && c.ms > budget_ms) {
    c.ok = false;
    c.notes.push_back("over the " + std::to_string(budget_ms) +
                      " ms budget");
  }
  std::printf("%s criterion %2d: %s (%lld ms)\n", c.ok ? "PASS" : "FAIL",
              c.id, c.label.c_str(), static_cast<long long>(c.ms));
  for (const std::string& n : c.notes) std::printf("      - %s\n", n.c_str());
  if (!c.ok) ++failures;
}

std::set<int> shared_of(const GridCell& c) {
  std::set<int> out;
  for (const ProgramState& s : c.states) out.insert(s.shared[0]);
  return out;
}

}  // namespace

int main() {
  run(1, "three-thread race: 15 grid cells and safe convergence on {0,1,2}", 1000,
      [](Criterion& c) {
        auto [p, abs] = example2_model();
        const std::set<int> s01{0, 1}, s012{0, 1, 2};
        std::set<int> want[3][5] = {
            {s01, s01, s012, s012, s012},
            {s01, s01, s012, s012, s012},
            {s01, s01, s012, s012, s012}};
        for (int r = 1; r <= 3; ++r)
          for (int d = 0; d <= 4; ++d) {
            GridCell cell = naive_cell(p, abs, r, d);
            c.expect(shared_of(cell) == want[r - 1][d],
                     "cell (" + std::to_string(r) + "," + std::to_string(d) +
                         ") mismatch");
          }
        VerdictReport rep = verify(p, abs, Property{});
        c.expect(rep.verdict == Verdict::safe, "expected safe");
        c.expect(rep.abs_states ==
                     std::vector<AbstractState>{{0}, {1}, {2}},
                 "abstract reach is not {0,1,2}");
      });

  run(2, "program P (n=2): one predicate gives up, two prove 12 states", 5000,
      [](Criterion& c) {
        BuiltinModel a1 = make_builtin("program-p", 2, "alpha1");
        VerdictReport r1 =
            verify(a1.program, a1.abstraction, a1.default_property);
        c.expect(r1.verdict == Verdict::unknown, "alpha1: expected unknown");
        c.expect(r1.closure_cex.has_value(), "alpha1: missing counterexample");
        if (r1.closure_cex) {
          c.expect(r1.closure_cex->from == AbstractState{1, 0},
                   "alpha1: counterexample source is not (1,0)");
          c.expect(r1.closure_cex->to == AbstractState{2, 0},
                   "alpha1: counterexample target is not (2,0)");
        }
        BuiltinModel a2 = make_builtin("program-p", 2, "alpha2");
        VerdictReport r2 =
            verify(a2.program, a2.abstraction, a2.default_property);
        c.expect(r2.verdict == Verdict::safe, "alpha2: expected safe");
        c.expect(r2.abs_state_count == 12,
                 "alpha2: expected 12 abstract states, got " +
                     std::to_string(r2.abs_state_count));
        c.notes.push_back(
            "plateau ends: alpha1 (r,d)=(" + std::to_string(r1.r_max) + "," +
            std::to_string(r1.d_max) + "), alpha2 (r,d)=(" +
            std::to_string(r2.r_max) + "," + std::to_string(r2.d_max) +
            ") [reference walk ends at (7,4); stride differs by design]");
      });

  run(3, "program P unbounded: alpha2 unknown at n=3, alpha3 safe with 14", 30000,
      [](Criterion& c) {
        BuiltinModel a2 = make_builtin("program-p", 2, "alpha2");
        UnboundedVerdict u2 =
            verify_unbounded(*a2.family, a2.default_property, 6);
        c.expect(u2.verdict == Verdict::unknown, "alpha2: expected unknown");
        c.expect(u2.per_n.count(3) == 1 &&
                     u2.per_n.at(3).verdict == Verdict::unknown,
                 "alpha2: expected the giving-up point at n=3");

        BuiltinModel a3 = make_builtin("program-p", 2, "alpha3");
        UnboundedVerdict u3 =
            verify_unbounded(*a3.family, a3.default_property, 6);
        c.expect(u3.verdict == Verdict::safe, "alpha3: expected safe");
        c.expect(u3.abs_states.size() == 14,
                 "alpha3: expected 14 abstract states, got " +
                     std::to_string(u3.abs_states.size()));
        c.expect(u3.per_n.at(3).abs_state_count == 14 &&
                     u3.per_n.at(4).abs_state_count == 14,
                 "alpha3: expected the same 14 states at n=3 and n=4");
      });

  run(4, "ticket lock: four abstract states, safe for every thread count", 60000,
      [](Criterion& c) {
        for (int n : {2, 3}) {
          BuiltinModel m = make_builtin("ticket-lock", n);
          VerdictReport rep =
              verify(m.program, m.abstraction, m.default_property);
          c.expect(rep.verdict == Verdict::safe,
                   "n=" + std::to_string(n) + ": expected safe");
          c.expect(rep.abs_state_count == 4,
                   "n=" + std::to_string(n) + ": expected 4 abstract states");
          for (const AbstractState& a : rep.abs_states)
            c.expect(a[2] == 0, "a reached abstract state has two threads "
                                "in the critical section");
        }
        BuiltinModel m = make_builtin("ticket-lock", 2);
        UnboundedVerdict uv =
            verify_unbounded(*m.family, m.default_property, 6);
        c.expect(uv.verdict == Verdict::safe, "unbounded: expected safe");
      });

  run(5, "flip-guard: one-thread reach escapes every two-thread round bound", 5000,
      [](Criterion& c) {
        auto [p1, a1] = example3_model(1);
        GridCell small = naive_cell(p1, a1, 3, 0);
        bool has_s1 = false;
        for (const ProgramState& s : small.states) has_s1 |= s.shared[0] == 1;
        c.expect(has_s1, "R[3,0] with one thread misses s=1");
        auto family = [](int n) { return example3_model(n); };
        NonMonotonicityReport nm = check_rr_nonmonotonicity(family, 3, 0, 1);
        c.expect(!nm.containment_holds, "containment unexpectedly holds");
        for (int r = 1; r <= 20; ++r) {
          auto [p2, a2] = example3_model(2);
          GridCell big = naive_cell(p2, a2, r, 0);
          std::set<Value> shared2;
          for (const ProgramState& s : big.states) shared2.insert(s.shared);
          bool contained = true;
          for (const ProgramState& s : small.states)
            contained &= shared2.count(s.shared) > 0;
          c.expect(!contained,
                   "r=" + std::to_string(r) + " recovers the lost state");
        }
      });

  run(6, "oracle agreement on 20 seeded random models", 60000,
      [](Criterion& c) {
        int safes = 0, violations = 0;
        for (unsigned seed = 1; seed <= 20; ++seed) {
          AsyncSystem sys = druba_tests::random_async_system(seed);
          AsyncModel m = druba_tests::random_async_model(seed);
          Property prop = error_shared_property(
              druba_tests::random_error_target(seed, sys));
          Abstraction id = identity_abstraction(m.program);
          VerdictReport rep = verify(m.program, id, prop);
          BfsResult oracle = free_bfs(m.program, id, prop);
          std::string tag = "seed " + std::to_string(seed);
          c.expect(rep.verdict != Verdict::unknown, tag + ": unknown verdict");
          bool oracle_viol = oracle.status == BfsStatus::violation;
          c.expect((rep.verdict == Verdict::violation) == oracle_viol,
                   tag + ": verdict disagrees with the oracle");
          (rep.verdict == Verdict::violation ? violations : safes) += 1;
          if (rep.verdict == Verdict::safe) {
            std::set<AbstractState> got(rep.abs_states.begin(),
                                        rep.abs_states.end());
            c.expect(got == alpha_image(id, oracle.states),
                     tag + ": abstract reach differs from the oracle");
          } else if (rep.witness) {
            c.expect(validate_rr_path(m.program, rep.witness->path,
                                      rep.witness->schedule, rep.r_max,
                                      rep.d_max)
                         .ok,
                     tag + ": witness fails to replay");
          }
        }
        c.notes.push_back(std::to_string(safes) + " safe, " +
                          std::to_string(violations) + " violations");
      });

  run(7, "frontier reach equals the from-scratch cell at every visited bound", 0,
      [](Criterion& c) {
        auto check = [&c](const Program& p, const Abstraction& abs,
                          const Property& prop) {
          EngineOptions opts;
          opts.snapshot_cells = true;
          Engine eng(p, abs, prop, opts);
          while (true) {
            bool new_abs;
            do {
              new_abs = eng.advance_round(eng.r() + 2);
            } while (new_abs);
            if (p.n == 1) break;
            int quiet = 0;
            bool restart = false;
            while (quiet < p.n - 1) {
              if (eng.advance_delay()) {
                restart = true;
                break;
              }
              ++quiet;
            }
            if (!restart) break;
          }
          const auto& cells = eng.visited_cells();
          const auto& snaps = eng.cell_snapshots();
          for (std::size_t i = 0; i < cells.size(); ++i) {
            GridCell gc = naive_cell(p, abs, cells[i].first, cells[i].second);
            c.expect(gc.states == snaps[i],
                     p.name + ": cell (" + std::to_string(cells[i].first) +
                         "," + std::to_string(cells[i].second) +
                         ") differs from the frontier reach");
          }
        };
        {
          auto [p, abs] = example2_model();
          check(p, abs, Property{});
        }
        {
          auto [p, abs] = example3_model(2);
          check(p, abs, Property{});
        }
        {
          BuiltinModel m = make_builtin("program-p", 2, "alpha2");
          check(m.program, m.abstraction, m.default_property);
        }
        {
          BuiltinModel m = make_builtin("ticket-lock", 2);
          check(m.program, m.abstraction, m.default_property);
        }
        for (unsigned seed : {3u, 7u, 11u}) {
          AsyncModel m = druba_tests::random_async_model(seed);
          check(m.program, identity_abstraction(m.program), Property{});
        }
      });

  run(8, "grid monotonicity in rounds and delays over all corpus models", 0,
      [](Criterion& c) {
        auto check = [&c](const std::string& name, const Program& p,
                          const Abstraction& abs) {
          auto grid = naive_grid(p, abs, 5, 6);
          for (int r = 0; r <= 5; ++r)
            for (int d = 0; d <= 6; ++d) {
              const auto& cell = grid.at({r, d}).states;
              if (r < 5)
                for (const ProgramState& s : cell)
                  c.expect(grid.at({r + 1, d}).states.count(s) == 1,
                           name + ": not monotone in r at (" +
                               std::to_string(r) + "," + std::to_string(d) +
                               ")");
              if (d < 6)
                for (const ProgramState& s : cell)
                  c.expect(grid.at({r, d + 1}).states.count(s) == 1,
                           name + ": not monotone in d at (" +
                               std::to_string(r) + "," + std::to_string(d) +
                               ")");
            }
        };
        {
          auto [p, abs] = example2_model();
          check("example2", p, abs);
        }
        {
          auto [p, abs] = example3_model(2);
          check("example3", p, abs);
        }
        {
          BuiltinModel m = make_builtin("program-p", 2, "alpha2");
          check("program-p", m.program, m.abstraction);
        }
        {
          BuiltinModel m = make_builtin("ticket-lock", 2);
          check("ticket-lock", m.program, m.abstraction);
        }
        for (unsigned seed : {5u, 9u}) {
          AsyncModel m = druba_tests::random_async_model(seed);
          check(m.program.name, m.program,
                identity_abstraction(m.program));
        }
      });

  run(9, "frontier benefit: fewer images than recomputation, idle plateaus", 0,
      [](Criterion& c) {
        auto frontier_wins = [&c](const std::string& name, const Program& p,
                                  const Abstraction& abs,
                                  const Property& prop) {
          VerdictReport rep = verify(p, abs, prop);
          std::uint64_t naive =
              naive_walk_image_calls(p, abs, rep.visited_cells);
          c.expect(rep.image_calls_total < naive,
                   name + ": frontier " +
                       std::to_string(rep.image_calls_total) +
                       " images vs naive " + std::to_string(naive));
          return rep;
        };
        VerdictReport e2;
        {
          auto [p, abs] = example2_model();
          e2 = frontier_wins("example2", p, abs, Property{});
        }
        BuiltinModel pp = make_builtin("program-p", 2, "alpha2");
        VerdictReport pr = frontier_wins("program-p", pp.program,
                                         pp.abstraction, pp.default_property);
        for (unsigned seed = 1; seed <= 20; ++seed) {
          AsyncModel m = druba_tests::random_async_model(seed);
          Abstraction id = identity_abstraction(m.program);
          VerdictReport rep = verify(m.program, id, Property{});
          if (rep.d_max < 1) continue;  // needs at least one delay
          std::uint64_t naive =
              naive_walk_image_calls(m.program, id, rep.visited_cells);
          c.expect(rep.image_calls_total < naive,
                   m.program.name + ": frontier does not win");
        }
        c.expect(e2.image_calls_final_plateau * 20 <= e2.image_calls_total,
                 "example2: final plateau exceeds 5% (" +
                     std::to_string(e2.image_calls_final_plateau) + "/" +
                     std::to_string(e2.image_calls_total) + ")");
        c.expect(pr.image_calls_final_plateau * 20 <= pr.image_calls_total,
                 "program-p: final plateau exceeds 5% (" +
                     std::to_string(pr.image_calls_final_plateau) + "/" +
                     std::to_string(pr.image_calls_total) + ")");
        c.notes.push_back(
            "final-plateau images: example2 " +
            std::to_string(e2.image_calls_final_plateau) + "/" +
            std::to_string(e2.image_calls_total) + ", program-p " +
            std::to_string(pr.image_calls_final_plateau) + "/" +
            std::to_string(pr.image_calls_total));
      });

  run(10, "respect audits reproduce every published classification", 0,
      [](Criterion& c) {
        {
          std::string text =
              "cpds\nshared 2\ninit 0\nthread t copies 1\n  alphabet 2\n"
              "  stack 1 0\n"
              "  rule 0 1 -> 0 pop\n"
              "  rule 0 0 -> 1 push 1 0\n"
              "  rule 1 1 -> 0 over 0\nend\n";
          cpds::CpdsModel m = cpds::parse_cpds(text, "mixed");
          c.expect(verify_respect(m.program, m.abstraction, "t.r0").refuted(),
                   "cpds: pop not refuted");
          c.expect(
              !verify_respect(m.program, m.abstraction, "t.r1").refuted(),
              "cpds: push refuted");
          c.expect(
              !verify_respect(m.program, m.abstraction, "t.r2").refuted(),
              "cpds: overwrite refuted");
        }
        Program p = program_p_model(2);
        for (int variant : {1, 2, 3}) {
          Abstraction abs = program_p_alpha(p, variant);
          for (const auto& [id, respects] : abs.respects) {
            bool refuted = verify_respect(p, abs, id).refuted();
            c.expect(refuted == !respects,
                     "program-p alpha" + std::to_string(variant) + " " + id +
                         ": audit disagrees with the classification");
          }
        }
        Program tick = ticket_lock_model(2);
        Abstraction tabs = ticket_lock_alpha(tick);
        c.expect(!verify_respect(tick, tabs, "acquire").refuted(),
                 "ticket: acquire refuted");
        c.expect(!verify_respect(tick, tabs, "critical").refuted(),
                 "ticket: critical refuted");
        c.expect(verify_respect(tick, tabs, "release").refuted(),
                 "ticket: release not refuted");
      });

  run(11, "the tester pins the race bug to two delays with a valid witness", 0,
      [](Criterion& c) {
        auto [p, abs] = example2_model();
        Property bad;
        bad.name = "shared!=2";
        bad.holds = [](const AbstractState& a) { return a[0] != 2; };
        TesterResult res = delay_bounded_test(p, abs, bad, 8, 8);
        c.expect(res.found, "bug not found");
        c.expect(res.d == 2, "first hit not at d=2");
        if (res.witness) {
          c.expect(delay_cost(res.witness->schedule).delays == 2,
                   "witness does not spend exactly two delays");
          c.expect(validate_rr_path(p, res.witness->path,
                                    res.witness->schedule, res.r, res.d)
                       .ok,
                   "witness fails to replay");
        } else {
          c.expect(false, "missing witness");
        }
        TesterResult capped = delay_bounded_test(p, abs, bad, 8, 1);
        c.expect(!capped.found, "bug reported within d <= 1");
      });

  if (failures) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
