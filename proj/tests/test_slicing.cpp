#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "hnamc/errors.hpp"
#include "hnamc/oracle.hpp"
#include "hnamc/parsers.hpp"
#include "hnamc/slicing.hpp"
#include "test_support.hpp"

using namespace hnamc;
using namespace hnamc::testing;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(HNAMC_FIXTURE_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PointedLabeledKripke model(const char* text) { return parse_kripke(text).pointed(); }

Hna single_node(const std::vector<std::string>& actions, const char* label) {
  Hna h(actions);
  const NodeId n = h.add_node("n", parse_formula(label));
  for (const auto& a : actions) h.set_transition(n, a, n);
  return h;
}

std::vector<std::string> names(const Kripke& k, const std::vector<WorldId>& ws) {
  std::vector<std::string> out;
  for (WorldId w : ws) out.push_back(k.name(w));
  std::sort(out.begin(), out.end());
  return out;
}

// Acceptance over explicit traces that checks slice i on the traces extending p[0..i]
// and models each slice by the product of its per-variable strings.
bool prefix_product_accepts(const PointedLabeledKripke& k, const Hna& h, std::size_t max_steps) {
  const auto r = enumerate_labeled_traces(k, max_steps);
  const VarSet& vars = k.k.vars();
  std::vector<std::vector<std::string>> layer{{}};
  for (std::size_t len = 1; len <= max_steps; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& p : layer)
      for (const auto& a : h.actions()) {
        auto q = p;
        q.push_back(a);
        const auto slices = slice_trace_set(r, q);
        if (!slices) continue;
        next.push_back(q);
        std::vector<std::set<ValueString>> per_var(vars.size());
        for (const auto& z : slices->back()) {
          const auto tau = stutter_reduce(unzip(z, vars.size()));
          for (std::size_t x = 0; x < vars.size(); ++x) per_var[x].insert(tau.strings[x]);
        }
        std::vector<UnzippedSegment> t{UnzippedSegment{}};
        for (const auto& strings : per_var) {
          std::vector<UnzippedSegment> grown;
          for (const auto& tau : t)
            for (const auto& s : strings) {
              auto g = tau;
              g.strings.push_back(s);
              grown.push_back(std::move(g));
            }
          t = std::move(grown);
        }
        if (!evaluate(vars, t, h.label(run(h, q)[q.size() - 1]))) return false;
      }
    layer = std::move(next);
  }
  return true;
}

}  // namespace

TEST(SliceStep, SingleEdge) {
  const auto k = model("domain 0 1\nvars x\nactions a\nworld w0 x=0\nworld w1 x=1\nedge w0 w1 : a\ninit w0\n");
  const auto s = slice_step(k, {0}, "a");
  ASSERT_TRUE(s);
  EXPECT_EQ(s->state.substructure.k.world_count(), 1u);
  EXPECT_EQ(s->state.substructure.k.edge_count(), 0u);
  EXPECT_EQ(s->state.worlds, std::vector<WorldId>{0});
  EXPECT_EQ(s->state.substructure.exits, std::vector<WorldId>{0});
  EXPECT_EQ(s->next_entries, std::vector<WorldId>{1});
  EXPECT_FALSE(slice_step(k, {1}, "a"));
  EXPECT_THROW(slice_step(k, {0}, "b"), UnknownActionError);
}

TEST(SliceStep, DeclassificationWhiteSlice) {
  const auto k = parse_kripke(fixture("declass_unlocked.kripke")).pointed();
  const auto s = slice_step(k, {k.initial}, "dbg_y");
  ASSERT_TRUE(s);
  EXPECT_EQ(names(k.k, s->state.worlds), (std::vector<std::string>{"r0", "r1", "s", "y0", "y1"}));
  std::vector<WorldId> exits;
  for (WorldId e : s->state.substructure.exits) exits.push_back(s->state.worlds[e]);
  EXPECT_EQ(names(k.k, exits), (std::vector<std::string>{"y0", "y1"}));
  EXPECT_EQ(names(k.k, s->next_entries), (std::vector<std::string>{"yz0", "yz1"}));
}

TEST(SliceAutomaton, SingleActionLoop) {
  const auto k = model("domain 0 1\nvars x\nactions a\nworld w x=0\nedge w w : a\ninit w\n");
  const auto s = build_slice_automaton(k);
  EXPECT_EQ(s.states.size(), 1u);
  EXPECT_EQ(s.next.at({0, 0}), 0u);
}

TEST(SliceAutomaton, DeclassificationRun) {
  const auto k = parse_kripke(fixture("declass_unlocked.kripke")).pointed();
  std::vector<WorldId> entries{k.initial};
  std::vector<std::vector<WorldId>> seen;
  for (const char* a : {"dbg_y", "dbg_z"}) {
    const auto s = slice_step(k, entries, a);
    ASSERT_TRUE(s);
    seen.push_back(s->state.worlds);
    entries = s->next_entries;
  }
  EXPECT_NE(seen[0], seen[1]);
  EXPECT_EQ(names(k.k, seen[1]), (std::vector<std::string>{"yz0", "yz1"}));
}

// Slice substructure paths equal the oracle's slicing of traces.
TEST(SliceAutomaton, PathsMatchTraceSlicing) {
  Rng rng(71);
  for (int i = 0; i < 100; ++i) {
    const auto k = random_pointed(rng, 6, 2, true);
    const std::size_t n = k.k.world_count();
    std::vector<std::vector<std::string>> layer{{}};
    for (std::size_t len = 1; len <= 3; ++len) {
      std::vector<std::vector<std::string>> next;
      for (const auto& p : layer)
        for (const auto& a : k.labeling.actions) {
          auto q = p;
          q.push_back(a);
          std::vector<WorldId> entries{k.initial};
          std::optional<SliceState> last;
          for (const auto& b : q) {
            auto s = slice_step(k, entries, b);
            if (!s) {
              last.reset();
              break;
            }
            last = s->state;
            entries = s->next_entries;
          }
          const auto expect = oracle_slice_world_paths(k, q, n);
          ASSERT_EQ(last.has_value(), expect.has_value());
          if (last) EXPECT_EQ(slice_paths(*last, n), expect->back());
          next.push_back(q);
        }
      layer = std::move(next);
    }
  }
}

TEST(SliceAutomaton, DeterministicAndBounded) {
  Rng rng(72);
  for (int i = 0; i < 50; ++i) {
    const auto k = random_pointed(rng, 6, 2, false);
    const auto s = build_slice_automaton(k);
    EXPECT_LE(s.states.size(), std::size_t{1} << k.k.world_count());
    std::set<std::vector<WorldId>> distinct(s.states.begin(), s.states.end());
    EXPECT_EQ(distinct.size(), s.states.size());
    EXPECT_EQ(s.states[0], std::vector<WorldId>{k.initial});
  }
}

TEST(Join, TrivialLabelsHaveNoBadState) {
  const auto k = parse_kripke(fixture("declass_unlocked.kripke")).pointed();
  const Hna h = single_node(k.labeling.actions, "forall p. x(p) <~ x(p)");
  const Join j = build_join(h, k);
  for (const auto& e : j.edges) EXPECT_TRUE(e.ok);
  EXPECT_EQ(model_check(h, k).verdict, Verdict::Holds);
}

TEST(Join, UnsatisfiableInitialLabel) {
  const auto k = parse_kripke(fixture("declass_unlocked.kripke")).pointed();
  const Hna h = single_node(k.labeling.actions, "exists p. !x(p) <~ x(p)");
  const auto r = model_check(h, k);
  EXPECT_EQ(r.verdict, Verdict::Violated);
  EXPECT_EQ(r.witness.size(), 1u);
}

TEST(ModelCheck, Declassification) {
  const Hna h = parse_hna(fixture("declass.hna"));
  const auto r = model_check(h, parse_kripke(fixture("declass_unlocked.kripke")).pointed());
  EXPECT_EQ(r.verdict, Verdict::Violated);
  EXPECT_EQ(r.witness, (std::vector<std::string>{"dbg_y", "dbg_z"}));
  EXPECT_EQ(h.name(r.node), "nz");
  ASSERT_TRUE(r.slice);
  EXPECT_EQ(model_check(h, parse_kripke(fixture("declass_locked.kripke")).pointed()).verdict, Verdict::Holds);
}

TEST(ModelCheck, LockedFixtureAgreesWithOracle) {
  const Hna h = parse_hna(fixture("declass.hna"));
  const auto k = parse_kripke(fixture("declass_locked.kripke")).pointed();
  EXPECT_TRUE(bf_check_hna(k, h, 9, 4).verdict.accepted);
}

TEST(ModelCheck, DepthCapGivesUnknown) {
  const Hna h = parse_hna(fixture("declass.hna"));
  const auto k = parse_kripke(fixture("declass_unlocked.kripke")).pointed();
  ModelCheckOptions opts;
  opts.max_depth = 1;
  EXPECT_EQ(model_check(h, k, opts).verdict, Verdict::Unknown);
  opts.max_depth = 2;
  EXPECT_EQ(model_check(h, k, opts).verdict, Verdict::Violated);
}

TEST(ModelCheck, Errors) {
  const auto k = parse_kripke(fixture("declass_unlocked.kripke")).pointed();
  EXPECT_THROW(model_check(single_node({"dbg_y"}, "forall p. x(p) <~ x(p)"), k), UnknownActionError);
  EXPECT_THROW(model_check(single_node(k.labeling.actions, "forall p. w(p) <~ x(p)"), k), VarMismatchError);
}

TEST(ModelCheck, ParallelMatchesSerial) {
  Rng rng(73);
  for (int i = 0; i < 60; ++i) {
    const auto k = random_pointed(rng, 6, 2, coin(rng));
    const Hna h = random_hna(rng, k.k.vars(), 2);
    ModelCheckOptions serial, parallel;
    parallel.policy = ExecutionPolicy::Parallel;
    const auto a = model_check(h, k, serial);
    const auto b = model_check(h, k, parallel);
    EXPECT_EQ(a.verdict, b.verdict);
    EXPECT_EQ(a.witness, b.witness);
    EXPECT_EQ(a.node, b.node);
  }
}

// The Join decides acceptance where each slice i is checked over the traces extending
// p[0..i], each slice modelled by the product of its variable strings.
TEST(ModelCheck, MatchesPrefixProductSemantics) {
  Rng rng(74);
  for (int i = 0; i < 300; ++i) {
    const std::size_t actions = pick(rng, 1, 2);
    const auto k = random_pointed(rng, 6, actions, true);
    const Hna h = random_hna(rng, k.k.vars(), actions);
    EXPECT_EQ(model_check(h, k).verdict == Verdict::Holds, prefix_product_accepts(k, h, k.k.world_count()));
  }
}

// A slice whose two paths keep x and y together is still checked against the mixed
// segment x=01 y=0, which no single trace produces.
TEST(ModelCheck, SlicesUseProductReading) {
  const auto k = model(
      "domain 0 1\nvars x y\nactions a\nworld w0 x=0 y=0\nworld w1 x=1 y=1\nworld w2 x=0 y=0\n"
      "edge w0 w1\nedge w0 w2 : a\nedge w1 w2 : a\ninit w0\n");
  const Hna h = single_node({"a"}, "forall p. x(p) <~ y(p)");
  EXPECT_EQ(model_check(h, k).verdict, Verdict::Violated);
  EXPECT_TRUE(bf_check_hna(k, h, 3, 2).verdict.accepted);
}

// Slice 0 is checked over every trace that starts with a, not only those that go on
// to take b.
TEST(ModelCheck, SlicesUsePrefixTraces) {
  const auto k = model(
      "domain 0 1\nvars x\nactions a b\nworld w0 x=0\nworld w1 x=0\nworld w2 x=0\nworld w3 x=1\nworld w4 x=1\n"
      "edge w0 w1 : a\nedge w1 w2 : b\nedge w0 w3\nedge w3 w4 : a\ninit w0\n");
  Hna h({"a", "b"});
  const NodeId n0 = h.add_node("n0", parse_formula("exists p. exists q. !x(p) <~ x(q)"));
  const NodeId n1 = h.add_node("n1", parse_formula("forall p. x(p) <~ x(p)"));
  for (const char* a : {"a", "b"}) {
    h.set_transition(n0, a, n1);
    h.set_transition(n1, a, n1);
  }
  EXPECT_EQ(model_check(h, k).verdict, Verdict::Holds);
  const auto literal = bf_check_hna(k, h, 5, 4);
  EXPECT_FALSE(literal.verdict.accepted);
  EXPECT_EQ(literal.verdict.failing_p, (std::vector<std::string>{"a", "b"}));
}

TEST(SilentCycle, Detection) {
  EXPECT_TRUE(has_silent_cycle(model("domain 0 1\nvars x\nactions a\nworld w x=0\nedge w w\ninit w\n")));
  EXPECT_FALSE(has_silent_cycle(model("domain 0 1\nvars x\nactions a\nworld w x=0\nedge w w : a\ninit w\n")));
}
