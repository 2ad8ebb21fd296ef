#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "hnamc/errors.hpp"
#include "hnamc/parsers.hpp"
#include "test_support.hpp"

using namespace hnamc;
using namespace hnamc::testing;

namespace {

Hna fig1() {
  std::ifstream in(std::string(HNAMC_FIXTURE_DIR) + "/declass.hna");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_hna(ss.str());
}

LabeledStep step(SegmentValuation v, const char* action = nullptr) {
  return {std::move(v), action ? std::optional<std::string>(action) : std::nullopt};
}

// Two executions of the unprotected composition.
ActionLabeledTrace tau1() { return {{step({0, 0, 0}), step({0, 0, 0}, "dbg_y"), step({0, 0, 0}, "dbg_z")}}; }
ActionLabeledTrace tau2() {
  return {{step({1, 0, 0}), step({1, 0, 0}), step({1, 1, 0}, "dbg_y"), step({1, 1, 1}, "dbg_z")}};
}

const VarSet kXyz({"x", "y", "z"});

}  // namespace

TEST(HnaValidate, DeclassificationOk) {
  const Hna h = fig1();
  EXPECT_EQ(h.node_count(), 3u);
  EXPECT_EQ(h.transition_count(), 9u);
  EXPECT_TRUE(validate(h).empty());
}

TEST(HnaValidate, MissingTransition) {
  Hna h({"a", "clr"});
  const NodeId n = h.add_node("n", parse_formula("forall p. x(p) <~ x(p)"));
  h.set_transition(n, "a", n);
  const auto issues = validate(h);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].kind, HnaIssue::Kind::MissingTransition);
  EXPECT_FALSE(issues[0].warning);
}

TEST(HnaValidate, OpenLabelAndUnreachable) {
  Hna h({"a"});
  const NodeId n = h.add_node("n", parse_formula("x(p) <~ x(p)"));
  const NodeId m = h.add_node("m", parse_formula("forall p. x(p) <~ x(p)"));
  h.set_transition(n, "a", n);
  h.set_transition(m, "a", m);
  bool open = false, unreachable = false;
  for (const auto& i : validate(h)) {
    open |= i.kind == HnaIssue::Kind::OpenFormula && !i.warning;
    unreachable |= i.kind == HnaIssue::Kind::UnreachableNode && i.warning;
  }
  EXPECT_TRUE(open);
  EXPECT_TRUE(unreachable);
  EXPECT_EQ(validate(Hna({"a"}))[0].kind, HnaIssue::Kind::NoNodes);
}

TEST(HnaRun, Declassification) {
  const Hna h = fig1();
  const auto r = run(h, {"dbg_y", "dbg_z", "clr"});
  std::vector<std::string> names;
  for (NodeId q : r) names.push_back(h.name(q));
  EXPECT_EQ(names, (std::vector<std::string>{"n0", "nz", "nz", "n0"}));
  EXPECT_EQ(h.label(r[1]), parse_formula("forall p. forall q. z(p) <~ z(q) | z(q) <~ z(p)"));
  EXPECT_EQ(run(h, {}), std::vector<NodeId>{h.initial()});
  EXPECT_EQ(run(h, {"clr"}), (std::vector<NodeId>{h.initial(), h.initial()}));
  EXPECT_THROW(run(h, {"halt"}), UnknownActionError);
}

TEST(HnaRun, PrefixMonotone) {
  const Hna h = fig1();
  std::vector<std::string> p;
  Rng rng(61);
  for (int i = 0; i < 12; ++i) {
    const auto before = run(h, p);
    p.push_back(h.actions()[pick(rng, 0, 2)]);
    const auto after = run(h, p);
    EXPECT_TRUE(std::equal(before.begin(), before.end(), after.begin()));
  }
}

TEST(ProjectActions, Examples) {
  EXPECT_EQ(project_actions(tau2()), (std::vector<std::string>{"dbg_y", "dbg_z"}));
  EXPECT_TRUE(project_actions({{step({0}), step({1})}}).empty());
  EXPECT_EQ(project_actions({{step({0}, "a")}}), std::vector<std::string>{"a"});
}

TEST(SliceTraceSet, TwoExecutions) {
  const auto s = slice_trace_set({tau1(), tau2()}, {"dbg_y", "dbg_z"});
  ASSERT_TRUE(s);
  ASSERT_EQ(s->size(), 2u);
  EXPECT_EQ((*s)[0], (std::set<ZippedSegment>{{{0, 0, 0}, {0, 0, 0}}, {{1, 0, 0}, {1, 0, 0}, {1, 1, 0}}}));
  EXPECT_EQ((*s)[1], (std::set<ZippedSegment>{{{0, 0, 0}}, {{1, 1, 1}}}));
  EXPECT_FALSE(slice_trace_set({tau1(), tau2()}, {"clr"}));
}

TEST(SliceTraceSet, SlicesConcatenateToLabeledPrefix) {
  const ActionLabeledTrace t = tau2();
  const auto s = slice_trace_set({t}, project_actions(t));
  ASSERT_TRUE(s);
  ZippedSegment joined;
  for (const auto& slice : *s) {
    ASSERT_EQ(slice.size(), 1u);
    joined.insert(joined.end(), slice.begin()->begin(), slice.begin()->end());
  }
  ZippedSegment whole;
  for (const auto& st : t.steps) whole.push_back(st.valuation);
  EXPECT_EQ(joined, whole);
}

TEST(OracleAccepts, TwoExecutionsRejected) {
  const Hna h = fig1();
  const HnaVerdict v = oracle_accepts({tau1(), tau2()}, h, kXyz, 3);
  EXPECT_FALSE(v.accepted);
  EXPECT_EQ(v.failing_p, (std::vector<std::string>{"dbg_y", "dbg_z"}));
  EXPECT_EQ(v.slice, 1u);
  EXPECT_EQ(h.name(v.node), "nz");
}

TEST(OracleAccepts, SingleTraceAccepted) {
  EXPECT_TRUE(oracle_accepts({tau1()}, fig1(), kXyz, 3).accepted);
}

TEST(OracleAccepts, TrivialLabelsAcceptAnything) {
  Hna h({"dbg_y", "dbg_z"});
  const NodeId n = h.add_node("top", parse_formula("forall p. x(p) <~ x(p)"));
  h.set_transition(n, "dbg_y", n);
  h.set_transition(n, "dbg_z", n);
  EXPECT_TRUE(oracle_accepts({tau1(), tau2()}, h, kXyz, 4).accepted);
}
