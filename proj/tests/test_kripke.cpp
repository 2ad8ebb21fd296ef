#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "hnamc/errors.hpp"
#include "hnamc/parsers.hpp"
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

OpenKripke chain(std::vector<SegmentValuation> vals, const VarSet& vars) {
  OpenKripke ok{Kripke(vars, binary()), {0}, {}};
  for (std::size_t i = 0; i < vals.size(); ++i) {
    ok.k.add_world("w" + std::to_string(i), vals[i]);
    if (i) ok.k.add_edge(static_cast<WorldId>(i - 1), static_cast<WorldId>(i));
  }
  ok.exits = {static_cast<WorldId>(vals.size() - 1)};
  return ok;
}

}  // namespace

TEST(Paths, Examples) {
  const OpenKripke c = chain({{0}, {1}}, VarSet({"x"}));
  EXPECT_EQ(paths(c, 2), (std::set<std::vector<WorldId>>{{0, 1}}));
  EXPECT_TRUE(paths(c, 1).empty());

  OpenKripke single{Kripke(VarSet({"x"}), binary()), {0}, {0}};
  single.k.add_world("w0", {0});
  EXPECT_EQ(paths(single, 1), (std::set<std::vector<WorldId>>{{0}}));

  single.k.add_edge(0, 0);
  EXPECT_EQ(paths(single, 3), (std::set<std::vector<WorldId>>{{0}, {0, 0}, {0, 0, 0}}));
}

TEST(GeneratedSegments, SinglePathModesAgree) {
  const OpenKripke c = chain({{0, 0}, {1, 0}, {1, 1}}, first_vars(2));
  const auto j = generated_segments(c, 3, SegmentMode::Joint);
  EXPECT_EQ(j, generated_segments(c, 3, SegmentMode::Product));
  EXPECT_EQ(j, SegmentSet{seg({"01", "01"})});
}

TEST(GeneratedSegments, ParallelChainsMix) {
  OpenKripke ok{Kripke(first_vars(2), binary()), {0}, {1, 2}};
  ok.k.add_world("w0", {0, 0});
  ok.k.add_world("w1", {1, 0});
  ok.k.add_world("w2", {0, 1});
  ok.k.add_edge(0, 1);
  ok.k.add_edge(0, 2);
  const auto joint = generated_segments(ok, 3, SegmentMode::Joint);
  const auto product = generated_segments(ok, 3, SegmentMode::Product);
  EXPECT_FALSE(joint.count(seg({"01", "01"})));
  EXPECT_TRUE(product.count(seg({"01", "01"})));
  for (const auto& tau : joint) EXPECT_TRUE(product.count(tau));
}

TEST(GeneratedSegments, FirstSlice) {
  const OpenKripke ok = parse_kripke(fixture("first_slice.kripke")).open();
  const auto segs = generated_segments(ok, ok.k.world_count(), SegmentMode::Product);
  EXPECT_TRUE(segs.count(seg({"0", "0", "0"})));
  EXPECT_TRUE(segs.count(seg({"1", "0", "0"})));
}

TEST(GeneratedSegments, JointWithinProduct) {
  Rng rng(51);
  for (int i = 0; i < 100; ++i) {
    const OpenKripke ok = random_open_kripke(rng, 5, 2, coin(rng));
    const auto joint = generated_segments(ok, 5, SegmentMode::Joint);
    const auto product = generated_segments(ok, 5, SegmentMode::Product);
    for (const auto& tau : joint) EXPECT_TRUE(product.count(tau));
  }
}

TEST(ToSfa, SelfLoopWorld) {
  OpenKripke ok{Kripke(VarSet({"x"}), binary()), {0}, {0}};
  ok.k.add_world("w", {0});
  ok.k.add_edge(0, 0);
  EXPECT_EQ(enumerate_language(to_sfa(ok), 5), SegmentSet{seg({"0"})});
}

TEST(ToSfa, TwoWorldChain) {
  OpenKripke ok = chain({{0, 0}, {1, 0}}, first_vars(2));
  ok.exits = {0, 1};
  EXPECT_EQ(enumerate_language(to_sfa(ok), 5), (SegmentSet{seg({"0", "0"}), seg({"01", "0"})}));
}

TEST(ToSfa, ProductContractAcyclic) {
  Rng rng(52);
  for (int i = 0; i < 200; ++i) {
    const OpenKripke ok = random_open_kripke(rng, 6, 2, true);
    const Sfa a = to_sfa(ok);
    EXPECT_TRUE(validate(a).empty());
    const std::size_t n = ok.k.world_count();
    EXPECT_EQ(enumerate_language(a, n), generated_segments(ok, n, SegmentMode::Product));
  }
}

TEST(ToSfa, ProductContractCyclicBounded) {
  Rng rng(53);
  for (int i = 0; i < 50; ++i) {
    const OpenKripke ok = random_open_kripke(rng, 5, 2, false);
    const SegmentSet lang = enumerate_language(to_sfa(ok), 4);
    for (const auto& tau : bounded(generated_segments(ok, 4, SegmentMode::Product), 4)) EXPECT_TRUE(lang.count(tau));
    // the other direction: every per-variable string is spelled by some path
    for (const auto& tau : lang)
      for (std::size_t x = 0; x < tau.var_count(); ++x) EXPECT_TRUE(realizable(ok, x, tau.strings[x]));
  }
}

TEST(Validate, OpenAndPointed) {
  OpenKripke ok{Kripke(VarSet({"x"}), binary()), {}, {0}};
  ok.k.add_world("w", {0});
  EXPECT_THROW(validate(ok), InvalidModelError);
  ok.entries = {3};
  EXPECT_THROW(validate(ok), InvalidModelError);

  PointedLabeledKripke k{Kripke(VarSet({"x"}), binary()), {}, 0};
  k.k.add_world("a", {0});
  k.k.add_world("b", {1});
  k.k.add_edge(0, 1);
  k.labeling.actions = {"go"};
  EXPECT_NO_THROW(validate(k));
  k.labeling.labels[{0, 1}] = {};
  EXPECT_THROW(validate(k), InvalidModelError);
  k.labeling.labels[{0, 1}] = {0};
  k.labeling.labels[{1, 0}] = {0};
  EXPECT_THROW(validate(k), InvalidModelError);
}

TEST(Labeling, DefaultsToEpsilon) {
  ActionLabeling l;
  l.actions = {"a"};
  EXPECT_EQ(l.label(0, 1), std::vector<ActionId>{kEpsilon});
  EXPECT_EQ(l.action_name(kEpsilon), "eps");
  EXPECT_EQ(l.find_action("a"), ActionId{0});
}

TEST(Kripke, Acyclicity) {
  Kripke k(VarSet({"x"}), binary());
  k.add_world("a", {0});
  k.add_world("b", {0});
  k.add_edge(0, 1);
  EXPECT_TRUE(k.is_acyclic());
  k.add_edge(1, 0);
  EXPECT_FALSE(k.is_acyclic());
  EXPECT_THROW(k.add_world("c", {0, 1}), InvalidModelError);
}
