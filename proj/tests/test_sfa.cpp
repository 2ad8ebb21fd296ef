#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "hnamc/errors.hpp"
#include "hnamc/parsers.hpp"
#include "test_support.hpp"

using namespace hnamc;
using namespace hnamc::testing;

namespace {

Sfa alternating() {
  std::ifstream in(std::string(HNAMC_FIXTURE_DIR) + "/alternating.sfa");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_sfa(ss.str());
}

// Automaton accepting exactly one segment, as a chain of #-padded letters.
Sfa singleton(const VarSet& vars, const UnzippedSegment& tau) {
  Sfa a(vars, binary());
  StateId q = a.add_state("s0", true, false);
  for (std::size_t i = 0; i < tau.max_length(); ++i) {
    Letter l(vars.size());
    for (std::size_t x = 0; x < vars.size(); ++x) l[x] = i < tau.strings[x].size() ? tau.strings[x][i] : kTerm;
    const StateId t = a.add_state("s" + std::to_string(i + 1));
    a.add_transition(q, l, t);
    q = t;
  }
  a.set_final(q, true);
  return a;
}

SegmentSet set_of(std::initializer_list<UnzippedSegment> l) { return SegmentSet(l); }

SegmentSet universe(std::size_t vars, std::size_t bound) {
  const auto v = all_segments(vars, 2, bound, true);
  return SegmentSet(v.begin(), v.end());
}

}  // namespace

TEST(Alternating, MembershipExamples) {
  const Sfa a = alternating();
  EXPECT_EQ(a.state_count(), 7u);
  EXPECT_TRUE(validate(a).empty());
  EXPECT_TRUE(member(a, seg({"0", "01"})));
  EXPECT_FALSE(member(a, seg({"01", "01"})));
}

TEST(Alternating, BoundedLanguage) {
  EXPECT_EQ(enumerate_language(alternating(), 3), set_of({seg({"0", "01"}), seg({"010", "01"})}));
}

TEST(Alternating, ShortestWitness) {
  const auto w = find_witness(alternating());
  ASSERT_TRUE(w);
  EXPECT_EQ(*w, seg({"0", "01"}));
  EXPECT_FALSE(is_empty(alternating()));
}

TEST(Member, NonStutterFreeRejected) {
  const Sfa u = universal(first_vars(2), binary());
  EXPECT_FALSE(member(u, seg({"00", "0"})));
  EXPECT_TRUE(member(u, seg({"0", "0"})));
  EXPECT_THROW(member(u, seg({"0"})), VarMismatchError);
}

TEST(Member, EmptySegment) {
  Sfa a(first_vars(1), binary());
  a.add_state("q", true, true);
  EXPECT_TRUE(member(a, seg({""})));
  EXPECT_FALSE(member(alternating(), seg({"", ""})));
}

TEST(Universal, LetterStatesAndLanguage) {
  const Sfa u = universal(first_vars(2), binary());
  std::size_t letters = 0;
  for (StateId q = 0; q < u.state_count(); ++q) letters += !u.is_initial(q);
  EXPECT_EQ(letters, 8u);
  EXPECT_TRUE(validate(u).empty());
  EXPECT_EQ(enumerate_language(universal(first_vars(1), binary()), 2),
            set_of({seg({""}), seg({"0"}), seg({"1"}), seg({"01"}), seg({"10"})}));
  EXPECT_EQ(enumerate_language(u, 4), universe(2, 4));
}

TEST(Enumerate, NoFinals) {
  Sfa a(first_vars(1), binary());
  const StateId q = a.add_state("q", true);
  a.add_transition(q, Letter{0}, a.add_state("r"));
  EXPECT_TRUE(enumerate_language(a, 4).empty());
  EXPECT_TRUE(is_empty(a));
  EXPECT_FALSE(find_witness(a));
}

TEST(Emptiness, InitialFinalGivesEmptyWitness) {
  Sfa a(first_vars(2), binary());
  a.add_state("q", true, true);
  EXPECT_EQ(find_witness(a), seg({"", ""}));
}

TEST(Validate, DetectsStutterAndTermination) {
  Sfa a(first_vars(1), binary());
  const StateId p = a.add_state("p", true);
  const StateId q = a.add_state("q", false, true);
  a.add_transition(p, Letter{0}, q);
  a.add_transition(q, Letter{0}, q);
  auto v = validate(a);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].kind, SfaViolation::Kind::StutterFreedom);

  Sfa b(first_vars(2), binary());
  const StateId s = b.add_state("s", true);
  const StateId t = b.add_state("t");
  b.add_transition(s, Letter{0, kTerm}, t);
  b.add_transition(t, Letter{1, 0}, s);
  bool termination = false;
  for (const auto& x : validate(b)) termination |= x.kind == SfaViolation::Kind::Termination;
  EXPECT_TRUE(termination);
}

TEST(Construct, AllTermLetterRejected) {
  Sfa a(first_vars(2), binary());
  const StateId q = a.add_state("q", true);
  EXPECT_THROW(a.add_transition(q, Letter{kTerm, kTerm}, q), InvalidModelError);
  EXPECT_THROW(a.add_transition(q, Letter{0}, q), InvalidModelError);
}

TEST(Union, Examples) {
  const VarSet x = first_vars(1);
  const Sfa a = singleton(x, seg({"01"}));
  const Sfa b = singleton(x, seg({"1"}));
  EXPECT_EQ(enumerate_language(union_of(a, b), 4), set_of({seg({"01"}), seg({"1"})}));
  EXPECT_EQ(enumerate_language(union_of(a, empty_sfa(x, binary())), 4), enumerate_language(a, 4));
  EXPECT_THROW(union_of(a, universal(first_vars(2), binary())), VarMismatchError);
}

TEST(Intersect, Examples) {
  const VarSet xy = first_vars(2);
  const Sfa f = alternating();
  EXPECT_EQ(enumerate_language(intersect(f, universal(xy, binary())), 4), enumerate_language(f, 4));
  EXPECT_TRUE(is_empty(intersect(singleton(xy, seg({"0", "1"})), singleton(xy, seg({"1", "1"})))));
}

TEST(Determinize, MergesBranches) {
  Sfa a(first_vars(1), binary());
  const StateId s = a.add_state("s", true);
  const StateId p = a.add_state("p", false, true);
  const StateId q = a.add_state("q");
  a.add_transition(s, Letter{0}, p);
  a.add_transition(s, Letter{0}, q);
  a.add_transition(q, Letter{1}, a.add_state("r", false, true));
  EXPECT_FALSE(is_deterministic(a));
  const Sfa d = determinize(a);
  EXPECT_TRUE(is_deterministic(d));
  EXPECT_EQ(d.state_count(), 3u);
  EXPECT_EQ(enumerate_language(d, 4), set_of({seg({"0"}), seg({"01"})}));
}

TEST(Determinize, DeterministicInputKeepsShape) {
  const Sfa f = alternating();
  ASSERT_TRUE(is_deterministic(f));
  const Sfa d = determinize(f);
  EXPECT_EQ(d.state_count(), f.state_count());
  EXPECT_EQ(d.transition_count(), f.transition_count());
}

TEST(Complete, MixedLetterGetsRun) {
  const VarSet xy = first_vars(2);
  Sfa a(xy, binary());
  const StateId s = a.add_state("s", true);
  a.add_transition(s, Letter{0, 0}, a.add_state("t", false, true));
  const Sfa c = complete(a);
  EXPECT_TRUE(is_complete(c));
  EXPECT_FALSE(is_complete(a));
  // the word (x=0,y=1) now has a rejecting run
  auto from = c.initials();
  ASSERT_EQ(from.size(), 1u);
  EXPECT_EQ(c.out(from[0], Letter{0, 1}).size(), 1u);
  EXPECT_FALSE(member(c, seg({"0", "1"})));
  EXPECT_TRUE(member(c, seg({"0", "0"})));
  EXPECT_THROW(complete(union_of(a, a)), NotDeterministicError);
}

TEST(Complete, UniversalUnchanged) {
  const Sfa u = universal(first_vars(2), binary());
  EXPECT_EQ(enumerate_language(complete(determinize(u)), 4), universe(2, 4));
}

TEST(Complement, Examples) {
  const VarSet xy = first_vars(2);
  EXPECT_TRUE(enumerate_language(complement(complete(determinize(universal(xy, binary())))), 4).empty());
  EXPECT_EQ(enumerate_language(complement(complete(determinize(empty_sfa(xy, binary())))), 3), universe(2, 3));
  EXPECT_THROW(complement(alternating()), NotCompleteError);
}

TEST(Difference, Examples) {
  const Sfa f = alternating();
  EXPECT_TRUE(is_empty(difference(f, f)));
  EXPECT_EQ(enumerate_language(difference(f, empty_sfa(f.vars(), f.domain())), 5), enumerate_language(f, 5));
}

TEST(TrimMinimize, LanguagePreservedAndSmall) {
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const Sfa a = random_sfa(rng, first_vars(pick(rng, 1, 2)), binary());
    const Sfa t = trim(a);
    const Sfa m = minimize(determinize(a));
    EXPECT_LE(t.state_count(), a.state_count());
    EXPECT_EQ(enumerate_language(t, 4), enumerate_language(a, 4));
    EXPECT_EQ(enumerate_language(m, 4), enumerate_language(a, 4));
    EXPECT_TRUE(validate(m).empty());
    EXPECT_TRUE(is_deterministic(m));
    EXPECT_LE(minimize(m).state_count(), m.state_count());
    EXPECT_EQ(minimize(m).state_count(), m.state_count());
  }
  EXPECT_THROW(minimize(union_of(alternating(), alternating())), NotDeterministicError);
}

// Closure laws against bounded enumeration.
TEST(Closure, RandomLaws) {
  Rng rng(32);
  for (int i = 0; i < 100; ++i) {
    const VarSet vars = first_vars(pick(rng, 1, 2));
    const Sfa a = random_sfa(rng, vars, binary());
    const Sfa b = random_sfa(rng, vars, binary());
    ASSERT_TRUE(validate(a).empty());
    const auto la = enumerate_language(a, 4), lb = enumerate_language(b, 4);
    for (const auto& tau : la) EXPECT_TRUE(is_stutter_free(tau));
    SegmentSet u = la, n;
    u.insert(lb.begin(), lb.end());
    for (const auto& tau : la)
      if (lb.count(tau)) n.insert(tau);
    EXPECT_EQ(enumerate_language(union_of(a, b), 4), u);
    EXPECT_EQ(enumerate_language(intersect(a, b), 4), n);
    const Sfa c = complete(determinize(a));
    EXPECT_TRUE(is_complete(c));
    for (const auto& tau : all_segments(vars.size(), 2, 3, true)) EXPECT_EQ(member(c, tau), member(a, tau));
    EXPECT_EQ(enumerate_language(determinize(a), 5), enumerate_language(a, 5));
  }
}

TEST(Rename, Examples) {
  const Sfa f = alternating();
  const Sfa same = rename_vars(f, {{"x", "x"}, {"y", "y"}});
  EXPECT_EQ(enumerate_language(same, 4), enumerate_language(f, 4));
  const Sfa r = rename_vars(f, {{"x", "x_p1"}, {"y", "y_p1"}});
  EXPECT_EQ(r.vars(), VarSet({"x_p1", "y_p1"}));
  EXPECT_TRUE(member(r, seg({"0", "01"})));
  const Sfa twice = rename_vars(r, {{"x_p1", "a"}, {"y_p1", "b"}});
  EXPECT_EQ(enumerate_language(twice, 4), enumerate_language(f, 4));
  EXPECT_THROW(rename_vars(f, {{"x", "z"}, {"y", "z"}}), NonInjectiveError);
}

TEST(Permute, ReordersCoordinates) {
  const Sfa p = permute_vars(alternating(), VarSet({"y", "x"}));
  EXPECT_TRUE(member(p, seg({"01", "0"})));
  EXPECT_FALSE(member(p, seg({"0", "01"})));
}

TEST(ProjectOut, ErasesCoordinates) {
  const Sfa p = project_out(alternating(), {0});
  EXPECT_EQ(p.vars(), VarSet({"y"}));
  EXPECT_EQ(enumerate_language(p, 4), set_of({seg({"01"}), seg({"0101"})}));
}

TEST(AsyncProduct, PadsShorterComponent) {
  const Sfa a = singleton(VarSet({"x"}), seg({"0"}));
  const Sfa b = singleton(VarSet({"y"}), seg({"01"}));
  const Sfa parts[] = {a, b};
  const Sfa p = async_product(parts);
  EXPECT_EQ(enumerate_language(p, 4), set_of({seg({"0", "01"})}));
  const Sfa one[] = {a};
  EXPECT_EQ(enumerate_language(async_product(one), 4), enumerate_language(a, 4));
  const Sfa clash[] = {a, a};
  EXPECT_THROW(async_product(clash), VarOverlapError);
}

TEST(AsyncProduct, ProjectionLaw) {
  Rng rng(33);
  for (int i = 0; i < 40; ++i) {
    const Sfa a = random_sfa(rng, VarSet({"x"}), binary(), 4);
    const Sfa b = random_sfa(rng, VarSet({"y"}), binary(), 4);
    const Sfa parts[] = {a, b};
    const Sfa p = async_product(parts);
    EXPECT_TRUE(validate(p).empty());
    for (const auto& tau : all_segments(2, 2, 3, true))
      EXPECT_EQ(member(p, tau), member(a, restrict_segment(tau, {0})) && member(b, restrict_segment(tau, {1})));
  }
}

TEST(SelfCompose, Examples) {
  const Sfa f = alternating();
  const Sfa one = self_compose(f, {"p"});
  EXPECT_EQ(one.vars(), VarSet({"x_p", "y_p"}));
  EXPECT_EQ(enumerate_language(one, 4), enumerate_language(f, 4));
  const Sfa two = self_compose(f, {"p", "q"});
  EXPECT_EQ(two.vars(), VarSet({"x_p", "y_p", "x_q", "y_q"}));
  EXPECT_TRUE(member(two, seg({"0", "01", "010", "01"})));
  EXPECT_FALSE(member(two, seg({"0", "01", "01", "01"})));
  EXPECT_LE(two.state_count(), (f.state_count() + 1) * (f.state_count() + 1));
}

TEST(SelfCompose, PairwiseMembership) {
  Rng rng(34);
  for (int i = 0; i < 30; ++i) {
    const Sfa a = random_sfa(rng, VarSet({"x"}), binary(), 4);
    const Sfa c = self_compose(a, {"p", "q"});
    for (const auto& tau : all_segments(2, 2, 3, true))
      EXPECT_EQ(member(c, tau), member(a, restrict_segment(tau, {0})) && member(a, restrict_segment(tau, {1})));
  }
}
