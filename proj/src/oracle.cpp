#include "hnamc/oracle.hpp"

#include <algorithm>

#include "hnamc/errors.hpp"

namespace hnamc {

namespace {

// Every (world path, label choice) pair from the initial world, at most max_steps worlds.
// The callback receives worlds and the labels of the traversed edges.
template <typename Visit>
void walk_labeled(const PointedLabeledKripke& k, std::size_t max_steps, Visit&& visit) {
  std::vector<WorldId> worlds;
  std::vector<ActionId> labels;
  auto go = [&](auto&& self, WorldId w) -> void {
    worlds.push_back(w);
    visit(worlds, labels);
    if (worlds.size() < max_steps)
      for (WorldId t : k.k.successors(w))
        for (ActionId a : k.labeling.label(w, t)) {
          labels.push_back(a);
          self(self, t);
          labels.pop_back();
        }
    worlds.pop_back();
  };
  if (max_steps > 0) go(go, k.initial);
}

}  // namespace

std::vector<ActionLabeledTrace> enumerate_labeled_traces(const PointedLabeledKripke& k, std::size_t max_steps) {
  validate(k);
  std::set<ActionLabeledTrace> out;
  walk_labeled(k, max_steps, [&](const std::vector<WorldId>& worlds, const std::vector<ActionId>& labels) {
    ActionLabeledTrace rho;
    for (std::size_t i = 0; i < worlds.size(); ++i) {
      LabeledStep s{k.k.valuation(worlds[i]), std::nullopt};
      if (i < labels.size() && labels[i] != kEpsilon) s.action = k.labeling.actions[labels[i]];
      rho.steps.push_back(std::move(s));
    }
    out.insert(std::move(rho));
  });
  return {out.begin(), out.end()};
}

OracleFormulaResult bf_check_formula(const OpenKripke& ok, const Formula& phi, std::size_t max_len, SegmentMode mode) {
  if (max_len == 0) throw InvalidModelError("bound must be at least 1");
  validate(ok);
  const auto segments = generated_segments(ok, max_len, mode);
  std::vector<UnzippedSegment> model(segments.begin(), segments.end());
  OracleFormulaResult r;
  r.holds = evaluate(ok.k.vars(), model, phi);
  r.exact = ok.k.is_acyclic() && max_len >= ok.k.world_count();
  return r;
}

OracleHnaResult bf_check_hna(const PointedLabeledKripke& k, const Hna& h, std::size_t max_steps, std::size_t max_p) {
  if (max_steps == 0) throw InvalidModelError("bound must be at least 1");
  OracleHnaResult r;
  r.verdict = oracle_accepts(enumerate_labeled_traces(k, max_steps), h, k.k.vars(), max_p);
  const std::size_t n = k.k.world_count();
  r.exact = k.k.is_acyclic() && max_steps >= n && max_p + 1 >= n;
  return r;
}

std::optional<std::vector<std::set<std::vector<WorldId>>>> oracle_slice_world_paths(const PointedLabeledKripke& k,
                                                                                      const std::vector<std::string>& p,
                                                                                      std::size_t max_steps) {
  validate(k);
  std::vector<ActionId> want;
  for (const auto& a : p) {
    auto id = k.labeling.find_action(a);
    if (!id) throw UnknownActionError("unknown action '" + a + "'");
    want.push_back(*id);
  }
  std::vector<std::set<std::vector<WorldId>>> slices(p.size());
  bool any = false;
  walk_labeled(k, max_steps, [&](const std::vector<WorldId>& worlds, const std::vector<ActionId>& labels) {
    std::vector<std::vector<WorldId>> cut;
    std::vector<WorldId> current;
    for (std::size_t i = 0; i < worlds.size() && cut.size() < want.size(); ++i) {
      current.push_back(worlds[i]);
      if (i >= labels.size() || labels[i] == kEpsilon) continue;
      if (labels[i] != want[cut.size()]) return;
      cut.push_back(std::move(current));
      current.clear();
    }
    if (cut.size() != want.size()) return;
    any = true;
    for (std::size_t i = 0; i < cut.size(); ++i) slices[i].insert(std::move(cut[i]));
  });
  if (!any) return std::nullopt;
  return slices;
}

}  // namespace hnamc
