#pragma once

// Kripke structures with action labelings, open structures delimited by entry and
// exit worlds, path enumeration, and the translation of open structures into
// stutter-free automata.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hnamc/core.hpp"
#include "hnamc/sfa.hpp"

namespace hnamc {

using WorldId = std::uint32_t;
using ActionId = std::uint32_t;
/// The empty action label.
inline constexpr ActionId kEpsilon = std::numeric_limits<ActionId>::max();

class Kripke {
 public:
  Kripke() = default;
  Kripke(VarSet vars, Domain domain);

  /// Valuation must assign a domain value to every variable.
  WorldId add_world(std::string name, SegmentValuation valuation);
  void add_edge(WorldId from, WorldId to);

  const VarSet& vars() const { return vars_; }
  const Domain& domain() const { return domain_; }
  std::size_t world_count() const { return names_.size(); }
  const std::string& name(WorldId w) const { return names_.at(w); }
  std::optional<WorldId> find_world(std::string_view name) const;
  const SegmentValuation& valuation(WorldId w) const { return valuation_.at(w); }
  Value value(WorldId w, std::size_t var) const { return valuation_.at(w).at(var); }
  /// Sorted successor list.
  const std::vector<WorldId>& successors(WorldId w) const { return succ_.at(w); }
  bool has_edge(WorldId from, WorldId to) const;
  std::size_t edge_count() const;
  bool is_acyclic() const;

 private:
  VarSet vars_;
  Domain domain_;
  std::vector<std::string> names_;
  std::vector<SegmentValuation> valuation_;
  std::vector<std::vector<WorldId>> succ_;
};

/// Labels of every edge: a non-empty sorted set of action ids, kEpsilon sorting last.
struct ActionLabeling {
  std::vector<std::string> actions;
  std::map<std::pair<WorldId, WorldId>, std::vector<ActionId>> labels;

  std::optional<ActionId> find_action(std::string_view name) const;
  const std::vector<ActionId>& label(WorldId from, WorldId to) const;
  bool has_label(WorldId from, WorldId to, ActionId a) const;
  std::string action_name(ActionId a) const;
};

struct OpenKripke {
  Kripke k;
  std::vector<WorldId> entries;
  std::vector<WorldId> exits;
};

struct PointedLabeledKripke {
  Kripke k;
  ActionLabeling labeling;
  WorldId initial = 0;
};

/// Throws InvalidModelError unless entries and exits are non-empty sets of worlds.
void validate(const OpenKripke& ok);
/// Throws InvalidModelError unless the initial world exists and every edge carries a
/// non-empty label set over known actions (and no label sits on a missing edge).
void validate(const PointedLabeledKripke& k);

/// Entry-to-exit world sequences with at most max_len worlds.
std::set<std::vector<WorldId>> paths(const OpenKripke& ok, std::size_t max_len);

enum class SegmentMode { Joint, Product };

/// Segments generated by paths of at most max_len worlds, stutter-reduced. Joint keeps
/// the strings of one path together; Product combines each variable's strings freely.
SegmentSet generated_segments(const OpenKripke& ok, std::size_t max_len, SegmentMode mode);

/// Stutter-free automaton whose language is the Product-mode segment set of ok.
Sfa to_sfa(const OpenKripke& ok);

}  // namespace hnamc
