#pragma once

// Hypernode automata, action-labeled traces and the direct acceptance relation over
// explicit finite trace sets.

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hnamc/core.hpp"
#include "hnamc/logic.hpp"

namespace hnamc {

using NodeId = std::uint32_t;

class Hna {
 public:
  explicit Hna(std::vector<std::string> actions);

  NodeId add_node(std::string name, Formula label);
  void set_initial(NodeId q) { initial_ = q; }
  /// Throws UnknownActionError for an action outside actions().
  void set_transition(NodeId from, const std::string& action, NodeId to);

  const std::vector<std::string>& actions() const { return actions_; }
  std::optional<std::size_t> action_index(std::string_view a) const;
  std::size_t node_count() const { return names_.size(); }
  const std::string& name(NodeId q) const { return names_.at(q); }
  std::optional<NodeId> find_node(std::string_view name) const;
  const Formula& label(NodeId q) const { return labels_.at(q); }
  NodeId initial() const { return initial_; }
  std::optional<NodeId> next(NodeId q, std::string_view action) const;
  std::size_t transition_count() const;

 private:
  std::vector<std::string> actions_;
  std::vector<std::string> names_;
  std::vector<Formula> labels_;
  std::vector<std::vector<std::optional<NodeId>>> trans_;
  NodeId initial_ = 0;
};

struct HnaIssue {
  enum class Kind { MissingTransition, UnreachableNode, OpenFormula, NoNodes };
  Kind kind;
  bool warning;
  std::string message;
};

/// Totality, closedness and reachability report. Errors make the automaton unusable;
/// unreachable nodes are warnings.
std::vector<HnaIssue> validate(const Hna& h);

/// q0 q1 ... q_|p|. Throws UnknownActionError, InvalidModelError on a missing transition.
std::vector<NodeId> run(const Hna& h, const std::vector<std::string>& p);

struct LabeledStep {
  SegmentValuation valuation;
  /// nullopt is the empty label.
  std::optional<std::string> action;

  auto operator<=>(const LabeledStep&) const = default;
  bool operator==(const LabeledStep&) const = default;
};

struct ActionLabeledTrace {
  std::vector<LabeledStep> steps;

  auto operator<=>(const ActionLabeledTrace&) const = default;
  bool operator==(const ActionLabeledTrace&) const = default;
};

std::vector<std::string> project_actions(const ActionLabeledTrace& rho);

/// Slice i holds, for every trace whose action projection extends p, the segment that
/// ends with the step labeled p[i]. nullopt when no trace extends p.
std::optional<std::vector<std::set<ZippedSegment>>> slice_trace_set(const std::vector<ActionLabeledTrace>& r,
                                                                    const std::vector<std::string>& p);

struct HnaVerdict {
  bool accepted = true;
  std::vector<std::string> failing_p;
  std::size_t slice = 0;
  NodeId node = 0;
};

/// Checks every p over h.actions() with |p| <= max_p (shortest first, then
/// lexicographic) and reports the first failing slice.
HnaVerdict oracle_accepts(const std::vector<ActionLabeledTrace>& r, const Hna& h, const VarSet& vars,
                          std::size_t max_p);

}  // namespace hnamc
