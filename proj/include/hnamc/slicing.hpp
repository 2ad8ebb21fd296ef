#pragma once

// Slicing automaton of a pointed action-labeled Kripke structure, its Join with a
// hypernode automaton, and the model-checking decision.

#include <map>
#include <set>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hnamc/filtration.hpp"
#include "hnamc/hna.hpp"
#include "hnamc/kripke.hpp"

namespace hnamc {

struct SliceState {
  std::vector<WorldId> entry_worlds;
  ActionId action = 0;
  /// Epsilon subgraph on the worlds that lie on an epsilon path from the entries to a
  /// source of an `action` edge. Entries and exits use substructure ids.
  OpenKripke substructure;
  /// Original world id of each substructure world.
  std::vector<WorldId> worlds;
};

struct SliceStep {
  SliceState state;
  std::vector<WorldId> next_entries;
};

/// Throws UnknownActionError. nullopt when no `action` edge is epsilon-reachable.
std::optional<SliceStep> slice_step(const PointedLabeledKripke& k, const std::vector<WorldId>& entries,
                                    const std::string& action);

struct SliceAutomaton {
  /// Entry sets; state 0 is {initial}.
  std::vector<std::vector<WorldId>> states;
  /// (state, action) -> successor state.
  std::map<std::pair<std::size_t, ActionId>, std::size_t> next;
};

SliceAutomaton build_slice_automaton(const PointedLabeledKripke& k);

/// Original-id world paths of a slice substructure with at most max_len worlds.
std::set<std::vector<WorldId>> slice_paths(const SliceState& s, std::size_t max_len);

/// True when some reachable cycle can be traversed with empty labels only, i.e. the
/// structure has infinite traces with finitely many actions.
bool has_silent_cycle(const PointedLabeledKripke& k);

enum class ExecutionPolicy { Serial, Parallel };

struct JoinState {
  std::size_t slice_state;  // index into SliceAutomaton::states
  NodeId node;
};

struct JoinEdge {
  std::size_t from;
  ActionId action;
  std::size_t to;
  /// Whether the slice of `action` at `from` satisfies the label of from's node; a
  /// false flag marks the final (violating) state of the product.
  bool ok;
};

struct Join {
  SliceAutomaton slices;
  std::vector<JoinState> states;
  std::vector<JoinEdge> edges;
};

Join build_join(const Hna& h, const PointedLabeledKripke& k, ExecutionPolicy policy = ExecutionPolicy::Serial);

enum class Verdict { Holds, Violated, Unknown };

struct ModelCheckResult {
  Verdict verdict = Verdict::Holds;
  std::vector<std::string> witness;
  NodeId node = 0;
  std::optional<SliceState> slice;
  std::optional<FormulaVerdict> formula;
  std::size_t explored = 0;
};

struct ModelCheckOptions {
  std::optional<std::size_t> max_depth;
  ExecutionPolicy policy = ExecutionPolicy::Serial;
};

/// Breadth-first search of the Join for a violating slice. The witness is a shortest
/// action sequence. Unknown only when max_depth cut off unexplored states.
ModelCheckResult model_check(const Hna& h, const PointedLabeledKripke& k, const ModelCheckOptions& options = {});

}  // namespace hnamc
