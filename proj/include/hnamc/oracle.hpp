#pragma once

// Brute-force reference semantics by bounded enumeration. Exact on acyclic
// structures when the bounds cover the longest path.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "hnamc/hna.hpp"
#include "hnamc/kripke.hpp"
#include "hnamc/logic.hpp"

namespace hnamc {

/// Zips of all paths from the initial world with at most max_steps worlds, one trace
/// per choice of edge label. The last step carries the empty label.
std::vector<ActionLabeledTrace> enumerate_labeled_traces(const PointedLabeledKripke& k, std::size_t max_steps);

struct OracleFormulaResult {
  bool holds = false;
  bool exact = false;
};

/// evaluate(generated_segments(ok, max_len, mode), phi). Throws InvalidModelError when
/// max_len is 0.
OracleFormulaResult bf_check_formula(const OpenKripke& ok, const Formula& phi, std::size_t max_len,
                                     SegmentMode mode = SegmentMode::Product);

struct OracleHnaResult {
  HnaVerdict verdict;
  bool exact = false;
};

OracleHnaResult bf_check_hna(const PointedLabeledKripke& k, const Hna& h, std::size_t max_steps, std::size_t max_p);

/// World sequences of the slices induced by p on the traces of k (at most max_steps
/// worlds), cut the same way slice_trace_set cuts valuations. nullopt when no trace
/// extends p.
std::optional<std::vector<std::set<std::vector<WorldId>>>> oracle_slice_world_paths(const PointedLabeledKripke& k,
                                                                                      const std::vector<std::string>& p,
                                                                                      std::size_t max_steps);

}  // namespace hnamc
