#pragma once

// Automata for atomic predicates, polarity-directed filtration of formulas over a
// self-composed automaton, and the resulting decision procedures.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hnamc/kripke.hpp"
#include "hnamc/logic.hpp"
#include "hnamc/sfa.hpp"

namespace hnamc {

enum class Polarity { Positive, Negative };

/// Restriction of the universal automaton over `composed` to letters where the left
/// coordinate equals the right one or has terminated. Coordinates are named by
/// coordinate_name(var, trace). Throws CoordinateMissingError.
Sfa atomic_sfa(const Atom& atom, const VarSet& composed, const Domain& domain);

/// Filtration of a rectified formula built from Exists, Not, And and atoms over the
/// coordinates of a (a self-composition). Positive filtration keeps the words whose
/// decoded assignment satisfies phi, negative filtration the others.
Sfa filter(const Formula& phi, Polarity polarity, const Sfa& a);

struct FormulaVerdict {
  bool holds = false;
  /// Trace variables of the rectified formula, one self-composition copy each.
  std::vector<std::string> trace_vars;
  Formula checked = Formula::atom("", "", "", "");
  /// When the formula fails: the innermost subformula whose negative filtration
  /// explains the failure, and segments for its free trace variables.
  std::optional<Formula> failing;
  std::vector<std::pair<std::string, UnzippedSegment>> witness;
};

/// Decides L(a) |= phi. Throws OpenFormulaError / VarMismatchError.
FormulaVerdict check_formula_against_sfa(const Sfa& a, const Formula& phi);
FormulaVerdict check_formula_against_open_kripke(const OpenKripke& ok, const Formula& phi);

}  // namespace hnamc
