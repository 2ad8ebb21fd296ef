#pragma once

// Hypernode logic: formula AST, closedness and rectification, and the direct
// satisfaction relation over explicit finite sets of unzipped segments.

#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hnamc/core.hpp"

namespace hnamc {

/// x(pi) <~ y(pi'): the stutter-reduced x-string of pi is a prefix of the reduced y-string of pi'.
struct Atom {
  std::string lhs_var;
  std::string lhs_trace;
  std::string rhs_var;
  std::string rhs_trace;

  bool operator==(const Atom&) const = default;
};

/// Immutable formula tree with shared subterms. Forall and Or are kept as nodes so
/// that printing round-trips; desugar() rewrites them into the core connectives.
class Formula {
 public:
  enum class Kind { Exists, Forall, Not, And, Or, Atom };

  static Formula exists(std::string trace_var, Formula body);
  static Formula forall(std::string trace_var, Formula body);
  static Formula negation(Formula body);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula atom(std::string lhs_var, std::string lhs_trace, std::string rhs_var, std::string rhs_trace);

  Kind kind() const { return node_->kind; }
  bool is_quantifier() const { return kind() == Kind::Exists || kind() == Kind::Forall; }
  /// Bound trace variable of a quantifier.
  const std::string& trace_var() const { return node_->trace_var; }
  /// Body of a quantifier or negation; left operand of a binary connective.
  const Formula& body() const { return node_->children.front(); }
  const Formula& lhs() const { return node_->children.front(); }
  const Formula& rhs() const { return node_->children.back(); }
  const hnamc::Atom& atom() const { return node_->atom; }

  bool operator==(const Formula& other) const;

 private:
  struct Node {
    Kind kind;
    std::string trace_var;
    hnamc::Atom atom;
    std::vector<Formula> children;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

std::set<std::string> free_trace_vars(const Formula& phi);
bool is_closed(const Formula& phi);

/// Alpha-renames binders so that every quantifier binds a distinct trace variable.
/// A formula whose binders are already distinct is returned unchanged.
/// Throws OpenFormulaError if phi has free trace variables.
Formula rectify(const Formula& phi);

/// Rewrites Forall and Or through their abbreviations.
Formula desugar(const Formula& phi);

/// Bound trace variables in pre-order.
std::vector<std::string> binders(const Formula& phi);
std::size_t quantifier_count(const Formula& phi);

/// Program variables mentioned in atoms, in first-occurrence order.
std::vector<std::string> program_vars(const Formula& phi);

/// Throws VarMismatchError if an atom names a variable outside `vars`.
void check_program_vars(const Formula& phi, const VarSet& vars);

/// Prints phi in the text syntax accepted by parse_formula.
std::string to_string(const Formula& phi);

/// T |= phi, computed by enumerating assignments over the set T (duplicates collapse).
/// Throws OpenFormulaError / VarMismatchError.
bool evaluate(const VarSet& vars, std::span<const UnzippedSegment> segments, const Formula& phi);

}  // namespace hnamc
