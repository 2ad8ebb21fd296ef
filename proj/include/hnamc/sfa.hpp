#pragma once

// Stutter-free automata over letters in (Sigma + {#})^X minus the all-# letter.
//
// A word is accepted when some run from an initial state ends in a final state. A
// word spells an unzipped segment by dropping '#': since every valid automaton is
// stutter-free and terminating, each accepted word is exactly the #-padded form of
// the segment it spells.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hnamc/core.hpp"

namespace hnamc {

using StateId = std::uint32_t;

struct SfaTransition {
  Letter letter;
  StateId target;

  std::strong_ordering operator<=>(const SfaTransition&) const = default;
  bool operator==(const SfaTransition&) const = default;
};

class Sfa {
 public:
  Sfa(VarSet vars, Domain domain);

  StateId add_state(std::string name, bool initial = false, bool final = false);
  /// Adds q --letter--> target. Throws InvalidModelError on a malformed or all-# letter.
  void add_transition(StateId from, const Letter& letter, StateId target);
  void set_initial(StateId q, bool v) { states_.at(q).initial = v; }
  void set_final(StateId q, bool v) { states_.at(q).final = v; }

  const VarSet& vars() const { return vars_; }
  const Domain& domain() const { return domain_; }
  std::size_t state_count() const { return states_.size(); }
  std::size_t transition_count() const;
  const std::string& name(StateId q) const { return states_.at(q).name; }
  std::optional<StateId> find_state(std::string_view name) const;
  bool is_initial(StateId q) const { return states_.at(q).initial; }
  bool is_final(StateId q) const { return states_.at(q).final; }
  std::vector<StateId> initials() const;
  /// Outgoing transitions sorted by (letter, target).
  std::span<const SfaTransition> out(StateId q) const { return states_.at(q).out; }
  /// Targets of q on exactly this letter.
  std::span<const SfaTransition> out(StateId q, const Letter& letter) const;

 private:
  struct StateData {
    std::string name;
    bool initial = false;
    bool final = false;
    std::vector<SfaTransition> out;
  };
  VarSet vars_;
  Domain domain_;
  std::vector<StateData> states_;
};

using SegmentSet = std::set<UnzippedSegment>;

struct SfaViolation {
  enum class Kind { StutterFreedom, Termination };
  Kind kind;
  StateId state;
  std::size_t var;
  std::string message;
};

/// Every (state, variable) pair that breaks stutter-freedom or termination.
std::vector<SfaViolation> validate(const Sfa& a);

bool is_deterministic(const Sfa& a);
/// Deterministic, one initial state, and every #-padded stutter-free word has a run.
bool is_complete(const Sfa& a);

/// Letters that may follow `last` in a #-padded stutter-free word (all letters when
/// `last` is null), in lexicographic order with '#' sorting after every value.
std::vector<Letter> admissible_letters(const Letter* last, std::size_t var_count, std::size_t domain_size);

/// Membership of the #-padded word of tau. Throws VarMismatchError on arity mismatch.
bool member(const Sfa& a, const UnzippedSegment& tau);

/// All accepted segments whose strings have length <= max_len.
SegmentSet enumerate_language(const Sfa& a, std::size_t max_len);

/// Shortest accepted segment (breadth-first, lexicographic letters), or nullopt if empty.
std::optional<UnzippedSegment> find_witness(const Sfa& a);
bool is_empty(const Sfa& a);

Sfa universal(const VarSet& vars, const Domain& domain);
/// Automaton with one non-final initial state and no transitions.
Sfa empty_sfa(const VarSet& vars, const Domain& domain);

Sfa union_of(const Sfa& a, const Sfa& b);
Sfa intersect(const Sfa& a, const Sfa& b);
Sfa determinize(const Sfa& a);
/// Drops states that are unreachable or cannot reach a final state.
Sfa trim(const Sfa& a);
/// Minimal trimmed automaton of a deterministic input (NotDeterministicError otherwise).
Sfa minimize(const Sfa& a);
/// Requires a deterministic input (NotDeterministicError otherwise).
Sfa complete(const Sfa& a);
/// Requires a complete input (NotCompleteError otherwise); swaps final and non-final.
Sfa complement(const Sfa& a);
/// L(a) minus L(b), via a ∩ complement(complete(determinize(b))).
Sfa difference(const Sfa& a, const Sfa& b);

/// Renames variables; the mapping must be total on a.vars() and injective.
Sfa rename_vars(const Sfa& a, const std::map<std::string, std::string>& mapping);
/// Reorders letter coordinates to follow `order`, which must be a permutation of a.vars().
Sfa permute_vars(const Sfa& a, const VarSet& order);
/// Erases the listed coordinates. Transitions whose remaining letter is all-# become
/// epsilon moves and are closed away. At least one coordinate must remain.
Sfa project_out(const Sfa& a, const std::vector<std::size_t>& coords);

/// Product of automata over pairwise-disjoint variable sets. A component whose part of
/// the joint letter is all-# must be final (or already terminated) and terminates.
Sfa async_product(std::span<const Sfa> components);

/// Name of the coordinate of program variable `var` in the copy for `trace_var`.
std::string coordinate_name(const std::string& var, const std::string& trace_var);

/// n renamed copies (x -> x_pi) combined by async_product, in trace-variable order.
Sfa self_compose(const Sfa& a, const std::vector<std::string>& trace_vars);

}  // namespace hnamc
