#include "hnamc/filtration.hpp"

#include <algorithm>
#include <map>

#include "hnamc/errors.hpp"

namespace hnamc {

namespace {

std::size_t coordinate(const VarSet& composed, const std::string& var, const std::string& trace) {
  const std::string name = coordinate_name(var, trace);
  auto idx = composed.index(name);
  if (!idx) throw CoordinateMissingError("no coordinate '" + name + "' for atom " + var + "(" + trace + ")");
  return *idx;
}

bool atom_letter_ok(const Letter& l, std::size_t lhs, std::size_t rhs) {
  return l[lhs] == kTerm || l[lhs] == l[rhs];
}

Sfa copy_of(const Sfa& a) { return a; }

// Words of a every letter of which satisfies the atom predicate.
Sfa atom_positive(const Sfa& a, std::size_t lhs, std::size_t rhs) {
  Sfa r(a.vars(), a.domain());
  for (StateId q = 0; q < a.state_count(); ++q) r.add_state(a.name(q), a.is_initial(q), a.is_final(q));
  for (StateId q = 0; q < a.state_count(); ++q)
    for (const auto& t : a.out(q))
      if (atom_letter_ok(t.letter, lhs, rhs)) r.add_transition(q, t.letter, t.target);
  return r;
}

// Words of a whose restriction to `kept` (an increasing coordinate list) is accepted
// by b. Same language as intersecting a with the cylinder async_product(b, universal),
// without building the cylinder. An all-# restricted letter only occurs once every
// kept coordinate has terminated, so b simply stays put on it.
Sfa cylinder_intersect(const Sfa& a, const Sfa& b, const std::vector<std::size_t>& kept) {
  Sfa r(a.vars(), a.domain());
  std::map<std::pair<StateId, StateId>, StateId> ids;
  std::vector<std::pair<StateId, StateId>> work;
  auto get = [&](StateId p, StateId q) {
    auto [it, fresh] = ids.try_emplace({p, q}, 0);
    if (fresh) {
      it->second = r.add_state("q" + std::to_string(ids.size() - 1), false, a.is_final(p) && b.is_final(q));
      work.emplace_back(p, q);
    }
    return it->second;
  };
  for (StateId p : a.initials())
    for (StateId q : b.initials()) r.set_initial(get(p, q), true);
  Letter part(kept.size());
  while (!work.empty()) {
    auto [p, q] = work.back();
    work.pop_back();
    const StateId src = ids.at({p, q});
    for (const auto& t : a.out(p)) {
      for (std::size_t i = 0; i < kept.size(); ++i) part[i] = t.letter[kept[i]];
      if (is_all_term(part)) {
        r.add_transition(src, t.letter, get(t.target, q));
        continue;
      }
      for (const auto& u : b.out(q, part)) r.add_transition(src, t.letter, get(t.target, u.target));
    }
  }
  if (r.state_count() == 0) return empty_sfa(a.vars(), a.domain());
  return r;
}

// Words of a with at least one letter violating the atom predicate: a two-flag monitor.
Sfa atom_negative(const Sfa& a, std::size_t lhs, std::size_t rhs) {
  Sfa r(a.vars(), a.domain());
  std::map<std::pair<StateId, bool>, StateId> ids;
  std::vector<std::pair<StateId, bool>> work;
  auto get = [&](StateId q, bool seen_bad) {
    auto [it, fresh] = ids.try_emplace({q, seen_bad}, 0);
    if (fresh) {
      it->second = r.add_state("q" + std::to_string(ids.size() - 1), false, seen_bad && a.is_final(q));
      work.emplace_back(q, seen_bad);
    }
    return it->second;
  };
  for (StateId q : a.initials()) r.set_initial(get(q, false), true);
  while (!work.empty()) {
    auto [q, bad] = work.back();
    work.pop_back();
    const StateId src = ids.at({q, bad});
    for (const auto& t : a.out(q)) r.add_transition(src, t.letter, get(t.target, bad || !atom_letter_ok(t.letter, lhs, rhs)));
  }
  if (r.state_count() == 0) return empty_sfa(a.vars(), a.domain());
  return r;
}

class Filter {
 public:
  Filter(const Sfa& a, std::vector<std::string> program_vars) : a_(a), program_vars_(std::move(program_vars)) {}

  Sfa run(const Formula& f, Polarity pol) {
    switch (f.kind()) {
      case Formula::Kind::Atom: {
        const auto& at = f.atom();
        const std::size_t lhs = coordinate(a_.vars(), at.lhs_var, at.lhs_trace);
        const std::size_t rhs = coordinate(a_.vars(), at.rhs_var, at.rhs_trace);
        return pol == Polarity::Positive ? atom_positive(a_, lhs, rhs) : atom_negative(a_, lhs, rhs);
      }
      case Formula::Kind::Not:
        return run(f.body(), pol == Polarity::Positive ? Polarity::Negative : Polarity::Positive);
      case Formula::Kind::And:
        if (pol == Polarity::Positive) return intersect(run(f.lhs(), pol), run(f.rhs(), pol));
        return union_of(run(f.lhs(), pol), run(f.rhs(), pol));
      case Formula::Kind::Exists:
        return exists(f, pol);
      case Formula::Kind::Forall:
      case Formula::Kind::Or:
        return run(desugar(f), pol);
    }
    throw InvalidModelError("unknown formula node");
  }

 private:
  // Words w of a such that some w' in body+ differs from w only on the bound trace's
  // coordinates (positive), or no such w' exists (negative).
  Sfa exists(const Formula& f, Polarity pol) {
    const Sfa body = run(f.body(), Polarity::Positive);
    std::vector<std::size_t> coords;
    for (const auto& x : program_vars_) {
      const std::string name = coordinate_name(x, f.trace_var());
      if (auto idx = a_.vars().index(name)) {
        coords.push_back(*idx);
      }
    }
    if (coords.empty()) {
      // trace variable does not occur: the body is independent of it
      if (pol == Polarity::Positive) return body;
      return difference(a_, body);
    }
    if (coords.size() == a_.vars().size()) {
      const bool sat = !is_empty(body);
      return sat == (pol == Polarity::Positive) ? copy_of(a_) : empty_sfa(a_.vars(), a_.domain());
    }
    Sfa rest = minimize(determinize(project_out(body, coords)));
    if (pol == Polarity::Negative) rest = complement(complete(rest));
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < a_.vars().size(); ++i)
      if (std::find(coords.begin(), coords.end(), i) == coords.end()) kept.push_back(i);
    return trim(cylinder_intersect(a_, rest, kept));
  }

  const Sfa& a_;
  std::vector<std::string> program_vars_;
};

// Program variables are recovered from the composed names for the 3-argument filter.
std::vector<std::string> guess_program_vars(const Formula& phi, const VarSet& composed) {
  std::vector<std::string> out;
  const auto traces = binders(phi);
  for (const auto& name : composed.names())
    for (const auto& t : traces) {
      const std::string suffix = "_" + t;
      if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
        std::string x = name.substr(0, name.size() - suffix.size());
        if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(std::move(x));
      }
    }
  return out;
}

}  // namespace

Sfa atomic_sfa(const Atom& atom, const VarSet& composed, const Domain& domain) {
  const std::size_t lhs = coordinate(composed, atom.lhs_var, atom.lhs_trace);
  const std::size_t rhs = coordinate(composed, atom.rhs_var, atom.rhs_trace);
  Sfa r(composed, domain);
  const StateId start = r.add_state("start", true, true);
  std::map<Letter, StateId> ids;
  for (const auto& l : admissible_letters(nullptr, composed.size(), domain.size()))
    if (atom_letter_ok(l, lhs, rhs)) ids.emplace(l, r.add_state("a" + std::to_string(ids.size()), false, true));
  for (const auto& [from, id] : ids) {
    r.add_transition(start, from, id);
    for (const auto& l : admissible_letters(&from, composed.size(), domain.size())) {
      auto it = ids.find(l);
      if (it != ids.end()) r.add_transition(id, l, it->second);
    }
  }
  return r;
}

Sfa filter(const Formula& phi, Polarity polarity, const Sfa& a) {
  return Filter(a, guess_program_vars(phi, a.vars())).run(phi, polarity);
}

FormulaVerdict check_formula_against_sfa(const Sfa& a, const Formula& phi) {
  check_program_vars(phi, a.vars());
  FormulaVerdict v;
  v.checked = rectify(phi);
  v.trace_vars = binders(v.checked);
  if (is_empty(a)) {
    v.holds = evaluate(a.vars(), {}, v.checked);
    return v;
  }
  // Language-preserving; shrinks the base before the n-fold product.
  const Sfa an = self_compose(minimize(determinize(a)), v.trace_vars);
  Filter filt(an, a.vars().names());
  v.holds = !is_empty(filt.run(desugar(v.checked), Polarity::Positive));
  if (v.holds) return v;

  // Walk down while the failure is carried by a single subformula.
  Formula f = v.checked;
  Polarity pol = Polarity::Negative;
  while (true) {
    if (f.kind() == Formula::Kind::Not) {
      pol = pol == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
      f = f.body();
    } else if ((f.kind() == Formula::Kind::Exists && pol == Polarity::Positive) ||
               (f.kind() == Formula::Kind::Forall && pol == Polarity::Negative)) {
      f = f.body();
    } else {
      break;
    }
  }
  v.failing = pol == Polarity::Negative ? f : Formula::negation(f);
  const auto word = find_witness(filt.run(desugar(f), pol));
  if (word) {
    const auto free = free_trace_vars(f);
    for (const auto& t : v.trace_vars) {
      if (!free.count(t)) continue;
      std::vector<std::size_t> coords;
      for (const auto& x : a.vars().names()) coords.push_back(*an.vars().index(coordinate_name(x, t)));
      v.witness.emplace_back(t, restrict_segment(*word, coords));
    }
  }
  return v;
}

FormulaVerdict check_formula_against_open_kripke(const OpenKripke& ok, const Formula& phi) {
  check_program_vars(phi, ok.k.vars());
  return check_formula_against_sfa(to_sfa(ok), phi);
}

}  // namespace hnamc
