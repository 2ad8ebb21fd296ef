#include "hnamc/sfa.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <tuple>
#include <unordered_map>

#include <boost/container_hash/hash.hpp>

#include "hnamc/errors.hpp"

namespace hnamc {

namespace {

constexpr StateId kTop = std::numeric_limits<StateId>::max();

struct LetterLess {
  bool operator()(const SfaTransition& t, const Letter& l) const { return t.letter < l; }
  bool operator()(const Letter& l, const SfaTransition& t) const { return l < t.letter; }
};

struct VectorHash {
  std::size_t operator()(const std::vector<StateId>& v) const noexcept {
    return boost::hash_range(v.begin(), v.end());
  }
};

struct Move {
  const Letter* letter;  // nullptr: the component terminates ('#' on all its coordinates)
  StateId target;
};

std::string state_name(std::size_t i) { return "q" + std::to_string(i); }

void require_compatible(const Sfa& a, const Sfa& b, const char* op) {
  if (!(a.vars() == b.vars()) || !(a.domain() == b.domain()))
    throw VarMismatchError(std::string(op) + ": operands must share variables and domain");
}

// Index of a value in per-coordinate flag arrays; '#' maps to the last slot.
std::size_t slot(Value v, std::size_t domain_size) { return v == kTerm ? domain_size : v; }

// Word of a segment: every string padded with '#' to the longest length.
std::vector<Letter> padded_word(const UnzippedSegment& tau) {
  const std::size_t len = tau.max_length();
  std::vector<Letter> word(len, Letter(tau.var_count(), kTerm));
  for (std::size_t x = 0; x < tau.var_count(); ++x)
    for (std::size_t i = 0; i < tau.strings[x].size(); ++i) word[i][x] = tau.strings[x][i];
  return word;
}

UnzippedSegment spell(const std::vector<Letter>& word, std::size_t var_count) {
  UnzippedSegment tau = UnzippedSegment::empty(var_count);
  for (const auto& l : word)
    for (std::size_t x = 0; x < var_count; ++x)
      if (l[x] != kTerm) tau.strings[x].push_back(l[x]);
  return tau;
}

std::vector<StateId> step(const Sfa& a, const std::vector<StateId>& from, const Letter& letter) {
  std::vector<StateId> next;
  for (StateId q : from)
    for (const auto& t : a.out(q, letter)) next.push_back(t.target);
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());
  return next;
}

bool any_final(const Sfa& a, const std::vector<StateId>& states) {
  return std::any_of(states.begin(), states.end(), [&](StateId q) { return a.is_final(q); });
}

}  // namespace

// ---------------------------------------------------------------------------
// Sfa

Sfa::Sfa(VarSet vars, Domain domain) : vars_(std::move(vars)), domain_(std::move(domain)) {}

StateId Sfa::add_state(std::string name, bool initial, bool final) {
  states_.push_back(StateData{std::move(name), initial, final, {}});
  return static_cast<StateId>(states_.size() - 1);
}

void Sfa::add_transition(StateId from, const Letter& letter, StateId target) {
  if (from >= states_.size() || target >= states_.size()) throw InvalidModelError("transition endpoint out of range");
  if (letter.size() != vars_.size()) throw InvalidModelError("letter does not cover every variable");
  for (Value v : letter)
    if (v != kTerm && v >= domain_.size()) throw InvalidModelError("letter value outside the domain");
  if (is_all_term(letter)) throw InvalidModelError("the all-# letter is not part of the alphabet");
  auto& out = states_[from].out;
  SfaTransition t{letter, target};
  auto it = std::lower_bound(out.begin(), out.end(), t);
  if (it != out.end() && *it == t) return;
  out.insert(it, std::move(t));
}

std::size_t Sfa::transition_count() const {
  std::size_t n = 0;
  for (const auto& s : states_) n += s.out.size();
  return n;
}

std::optional<StateId> Sfa::find_state(std::string_view name) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].name == name) return static_cast<StateId>(i);
  return std::nullopt;
}

std::vector<StateId> Sfa::initials() const {
  std::vector<StateId> out;
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].initial) out.push_back(static_cast<StateId>(i));
  return out;
}

std::span<const SfaTransition> Sfa::out(StateId q, const Letter& letter) const {
  const auto& out = states_.at(q).out;
  auto [lo, hi] = std::equal_range(out.begin(), out.end(), letter, LetterLess{});
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Structural queries

std::vector<SfaViolation> validate(const Sfa& a) {
  const std::size_t n = a.state_count();
  const std::size_t m = a.vars().size();
  const std::size_t d = a.domain().size();
  const std::size_t width = d + 1;
  // in/out flags indexed [state][var][slot]
  std::vector<char> in(n * m * width, 0), out(n * m * width, 0);
  auto at = [&](std::size_t q, std::size_t x, std::size_t s) { return (q * m + x) * width + s; };
  for (StateId q = 0; q < n; ++q)
    for (const auto& t : a.out(q))
      for (std::size_t x = 0; x < m; ++x) {
        out[at(q, x, slot(t.letter[x], d))] = 1;
        in[at(t.target, x, slot(t.letter[x], d))] = 1;
      }

  std::vector<SfaViolation> violations;
  for (StateId q = 0; q < n; ++q)
    for (std::size_t x = 0; x < m; ++x) {
      for (std::size_t s = 0; s < d; ++s)
        if (in[at(q, x, s)] && out[at(q, x, s)])
          violations.push_back({SfaViolation::Kind::StutterFreedom, q, x,
                                "state " + a.name(q) + ": value " + a.domain().token(static_cast<Value>(s)) +
                                    " of " + a.vars().name(x) + " is both incoming and outgoing"});
      if (in[at(q, x, d)]) {
        for (std::size_t s = 0; s < d; ++s)
          if (out[at(q, x, s)]) {
            violations.push_back({SfaViolation::Kind::Termination, q, x,
                                  "state " + a.name(q) + ": " + a.vars().name(x) +
                                      " is terminated on entry but continues with value " +
                                      a.domain().token(static_cast<Value>(s))});
            break;
          }
      }
    }
  return violations;
}

bool is_deterministic(const Sfa& a) {
  if (a.initials().size() > 1) return false;
  for (StateId q = 0; q < a.state_count(); ++q) {
    auto out = a.out(q);
    for (std::size_t i = 1; i < out.size(); ++i)
      if (out[i].letter == out[i - 1].letter) return false;
  }
  return true;
}

std::vector<Letter> admissible_letters(const Letter* last, std::size_t var_count, std::size_t domain_size) {
  std::vector<std::vector<Value>> options(var_count);
  for (std::size_t x = 0; x < var_count; ++x) {
    if (last && (*last)[x] == kTerm) {
      options[x] = {kTerm};
      continue;
    }
    for (std::size_t v = 0; v < domain_size; ++v)
      if (!last || (*last)[x] != v) options[x].push_back(static_cast<Value>(v));
    options[x].push_back(kTerm);
  }
  std::vector<Letter> out;
  std::vector<std::size_t> idx(var_count, 0);
  Letter cur(var_count);
  while (true) {
    for (std::size_t x = 0; x < var_count; ++x) cur[x] = options[x][idx[x]];
    if (!is_all_term(cur)) out.push_back(cur);
    std::size_t x = var_count;
    while (x > 0) {
      --x;
      if (++idx[x] < options[x].size()) break;
      idx[x] = 0;
      if (x == 0) return out;
    }
    if (var_count == 0) return out;
  }
}

bool is_complete(const Sfa& a) {
  if (!is_deterministic(a)) return false;
  const auto inits = a.initials();
  if (inits.size() != 1) return false;
  const std::size_t m = a.vars().size();
  const std::size_t d = a.domain().size();

  std::vector<char> seen(a.state_count(), 0);
  std::deque<StateId> queue{inits.front()};
  seen[inits.front()] = 1;
  std::vector<std::set<Letter>> incoming(a.state_count());
  std::vector<StateId> order;
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    order.push_back(q);
    for (const auto& t : a.out(q)) {
      incoming[t.target].insert(t.letter);
      if (!seen[t.target]) {
        seen[t.target] = 1;
        queue.push_back(t.target);
      }
    }
  }
  auto has = [&](StateId q, const Letter& l) { return !a.out(q, l).empty(); };
  for (StateId q : order) {
    if (q == inits.front())
      for (const auto& l : admissible_letters(nullptr, m, d))
        if (!has(q, l)) return false;
    for (const auto& last : incoming[q])
      for (const auto& l : admissible_letters(&last, m, d))
        if (!has(q, l)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Language queries

bool member(const Sfa& a, const UnzippedSegment& tau) {
  if (tau.var_count() != a.vars().size()) throw VarMismatchError("segment does not match the automaton variables");
  for (const auto& s : tau.strings)
    for (Value v : s)
      if (v >= a.domain().size()) throw VarMismatchError("segment value outside the automaton domain");
  std::vector<StateId> current = a.initials();
  for (const auto& letter : padded_word(tau)) {
    current = step(a, current, letter);
    if (current.empty()) return false;
  }
  return any_final(a, current);
}

SegmentSet enumerate_language(const Sfa& a, std::size_t max_len) {
  SegmentSet out;
  const std::size_t m = a.vars().size();
  std::vector<Letter> word;
  auto explore = [&](auto&& self, const std::vector<StateId>& frontier) -> void {
    if (any_final(a, frontier)) out.insert(spell(word, m));
    if (word.size() >= max_len) return;
    std::vector<Letter> letters;
    for (StateId q : frontier)
      for (const auto& t : a.out(q)) letters.push_back(t.letter);
    std::sort(letters.begin(), letters.end());
    letters.erase(std::unique(letters.begin(), letters.end()), letters.end());
    for (const auto& l : letters) {
      word.push_back(l);
      self(self, step(a, frontier, l));
      word.pop_back();
    }
  };
  auto inits = a.initials();
  if (!inits.empty()) explore(explore, inits);
  return out;
}

std::optional<UnzippedSegment> find_witness(const Sfa& a) {
  const std::size_t n = a.state_count();
  constexpr StateId kNone = std::numeric_limits<StateId>::max();
  std::vector<StateId> parent(n, kNone);
  std::vector<const Letter*> via(n, nullptr);
  std::vector<char> seen(n, 0);
  std::deque<StateId> queue;
  for (StateId q : a.initials()) {
    seen[q] = 1;
    queue.push_back(q);
  }
  while (!queue.empty()) {
    StateId q = queue.front();
    queue.pop_front();
    if (a.is_final(q)) {
      std::vector<Letter> word;
      for (StateId s = q; parent[s] != kNone; s = parent[s]) word.push_back(*via[s]);
      std::reverse(word.begin(), word.end());
      return spell(word, a.vars().size());
    }
    for (const auto& t : a.out(q))
      if (!seen[t.target]) {
        seen[t.target] = 1;
        parent[t.target] = q;
        via[t.target] = &t.letter;
        queue.push_back(t.target);
      }
  }
  return std::nullopt;
}

bool is_empty(const Sfa& a) { return !find_witness(a).has_value(); }

// ---------------------------------------------------------------------------
// Constructions

Sfa universal(const VarSet& vars, const Domain& domain) {
  Sfa u(vars, domain);
  const StateId start = u.add_state("start", true, true);
  const auto letters = admissible_letters(nullptr, vars.size(), domain.size());
  std::map<Letter, StateId> ids;
  for (const auto& l : letters) {
    std::string name = "u";
    for (Value v : l) name += "_" + (v == kTerm ? std::string("h") : std::to_string(v));
    ids[l] = u.add_state(std::move(name), false, true);
  }
  for (const auto& l : letters) u.add_transition(start, l, ids[l]);
  for (const auto& from : letters)
    for (const auto& l : admissible_letters(&from, vars.size(), domain.size())) u.add_transition(ids[from], l, ids[l]);
  return u;
}

Sfa empty_sfa(const VarSet& vars, const Domain& domain) {
  Sfa e(vars, domain);
  e.add_state("q0", true, false);
  return e;
}

Sfa union_of(const Sfa& a, const Sfa& b) {
  require_compatible(a, b, "union");
  Sfa u(a.vars(), a.domain());
  const auto offset = static_cast<StateId>(a.state_count());
  for (StateId q = 0; q < a.state_count(); ++q) u.add_state(state_name(q), a.is_initial(q), a.is_final(q));
  for (StateId q = 0; q < b.state_count(); ++q)
    u.add_state(state_name(offset + q), b.is_initial(q), b.is_final(q));
  for (StateId q = 0; q < a.state_count(); ++q)
    for (const auto& t : a.out(q)) u.add_transition(q, t.letter, t.target);
  for (StateId q = 0; q < b.state_count(); ++q)
    for (const auto& t : b.out(q)) u.add_transition(offset + q, t.letter, offset + t.target);
  return u;
}

Sfa intersect(const Sfa& a, const Sfa& b) {
  require_compatible(a, b, "intersection");
  Sfa r(a.vars(), a.domain());
  std::map<std::pair<StateId, StateId>, StateId> ids;
  std::deque<std::pair<StateId, StateId>> queue;
  auto get = [&](StateId p, StateId q) {
    auto [it, fresh] = ids.try_emplace({p, q}, 0);
    if (fresh) {
      it->second = r.add_state(state_name(ids.size() - 1), false, a.is_final(p) && b.is_final(q));
      queue.emplace_back(p, q);
    }
    return it->second;
  };
  for (StateId p : a.initials())
    for (StateId q : b.initials()) r.set_initial(get(p, q), true);
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    const StateId src = ids.at({p, q});
    auto lhs = a.out(p);
    auto rhs = b.out(q);
    std::size_t i = 0, j = 0;
    while (i < lhs.size() && j < rhs.size()) {
      if (lhs[i].letter < rhs[j].letter) {
        ++i;
      } else if (rhs[j].letter < lhs[i].letter) {
        ++j;
      } else {
        const Letter& l = lhs[i].letter;
        std::size_t i_end = i, j_end = j;
        while (i_end < lhs.size() && lhs[i_end].letter == l) ++i_end;
        while (j_end < rhs.size() && rhs[j_end].letter == l) ++j_end;
        for (std::size_t ii = i; ii < i_end; ++ii)
          for (std::size_t jj = j; jj < j_end; ++jj) r.add_transition(src, l, get(lhs[ii].target, rhs[jj].target));
        i = i_end;
        j = j_end;
      }
    }
  }
  if (r.state_count() == 0) return empty_sfa(a.vars(), a.domain());
  return r;
}

Sfa determinize(const Sfa& a) {
  Sfa d(a.vars(), a.domain());
  std::unordered_map<std::vector<StateId>, StateId, VectorHash> ids;
  std::deque<std::vector<StateId>> queue;
  auto get = [&](std::vector<StateId> subset) {
    auto it = ids.find(subset);
    if (it != ids.end()) return it->second;
    const StateId id = d.add_state(state_name(ids.size()), false, any_final(a, subset));
    ids.emplace(subset, id);
    queue.push_back(std::move(subset));
    return id;
  };
  d.set_initial(get(a.initials()), true);
  while (!queue.empty()) {
    std::vector<StateId> subset = std::move(queue.front());
    queue.pop_front();
    const StateId src = ids.at(subset);
    std::vector<SfaTransition> moves;
    for (StateId q : subset)
      for (const auto& t : a.out(q)) moves.push_back(t);
    std::sort(moves.begin(), moves.end());
    for (std::size_t i = 0; i < moves.size();) {
      std::size_t j = i;
      std::vector<StateId> target;
      while (j < moves.size() && moves[j].letter == moves[i].letter) target.push_back(moves[j++].target);
      target.erase(std::unique(target.begin(), target.end()), target.end());
      d.add_transition(src, moves[i].letter, get(std::move(target)));
      i = j;
    }
  }
  return d;
}

Sfa trim(const Sfa& a) {
  const std::size_t n = a.state_count();
  std::vector<std::vector<StateId>> pred(n);
  for (StateId q = 0; q < n; ++q)
    for (const auto& t : a.out(q)) pred[t.target].push_back(q);
  std::vector<char> fwd(n, 0), bwd(n, 0);
  std::vector<StateId> stack = a.initials();
  for (StateId q : stack) fwd[q] = 1;
  while (!stack.empty()) {
    const StateId q = stack.back();
    stack.pop_back();
    for (const auto& t : a.out(q))
      if (!fwd[t.target]) {
        fwd[t.target] = 1;
        stack.push_back(t.target);
      }
  }
  for (StateId q = 0; q < n; ++q)
    if (a.is_final(q) && fwd[q]) {
      bwd[q] = 1;
      stack.push_back(q);
    }
  while (!stack.empty()) {
    const StateId q = stack.back();
    stack.pop_back();
    for (StateId p : pred[q])
      if (fwd[p] && !bwd[p]) {
        bwd[p] = 1;
        stack.push_back(p);
      }
  }
  Sfa r(a.vars(), a.domain());
  std::vector<StateId> id(n, kTop);
  for (StateId q = 0; q < n; ++q)
    if (bwd[q]) id[q] = r.add_state(a.name(q), a.is_initial(q), a.is_final(q));
  if (r.state_count() == 0) return empty_sfa(a.vars(), a.domain());
  for (StateId q = 0; q < n; ++q)
    if (bwd[q])
      for (const auto& t : a.out(q))
        if (bwd[t.target]) r.add_transition(id[q], t.letter, id[t.target]);
  return r;
}

// Moore refinement on the trimmed automaton. Equivalent trimmed states read the same
// first letters, so merging them keeps stutter-freedom and termination.
Sfa minimize(const Sfa& input) {
  if (!is_deterministic(input)) throw NotDeterministicError("minimize: input automaton must be deterministic");
  const Sfa a = trim(input);
  const std::size_t n = a.state_count();
  std::vector<std::size_t> cls(n);
  for (StateId q = 0; q < n; ++q) cls[q] = a.is_final(q) ? 1 : 0;
  std::size_t classes = 0;
  while (true) {
    std::map<std::pair<std::size_t, std::vector<std::pair<Letter, std::size_t>>>, std::size_t> sig;
    std::vector<std::size_t> next(n);
    for (StateId q = 0; q < n; ++q) {
      std::vector<std::pair<Letter, std::size_t>> row;
      for (const auto& t : a.out(q)) row.emplace_back(t.letter, cls[t.target]);
      next[q] = sig.try_emplace({cls[q], std::move(row)}, sig.size()).first->second;
    }
    const bool stable = sig.size() == classes;
    classes = sig.size();
    cls = std::move(next);
    if (stable) break;
  }
  Sfa r(a.vars(), a.domain());
  for (std::size_t c = 0; c < classes; ++c) r.add_state(state_name(c));
  std::vector<char> done(classes, 0);
  for (StateId q = 0; q < n; ++q) {
    const auto c = static_cast<StateId>(cls[q]);
    if (a.is_initial(q)) r.set_initial(c, true);
    if (done[c]) continue;
    done[c] = 1;
    r.set_final(c, a.is_final(q));
    for (const auto& t : a.out(q)) r.add_transition(c, t.letter, static_cast<StateId>(cls[t.target]));
  }
  return r;
}

// Completion tracks the last letter read: state (q, last) has exactly one incoming
// letter, so every admissible successor letter can be enabled without breaking
// stutter-freedom. Letters the source automaton cannot read fall into a non-final
// copy of the universal automaton.
Sfa complete(const Sfa& a) {
  if (!is_deterministic(a)) throw NotDeterministicError("complete: input automaton must be deterministic");
  const std::size_t m = a.vars().size();
  const std::size_t d = a.domain().size();
  Sfa c(a.vars(), a.domain());
  // Key: (source state or kTop for the sink family, last letter; empty = none yet).
  using Key = std::pair<StateId, Letter>;
  std::map<Key, StateId> ids;
  std::deque<Key> queue;
  auto get = [&](StateId q, const Letter& last) {
    Key key{q, last};
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    const bool final = q != kTop && a.is_final(q);
    const StateId id = c.add_state(state_name(ids.size()), false, final);
    ids.emplace(key, id);
    queue.push_back(std::move(key));
    return id;
  };
  const auto inits = a.initials();
  c.set_initial(get(inits.empty() ? kTop : inits.front(), Letter{}), true);
  while (!queue.empty()) {
    Key key = std::move(queue.front());
    queue.pop_front();
    const StateId src = ids.at(key);
    const auto& [q, last] = key;
    for (const auto& l : admissible_letters(last.empty() ? nullptr : &last, m, d)) {
      StateId next = kTop;
      if (q != kTop) {
        auto moves = a.out(q, l);
        if (!moves.empty()) next = moves.front().target;
      }
      c.add_transition(src, l, get(next, l));
    }
  }
  return c;
}

Sfa complement(const Sfa& a) {
  if (!is_complete(a))
    throw NotCompleteError("complement: input automaton must be deterministic and complete (run `complete` first)");
  Sfa c(a.vars(), a.domain());
  for (StateId q = 0; q < a.state_count(); ++q) c.add_state(a.name(q), a.is_initial(q), !a.is_final(q));
  for (StateId q = 0; q < a.state_count(); ++q)
    for (const auto& t : a.out(q)) c.add_transition(q, t.letter, t.target);
  return c;
}

Sfa difference(const Sfa& a, const Sfa& b) {
  require_compatible(a, b, "difference");
  return intersect(a, complement(complete(determinize(b))));
}

Sfa rename_vars(const Sfa& a, const std::map<std::string, std::string>& mapping) {
  std::vector<std::string> names;
  for (const auto& x : a.vars().names()) {
    auto it = mapping.find(x);
    if (it == mapping.end()) throw NonInjectiveError("rename: no target for variable '" + x + "'");
    names.push_back(it->second);
  }
  auto sorted = names;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw NonInjectiveError("rename: mapping is not injective");
  Sfa r(VarSet(std::move(names)), a.domain());
  for (StateId q = 0; q < a.state_count(); ++q) r.add_state(a.name(q), a.is_initial(q), a.is_final(q));
  for (StateId q = 0; q < a.state_count(); ++q)
    for (const auto& t : a.out(q)) r.add_transition(q, t.letter, t.target);
  return r;
}

Sfa permute_vars(const Sfa& a, const VarSet& order) {
  if (order.size() != a.vars().size()) throw VarMismatchError("permute: variable sets differ");
  std::vector<std::size_t> source(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto idx = a.vars().index(order.name(i));
    if (!idx) throw VarMismatchError("permute: unknown variable '" + order.name(i) + "'");
    source[i] = *idx;
  }
  Sfa r(order, a.domain());
  for (StateId q = 0; q < a.state_count(); ++q) r.add_state(a.name(q), a.is_initial(q), a.is_final(q));
  Letter l(order.size());
  for (StateId q = 0; q < a.state_count(); ++q)
    for (const auto& t : a.out(q)) {
      for (std::size_t i = 0; i < order.size(); ++i) l[i] = t.letter[source[i]];
      r.add_transition(q, l, t.target);
    }
  return r;
}

Sfa project_out(const Sfa& a, const std::vector<std::size_t>& coords) {
  std::vector<char> drop(a.vars().size(), 0);
  for (auto c : coords) drop.at(c) = 1;
  std::vector<std::size_t> keep;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < a.vars().size(); ++i)
    if (!drop[i]) {
      keep.push_back(i);
      names.push_back(a.vars().name(i));
    }
  if (keep.empty()) throw VarMismatchError("project: at least one coordinate must remain");

  auto project = [&](const Letter& l) {
    Letter p(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) p[i] = l[keep[i]];
    return p;
  };
  const std::size_t n = a.state_count();
  // epsilon closure over transitions whose kept part is all-#
  std::vector<std::vector<StateId>> closure(n);
  for (StateId q = 0; q < n; ++q) {
    std::vector<char> seen(n, 0);
    std::vector<StateId> stack{q};
    seen[q] = 1;
    while (!stack.empty()) {
      StateId s = stack.back();
      stack.pop_back();
      closure[q].push_back(s);
      for (const auto& t : a.out(s))
        if (!seen[t.target] && is_all_term(project(t.letter))) {
          seen[t.target] = 1;
          stack.push_back(t.target);
        }
    }
  }
  Sfa r(VarSet(std::move(names)), a.domain());
  for (StateId q = 0; q < n; ++q) r.add_state(a.name(q), a.is_initial(q), any_final(a, closure[q]));
  for (StateId q = 0; q < n; ++q)
    for (StateId s : closure[q])
      for (const auto& t : a.out(s)) {
        Letter p = project(t.letter);
        if (!is_all_term(p)) r.add_transition(q, p, t.target);
      }
  return r;
}

Sfa async_product(std::span<const Sfa> components) {
  if (components.empty()) throw InvalidModelError("product needs at least one component");
  std::vector<std::string> names;
  std::vector<std::size_t> offset;
  for (const auto& c : components) {
    if (!(c.domain() == components.front().domain()))
      throw VarMismatchError("product: components must share the domain");
    offset.push_back(names.size());
    for (const auto& x : c.vars().names()) {
      if (std::find(names.begin(), names.end(), x) != names.end())
        throw VarOverlapError("product: variable '" + x + "' occurs in more than one component");
      names.push_back(x);
    }
  }
  const std::size_t k = components.size();
  const std::size_t width = names.size();
  Sfa r(VarSet(names), components.front().domain());

  auto is_final_tuple = [&](const std::vector<StateId>& tup) {
    for (std::size_t i = 0; i < k; ++i)
      if (tup[i] != kTop && !components[i].is_final(tup[i])) return false;
    return true;
  };
  std::unordered_map<std::vector<StateId>, StateId, VectorHash> ids;
  std::deque<std::vector<StateId>> queue;
  auto get = [&](const std::vector<StateId>& tup) {
    auto it = ids.find(tup);
    if (it != ids.end()) return it->second;
    const StateId id = r.add_state(state_name(ids.size()), false, is_final_tuple(tup));
    ids.emplace(tup, id);
    queue.push_back(tup);
    return id;
  };

  // initial tuples: cartesian product of initial sets
  std::vector<std::vector<StateId>> inits;
  for (const auto& c : components) inits.push_back(c.initials());
  if (std::none_of(inits.begin(), inits.end(), [](const auto& v) { return v.empty(); })) {
    std::vector<std::size_t> idx(k, 0);
    std::vector<StateId> tup(k);
    while (true) {
      for (std::size_t i = 0; i < k; ++i) tup[i] = inits[i][idx[i]];
      r.set_initial(get(tup), true);
      std::size_t i = k;
      bool done = true;
      while (i > 0) {
        --i;
        if (++idx[i] < inits[i].size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
      if (done) break;
    }
  }

  while (!queue.empty()) {
    std::vector<StateId> tup = std::move(queue.front());
    queue.pop_front();
    const StateId src = ids.at(tup);
    std::vector<std::vector<Move>> moves(k);
    bool stuck = false;
    for (std::size_t i = 0; i < k; ++i) {
      if (tup[i] != kTop)
        for (const auto& t : components[i].out(tup[i])) moves[i].push_back({&t.letter, t.target});
      if (tup[i] == kTop || components[i].is_final(tup[i])) moves[i].push_back({nullptr, kTop});
      if (moves[i].empty()) stuck = true;
    }
    if (stuck) continue;
    std::vector<std::size_t> idx(k, 0);
    Letter joint(width);
    std::vector<StateId> next(k);
    while (true) {
      bool all_term = true;
      for (std::size_t i = 0; i < k; ++i) {
        const Move& mv = moves[i][idx[i]];
        const std::size_t w = components[i].vars().size();
        for (std::size_t x = 0; x < w; ++x) joint[offset[i] + x] = mv.letter ? (*mv.letter)[x] : kTerm;
        if (mv.letter) all_term = false;
        next[i] = mv.target;
      }
      if (!all_term) r.add_transition(src, joint, get(next));
      std::size_t i = k;
      bool done = true;
      while (i > 0) {
        --i;
        if (++idx[i] < moves[i].size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
      if (done) break;
    }
  }
  if (r.state_count() == 0) return empty_sfa(r.vars(), r.domain());
  return r;
}

std::string coordinate_name(const std::string& var, const std::string& trace_var) { return var + "_" + trace_var; }

Sfa self_compose(const Sfa& a, const std::vector<std::string>& trace_vars) {
  if (trace_vars.empty()) throw InvalidModelError("self-composition needs at least one trace variable");
  std::vector<Sfa> copies;
  copies.reserve(trace_vars.size());
  for (const auto& pi : trace_vars) {
    std::map<std::string, std::string> mapping;
    for (const auto& x : a.vars().names()) mapping[x] = coordinate_name(x, pi);
    copies.push_back(rename_vars(a, mapping));
  }
  if (copies.size() == 1) return std::move(copies.front());
  return async_product(copies);
}

}  // namespace hnamc
