#include "hnamc/kripke.hpp"

#include <algorithm>
#include <deque>

#include "hnamc/errors.hpp"

namespace hnamc {

Kripke::Kripke(VarSet vars, Domain domain) : vars_(std::move(vars)), domain_(std::move(domain)) {}

WorldId Kripke::add_world(std::string name, SegmentValuation valuation) {
  if (valuation.size() != vars_.size())
    throw InvalidModelError("world '" + name + "' does not value every variable");
  for (Value v : valuation)
    if (v >= domain_.size()) throw InvalidModelError("world '" + name + "' has a value outside the domain");
  if (find_world(name)) throw InvalidModelError("duplicate world '" + name + "'");
  names_.push_back(std::move(name));
  valuation_.push_back(std::move(valuation));
  succ_.emplace_back();
  return static_cast<WorldId>(names_.size() - 1);
}

void Kripke::add_edge(WorldId from, WorldId to) {
  if (from >= world_count() || to >= world_count()) throw InvalidModelError("edge endpoint out of range");
  auto& s = succ_[from];
  auto it = std::lower_bound(s.begin(), s.end(), to);
  if (it == s.end() || *it != to) s.insert(it, to);
}

std::optional<WorldId> Kripke::find_world(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<WorldId>(i);
  return std::nullopt;
}

bool Kripke::has_edge(WorldId from, WorldId to) const {
  const auto& s = succ_.at(from);
  return std::binary_search(s.begin(), s.end(), to);
}

std::size_t Kripke::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : succ_) n += s.size();
  return n;
}

bool Kripke::is_acyclic() const {
  // Kahn's algorithm
  std::vector<std::size_t> indeg(world_count(), 0);
  for (const auto& s : succ_)
    for (WorldId t : s) ++indeg[t];
  std::vector<WorldId> ready;
  for (WorldId w = 0; w < world_count(); ++w)
    if (indeg[w] == 0) ready.push_back(w);
  std::size_t removed = 0;
  while (!ready.empty()) {
    WorldId w = ready.back();
    ready.pop_back();
    ++removed;
    for (WorldId t : succ_[w])
      if (--indeg[t] == 0) ready.push_back(t);
  }
  return removed == world_count();
}

std::optional<ActionId> ActionLabeling::find_action(std::string_view name) const {
  for (std::size_t i = 0; i < actions.size(); ++i)
    if (actions[i] == name) return static_cast<ActionId>(i);
  return std::nullopt;
}

const std::vector<ActionId>& ActionLabeling::label(WorldId from, WorldId to) const {
  static const std::vector<ActionId> eps{kEpsilon};
  auto it = labels.find({from, to});
  return it == labels.end() ? eps : it->second;
}

bool ActionLabeling::has_label(WorldId from, WorldId to, ActionId a) const {
  const auto& l = label(from, to);
  return std::binary_search(l.begin(), l.end(), a);
}

std::string ActionLabeling::action_name(ActionId a) const { return a == kEpsilon ? "eps" : actions.at(a); }

void validate(const OpenKripke& ok) {
  if (ok.entries.empty()) throw InvalidModelError("open structure needs at least one entry world");
  if (ok.exits.empty()) throw InvalidModelError("open structure needs at least one exit world");
  for (WorldId w : ok.entries)
    if (w >= ok.k.world_count()) throw InvalidModelError("entry world out of range");
  for (WorldId w : ok.exits)
    if (w >= ok.k.world_count()) throw InvalidModelError("exit world out of range");
}

void validate(const PointedLabeledKripke& k) {
  if (k.initial >= k.k.world_count()) throw InvalidModelError("initial world out of range");
  for (const auto& [edge, lbl] : k.labeling.labels) {
    if (edge.first >= k.k.world_count() || !k.k.has_edge(edge.first, edge.second))
      throw InvalidModelError("label attached to a missing edge");
    if (lbl.empty()) throw InvalidModelError("edge " + k.k.name(edge.first) + " -> " + k.k.name(edge.second) +
                                             " has an empty label set");
    for (ActionId a : lbl)
      if (a != kEpsilon && a >= k.labeling.actions.size()) throw InvalidModelError("label names an unknown action");
  }
}

std::set<std::vector<WorldId>> paths(const OpenKripke& ok, std::size_t max_len) {
  std::set<std::vector<WorldId>> out;
  std::vector<char> is_exit(ok.k.world_count(), 0);
  for (WorldId w : ok.exits) is_exit.at(w) = 1;
  std::vector<WorldId> path;
  auto walk = [&](auto&& self, WorldId w) -> void {
    path.push_back(w);
    if (is_exit[w]) out.insert(path);
    if (path.size() < max_len)
      for (WorldId t : ok.k.successors(w)) self(self, t);
    path.pop_back();
  };
  if (max_len == 0) return out;
  std::set<WorldId> entries(ok.entries.begin(), ok.entries.end());
  for (WorldId e : entries) walk(walk, e);
  return out;
}

SegmentSet generated_segments(const OpenKripke& ok, std::size_t max_len, SegmentMode mode) {
  const std::size_t m = ok.k.vars().size();
  auto spell = [&](const std::vector<WorldId>& p) {
    ZippedSegment z;
    z.reserve(p.size());
    for (WorldId w : p) z.push_back(ok.k.valuation(w));
    return stutter_reduce(unzip(z, m));
  };
  SegmentSet joint;
  for (const auto& p : paths(ok, max_len)) joint.insert(spell(p));
  if (mode == SegmentMode::Joint || joint.empty()) return joint;

  std::vector<std::set<ValueString>> per_var(m);
  for (const auto& tau : joint)
    for (std::size_t x = 0; x < m; ++x) per_var[x].insert(tau.strings[x]);
  SegmentSet out;
  UnzippedSegment cur = UnzippedSegment::empty(m);
  auto combine = [&](auto&& self, std::size_t x) -> void {
    if (x == m) {
      out.insert(cur);
      return;
    }
    for (const auto& s : per_var[x]) {
      cur.strings[x] = s;
      self(self, x + 1);
    }
  };
  combine(combine, 0);
  return out;
}

namespace {

// Worlds reachable from w along edges that keep variable x at V(w,x), w included.
std::vector<WorldId> constant_reach(const Kripke& k, WorldId w, std::size_t x) {
  const Value v = k.value(w, x);
  std::vector<char> seen(k.world_count(), 0);
  std::vector<WorldId> stack{w}, out;
  seen[w] = 1;
  while (!stack.empty()) {
    WorldId u = stack.back();
    stack.pop_back();
    out.push_back(u);
    for (WorldId t : k.successors(u))
      if (!seen[t] && k.value(t, x) == v) {
        seen[t] = 1;
        stack.push_back(t);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Block automaton of one variable. State w stands for "the current block of equal
// x-values was entered at world w"; a transition reads the value of the next block.
Sfa block_automaton(const OpenKripke& ok, std::size_t x) {
  const Kripke& k = ok.k;
  Sfa b(VarSet({k.vars().name(x)}), k.domain());
  const StateId start = b.add_state("start", true, false);
  std::vector<char> is_exit(k.world_count(), 0);
  for (WorldId w : ok.exits) is_exit[w] = 1;
  std::vector<std::vector<WorldId>> reach(k.world_count());
  for (WorldId w = 0; w < k.world_count(); ++w) {
    reach[w] = constant_reach(k, w, x);
    const bool final = std::any_of(reach[w].begin(), reach[w].end(), [&](WorldId u) { return is_exit[u]; });
    b.add_state(k.name(w), false, final);
  }
  auto state_of = [&](WorldId w) { return static_cast<StateId>(w + 1); };
  for (WorldId e : ok.entries) b.add_transition(start, Letter{k.value(e, x)}, state_of(e));
  for (WorldId w = 0; w < k.world_count(); ++w)
    for (WorldId u : reach[w])
      for (WorldId t : k.successors(u))
        if (k.value(t, x) != k.value(w, x)) b.add_transition(state_of(w), Letter{k.value(t, x)}, state_of(t));
  return b;
}

}  // namespace

// The block function of the textbook construction reads one tuple of world pointers
// per letter; here each variable gets its own block automaton and the asynchronous
// product lets the variables advance and terminate independently. The language is
// the Product-mode segment set.
Sfa to_sfa(const OpenKripke& ok) {
  validate(ok);
  std::vector<Sfa> blocks;
  for (std::size_t x = 0; x < ok.k.vars().size(); ++x) blocks.push_back(block_automaton(ok, x));
  if (blocks.size() == 1) return std::move(blocks.front());
  return async_product(blocks);
}

}  // namespace hnamc
