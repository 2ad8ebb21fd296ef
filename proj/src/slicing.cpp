#include "hnamc/slicing.hpp"

#include <algorithm>
#include <deque>
#include <exception>
#include <set>
#include <tuple>


#include "hnamc/errors.hpp"

namespace hnamc {

namespace {

bool silent(const ActionLabeling& l, WorldId from, WorldId to) { return l.has_label(from, to, kEpsilon); }

std::vector<char> silent_reach(const PointedLabeledKripke& k, const std::vector<WorldId>& from) {
  std::vector<char> seen(k.k.world_count(), 0);
  std::vector<WorldId> stack;
  for (WorldId w : from)
    if (!seen[w]) {
      seen[w] = 1;
      stack.push_back(w);
    }
  while (!stack.empty()) {
    WorldId w = stack.back();
    stack.pop_back();
    for (WorldId t : k.k.successors(w))
      if (!seen[t] && silent(k.labeling, w, t)) {
        seen[t] = 1;
        stack.push_back(t);
      }
  }
  return seen;
}

ActionId require_action(const PointedLabeledKripke& k, const std::string& action) {
  auto a = k.labeling.find_action(action);
  if (!a) throw UnknownActionError("unknown action '" + action + "'");
  return *a;
}

}  // namespace

std::optional<SliceStep> slice_step(const PointedLabeledKripke& k, const std::vector<WorldId>& entries,
                                    const std::string& action) {
  const ActionId a = require_action(k, action);
  const std::size_t n = k.k.world_count();
  const auto forward = silent_reach(k, entries);
  std::vector<char> source(n, 0);
  std::vector<WorldId> sources, next;
  for (WorldId w = 0; w < n; ++w) {
    if (!forward[w]) continue;
    for (WorldId t : k.k.successors(w))
      if (k.labeling.has_label(w, t, a)) {
        source[w] = 1;
        next.push_back(t);
      }
    if (source[w]) sources.push_back(w);
  }
  if (sources.empty()) return std::nullopt;
  std::sort(next.begin(), next.end());
  next.erase(std::unique(next.begin(), next.end()), next.end());

  // backward silent reachability of the sources, inside the forward region
  std::vector<char> backward(n, 0);
  std::vector<WorldId> stack = sources;
  for (WorldId w : sources) backward[w] = 1;
  std::vector<std::vector<WorldId>> pred(n);
  for (WorldId w = 0; w < n; ++w)
    if (forward[w])
      for (WorldId t : k.k.successors(w))
        if (forward[t] && silent(k.labeling, w, t)) pred[t].push_back(w);
  while (!stack.empty()) {
    WorldId w = stack.back();
    stack.pop_back();
    for (WorldId p : pred[w])
      if (!backward[p]) {
        backward[p] = 1;
        stack.push_back(p);
      }
  }

  SliceStep step;
  SliceState& s = step.state;
  s.entry_worlds = entries;
  std::sort(s.entry_worlds.begin(), s.entry_worlds.end());
  s.entry_worlds.erase(std::unique(s.entry_worlds.begin(), s.entry_worlds.end()), s.entry_worlds.end());
  s.action = a;
  s.substructure.k = Kripke(k.k.vars(), k.k.domain());
  std::vector<WorldId> local(n, kEpsilon);
  for (WorldId w = 0; w < n; ++w)
    if (forward[w] && backward[w]) {
      local[w] = s.substructure.k.add_world(k.k.name(w), k.k.valuation(w));
      s.worlds.push_back(w);
    }
  for (WorldId w : s.worlds)
    for (WorldId t : k.k.successors(w))
      if (local[t] != kEpsilon && silent(k.labeling, w, t)) s.substructure.k.add_edge(local[w], local[t]);
  for (WorldId e : s.entry_worlds)
    if (local[e] != kEpsilon) s.substructure.entries.push_back(local[e]);
  for (WorldId w : sources) s.substructure.exits.push_back(local[w]);
  step.next_entries = std::move(next);
  return step;
}

SliceAutomaton build_slice_automaton(const PointedLabeledKripke& k) {
  validate(k);
  SliceAutomaton sa;
  std::map<std::vector<WorldId>, std::size_t> ids;
  sa.states.push_back({k.initial});
  ids[{k.initial}] = 0;
  for (std::size_t i = 0; i < sa.states.size(); ++i)
    for (ActionId a = 0; a < k.labeling.actions.size(); ++a) {
      auto step = slice_step(k, sa.states[i], k.labeling.actions[a]);
      if (!step) continue;
      auto [it, fresh] = ids.try_emplace(step->next_entries, sa.states.size());
      if (fresh) sa.states.push_back(step->next_entries);
      sa.next[{i, a}] = it->second;
    }
  return sa;
}

std::set<std::vector<WorldId>> slice_paths(const SliceState& s, std::size_t max_len) {
  std::set<std::vector<WorldId>> out;
  for (const auto& p : paths(s.substructure, max_len)) {
    std::vector<WorldId> q;
    for (WorldId w : p) q.push_back(s.worlds[w]);
    out.insert(std::move(q));
  }
  return out;
}

bool has_silent_cycle(const PointedLabeledKripke& k) {
  // reachable worlds, then a colouring DFS over silent edges
  const std::size_t n = k.k.world_count();
  std::vector<char> reach(n, 0);
  std::vector<WorldId> stack{k.initial};
  reach[k.initial] = 1;
  while (!stack.empty()) {
    WorldId w = stack.back();
    stack.pop_back();
    for (WorldId t : k.k.successors(w))
      if (!reach[t]) {
        reach[t] = 1;
        stack.push_back(t);
      }
  }
  std::vector<char> colour(n, 0);
  auto dfs = [&](auto&& self, WorldId w) -> bool {
    colour[w] = 1;
    for (WorldId t : k.k.successors(w)) {
      if (!silent(k.labeling, w, t)) continue;
      if (colour[t] == 1) return true;
      if (colour[t] == 0 && self(self, t)) return true;
    }
    colour[w] = 2;
    return false;
  };
  for (WorldId w = 0; w < n; ++w)
    if (reach[w] && colour[w] == 0 && dfs(dfs, w)) return true;
  return false;
}

namespace {

struct OkKey {
  std::vector<WorldId> worlds;
  std::vector<WorldId> entries;
  std::vector<WorldId> exits;
  NodeId node;

  auto operator<=>(const OkKey&) const = default;
};

struct Pending {
  std::size_t from;
  ActionId action;
  SliceStep step;
  OkKey key;
};

OkKey key_of(const SliceState& s, NodeId node) {
  OkKey key{s.worlds, {}, {}, node};
  for (WorldId e : s.substructure.entries) key.entries.push_back(s.worlds[e]);
  for (WorldId e : s.substructure.exits) key.exits.push_back(s.worlds[e]);
  return key;
}

// Breadth-first Join exploration shared by build_join and model_check. Each layer's
// slice formula checks are independent, so they run in one OpenMP loop when asked.
class JoinExplorer {
 public:
  JoinExplorer(const Hna& h, const PointedLabeledKripke& k, ExecutionPolicy policy)
      : h_(h), k_(k), policy_(policy) {
    validate(k_);
    for (const auto& a : k_.labeling.actions)
      if (!h_.action_index(a)) throw UnknownActionError("action '" + a + "' is not an action of the automaton");
    for (NodeId q = 0; q < h_.node_count(); ++q) {
      if (!is_closed(h_.label(q))) throw OpenFormulaError("label of node " + h_.name(q) + " is not closed");
      check_program_vars(h_.label(q), k_.k.vars());
    }
    if (h_.node_count() == 0) throw InvalidModelError("hypernode automaton has no nodes");
  }

  // Returns false when the search stopped early at a violation.
  bool explore(bool stop_at_violation, std::optional<std::size_t> max_depth, Join& join, ModelCheckResult& result) {
    std::map<std::pair<std::size_t, NodeId>, std::size_t> ids;
    auto get = [&](std::size_t slice, NodeId node) {
      auto [it, fresh] = ids.try_emplace({slice, node}, join.states.size());
      if (fresh) join.states.push_back({slice, node});
      return it->second;
    };
    std::map<std::vector<WorldId>, std::size_t> slice_ids;
    auto slice_id = [&](const std::vector<WorldId>& entries) {
      auto [it, fresh] = slice_ids.try_emplace(entries, join.slices.states.size());
      if (fresh) join.slices.states.push_back(entries);
      return it->second;
    };
    std::vector<std::size_t> layer{get(slice_id({k_.initial}), h_.initial())};
    std::size_t depth = 0;
    bool capped = false;
    while (!layer.empty()) {
      std::vector<Pending> pending;
      for (std::size_t s : layer) {
        const std::size_t slice = join.states[s].slice_state;
        for (ActionId a = 0; a < k_.labeling.actions.size(); ++a) {
          auto step = slice_step(k_, join.slices.states[slice], k_.labeling.actions[a]);
          if (!step) continue;
          OkKey key = key_of(step->state, join.states[s].node);
          pending.push_back({s, a, std::move(*step), std::move(key)});
        }
      }
      if (max_depth && depth >= *max_depth) {
        capped = !pending.empty();
        break;
      }
      compute_flags(pending);
      std::vector<std::size_t> next_layer;
      for (auto& p : pending) {
        const bool ok = memo_.at(p.key).holds;
        const NodeId node = join.states[p.from].node;
        const auto target = h_.next(node, k_.labeling.actions[p.action]);
        if (!target) throw InvalidModelError("node " + h_.name(node) + " has no transition on action " +
                                             k_.labeling.actions[p.action]);
        const std::size_t before = join.states.size();
        const std::size_t from_slice = join.states[p.from].slice_state;
        const std::size_t to_slice = slice_id(p.step.next_entries);
        join.slices.next[{from_slice, p.action}] = to_slice;
        const std::size_t to = get(to_slice, *target);
        join.edges.push_back({p.from, p.action, to, ok});
        if (to == before) next_layer.push_back(to);
        if (!ok && result.verdict != Verdict::Violated) {
          result.verdict = Verdict::Violated;
          result.witness = path_to(join, p.from);
          result.witness.push_back(k_.labeling.actions[p.action]);
          result.node = node;
          result.slice = std::move(p.step.state);
          result.formula = memo_.at(p.key);
          if (stop_at_violation) {
            result.explored = join.states.size();
            return false;
          }
        }
      }
      layer = std::move(next_layer);
      ++depth;
    }
    result.explored = join.states.size();
    if (capped && result.verdict == Verdict::Holds) result.verdict = Verdict::Unknown;
    return true;
  }

 private:
  std::vector<std::string> path_to(const Join& join, std::size_t state) const {
    // edges are recorded in discovery order, so the first edge into a state is a BFS tree edge
    std::vector<std::string> rev;
    while (state != 0) {
      for (const auto& e : join.edges)
        if (e.to == state && e.from != state) {
          rev.push_back(k_.labeling.actions[e.action]);
          state = e.from;
          break;
        }
    }
    return {rev.rbegin(), rev.rend()};
  }

  void compute_flags(const std::vector<Pending>& pending) {
    std::vector<const Pending*> todo;
    std::set<OkKey> queued;
    for (const auto& p : pending)
      if (!memo_.count(p.key) && queued.insert(p.key).second) todo.push_back(&p);
    std::vector<FormulaVerdict> results(todo.size());
    const auto n = static_cast<std::ptrdiff_t>(todo.size());
    if (policy_ == ExecutionPolicy::Parallel) {
      std::vector<std::exception_ptr> errors(todo.size());
#pragma omp parallel for schedule(dynamic)
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
          results[i] = check(*todo[i]);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    } else {
      for (std::ptrdiff_t i = 0; i < n; ++i) results[i] = check(*todo[i]);
    }
    for (std::size_t i = 0; i < todo.size(); ++i) memo_.emplace(todo[i]->key, std::move(results[i]));
  }

  FormulaVerdict check(const Pending& p) const {
    return check_formula_against_open_kripke(p.step.state.substructure, h_.label(p.key.node));
  }

  const Hna& h_;
  const PointedLabeledKripke& k_;
  ExecutionPolicy policy_;
  std::map<OkKey, FormulaVerdict> memo_;
};

}  // namespace

Join build_join(const Hna& h, const PointedLabeledKripke& k, ExecutionPolicy policy) {
  Join join;
  ModelCheckResult scratch;
  JoinExplorer(h, k, policy).explore(false, std::nullopt, join, scratch);
  return join;
}

ModelCheckResult model_check(const Hna& h, const PointedLabeledKripke& k, const ModelCheckOptions& options) {
  Join join;
  ModelCheckResult result;
  JoinExplorer(h, k, options.policy).explore(true, options.max_depth, join, result);
  return result;
}

}  // namespace hnamc
