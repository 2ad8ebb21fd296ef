#include "hnamc/hna.hpp"

#include <algorithm>
#include <deque>

#include "hnamc/errors.hpp"

namespace hnamc {

Hna::Hna(std::vector<std::string> actions) : actions_(std::move(actions)) {
  std::sort(actions_.begin(), actions_.end());
  actions_.erase(std::unique(actions_.begin(), actions_.end()), actions_.end());
}

NodeId Hna::add_node(std::string name, Formula label) {
  if (find_node(name)) throw InvalidModelError("duplicate node '" + name + "'");
  names_.push_back(std::move(name));
  labels_.push_back(std::move(label));
  trans_.emplace_back(actions_.size());
  return static_cast<NodeId>(names_.size() - 1);
}

std::optional<std::size_t> Hna::action_index(std::string_view a) const {
  auto it = std::lower_bound(actions_.begin(), actions_.end(), a);
  if (it == actions_.end() || *it != a) return std::nullopt;
  return static_cast<std::size_t>(it - actions_.begin());
}

void Hna::set_transition(NodeId from, const std::string& action, NodeId to) {
  auto a = action_index(action);
  if (!a) throw UnknownActionError("unknown action '" + action + "'");
  if (from >= node_count() || to >= node_count()) throw InvalidModelError("transition endpoint out of range");
  trans_[from][*a] = to;
}

std::optional<NodeId> Hna::find_node(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<NodeId>(i);
  return std::nullopt;
}

std::optional<NodeId> Hna::next(NodeId q, std::string_view action) const {
  auto a = action_index(action);
  if (!a) throw UnknownActionError("unknown action '" + std::string(action) + "'");
  return trans_.at(q)[*a];
}

std::size_t Hna::transition_count() const {
  std::size_t n = 0;
  for (const auto& row : trans_)
    for (const auto& t : row) n += t.has_value();
  return n;
}

std::vector<HnaIssue> validate(const Hna& h) {
  std::vector<HnaIssue> issues;
  if (h.node_count() == 0) {
    issues.push_back({HnaIssue::Kind::NoNodes, false, "automaton has no nodes"});
    return issues;
  }
  for (NodeId q = 0; q < h.node_count(); ++q) {
    for (const auto& a : h.actions())
      if (!h.next(q, a))
        issues.push_back({HnaIssue::Kind::MissingTransition, false,
                          "node " + h.name(q) + " has no transition on action " + a});
    if (!is_closed(h.label(q)))
      issues.push_back({HnaIssue::Kind::OpenFormula, false, "label of node " + h.name(q) + " is not closed"});
  }
  std::vector<char> seen(h.node_count(), 0);
  std::deque<NodeId> queue{h.initial()};
  seen[h.initial()] = 1;
  while (!queue.empty()) {
    NodeId q = queue.front();
    queue.pop_front();
    for (const auto& a : h.actions())
      if (auto t = h.next(q, a); t && !seen[*t]) {
        seen[*t] = 1;
        queue.push_back(*t);
      }
  }
  for (NodeId q = 0; q < h.node_count(); ++q)
    if (!seen[q]) issues.push_back({HnaIssue::Kind::UnreachableNode, true, "node " + h.name(q) + " is unreachable"});
  return issues;
}

std::vector<NodeId> run(const Hna& h, const std::vector<std::string>& p) {
  std::vector<NodeId> out{h.initial()};
  for (const auto& a : p) {
    auto t = h.next(out.back(), a);
    if (!t) throw InvalidModelError("node " + h.name(out.back()) + " has no transition on action " + a);
    out.push_back(*t);
  }
  return out;
}

std::vector<std::string> project_actions(const ActionLabeledTrace& rho) {
  std::vector<std::string> out;
  for (const auto& s : rho.steps)
    if (s.action) out.push_back(*s.action);
  return out;
}

std::optional<std::vector<std::set<ZippedSegment>>> slice_trace_set(const std::vector<ActionLabeledTrace>& r,
                                                                    const std::vector<std::string>& p) {
  std::vector<std::set<ZippedSegment>> slices(p.size());
  bool any = false;
  for (const auto& rho : r) {
    std::vector<ZippedSegment> cut;
    ZippedSegment current;
    for (const auto& s : rho.steps) {
      if (cut.size() == p.size()) break;
      current.push_back(s.valuation);
      if (!s.action) continue;
      if (*s.action != p[cut.size()]) break;
      cut.push_back(std::move(current));
      current.clear();
    }
    if (cut.size() != p.size()) continue;
    any = true;
    for (std::size_t i = 0; i < p.size(); ++i) slices[i].insert(std::move(cut[i]));
  }
  if (!any) return std::nullopt;
  return slices;
}

HnaVerdict oracle_accepts(const std::vector<ActionLabeledTrace>& r, const Hna& h, const VarSet& vars,
                          std::size_t max_p) {
  HnaVerdict verdict;
  std::vector<std::vector<std::string>> layer{{}};
  for (std::size_t len = 1; len <= max_p; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& p : layer)
      for (const auto& a : h.actions()) {
        auto q = p;
        q.push_back(a);
        auto slices = slice_trace_set(r, q);
        if (!slices) continue;  // extensions of q have no traces either
        const auto nodes = run(h, q);
        for (std::size_t i = 0; i < q.size(); ++i) {
          std::vector<UnzippedSegment> model;
          for (const auto& seg : (*slices)[i]) model.push_back(stutter_reduce(unzip(seg, vars.size())));
          if (!evaluate(vars, model, h.label(nodes[i]))) {
            verdict.accepted = false;
            verdict.failing_p = q;
            verdict.slice = i;
            verdict.node = nodes[i];
            return verdict;
          }
        }
        next.push_back(std::move(q));
      }
    layer = std::move(next);
  }
  return verdict;
}

}  // namespace hnamc
