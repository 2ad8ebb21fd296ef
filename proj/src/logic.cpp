#include "hnamc/logic.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>

#include "hnamc/errors.hpp"

namespace hnamc {

Formula Formula::exists(std::string trace_var, Formula body) {
  return Formula(std::make_shared<const Node>(Node{Kind::Exists, std::move(trace_var), {}, {std::move(body)}}));
}

Formula Formula::forall(std::string trace_var, Formula body) {
  return Formula(std::make_shared<const Node>(Node{Kind::Forall, std::move(trace_var), {}, {std::move(body)}}));
}

Formula Formula::negation(Formula body) {
  return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, {}, {std::move(body)}}));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::And, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::disjunction(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(Node{Kind::Or, {}, {}, {std::move(lhs), std::move(rhs)}}));
}

Formula Formula::atom(std::string lhs_var, std::string lhs_trace, std::string rhs_var, std::string rhs_trace) {
  hnamc::Atom a{std::move(lhs_var), std::move(lhs_trace), std::move(rhs_var), std::move(rhs_trace)};
  return Formula(std::make_shared<const Node>(Node{Kind::Atom, {}, std::move(a), {}}));
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Atom:
      return atom() == other.atom();
    case Kind::Exists:
    case Kind::Forall:
      return trace_var() == other.trace_var() && body() == other.body();
    case Kind::Not:
      return body() == other.body();
    case Kind::And:
    case Kind::Or:
      return lhs() == other.lhs() && rhs() == other.rhs();
  }
  return false;
}

namespace {

void collect_free(const Formula& phi, std::set<std::string>& bound, std::set<std::string>& out) {
  switch (phi.kind()) {
    case Formula::Kind::Atom:
      if (!bound.count(phi.atom().lhs_trace)) out.insert(phi.atom().lhs_trace);
      if (!bound.count(phi.atom().rhs_trace)) out.insert(phi.atom().rhs_trace);
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      const bool fresh = bound.insert(phi.trace_var()).second;
      collect_free(phi.body(), bound, out);
      if (fresh) bound.erase(phi.trace_var());
      return;
    }
    case Formula::Kind::Not:
      collect_free(phi.body(), bound, out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_free(phi.lhs(), bound, out);
      collect_free(phi.rhs(), bound, out);
      return;
  }
}

void collect_trace_names(const Formula& phi, std::set<std::string>& out) {
  switch (phi.kind()) {
    case Formula::Kind::Atom:
      out.insert(phi.atom().lhs_trace);
      out.insert(phi.atom().rhs_trace);
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      out.insert(phi.trace_var());
      collect_trace_names(phi.body(), out);
      return;
    case Formula::Kind::Not:
      collect_trace_names(phi.body(), out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
      collect_trace_names(phi.lhs(), out);
      collect_trace_names(phi.rhs(), out);
      return;
  }
}

}  // namespace

std::set<std::string> free_trace_vars(const Formula& phi) {
  std::set<std::string> bound, out;
  collect_free(phi, bound, out);
  return out;
}

bool is_closed(const Formula& phi) { return free_trace_vars(phi).empty(); }

Formula rectify(const Formula& phi) {
  if (!is_closed(phi)) throw OpenFormulaError("formula is not closed: free trace variables present");
  std::set<std::string> taken;
  collect_trace_names(phi, taken);
  std::set<std::string> used_binders;

  auto fresh_name = [&](const std::string& base) {
    for (int k = 1;; ++k) {
      std::string candidate = base + "_" + std::to_string(k);
      if (!taken.count(candidate)) {
        taken.insert(candidate);
        return candidate;
      }
    }
  };

  // `renaming` maps source binder names to their (possibly renamed) targets in scope.
  std::function<Formula(const Formula&, const std::map<std::string, std::string>&)> go =
      [&](const Formula& f, const std::map<std::string, std::string>& renaming) -> Formula {
    switch (f.kind()) {
      case Formula::Kind::Atom: {
        const auto& a = f.atom();
        return Formula::atom(a.lhs_var, renaming.at(a.lhs_trace), a.rhs_var, renaming.at(a.rhs_trace));
      }
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        std::string target = f.trace_var();
        if (!used_binders.insert(target).second) {
          target = fresh_name(f.trace_var());
          used_binders.insert(target);
        }
        auto inner = renaming;
        inner[f.trace_var()] = target;
        Formula body = go(f.body(), inner);
        return f.kind() == Formula::Kind::Exists ? Formula::exists(target, std::move(body))
                                                 : Formula::forall(target, std::move(body));
      }
      case Formula::Kind::Not:
        return Formula::negation(go(f.body(), renaming));
      case Formula::Kind::And:
        return Formula::conjunction(go(f.lhs(), renaming), go(f.rhs(), renaming));
      case Formula::Kind::Or:
        return Formula::disjunction(go(f.lhs(), renaming), go(f.rhs(), renaming));
    }
    return f;
  };
  Formula out = go(phi, {});
  return out == phi ? phi : out;
}

Formula desugar(const Formula& phi) {
  switch (phi.kind()) {
    case Formula::Kind::Atom:
      return phi;
    case Formula::Kind::Exists:
      return Formula::exists(phi.trace_var(), desugar(phi.body()));
    case Formula::Kind::Forall:
      return Formula::negation(Formula::exists(phi.trace_var(), Formula::negation(desugar(phi.body()))));
    case Formula::Kind::Not:
      return Formula::negation(desugar(phi.body()));
    case Formula::Kind::And:
      return Formula::conjunction(desugar(phi.lhs()), desugar(phi.rhs()));
    case Formula::Kind::Or:
      return Formula::negation(Formula::conjunction(Formula::negation(desugar(phi.lhs())),
                                                    Formula::negation(desugar(phi.rhs()))));
  }
  return phi;
}

std::vector<std::string> binders(const Formula& phi) {
  std::vector<std::string> out;
  std::function<void(const Formula&)> go = [&](const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Atom:
        return;
      case Formula::Kind::Exists:
      case Formula::Kind::Forall:
        out.push_back(f.trace_var());
        go(f.body());
        return;
      case Formula::Kind::Not:
        go(f.body());
        return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
        go(f.lhs());
        go(f.rhs());
        return;
    }
  };
  go(phi);
  return out;
}

std::size_t quantifier_count(const Formula& phi) { return binders(phi).size(); }

std::vector<std::string> program_vars(const Formula& phi) {
  std::vector<std::string> out;
  auto add = [&](const std::string& v) {
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  std::function<void(const Formula&)> go = [&](const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Atom:
        add(f.atom().lhs_var);
        add(f.atom().rhs_var);
        return;
      case Formula::Kind::Exists:
      case Formula::Kind::Forall:
      case Formula::Kind::Not:
        go(f.body());
        return;
      case Formula::Kind::And:
      case Formula::Kind::Or:
        go(f.lhs());
        go(f.rhs());
        return;
    }
  };
  go(phi);
  return out;
}

void check_program_vars(const Formula& phi, const VarSet& vars) {
  for (const auto& v : program_vars(phi))
    if (!vars.contains(v)) throw VarMismatchError("formula mentions unknown program variable '" + v + "'");
}

namespace {

// Binding strength used by the printer; larger binds tighter.
int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      return 0;
    case Formula::Kind::Or:
      return 1;
    case Formula::Kind::And:
      return 2;
    case Formula::Kind::Not:
      return 3;
    case Formula::Kind::Atom:
      return 4;
  }
  return 4;
}

void print(const Formula& f, int context, std::string& out) {
  const bool wrap = precedence(f.kind()) < context;
  if (wrap) out += '(';
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      const auto& a = f.atom();
      out += a.lhs_var + "(" + a.lhs_trace + ") <~ " + a.rhs_var + "(" + a.rhs_trace + ")";
      break;
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      out += f.kind() == Formula::Kind::Exists ? "exists " : "forall ";
      out += f.trace_var() + ". ";
      print(f.body(), 0, out);
      break;
    case Formula::Kind::Not:
      out += '!';
      print(f.body(), 3, out);
      break;
    case Formula::Kind::And:
      print(f.lhs(), 2, out);
      out += " & ";
      print(f.rhs(), 3, out);
      break;
    case Formula::Kind::Or:
      print(f.lhs(), 1, out);
      out += " | ";
      print(f.rhs(), 2, out);
      break;
  }
  if (wrap) out += ')';
}

class Evaluator {
 public:
  Evaluator(const VarSet& vars, std::vector<UnzippedSegment> model) : vars_(vars), model_(std::move(model)) {}

  bool eval(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Atom: {
        const auto& a = f.atom();
        const auto& lhs = model_[lookup(a.lhs_trace)].strings[*vars_.index(a.lhs_var)];
        const auto& rhs = model_[lookup(a.rhs_trace)].strings[*vars_.index(a.rhs_var)];
        return sr_prefix(lhs, rhs);
      }
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        const bool want = f.kind() == Formula::Kind::Exists;
        for (std::size_t i = 0; i < model_.size(); ++i) {
          assignment_.emplace_back(f.trace_var(), i);
          const bool r = eval(f.body());
          assignment_.pop_back();
          if (r == want) return want;
        }
        return !want;
      }
      case Formula::Kind::Not:
        return !eval(f.body());
      case Formula::Kind::And:
        return eval(f.lhs()) && eval(f.rhs());
      case Formula::Kind::Or:
        return eval(f.lhs()) || eval(f.rhs());
    }
    return false;
  }

 private:
  std::size_t lookup(const std::string& trace) const {
    for (auto it = assignment_.rbegin(); it != assignment_.rend(); ++it)
      if (it->first == trace) return it->second;
    throw OpenFormulaError("unbound trace variable '" + trace + "'");
  }

  const VarSet& vars_;
  std::vector<UnzippedSegment> model_;
  std::vector<std::pair<std::string, std::size_t>> assignment_;
};

}  // namespace

std::string to_string(const Formula& phi) {
  std::string out;
  print(phi, 0, out);
  return out;
}

bool evaluate(const VarSet& vars, std::span<const UnzippedSegment> segments, const Formula& phi) {
  if (!is_closed(phi)) throw OpenFormulaError("formula is not closed: free trace variables present");
  check_program_vars(phi, vars);
  std::vector<UnzippedSegment> model(segments.begin(), segments.end());
  for (const auto& s : model)
    if (s.var_count() != vars.size()) throw VarMismatchError("segment does not match the variable set");
  std::sort(model.begin(), model.end());
  model.erase(std::unique(model.begin(), model.end()), model.end());
  return Evaluator(vars, std::move(model)).eval(phi);
}

}  // namespace hnamc
