#include "hnamc/parsers.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace hnamc {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// ---------------------------------------------------------------------------
// formulas

enum class Tok { Ident, LParen, RParen, Prefix, Not, And, Or, Dot, End };

struct FToken {
  Tok kind;
  std::string text;
  SourceSpan span;
};

class FormulaParser {
 public:
  FormulaParser(std::string_view text, SourceSpan base) : text_(text), base_(base) { lex(); }

  Formula parse() {
    Formula f = formula();
    if (peek().kind != Tok::End) fail("unexpected '" + peek().text + "'", peek().span);
    return f;
  }

 private:
  SourceSpan span_at(std::size_t offset, std::size_t len) const {
    SourceSpan s;
    s.line = base_.line;
    s.column = base_.column;
    for (std::size_t i = 0; i < offset; ++i) {
      if (text_[i] == '\n') {
        ++s.line;
        s.column = 1;
      } else {
        ++s.column;
      }
    }
    s.begin = base_.begin + offset;
    s.end = s.begin + std::max<std::size_t>(len, 1);
    return s;
  }

  [[noreturn]] static void fail(const std::string& msg, const SourceSpan& span) { throw ParseError(msg, span); }

  void lex() {
    std::size_t i = 0;
    while (i < text_.size()) {
      const char c = text_[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      auto single = [&](Tok k) {
        tokens_.push_back({k, std::string(1, c), span_at(i, 1)});
        ++i;
      };
      switch (c) {
        case '(':
          single(Tok::LParen);
          continue;
        case ')':
          single(Tok::RParen);
          continue;
        case '!':
          single(Tok::Not);
          continue;
        case '&':
          single(Tok::And);
          continue;
        case '|':
          single(Tok::Or);
          continue;
        case '.':
          single(Tok::Dot);
          continue;
        default:
          break;
      }
      if (c == '<' && i + 1 < text_.size() && text_[i + 1] == '~') {
        tokens_.push_back({Tok::Prefix, "<~", span_at(i, 2)});
        i += 2;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t j = i;
        while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) ++j;
        tokens_.push_back({Tok::Ident, std::string(text_.substr(i, j - i)), span_at(i, j - i)});
        i = j;
        continue;
      }
      fail(std::string("unexpected character '") + c + "'", span_at(i, 1));
    }
    tokens_.push_back({Tok::End, "end of input", span_at(text_.size(), 1)});
  }

  const FToken& peek() const { return tokens_[pos_]; }
  const FToken& take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  const FToken& expect(Tok k, const char* what) {
    if (peek().kind != k) fail(std::string("expected ") + what + ", found '" + peek().text + "'", peek().span);
    return take();
  }

  bool at_quantifier() const {
    return peek().kind == Tok::Ident && (peek().text == "forall" || peek().text == "exists");
  }

  Formula quantified() {
    const bool is_exists = take().text == "exists";
    const FToken& var = expect(Tok::Ident, "trace variable");
    if (var.text == "forall" || var.text == "exists") fail("keyword used as trace variable", var.span);
    std::string name = var.text;
    expect(Tok::Dot, "'.'");
    Formula body = formula();  // the body extends as far right as possible
    return is_exists ? Formula::exists(std::move(name), std::move(body)) : Formula::forall(std::move(name), std::move(body));
  }

  Formula formula() {
    if (at_quantifier()) return quantified();
    return disjunction();
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (peek().kind == Tok::Or) {
      take();
      f = Formula::disjunction(std::move(f), conjunction());
    }
    return f;
  }

  Formula conjunction() {
    Formula f = unary();
    while (peek().kind == Tok::And) {
      take();
      f = Formula::conjunction(std::move(f), unary());
    }
    return f;
  }

  Formula unary() {
    if (peek().kind == Tok::Not) {
      take();
      return Formula::negation(unary());
    }
    if (peek().kind == Tok::LParen) {
      take();
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at_quantifier()) return quantified();
    if (peek().kind == Tok::Ident) return atom();
    fail("expected a formula, found '" + peek().text + "'", peek().span);
  }

  Formula atom() {
    std::string lv = expect(Tok::Ident, "program variable").text;
    expect(Tok::LParen, "'('");
    std::string lt = expect(Tok::Ident, "trace variable").text;
    expect(Tok::RParen, "')'");
    expect(Tok::Prefix, "'<~'");
    std::string rv = expect(Tok::Ident, "program variable").text;
    expect(Tok::LParen, "'('");
    std::string rt = expect(Tok::Ident, "trace variable").text;
    expect(Tok::RParen, "')'");
    return Formula::atom(std::move(lv), std::move(lt), std::move(rv), std::move(rt));
  }

  std::string_view text_;
  SourceSpan base_;
  std::vector<FToken> tokens_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// line-oriented formats

struct Token {
  std::string text;
  SourceSpan span;
  bool quoted = false;
};

using Line = std::vector<Token>;

std::vector<Line> lex_lines(std::string_view text, bool allow_quotes) {
  std::vector<Line> lines;
  std::size_t i = 0, line = 1, col = 1;
  Line current;
  auto advance = [&]() {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      if (!current.empty()) lines.push_back(std::move(current));
      current.clear();
      advance();
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      advance();
      continue;
    }
    if (c == '#') {
      while (i < text.size() && text[i] != '\n') advance();
      continue;
    }
    Token tok;
    tok.span.line = line;
    tok.span.column = col;
    tok.span.begin = i;
    if (c == '"' && allow_quotes) {
      advance();
      const std::size_t start = i;
      while (i < text.size() && text[i] != '"' && text[i] != '\n') advance();
      if (i >= text.size() || text[i] != '"') {
        tok.span.end = i > tok.span.begin ? i : tok.span.begin + 1;
        throw ParseError("unterminated string", tok.span);
      }
      tok.text = std::string(text.substr(start, i - start));
      tok.quoted = true;
      advance();
    } else {
      const std::size_t start = i;
      while (i < text.size() && text[i] != ' ' && text[i] != '\t' && text[i] != '\r' && text[i] != '\n') advance();
      tok.text = std::string(text.substr(start, i - start));
    }
    tok.span.end = i;
    current.push_back(std::move(tok));
  }
  if (!current.empty()) lines.push_back(std::move(current));
  return lines;
}

[[noreturn]] void fail(const std::string& msg, const Token& tok) { throw ParseError(msg, tok.span); }

SourceSpan end_of(const Line& l) {
  SourceSpan s = l.back().span;
  s.column += s.end - s.begin;
  s.begin = s.end;
  s.end = s.begin + 1;
  return s;
}

const Token& require_arg(const Line& l, std::size_t i, const char* what) {
  if (i >= l.size()) throw ParseError(std::string("missing ") + what, end_of(l));
  return l[i];
}

std::string identifier(const Token& t, const char* what) {
  if (t.quoted || !is_identifier(t.text)) fail(std::string("invalid ") + what + " '" + t.text + "'", t);
  return t.text;
}

Domain parse_domain_line(const Line& l) {
  if (l.size() < 2) throw ParseError("domain needs at least one value", end_of(l));
  std::vector<std::string> tokens;
  for (std::size_t i = 1; i < l.size(); ++i) {
    if (l[i].text == "#" || l[i].text.find_first_of(",=") != std::string::npos) fail("invalid domain value '" + l[i].text + "'", l[i]);
    for (std::size_t j = 1; j < i; ++j)
      if (l[j].text == l[i].text) fail("duplicate domain value '" + l[i].text + "'", l[i]);
    tokens.push_back(l[i].text);
  }
  return Domain(std::move(tokens));
}

VarSet parse_vars_line(const Line& l) {
  if (l.size() < 2) throw ParseError("vars needs at least one variable", end_of(l));
  std::vector<std::string> names;
  for (std::size_t i = 1; i < l.size(); ++i) {
    std::string n = identifier(l[i], "variable name");
    if (std::find(names.begin(), names.end(), n) != names.end()) fail("duplicate variable '" + n + "'", l[i]);
    names.push_back(std::move(n));
  }
  return VarSet(std::move(names));
}

// Splits "name=value" and checks the variable. Returns (variable index, value text).
std::pair<std::size_t, std::string> assignment(const Token& t, const VarSet& vars) {
  const auto eq = t.text.find('=');
  if (eq == std::string::npos) fail("expected variable=value, found '" + t.text + "'", t);
  const std::string name = t.text.substr(0, eq);
  auto idx = vars.index(name);
  if (!idx) fail("unknown variable '" + name + "'", t);
  return {*idx, t.text.substr(eq + 1)};
}

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text, SourceSpan{}).parse(); }

// ---------------------------------------------------------------------------
// .kripke

OpenKripke KripkeFile::open() const {
  if (entries.empty() || exits.empty()) throw InvalidModelError("structure has no 'in'/'out' worlds");
  OpenKripke ok{k, entries, exits};
  validate(ok);
  return ok;
}

PointedLabeledKripke KripkeFile::pointed() const {
  if (!initial) throw InvalidModelError("structure has no 'init' world");
  PointedLabeledKripke p{k, labeling, *initial};
  validate(p);
  return p;
}

KripkeFile parse_kripke(std::string_view text) {
  const auto lines = lex_lines(text, false);
  std::optional<Domain> domain;
  std::optional<VarSet> vars;
  KripkeFile file;
  // worlds are declared before edges are resolved so that order does not matter
  for (const auto& l : lines) {
    const std::string& kw = l[0].text;
    if (kw == "domain") {
      if (domain) fail("domain declared twice", l[0]);
      domain = parse_domain_line(l);
    } else if (kw == "vars") {
      if (vars) fail("vars declared twice", l[0]);
      vars = parse_vars_line(l);
    } else if (kw == "actions") {
      if (file.declares_actions) fail("actions declared twice", l[0]);
      file.declares_actions = true;
      for (std::size_t i = 1; i < l.size(); ++i) {
        std::string a = identifier(l[i], "action name");
        if (a == "eps") fail("'eps' is reserved", l[i]);
        if (std::find(file.labeling.actions.begin(), file.labeling.actions.end(), a) != file.labeling.actions.end())
          fail("duplicate action '" + a + "'", l[i]);
        file.labeling.actions.push_back(std::move(a));
      }
      std::sort(file.labeling.actions.begin(), file.labeling.actions.end());
    } else if (kw == "world") {
      if (!domain || !vars) fail("world declared before 'domain' and 'vars'", l[0]);
      if (file.k.vars().empty()) file.k = Kripke(*vars, *domain);
      std::string name = identifier(require_arg(l, 1, "world name"), "world name");
      if (file.k.find_world(name)) fail("duplicate world '" + name + "'", l[1]);
      SegmentValuation val(vars->size(), kTerm);
      for (std::size_t i = 2; i < l.size(); ++i) {
        auto [x, v] = assignment(l[i], *vars);
        if (val[x] != kTerm) fail("variable '" + vars->name(x) + "' valued twice", l[i]);
        auto idx = domain->index(v);
        if (!idx) fail("unknown value '" + v + "'", l[i]);
        val[x] = *idx;
      }
      for (std::size_t x = 0; x < vars->size(); ++x)
        if (val[x] == kTerm) fail("world '" + name + "' misses a value for '" + vars->name(x) + "'", l[1]);
      file.k.add_world(std::move(name), std::move(val));
    } else if (kw != "edge" && kw != "init" && kw != "in" && kw != "out") {
      fail("unknown directive '" + kw + "'", l[0]);
    }
  }
  if (!domain) throw ParseError("missing 'domain' line", SourceSpan{});
  if (!vars) throw ParseError("missing 'vars' line", SourceSpan{});
  if (file.k.vars().empty()) file.k = Kripke(*vars, *domain);

  auto world = [&](const Token& t) {
    auto w = file.k.find_world(t.text);
    if (!w) fail("unknown world '" + t.text + "'", t);
    return *w;
  };
  for (const auto& l : lines) {
    const std::string& kw = l[0].text;
    if (kw == "edge") {
      const WorldId from = world(require_arg(l, 1, "source world"));
      const WorldId to = world(require_arg(l, 2, "target world"));
      std::vector<ActionId> labels;
      if (l.size() > 3) {
        if (l[3].text != ":") fail("expected ':' before labels", l[3]);
        if (l.size() == 4) throw ParseError("missing labels after ':'", end_of(l));
        for (std::size_t i = 4; i < l.size(); ++i) {
          if (l[i].text == "eps") {
            labels.push_back(kEpsilon);
            continue;
          }
          auto a = file.labeling.find_action(l[i].text);
          if (!a) fail("unknown action '" + l[i].text + "'", l[i]);
          labels.push_back(*a);
        }
      } else {
        labels.push_back(kEpsilon);
      }
      file.k.add_edge(from, to);
      auto& slot = file.labeling.labels[{from, to}];
      slot.insert(slot.end(), labels.begin(), labels.end());
      std::sort(slot.begin(), slot.end());
      slot.erase(std::unique(slot.begin(), slot.end()), slot.end());
    } else if (kw == "init") {
      if (file.initial) fail("initial world declared twice", l[0]);
      if (l.size() != 2) fail("init takes exactly one world", l[0]);
      file.initial = world(l[1]);
    } else if (kw == "in" || kw == "out") {
      if (l.size() < 2) throw ParseError(kw + " needs at least one world", end_of(l));
      auto& target = kw == "in" ? file.entries : file.exits;
      for (std::size_t i = 1; i < l.size(); ++i) target.push_back(world(l[i]));
      std::sort(target.begin(), target.end());
      target.erase(std::unique(target.begin(), target.end()), target.end());
    }
  }
  return file;
}

std::string serialize_kripke(const KripkeFile& file) {
  const Kripke& k = file.k;
  std::string out = "domain";
  for (const auto& t : k.domain().tokens()) out += " " + t;
  out += "\nvars";
  for (const auto& x : k.vars().names()) out += " " + x;
  out += "\n";
  if (file.declares_actions) {
    out += "actions";
    for (const auto& a : file.labeling.actions) out += " " + a;
    out += "\n";
  }
  for (WorldId w = 0; w < k.world_count(); ++w) {
    out += "world " + k.name(w);
    for (std::size_t x = 0; x < k.vars().size(); ++x) out += " " + k.vars().name(x) + "=" + k.domain().token(k.value(w, x));
    out += "\n";
  }
  for (WorldId w = 0; w < k.world_count(); ++w)
    for (WorldId t : k.successors(w)) {
      out += "edge " + k.name(w) + " " + k.name(t) + " :";
      for (ActionId a : file.labeling.label(w, t)) out += " " + file.labeling.action_name(a);
      out += "\n";
    }
  if (file.initial) out += "init " + k.name(*file.initial) + "\n";
  if (!file.entries.empty()) {
    out += "in";
    for (WorldId w : file.entries) out += " " + k.name(w);
    out += "\n";
  }
  if (!file.exits.empty()) {
    out += "out";
    for (WorldId w : file.exits) out += " " + k.name(w);
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// .hna

Hna parse_hna(std::string_view text) {
  const auto lines = lex_lines(text, true);
  std::vector<std::string> actions;
  bool declared = false;
  struct NodeDecl {
    std::string name;
    bool init;
    Formula label;
  };
  std::vector<NodeDecl> nodes;
  std::optional<std::size_t> init;
  for (const auto& l : lines) {
    const std::string& kw = l[0].text;
    if (kw == "actions") {
      if (declared) fail("actions declared twice", l[0]);
      declared = true;
      for (std::size_t i = 1; i < l.size(); ++i) {
        std::string a = identifier(l[i], "action name");
        if (a == "eps") fail("'eps' is reserved", l[i]);
        actions.push_back(std::move(a));
      }
    } else if (kw == "node") {
      std::string name = identifier(require_arg(l, 1, "node name"), "node name");
      for (const auto& n : nodes)
        if (n.name == name) fail("duplicate node '" + name + "'", l[1]);
      std::size_t i = 2;
      bool is_init = false;
      if (i < l.size() && !l[i].quoted && l[i].text == "init") {
        is_init = true;
        ++i;
      }
      const Token& f = require_arg(l, i, "quoted formula");
      if (!f.quoted) fail("expected a quoted formula", f);
      if (i + 1 < l.size()) fail("unexpected '" + l[i + 1].text + "'", l[i + 1]);
      SourceSpan base = f.span;
      base.column += 1;
      base.begin += 1;
      Formula label = FormulaParser(f.text, base).parse();
      if (is_init) {
        if (init) fail("more than one initial node", l[2]);
        init = nodes.size();
      }
      nodes.push_back({std::move(name), is_init, std::move(label)});
    } else if (kw != "edge") {
      fail("unknown directive '" + kw + "'", l[0]);
    }
  }
  if (nodes.empty()) throw ParseError("no nodes declared", SourceSpan{});
  if (!init) throw ParseError("no initial node (mark one node with 'init')", SourceSpan{});

  std::vector<const Line*> edges;
  for (const auto& l : lines)
    if (l[0].text == "edge") {
      edges.push_back(&l);
      if (l.size() < 5 || l[3].text != ":") {
        if (l.size() >= 4 && l[3].text != ":") fail("expected ':' before actions", l[3]);
        throw ParseError("edge needs 'edge FROM TO : ACTION...'", end_of(l));
      }
      if (!declared)
        for (std::size_t i = 4; i < l.size(); ++i) actions.push_back(identifier(l[i], "action name"));
    }
  Hna h(actions);
  for (auto& n : nodes) h.add_node(n.name, n.label);
  h.set_initial(static_cast<NodeId>(*init));
  for (const Line* lp : edges) {
    const Line& l = *lp;
    auto from = h.find_node(l[1].text);
    if (!from) fail("unknown node '" + l[1].text + "'", l[1]);
    auto to = h.find_node(l[2].text);
    if (!to) fail("unknown node '" + l[2].text + "'", l[2]);
    for (std::size_t i = 4; i < l.size(); ++i) {
      if (!h.action_index(l[i].text)) fail("unknown action '" + l[i].text + "'", l[i]);
      if (auto prev = h.next(*from, l[i].text); prev && *prev != *to)
        fail("node '" + l[1].text + "' already has a transition on '" + l[i].text + "'", l[i]);
      h.set_transition(*from, l[i].text, *to);
    }
  }
  return h;
}

std::string serialize_hna(const Hna& h) {
  std::string out = "actions";
  for (const auto& a : h.actions()) out += " " + a;
  out += "\n";
  for (NodeId q = 0; q < h.node_count(); ++q)
    out += "node " + h.name(q) + (q == h.initial() ? " init" : "") + " \"" + to_string(h.label(q)) + "\"\n";
  for (NodeId q = 0; q < h.node_count(); ++q) {
    std::map<NodeId, std::vector<std::string>> by_target;
    for (const auto& a : h.actions())
      if (auto t = h.next(q, a)) by_target[*t].push_back(a);
    for (const auto& [t, as] : by_target) {
      out += "edge " + h.name(q) + " " + h.name(t) + " :";
      for (const auto& a : as) out += " " + a;
      out += "\n";
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// .sfa

Sfa parse_sfa(std::string_view text) {
  const auto lines = lex_lines(text, false);
  std::optional<Domain> domain;
  std::optional<VarSet> vars;
  for (const auto& l : lines) {
    if (l[0].text == "domain") {
      if (domain) fail("domain declared twice", l[0]);
      domain = parse_domain_line(l);
    } else if (l[0].text == "vars") {
      if (vars) fail("vars declared twice", l[0]);
      vars = parse_vars_line(l);
    } else if (l[0].text != "state" && l[0].text != "trans") {
      fail("unknown directive '" + l[0].text + "'", l[0]);
    }
  }
  if (!domain) throw ParseError("missing 'domain' line", SourceSpan{});
  if (!vars) throw ParseError("missing 'vars' line", SourceSpan{});
  Sfa a(*vars, *domain);
  for (const auto& l : lines) {
    if (l[0].text != "state") continue;
    std::string name = identifier(require_arg(l, 1, "state name"), "state name");
    if (a.find_state(name)) fail("duplicate state '" + name + "'", l[1]);
    bool init = false, final = false;
    for (std::size_t i = 2; i < l.size(); ++i) {
      if (l[i].text == "init" && !init) {
        init = true;
      } else if (l[i].text == "final" && !final) {
        final = true;
      } else {
        fail("unexpected '" + l[i].text + "'", l[i]);
      }
    }
    a.add_state(std::move(name), init, final);
  }
  for (const auto& l : lines) {
    if (l[0].text != "trans") continue;
    auto state = [&](const Token& t) {
      auto q = a.find_state(t.text);
      if (!q) fail("unknown state '" + t.text + "'", t);
      return *q;
    };
    const StateId from = state(require_arg(l, 1, "source state"));
    const StateId to = state(require_arg(l, 2, "target state"));
    const Token& colon = require_arg(l, 3, "':'");
    if (colon.text != ":") fail("expected ':'", colon);
    Letter letter(vars->size(), kTerm);
    std::vector<char> seen(vars->size(), 0);
    for (std::size_t i = 4; i < l.size(); ++i) {
      auto [x, v] = assignment(l[i], *vars);
      if (seen[x]) fail("variable '" + vars->name(x) + "' given twice", l[i]);
      seen[x] = 1;
      if (v == "#") continue;
      auto idx = domain->index(v);
      if (!idx) fail("unknown value '" + v + "'", l[i]);
      letter[x] = *idx;
    }
    for (std::size_t x = 0; x < vars->size(); ++x)
      if (!seen[x]) throw ParseError("transition misses coordinate '" + vars->name(x) + "'", end_of(l));
    if (is_all_term(letter)) fail("the all-# letter is not allowed", l[0]);
    a.add_transition(from, letter, to);
  }
  return a;
}

std::string serialize_sfa(const Sfa& a) {
  std::string out = "domain";
  for (const auto& t : a.domain().tokens()) out += " " + t;
  out += "\nvars";
  for (const auto& x : a.vars().names()) out += " " + x;
  out += "\n";
  for (StateId q = 0; q < a.state_count(); ++q) {
    out += "state " + a.name(q);
    if (a.is_initial(q)) out += " init";
    if (a.is_final(q)) out += " final";
    out += "\n";
  }
  for (StateId q = 0; q < a.state_count(); ++q)
    for (const auto& t : a.out(q))
      out += "trans " + a.name(q) + " " + a.name(t.target) + " : " + format_letter(t.letter, a.vars(), a.domain()) + "\n";
  return out;
}

UnzippedSegment parse_segment(std::string_view text, const VarSet& vars, const Domain& domain) {
  const auto lines = lex_lines(text, false);
  UnzippedSegment tau = UnzippedSegment::empty(vars.size());
  std::vector<char> seen(vars.size(), 0);
  for (const auto& l : lines)
    for (const auto& t : l) {
      auto [x, v] = assignment(t, vars);
      if (seen[x]) fail("variable '" + vars.name(x) + "' given twice", t);
      seen[x] = 1;
      auto s = parse_value_string(v, domain);
      if (!s) fail("invalid value string '" + v + "'", t);
      tau.strings[x] = std::move(*s);
    }
  for (std::size_t x = 0; x < vars.size(); ++x)
    if (!seen[x]) throw ParseError("segment misses variable '" + vars.name(x) + "'", SourceSpan{});
  return tau;
}

}  // namespace hnamc
