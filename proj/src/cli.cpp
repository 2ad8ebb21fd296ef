#include "hnamc/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "hnamc/filtration.hpp"
#include "hnamc/oracle.hpp"
#include "hnamc/parsers.hpp"
#include "hnamc/slicing.hpp"

namespace hnamc {

namespace {

using nlohmann::ordered_json;

struct Diag {
  std::ostream& err;
  bool color;

  void error(const std::string& msg) const {
    err << (color ? "\033[1;31merror:\033[0m " : "error: ") << msg << "\n";
  }
  void warning(const std::string& msg) const {
    err << (color ? "\033[1;33mwarning:\033[0m " : "warning: ") << msg << "\n";
  }
};

bool want_color(std::ostream& err) {
  const char* env = std::getenv("HNAMC_COLOR");
  const std::string mode = env ? env : "auto";
  if (mode == "never") return false;
  return &err == &std::cerr && isatty(fileno(stderr));
}

// Error raised while loading a named input; carries the file name for diagnostics.
class InputError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T, typename F>
T load(const std::string& path, F&& parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + e.what());
  }
}

KripkeFile load_kripke(const std::string& path) {
  return load<KripkeFile>(path, [](const std::string& t) { return parse_kripke(t); });
}
Hna load_hna(const std::string& path) {
  return load<Hna>(path, [](const std::string& t) { return parse_hna(t); });
}
Sfa load_sfa(const std::string& path) {
  return load<Sfa>(path, [](const std::string& t) { return parse_sfa(t); });
}

Formula load_formula(const std::string& inline_text, const std::string& file) {
  if (!file.empty()) return load<Formula>(file, [](const std::string& t) { return parse_formula(t); });
  try {
    return parse_formula(inline_text);
  } catch (const ParseError& e) {
    throw InputError(std::string("formula:") + e.what());
  }
}

ordered_json valuation_json(const Kripke& k, WorldId w) {
  ordered_json v = ordered_json::object();
  for (std::size_t x = 0; x < k.vars().size(); ++x) v[k.vars().name(x)] = k.domain().token(k.value(w, x));
  return v;
}

ordered_json segment_json(const UnzippedSegment& tau, const VarSet& vars, const Domain& domain) {
  ordered_json v = ordered_json::object();
  for (std::size_t x = 0; x < vars.size(); ++x) v[vars.name(x)] = format_string(tau.strings[x], domain);
  return v;
}

void print_substructure(std::ostream& out, const OpenKripke& ok, const std::string& indent) {
  const Kripke& k = ok.k;
  auto names = [&](const std::vector<WorldId>& ws) {
    std::string s;
    for (WorldId w : ws) s += " " + k.name(w);
    return s;
  };
  out << indent << "entries:" << names(ok.entries) << "\n";
  out << indent << "exits:" << names(ok.exits) << "\n";
  for (WorldId w = 0; w < k.world_count(); ++w) {
    out << indent << "world " << k.name(w);
    for (std::size_t x = 0; x < k.vars().size(); ++x)
      out << " " << k.vars().name(x) << "=" << k.domain().token(k.value(w, x));
    out << "\n";
  }
  for (WorldId w = 0; w < k.world_count(); ++w)
    for (WorldId t : k.successors(w)) out << indent << "edge " << k.name(w) << " " << k.name(t) << "\n";
}

ordered_json substructure_json(const OpenKripke& ok) {
  const Kripke& k = ok.k;
  ordered_json j;
  j["entries"] = ordered_json::array();
  for (WorldId w : ok.entries) j["entries"].push_back(k.name(w));
  j["exits"] = ordered_json::array();
  for (WorldId w : ok.exits) j["exits"].push_back(k.name(w));
  j["worlds"] = ordered_json::array();
  for (WorldId w = 0; w < k.world_count(); ++w)
    j["worlds"].push_back({{"name", k.name(w)}, {"valuation", valuation_json(k, w)}});
  j["edges"] = ordered_json::array();
  for (WorldId w = 0; w < k.world_count(); ++w)
    for (WorldId t : k.successors(w)) j["edges"].push_back({k.name(w), k.name(t)});
  return j;
}

void print_formula_witness(std::ostream& out, const FormulaVerdict& v, const VarSet& vars, const Domain& domain,
                           const std::string& indent) {
  if (v.failing) out << indent << "failing: " << to_string(*v.failing) << "\n";
  for (const auto& [t, tau] : v.witness) out << indent << t << ": " << format_segment(tau, vars, domain) << "\n";
}

ordered_json formula_verdict_json(const FormulaVerdict& v, const VarSet& vars, const Domain& domain) {
  ordered_json j;
  j["holds"] = v.holds;
  j["formula"] = to_string(v.checked);
  j["trace_vars"] = v.trace_vars;
  if (v.failing) j["failing"] = to_string(*v.failing);
  if (!v.witness.empty()) {
    ordered_json w = ordered_json::object();
    for (const auto& [t, tau] : v.witness) w[t] = segment_json(tau, vars, domain);
    j["witness"] = w;
  }
  return j;
}

std::string join(const std::vector<std::string>& v, const std::string& sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + v[i];
  return s;
}

void warn_hna(const Hna& h, const Diag& diag) {
  bool fatal = false;
  std::string first;
  for (const auto& issue : validate(h)) {
    if (issue.warning) {
      diag.warning(issue.message);
    } else {
      diag.error(issue.message);
      if (!fatal) first = issue.message;
      fatal = true;
    }
  }
  if (fatal) throw InvalidModelError("invalid hypernode automaton: " + first);
}

// --------------------------------------------------------------------------- commands

int cmd_check(const std::string& kripke_path, const std::string& hna_path, std::optional<std::size_t> max_depth,
              bool json, std::ostream& out, const Diag& diag) {
  const KripkeFile kf = load_kripke(kripke_path);
  if (!kf.declares_actions) throw InvalidModelError(kripke_path + ": 'actions' line required");
  const PointedLabeledKripke k = kf.pointed();
  const Hna h = load_hna(hna_path);
  warn_hna(h, diag);
  if (has_silent_cycle(k))
    diag.warning("a reachable cycle carries only empty labels; traces along it have finitely many actions");
  ModelCheckOptions opts;
  opts.max_depth = max_depth;
  const ModelCheckResult r = model_check(h, k, opts);

  if (json) {
    ordered_json j;
    j["verdict"] = r.verdict == Verdict::Holds ? "holds" : r.verdict == Verdict::Violated ? "violated" : "unknown";
    j["explored"] = r.explored;
    if (r.verdict == Verdict::Violated) {
      j["witness"] = r.witness;
      j["node"] = h.name(r.node);
      j["formula"] = to_string(h.label(r.node));
      ordered_json s = substructure_json(r.slice->substructure);
      s["action"] = k.labeling.actions[r.slice->action];
      j["slice"] = s;
      j["check"] = formula_verdict_json(*r.formula, k.k.vars(), k.k.domain());
    }
    out << j.dump(2) << "\n";
  } else if (r.verdict == Verdict::Holds) {
    out << "HOLDS\n";
    out << "explored " << r.explored << " join states\n";
  } else if (r.verdict == Verdict::Unknown) {
    out << "UNKNOWN\n";
    out << "depth bound " << *max_depth << " reached before the search closed\n";
  } else {
    out << "VIOLATED\n";
    out << "witness: " << join(r.witness) << "\n";
    out << "node: " << h.name(r.node) << "\n";
    out << "formula: " << to_string(h.label(r.node)) << "\n";
    out << "slice of " << k.labeling.actions[r.slice->action] << ":\n";
    print_substructure(out, r.slice->substructure, "  ");
    out << "counterexample:\n";
    print_formula_witness(out, *r.formula, k.k.vars(), k.k.domain(), "  ");
  }
  switch (r.verdict) {
    case Verdict::Holds:
      return kExitOk;
    case Verdict::Violated:
      return kExitNegative;
    case Verdict::Unknown:
      return kExitUnknown;
  }
  return kExitError;
}

int cmd_check_formula(const std::string& kripke_path, const Formula& phi, bool json, std::ostream& out) {
  const KripkeFile kf = load_kripke(kripke_path);
  const OpenKripke ok = kf.open();
  const FormulaVerdict v = check_formula_against_open_kripke(ok, phi);
  if (json) {
    out << formula_verdict_json(v, ok.k.vars(), ok.k.domain()).dump(2) << "\n";
  } else {
    out << (v.holds ? "MODEL" : "NOT A MODEL") << "\n";
    if (!v.holds) print_formula_witness(out, v, ok.k.vars(), ok.k.domain(), "  ");
  }
  return v.holds ? kExitOk : kExitNegative;
}

int cmd_oracle_formula(const std::string& kripke_path, const Formula& phi, std::optional<std::size_t> max_len,
                       bool json, std::ostream& out) {
  const KripkeFile kf = load_kripke(kripke_path);
  const OpenKripke ok = kf.open();
  const std::size_t bound = max_len.value_or(std::max<std::size_t>(ok.k.world_count(), 1));
  if (!is_closed(phi)) throw OpenFormulaError("formula is not closed: free trace variables present");
  const OracleFormulaResult r = bf_check_formula(ok, phi, bound);
  if (json) {
    ordered_json j;
    j["holds"] = r.holds;
    j["mode"] = r.exact ? "exact" : "bounded";
    j["max_len"] = bound;
    out << j.dump(2) << "\n";
  } else {
    out << (r.holds ? "MODEL" : "NOT A MODEL") << " (" << (r.exact ? "exact" : "bounded") << ")\n";
  }
  return r.holds ? kExitOk : kExitNegative;
}

int cmd_oracle_hna(const std::string& kripke_path, const std::string& hna_path, std::optional<std::size_t> max_len,
                   std::optional<std::size_t> max_actions, bool json, std::ostream& out, const Diag& diag) {
  const KripkeFile kf = load_kripke(kripke_path);
  if (!kf.declares_actions) throw InvalidModelError(kripke_path + ": 'actions' line required");
  const PointedLabeledKripke k = kf.pointed();
  const Hna h = load_hna(hna_path);
  warn_hna(h, diag);
  const std::size_t steps = max_len.value_or(std::max<std::size_t>(k.k.world_count(), 1));
  const std::size_t acts = max_actions.value_or(steps > 1 ? steps - 1 : 1);
  for (NodeId q = 0; q < h.node_count(); ++q) check_program_vars(h.label(q), k.k.vars());
  const OracleHnaResult r = bf_check_hna(k, h, steps, acts);
  const char* mode = r.exact ? "exact" : "bounded";
  if (json) {
    ordered_json j;
    j["verdict"] = r.verdict.accepted ? "holds" : "violated";
    j["mode"] = mode;
    if (!r.verdict.accepted) {
      j["witness"] = r.verdict.failing_p;
      j["slice"] = r.verdict.slice;
      j["node"] = h.name(r.verdict.node);
      j["formula"] = to_string(h.label(r.verdict.node));
    }
    out << j.dump(2) << "\n";
  } else if (r.verdict.accepted) {
    out << "HOLDS (" << mode << ")\n";
  } else {
    out << "VIOLATED (" << mode << ")\n";
    out << "witness: " << join(r.verdict.failing_p) << "\n";
    out << "slice: " << r.verdict.slice << "\n";
    out << "node: " << h.name(r.verdict.node) << "\n";
    out << "formula: " << to_string(h.label(r.verdict.node)) << "\n";
  }
  return r.verdict.accepted ? kExitOk : kExitNegative;
}

int cmd_sfa(const std::string& op, const std::vector<std::string>& files, const std::string& segment,
            std::optional<std::size_t> max_len, std::ostream& out) {
  std::vector<Sfa> in;
  for (const auto& f : files) in.push_back(load_sfa(f));
  auto arity = [&](std::size_t n) {
    if (in.size() != n)
      throw InputError("sfa " + op + " expects " + std::to_string(n) + " input file" + (n == 1 ? "" : "s"));
  };
  if (op == "validate") {
    arity(1);
    const auto v = validate(in[0]);
    for (const auto& violation : v) out << violation.message << "\n";
    if (v.empty()) out << "valid\n";
    return v.empty() ? kExitOk : kExitNegative;
  }
  if (op == "product") {
    if (in.size() < 2) throw InputError("sfa product expects at least two input files");
    out << serialize_sfa(async_product(in));
    return kExitOk;
  }
  if (op == "union") {
    arity(2);
    out << serialize_sfa(union_of(in[0], in[1]));
    return kExitOk;
  }
  if (op == "determinize") {
    arity(1);
    out << serialize_sfa(determinize(in[0]));
    return kExitOk;
  }
  if (op == "complete") {
    arity(1);
    out << serialize_sfa(complete(in[0]));
    return kExitOk;
  }
  if (op == "complement") {
    arity(1);
    out << serialize_sfa(complement(in[0]));
    return kExitOk;
  }
  if (op == "empty") {
    arity(1);
    auto w = find_witness(in[0]);
    if (!w) {
      out << "empty\n";
      return kExitOk;
    }
    out << "non-empty\nwitness: " << format_segment(*w, in[0].vars(), in[0].domain()) << "\n";
    return kExitNegative;
  }
  if (op == "member") {
    arity(1);
    UnzippedSegment tau;
    try {
      tau = parse_segment(segment, in[0].vars(), in[0].domain());
    } catch (const ParseError& e) {
      throw InputError(std::string("segment:") + e.what());
    }
    const bool m = member(in[0], tau);
    out << (m ? "member" : "not a member") << "\n";
    return m ? kExitOk : kExitNegative;
  }
  if (op == "enumerate") {
    arity(1);
    for (const auto& tau : enumerate_language(in[0], *max_len))
      out << format_segment(tau, in[0].vars(), in[0].domain()) << "\n";
    return kExitOk;
  }
  throw InputError("unknown sfa operation '" + op + "'");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const Diag diag{err, want_color(err)};
  CLI::App app{"Model checker for hypernode automata and hypernode logic", "hnamc"};
  app.require_subcommand(1);

  std::string kripke, hna, formula, formula_file, segment;
  std::size_t max_depth = 0, max_len = 0, max_actions = 0;
  bool json = false;

  auto* check = app.add_subcommand("check", "Model check a pointed action-labeled structure against an HNA");
  check->add_option("--kripke", kripke, "Kripke structure with init and actions")->required();
  check->add_option("--hna", hna, "Hypernode automaton")->required();
  auto* depth_opt = check->add_option("--max-depth", max_depth, "Bound on the witness length");
  check->add_flag("--json", json, "Machine-readable report");

  auto* check_formula = app.add_subcommand("check-formula", "Decide whether an open structure models a formula");
  check_formula->add_option("--kripke", kripke, "Kripke structure with in and out")->required();
  auto* f_inline = check_formula->add_option("--formula", formula, "Formula text");
  auto* f_file = check_formula->add_option("--formula-file", formula_file, "File holding the formula");
  f_inline->excludes(f_file);
  check_formula->add_flag("--json", json, "Machine-readable report");

  auto* sfa = app.add_subcommand("sfa", "Stutter-free automaton operations");
  sfa->require_subcommand(1);
  std::vector<std::string> sfa_files;
  std::map<std::string, CLI::App*> sfa_ops;
  std::optional<CLI::Option*> enum_len;
  for (const char* op : {"validate", "product", "union", "determinize", "complete", "complement", "empty", "member",
                         "enumerate"}) {
    auto* sub = sfa->add_subcommand(op);
    sub->add_option("files", sfa_files, ".sfa input files")->required();
    if (std::string(op) == "member") sub->add_option("--segment", segment, "Segment such as \"x=0 y=01\"")->required();
    if (std::string(op) == "enumerate") enum_len = sub->add_option("--max-len", max_len, "Longest string length")->required();
    sfa_ops[op] = sub;
  }

  auto* oracle = app.add_subcommand("oracle", "Brute-force reference checks");
  oracle->require_subcommand(1);
  auto* o_formula = oracle->add_subcommand("check-formula", "Formula check by segment enumeration");
  o_formula->add_option("--kripke", kripke, "Kripke structure with in and out")->required();
  auto* of_inline = o_formula->add_option("--formula", formula, "Formula text");
  auto* of_file = o_formula->add_option("--formula-file", formula_file, "File holding the formula");
  of_inline->excludes(of_file);
  auto* of_len = o_formula->add_option("--max-len", max_len, "Longest path, in worlds");
  o_formula->add_flag("--json", json, "Machine-readable report");
  auto* o_hna = oracle->add_subcommand("check-hna", "HNA acceptance by trace enumeration");
  o_hna->add_option("--kripke", kripke, "Kripke structure with init and actions")->required();
  o_hna->add_option("--hna", hna, "Hypernode automaton")->required();
  auto* oh_len = o_hna->add_option("--max-len", max_len, "Longest trace, in worlds");
  auto* oh_acts = o_hna->add_option("--max-actions", max_actions, "Longest action sequence");
  o_hna->add_flag("--json", json, "Machine-readable report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  auto bound = [](CLI::Option* opt, std::size_t value) -> std::optional<std::size_t> {
    if (!opt->count()) return std::nullopt;
    if (value == 0) throw InputError("bounds must be at least 1");
    return value;
  };
  auto read_formula = [&](CLI::Option* inl, CLI::Option* file) {
    if (!inl->count() && !file->count()) throw InputError("one of --formula or --formula-file is required");
    return load_formula(formula, formula_file);
  };

  try {
    if (check->parsed()) return cmd_check(kripke, hna, bound(depth_opt, max_depth), json, out, diag);
    if (check_formula->parsed()) return cmd_check_formula(kripke, read_formula(f_inline, f_file), json, out);
    if (o_formula->parsed())
      return cmd_oracle_formula(kripke, read_formula(of_inline, of_file), bound(of_len, max_len), json, out);
    if (o_hna->parsed())
      return cmd_oracle_hna(kripke, hna, bound(oh_len, max_len), bound(oh_acts, max_actions), json, out, diag);
    for (const auto& [name, sub] : sfa_ops)
      if (sub->parsed()) {
        std::optional<std::size_t> len;
        if (name == "enumerate") len = bound(*enum_len, max_len).value_or(0);
        return cmd_sfa(name, sfa_files, segment, len, out);
      }
  } catch (const Error& e) {
    diag.error(e.what());
    return kExitError;
  } catch (const std::exception& e) {
    diag.error(std::string("internal: ") + e.what());
    return kExitError;
  }
  diag.error("no command given");
  return kExitError;
}

}  // namespace hnamc
