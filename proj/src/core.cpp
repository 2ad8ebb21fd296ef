#include "hnamc/core.hpp"

#include <algorithm>

#include <boost/container_hash/hash.hpp>

#include "hnamc/errors.hpp"

namespace hnamc {

Domain::Domain(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.empty()) throw InvalidModelError("domain must contain at least one value");
  std::sort(tokens_.begin(), tokens_.end());
  if (std::adjacent_find(tokens_.begin(), tokens_.end()) != tokens_.end())
    throw InvalidModelError("domain values must be unique");
  if (tokens_.size() >= kTerm) throw InvalidModelError("domain too large");
  for (const auto& t : tokens_) {
    if (t.empty() || t == "#") throw InvalidModelError("'#' is reserved and cannot be a domain value");
    if (t.find_first_of(" \t,=") != std::string::npos)
      throw InvalidModelError("domain value '" + t + "' contains a reserved character");
    if (t.size() != 1) compact_ = false;
  }
}

const std::string& Domain::token(Value v) const {
  static const std::string term = "#";
  if (v == kTerm) return term;
  return tokens_.at(v);
}

std::optional<Value> Domain::index(std::string_view token) const {
  auto it = std::lower_bound(tokens_.begin(), tokens_.end(), token);
  if (it == tokens_.end() || *it != token) return std::nullopt;
  return static_cast<Value>(it - tokens_.begin());
}

VarSet::VarSet(std::vector<std::string> names) : names_(std::move(names)) {
  if (names_.empty()) throw InvalidModelError("variable set must not be empty");
  auto sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) throw InvalidModelError("duplicate variable '" + *dup + "'");
}

std::optional<std::size_t> VarSet::index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t LetterHash::operator()(const Letter& l) const noexcept {
  return boost::hash_range(l.begin(), l.end());
}

bool is_all_term(const Letter& letter) {
  return std::all_of(letter.begin(), letter.end(), [](Value v) { return v == kTerm; });
}

UnzippedSegment UnzippedSegment::empty(std::size_t var_count) {
  return UnzippedSegment(std::vector<ValueString>(var_count));
}

std::size_t UnzippedSegment::max_length() const {
  std::size_t m = 0;
  for (const auto& s : strings) m = std::max(m, s.size());
  return m;
}

ValueString stutter_reduce(const ValueString& s) {
  ValueString out;
  out.reserve(s.size());
  for (Value v : s)
    if (out.empty() || out.back() != v) out.push_back(v);
  return out;
}

UnzippedSegment stutter_reduce(const UnzippedSegment& tau) {
  UnzippedSegment out;
  out.strings.reserve(tau.strings.size());
  for (const auto& s : tau.strings) out.strings.push_back(stutter_reduce(s));
  return out;
}

bool is_stutter_free(const ValueString& s) {
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

bool is_stutter_free(const UnzippedSegment& tau) {
  return std::all_of(tau.strings.begin(), tau.strings.end(),
                     [](const ValueString& s) { return is_stutter_free(s); });
}

UnzippedSegment unzip(const ZippedSegment& tau, std::size_t var_count) {
  UnzippedSegment out = UnzippedSegment::empty(var_count);
  for (auto& s : out.strings) s.reserve(tau.size());
  for (const auto& step : tau) {
    if (step.size() != var_count) throw VarMismatchError("valuation does not cover the variable set");
    for (std::size_t x = 0; x < var_count; ++x) out.strings[x].push_back(step[x]);
  }
  return out;
}

bool sr_prefix(const ValueString& s, const ValueString& t) {
  const ValueString rs = stutter_reduce(s);
  const ValueString rt = stutter_reduce(t);
  if (rs.size() > rt.size()) return false;
  return std::equal(rs.begin(), rs.end(), rt.begin());
}

UnzippedSegment restrict_segment(const UnzippedSegment& tau, const std::vector<std::size_t>& coords) {
  UnzippedSegment out;
  out.strings.reserve(coords.size());
  for (auto c : coords) out.strings.push_back(tau.strings.at(c));
  return out;
}

std::string format_value(Value v, const Domain& domain) { return domain.token(v); }

std::string format_string(const ValueString& s, const Domain& domain) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i > 0 && !domain.compact()) out += ',';
    out += domain.token(s[i]);
  }
  return out;
}

std::string format_letter(const Letter& letter, const VarSet& vars, const Domain& domain) {
  std::string out;
  for (std::size_t i = 0; i < letter.size(); ++i) {
    if (i > 0) out += ' ';
    out += vars.name(i) + "=" + domain.token(letter[i]);
  }
  return out;
}

std::string format_segment(const UnzippedSegment& tau, const VarSet& vars, const Domain& domain) {
  std::string out;
  for (std::size_t i = 0; i < tau.strings.size(); ++i) {
    if (i > 0) out += ' ';
    out += vars.name(i) + "=" + format_string(tau.strings[i], domain);
  }
  return out;
}

std::optional<ValueString> parse_value_string(std::string_view text, const Domain& domain) {
  ValueString out;
  if (text.empty()) return out;
  if (domain.compact() && text.find(',') == std::string_view::npos) {
    for (char c : text) {
      auto v = domain.index(std::string_view(&c, 1));
      if (!v) return std::nullopt;
      out.push_back(*v);
    }
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    auto tok = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    auto v = domain.index(tok);
    if (!v) return std::nullopt;
    out.push_back(*v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace hnamc
