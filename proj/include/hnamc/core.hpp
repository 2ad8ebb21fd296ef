#pragma once

// Value types shared by every module: domains, variable sets, letters,
// zipped/unzipped trace segments and the stutter-reduced prefix relation.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace hnamc {

/// Index of a value token inside a Domain. kTerm encodes the termination symbol '#'.
using Value = std::uint8_t;
inline constexpr Value kTerm = 0xFF;

/// A finite string of domain values (never contains kTerm).
using ValueString = std::vector<Value>;

/// The finite value domain. Tokens are kept in lexicographic order so that value
/// indices, and everything derived from them, are reproducible.
class Domain {
 public:
  Domain() = default;
  explicit Domain(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(Value v) const;
  std::optional<Value> index(std::string_view token) const;
  /// True when every token is a single character, so strings print without separators.
  bool compact() const { return compact_; }

  bool operator==(const Domain& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  bool compact_ = true;
};

/// Ordered set of program variable names.
class VarSet {
 public:
  VarSet() = default;
  explicit VarSet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> index(std::string_view name) const;
  bool contains(std::string_view name) const { return index(name).has_value(); }

  bool operator==(const VarSet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
};

/// One letter of the automaton alphabet: a value or '#' per variable coordinate.
using Letter = boost::container::small_vector<Value, 8>;

struct LetterHash {
  std::size_t operator()(const Letter& l) const noexcept;
};

bool is_all_term(const Letter& letter);

/// A valuation of every variable to a domain value (no '#').
using SegmentValuation = std::vector<Value>;

/// A trace segment: finite sequence of valuations over a common VarSet.
using ZippedSegment = std::vector<SegmentValuation>;

/// Per-variable value strings; strings may have different lengths.
struct UnzippedSegment {
  std::vector<ValueString> strings;

  UnzippedSegment() = default;
  explicit UnzippedSegment(std::vector<ValueString> s) : strings(std::move(s)) {}
  /// All strings empty.
  static UnzippedSegment empty(std::size_t var_count);

  std::size_t var_count() const { return strings.size(); }
  std::size_t max_length() const;

  auto operator<=>(const UnzippedSegment&) const = default;
  bool operator==(const UnzippedSegment&) const = default;
};

ValueString stutter_reduce(const ValueString& s);
UnzippedSegment stutter_reduce(const UnzippedSegment& tau);
bool is_stutter_free(const ValueString& s);
bool is_stutter_free(const UnzippedSegment& tau);

/// Per-variable projection of a zipped segment over `var_count` variables.
UnzippedSegment unzip(const ZippedSegment& tau, std::size_t var_count);

/// Stutter-reduced prefixing: reduce(s) is a prefix of reduce(t).
/// The empty string is related to everything; nothing non-empty is related to "".
bool sr_prefix(const ValueString& s, const ValueString& t);

/// Restriction of a segment to the listed coordinates, in that order.
UnzippedSegment restrict_segment(const UnzippedSegment& tau, const std::vector<std::size_t>& coords);

// Display helpers. Compact domains print "010"; others print "lo,hi,lo".
std::string format_string(const ValueString& s, const Domain& domain);
std::string format_value(Value v, const Domain& domain);
std::string format_letter(const Letter& letter, const VarSet& vars, const Domain& domain);
std::string format_segment(const UnzippedSegment& tau, const VarSet& vars, const Domain& domain);

/// Parses a value string written as format_string prints it. Returns nullopt on an
/// unknown token.
std::optional<ValueString> parse_value_string(std::string_view text, const Domain& domain);

}  // namespace hnamc
