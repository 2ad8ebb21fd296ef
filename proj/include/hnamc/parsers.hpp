#pragma once

// Text formats: formulas (.hnl), Kripke structures (.kripke), hypernode automata
// (.hna) and stutter-free automata (.sfa). Line-oriented formats treat '#' at the start
// of a token as a comment; LF and CRLF line endings are accepted.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hnamc/errors.hpp"
#include "hnamc/hna.hpp"
#include "hnamc/kripke.hpp"
#include "hnamc/logic.hpp"
#include "hnamc/sfa.hpp"

namespace hnamc {

/// 1-based line and column of the first byte, plus the byte range [begin, end).
struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t begin = 0;
  std::size_t end = 1;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, SourceSpan span)
      : Error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message),
        span_(span),
        message_(message) {}

  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }

 private:
  SourceSpan span_;
  std::string message_;
};

Formula parse_formula(std::string_view text);

struct KripkeFile {
  Kripke k;
  ActionLabeling labeling;
  bool declares_actions = false;
  std::vector<WorldId> entries;
  std::vector<WorldId> exits;
  std::optional<WorldId> initial;

  /// Throw InvalidModelError when the file lacks in/out or init lines.
  OpenKripke open() const;
  PointedLabeledKripke pointed() const;
};

KripkeFile parse_kripke(std::string_view text);
std::string serialize_kripke(const KripkeFile& file);

Hna parse_hna(std::string_view text);
std::string serialize_hna(const Hna& h);

Sfa parse_sfa(std::string_view text);
std::string serialize_sfa(const Sfa& a);

/// "x=010 y=01": every variable exactly once, values written as format_string prints them.
UnzippedSegment parse_segment(std::string_view text, const VarSet& vars, const Domain& domain);

}  // namespace hnamc
