#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bobw/core.hpp"

namespace bobw {

using Json = nlohmann::ordered_json;

/// Malformed document. line/column are 1-based and 0 when unknown (schema
/// errors carry a JSON path in the message instead).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

std::string read_text_file(const std::string& path);

/// Parses text into JSON, mapping syntax errors to ParseError with line info.
Json parse_json(std::string_view text);

/// Accepts "p/q" strings, integers, and decimal numbers.
Rational rational_from_json(const Json& value, const std::string& where);
Json rational_to_json(const Rational& r);

/// {agents, goods, weights, valuations, good_order?}. Schema problems raise
/// ParseError; semantic ones (weight sum, negative values, non-monotone oracle
/// tables) raise std::invalid_argument from Instance validation.
Instance instance_from_json(const Json& doc);
Instance load_instance(std::string_view text);
Instance load_instance_file(const std::string& path);

Json instance_to_json(const Instance& instance);
Json valuation_to_json(const Valuation& v);

/// {support: [{prob, bundles}]}; other keys are ignored.
Lottery lottery_from_json(const Json& doc, int goods);
Lottery load_lottery_file(const std::string& path, int goods);
Json lottery_to_json(const Lottery& lottery);

Json matrix_to_json(const RationalMatrix& x);
RationalMatrix matrix_from_json(const Json& rows, const std::string& where);

Json bundle_to_json(const Bundle& bundle);

}  // namespace bobw
