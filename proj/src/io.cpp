#include "bobw/io.hpp"

#include <fstream>
#include <sstream>

namespace bobw {

namespace {

std::pair<int, int> line_column(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  for (std::size_t k = 0; k < text.size() && k + 1 < byte; ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing key '" + key + "'");
  return *it;
}

int int_from_json(const Json& value, const std::string& where) {
  if (!value.is_number_integer()) throw ParseError(where + ": expected an integer");
  return value.get<int>();
}

std::vector<Rational> rationals_from_json(const Json& arr, const std::string& where) {
  if (!arr.is_array()) throw ParseError(where + ": expected an array");
  std::vector<Rational> out;
  out.reserve(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k)
    out.push_back(rational_from_json(arr[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

Json rationals_to_json(const std::vector<Rational>& values) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back(rational_to_json(v));
  return arr;
}

Valuation valuation_from_json(const Json& obj, const std::string& where) {
  const Json& kind = require(obj, "kind", where);
  if (!kind.is_string()) throw ParseError(where + ".kind: expected a string");
  const auto name = kind.get<std::string>();
  if (name == "additive") return Additive{rationals_from_json(require(obj, "values", where), where + ".values")};
  if (name == "multidemand")
    return MultiDemand{int_from_json(require(obj, "k", where), where + ".k"),
                       rationals_from_json(require(obj, "values", where), where + ".values")};
  if (name == "xos") {
    const Json& clauses = require(obj, "clauses", where);
    if (!clauses.is_array()) throw ParseError(where + ".clauses: expected an array");
    Xos x;
    for (std::size_t c = 0; c < clauses.size(); ++c)
      x.clauses.push_back(
          rationals_from_json(clauses[c], where + ".clauses[" + std::to_string(c) + "]"));
    return x;
  }
  if (name == "oracle") return Oracle{rationals_from_json(require(obj, "table", where), where + ".table")};
  throw ParseError(where + ".kind: unknown valuation kind '" + name + "'");
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    // Keep only the reason; the location is recomputed above.
    std::string reason = e.what();
    if (const auto colon = reason.find(": "); colon != std::string::npos) reason = reason.substr(colon + 2);
    throw ParseError("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason,
                     line, column);
  }
}

Rational rational_from_json(const Json& value, const std::string& where) {
  try {
    if (value.is_string()) return parse_rational(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    // dump() yields the shortest round-trip decimal, so 0.9 becomes 9/10.
    if (value.is_number_float()) return parse_rational(value.dump());
  } catch (const std::invalid_argument& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": expected a rational");
}

Json rational_to_json(const Rational& r) { return to_string(r); }

Instance instance_from_json(const Json& doc) {
  const int agents = int_from_json(require(doc, "agents", "instance"), "agents");
  const int goods = int_from_json(require(doc, "goods", "instance"), "goods");
  if (agents < 1) throw ParseError("agents: must be at least 1");
  if (goods < 1) throw ParseError("goods: must be at least 1");
  auto weights = rationals_from_json(require(doc, "weights", "instance"), "weights");
  if (static_cast<int>(weights.size()) != agents)
    throw ParseError("weights: expected " + std::to_string(agents) + " entries");
  const Json& vals = require(doc, "valuations", "instance");
  if (!vals.is_array() || static_cast<int>(vals.size()) != agents)
    throw ParseError("valuations: expected an array of " + std::to_string(agents) + " objects");
  std::vector<Valuation> valuations;
  for (int i = 0; i < agents; ++i)
    valuations.push_back(valuation_from_json(vals[i], "valuations[" + std::to_string(i) + "]"));
  std::vector<int> order;
  if (const auto it = doc.find("good_order"); it != doc.end()) {
    if (!it->is_array()) throw ParseError("good_order: expected an array");
    for (std::size_t k = 0; k < it->size(); ++k)
      order.push_back(int_from_json((*it)[k], "good_order[" + std::to_string(k) + "]"));
  }
  return Instance(std::move(weights), std::move(valuations), goods, std::move(order));
}

Instance load_instance(std::string_view text) { return instance_from_json(parse_json(text)); }

Instance load_instance_file(const std::string& path) {
  return load_instance(read_text_file(path));
}

Json valuation_to_json(const Valuation& v) {
  Json obj;
  obj["kind"] = std::string(kind_name(kind_of(v)));
  if (const auto* a = std::get_if<Additive>(&v)) {
    obj["values"] = rationals_to_json(a->values);
  } else if (const auto* d = std::get_if<MultiDemand>(&v)) {
    obj["k"] = d->k;
    obj["values"] = rationals_to_json(d->values);
  } else if (const auto* x = std::get_if<Xos>(&v)) {
    Json clauses = Json::array();
    for (const auto& c : x->clauses) clauses.push_back(rationals_to_json(c));
    obj["clauses"] = clauses;
  } else {
    obj["table"] = rationals_to_json(std::get<Oracle>(v).table);
  }
  return obj;
}

Json instance_to_json(const Instance& instance) {
  Json doc;
  doc["agents"] = instance.agents();
  doc["goods"] = instance.goods();
  doc["weights"] = rationals_to_json(instance.weights());
  Json vals = Json::array();
  for (const auto& v : instance.valuations()) vals.push_back(valuation_to_json(v));
  doc["valuations"] = vals;
  doc["good_order"] = instance.good_order();
  return doc;
}

Lottery lottery_from_json(const Json& doc, int goods) {
  const Json& support = require(doc, "support", "lottery");
  if (!support.is_array()) throw ParseError("support: expected an array");
  std::vector<LotteryEntry> entries;
  for (std::size_t h = 0; h < support.size(); ++h) {
    const std::string where = "support[" + std::to_string(h) + "]";
    const Rational prob = rational_from_json(require(support[h], "prob", where), where + ".prob");
    const Json& bundles = require(support[h], "bundles", where);
    if (!bundles.is_array()) throw ParseError(where + ".bundles: expected an array");
    std::vector<Bundle> parts;
    for (std::size_t i = 0; i < bundles.size(); ++i) {
      if (!bundles[i].is_array()) throw ParseError(where + ".bundles: expected arrays of goods");
      Bundle b;
      for (const auto& g : bundles[i]) b.push_back(int_from_json(g, where + ".bundles"));
      std::sort(b.begin(), b.end());
      parts.push_back(std::move(b));
    }
    try {
      entries.push_back({prob, IntegralAllocation::from_bundles(goods, parts)});
    } catch (const std::exception& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return Lottery(std::move(entries));
}

Lottery load_lottery_file(const std::string& path, int goods) {
  return lottery_from_json(parse_json(read_text_file(path)), goods);
}

Json bundle_to_json(const Bundle& bundle) { return Json(bundle); }

Json lottery_to_json(const Lottery& lottery) {
  Json support = Json::array();
  for (const auto& entry : lottery.support()) {
    Json bundles = Json::array();
    for (const auto& b : entry.allocation.bundles()) bundles.push_back(bundle_to_json(b));
    support.push_back(Json{{"prob", rational_to_json(entry.probability)}, {"bundles", bundles}});
  }
  return Json{{"support", support}};
}

Json matrix_to_json(const RationalMatrix& x) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index g = 0; g < x.cols(); ++g) row.push_back(rational_to_json(x(i, g)));
    rows.push_back(row);
  }
  return rows;
}

RationalMatrix matrix_from_json(const Json& rows, const std::string& where) {
  if (!rows.is_array() || rows.empty()) throw ParseError(where + ": expected a nonempty array of rows");
  const auto cols = rows[0].is_array() ? rows[0].size() : 0;
  RationalMatrix x(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto row = rationals_from_json(rows[i], where + "[" + std::to_string(i) + "]");
    if (row.size() != cols) throw ParseError(where + ": ragged rows");
    for (std::size_t g = 0; g < cols; ++g) x(i, g) = row[g];
  }
  return x;
}

}  // namespace bobw
