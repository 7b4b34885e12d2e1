#include "ceei/instance_io.hpp"

#include <cstdint>
#include <cstdio>
#include <limits>

#include "json.hpp"

namespace ceei {

using json = nlohmann::ordered_json;

SyntaxError::SyntaxError(std::size_t line, std::size_t column, const std::string& detail)
    : Error("syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) +
            ": " + detail),
      line_(line),
      column_(column) {}

SchemaError::SchemaError(std::string field, const std::string& detail)
    : Error("schema error in '" + field + "': " + detail), field_(std::move(field)) {}

namespace {

json parse_document(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // e.byte is the 1-based offset of the offending character.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < stop; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw SyntaxError(line, column, e.what());
  }
}

std::size_t read_count(const json& doc, const char* field) {
  if (!doc.contains(field)) throw SchemaError(field, "missing");
  const json& v = doc.at(field);
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<std::int64_t>() < 0)) {
    throw SchemaError(field, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

Rational read_utility(const json& v, const std::string& field) {
  Rational out;
  if (v.is_number_unsigned()) {
    out = Rational(BigInt(std::to_string(v.get<std::uint64_t>())));
  } else if (v.is_number_integer()) {
    out = Rational(BigInt(std::to_string(v.get<std::int64_t>())));
  } else if (v.is_string()) {
    try {
      out = parse_rational(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw SchemaError(field, e.what());
    }
  } else {
    throw SchemaError(field, "expected an integer or a \"num/den\" string");
  }
  if (sgn(out) < 0) throw SchemaError(field, "utilities must be nonnegative");
  return out;
}

json utility_to_json(const Rational& v) {
  if (v.get_den() == 1 && v.get_num().fits_slong_p()) return json(v.get_num().get_si());
  return json(to_string(v));
}

}  // namespace

Instance parse_instance(std::string_view text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw SchemaError("$", "expected an object");
  const std::size_t n = read_count(doc, "agents");
  const std::size_t m = read_count(doc, "objects");
  if (!doc.contains("utilities") || !doc.at("utilities").is_array()) {
    throw SchemaError("utilities", "expected an array of rows");
  }
  const json& rows = doc.at("utilities");
  if (rows.size() != n) {
    throw SchemaError("utilities", "has " + std::to_string(rows.size()) + " rows, agents = " +
                                       std::to_string(n));
  }
  Matrix<Rational> u(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_field = "utilities[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || rows[i].size() != m) {
      throw SchemaError(row_field, "expected " + std::to_string(m) + " entries");
    }
    for (std::size_t j = 0; j < m; ++j) {
      u(i, j) = read_utility(rows[i][j], row_field + "[" + std::to_string(j) + "]");
    }
  }
  Instance inst(std::move(u));
  require_valid(inst);
  return inst;
}

std::string serialize_instance(const Instance& inst) {
  json rows = json::array();
  for (AgentIndex i = 0; i < inst.agents(); ++i) {
    json row = json::array();
    for (const auto& v : inst.row(i)) row.push_back(utility_to_json(v));
    rows.push_back(std::move(row));
  }
  json doc;
  doc["agents"] = inst.agents();
  doc["objects"] = inst.objects();
  doc["utilities"] = std::move(rows);
  return doc.dump();
}

DiscreteAssignment parse_assignment(std::string_view text, const Instance& inst) {
  const json doc = parse_document(text);
  if (!doc.is_object() || !doc.contains("owner") || !doc.at("owner").is_array()) {
    throw SchemaError("owner", "expected an array of agent indices");
  }
  const json& owner = doc.at("owner");
  if (owner.size() != inst.objects()) {
    throw DimensionMismatch("owner vector", inst.objects(), owner.size());
  }
  std::vector<AgentIndex> out;
  for (std::size_t j = 0; j < owner.size(); ++j) {
    const json& v = owner[j];
    const std::string field = "owner[" + std::to_string(j) + "]";
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
        v.get<std::uint64_t>() >= inst.agents()) {
      throw SchemaError(field, "expected an agent index below " + std::to_string(inst.agents()));
    }
    out.push_back(v.get<std::size_t>());
  }
  return DiscreteAssignment(inst.agents(), std::move(out));
}

std::string serialize_assignment(const DiscreteAssignment& y) {
  json doc;
  doc["owner"] = std::vector<std::size_t>(y.owners().begin(), y.owners().end());
  return doc.dump();
}

std::string instance_digest(const Instance& inst) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_instance(inst)) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace ceei
