#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ceei/model.hpp"

namespace ceei {

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& detail);
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SchemaError : public Error {
 public:
  SchemaError(std::string field, const std::string& detail);
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Reads {"agents": n, "objects": m, "utilities": [[...], ...]}. Entries are
/// JSON integers or strings "a" / "a/b"; decimals and negatives are schema
/// errors. Throws SyntaxError, SchemaError, or InvariantError.
Instance parse_instance(std::string_view text);

/// Canonical compact form: fixed key order, no whitespace, integers as JSON
/// numbers when they fit in 64 bits, everything else as reduced "a/b" strings.
std::string serialize_instance(const Instance& inst);

/// Reads {"owner": [agent per object]} (0-based agent indices) and checks it
/// against the instance shape.
DiscreteAssignment parse_assignment(std::string_view text, const Instance& inst);
std::string serialize_assignment(const DiscreteAssignment& y);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string instance_digest(const Instance& inst);

}  // namespace ceei
