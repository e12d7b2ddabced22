#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lopact/group.hpp"
#include "lopact/ring.hpp"

namespace lopact {

/// Syntax or validation error in a model file, with a 1-based position.
class ModelError : public std::runtime_error {
 public:
  ModelError(std::size_t line, std::size_t column, const std::string& message);

  std::size_t line;
  std::size_t column;
  std::string detail;  // message without the position prefix
};

struct OrderSpec {
  enum class Kind { homomorphism, semigroup };
  Kind kind = Kind::homomorphism;
  std::vector<std::int64_t> weights;      // homomorphism, one per generator
  std::vector<GroupElement> generators;   // semigroup

  OrderOracle oracle() const;
};

/// Parsed model file:
///
///   [group]    kind = free | free_abelian; generators = a, b (or rank = d)
///   [order]    kind = homomorphism | semigroup; weights = a:1, b:1;
///              generators = a, b
///   [matrix]   n = 2; entry.k.m = integer group-ring expression (1-based)
///   [options]  free-form key = value defaults for command flags
///
/// Lines starting with '#' are comments. Entries not listed are zero.
struct Model {
  GroupPtr group;
  std::optional<OrderSpec> order;
  RingMatrix matrix;
  std::map<std::string, std::string> options;
};

/// expr := ['+'|'-'] term (('+'|'-') term)*; term := integer ['*' word] |
/// word; word := atom ('*' atom)*; atom := name ['^' signed-integer] | e.
/// Throws ModelError with line 1 and the offending column.
RingElement parse_expression(std::string_view text, const GroupPtr& group);

Model parse_model(std::string_view text);

/// Canonical text form; parse_model(emit_model(m)) reproduces m.
std::string emit_model(const Model& model);

}  // namespace lopact
