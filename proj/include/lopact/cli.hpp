#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "lopact/model.hpp"
#include "lopact/rational.hpp"

namespace lopact::cli {

using Json = nlohmann::ordered_json;

/// Command flags; unset values fall back to the model's [options] section,
/// then to built-in defaults.
struct Flags {
  std::optional<std::string> eps;
  std::optional<std::string> prune;
  std::optional<std::string> side;  // "row" | "column"
  std::optional<std::string> coords;
  std::optional<int> window;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> height;
  std::optional<std::uint64_t> node_budget;
  std::optional<std::uint64_t> max_support;
  bool boundary_open = false;
};

struct Outcome {
  Json report;
  int exit_code = 0;  // 0 success, 1 usage or input error, 2 invariant failure
};

/// Runs classify, invert, map, verify-haar or verify-collisions.
Outcome run(const std::string& command, const Model& model, const Flags& flags);

/// `key = value` lines, nested keys joined by '.', array items as [i].
std::string render_text(const Json& report);
std::string render_json(const Json& report);

/// {"fraction": "p/q", "decimal": "..."}.
Json rational_json(const Rational& q);

std::uint64_t fnv1a64(std::string_view bytes);

/// Full command line: `lopact <command> MODEL [flags] [--out PATH] [--json]`.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace lopact::cli
