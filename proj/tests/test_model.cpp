#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "lopact/model.hpp"
#include "support.hpp"

namespace lopact {
namespace {

using testing::random_matrix;
using testing::random_ring;
using testing::Rng;
using testing::property_cases;
using testing::word;

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(LOPACT_MODELS_DIR) + "/" + name, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ModelError model_error(std::string_view text) {
  try {
    parse_model(text);
  } catch (const ModelError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ModelError for:\n" << text;
  return ModelError(0, 0, "");
}

ModelError expression_error(std::string_view text, const GroupPtr& g) {
  try {
    parse_expression(text, g);
  } catch (const ModelError& e) {
    return e;
  }
  ADD_FAILURE() << "expected ModelError for " << text;
  return ModelError(0, 0, "");
}

TEST(Expression, Examples) {
  auto g = GroupSpec::free_group({"a", "b"});
  auto x = parse_expression("7 - 2*a^3*b^2", g);
  ASSERT_EQ(x.size(), 2u);
  EXPECT_EQ(x.coefficient(g->identity()), 7);
  EXPECT_EQ(x.coefficient(word(g, "a^3*b^2")), -2);

  auto y = parse_expression("-10 - 3*a^8", g);
  EXPECT_EQ(y.coefficient(g->identity()), -10);
  EXPECT_EQ(y.coefficient(word(g, "a^8")), -3);

  EXPECT_TRUE(parse_expression("0", g).is_zero());
  EXPECT_TRUE(parse_expression("a - a", g).is_zero());
  EXPECT_EQ(parse_expression("b^7*a", g), RingElement::monomial(g, word(g, "b^7*a"), Rational(1)));
  EXPECT_EQ(parse_expression("a^(-2) + e", g), parse_expression("1 + a^-2", g));
  EXPECT_EQ(parse_expression("  3 *a^-1*  a ", g), parse_expression("3", g));
}

TEST(Expression, ErrorsCarryColumns) {
  auto g = GroupSpec::free_group({"a", "b"});
  auto e = expression_error("3 + c", g);
  EXPECT_EQ(e.line, 1u);
  EXPECT_EQ(e.column, 5u);
  EXPECT_EQ(e.detail, "unknown generator 'c'");

  e = expression_error("1/2*a", g);
  EXPECT_EQ(e.detail, "non-integer coefficient");

  e = expression_error("2 + ", g);
  EXPECT_EQ(e.detail, "missing term");
  EXPECT_EQ(expression_error("", g).detail, "empty expression");
  EXPECT_EQ(expression_error("a^", g).detail, "exponent must be an integer");
  EXPECT_EQ(expression_error("a^x", g).detail, "exponent must be an integer");
  EXPECT_EQ(expression_error("a*2", g).detail, "coefficient must come first in a term");
  EXPECT_EQ(expression_error("a b", g).column, 3u);
}

TEST(Model, ParsesShippedModels) {
  for (const char* name : {"three_minus_t.model", "f2_row.model", "f2_both.model", "z2_both.model"}) {
    SCOPED_TRACE(name);
    const std::string text = slurp(name);
    ASSERT_FALSE(text.empty());
    const Model m = parse_model(text);
    const std::string emitted = emit_model(m);
    const Model again = parse_model(emitted);
    EXPECT_EQ(again.matrix, m.matrix);
    EXPECT_EQ(again.options, m.options);
    EXPECT_EQ(again.order.has_value(), m.order.has_value());
    EXPECT_EQ(emit_model(again), emitted);
  }
  const Model t = parse_model(slurp("three_minus_t.model"));
  EXPECT_EQ(t.group->kind(), GroupKind::free_abelian);
  EXPECT_EQ(t.matrix.size(), 1u);
  EXPECT_EQ(t.options.at("seed"), "7");
  ASSERT_TRUE(t.order);
  EXPECT_EQ(t.order->kind, OrderSpec::Kind::homomorphism);
  EXPECT_EQ(t.order->weights, std::vector<std::int64_t>{1});

  const Model f = parse_model(slurp("f2_row.model"));
  EXPECT_EQ(f.group->kind(), GroupKind::free);
  EXPECT_EQ(f.matrix.at(1, 1), parse_expression("-10 - 3*a^8", f.group));
  EXPECT_TRUE(f.matrix.at(0, 1) == parse_expression("3*a + b^7*a", f.group));
  ASSERT_TRUE(f.order);
  EXPECT_EQ(f.order->kind, OrderSpec::Kind::semigroup);
  EXPECT_EQ(f.order->generators.size(), 2u);
}

TEST(Model, MinimalAndDefaults) {
  const Model m = parse_model("[group]\nkind = free_abelian\nrank = 2\n[matrix]\nn = 2\nentry.1.1 = 3\n");
  EXPECT_EQ(m.group->rank(), 2);
  EXPECT_FALSE(m.order);
  EXPECT_TRUE(m.options.empty());
  EXPECT_EQ(m.matrix.at(0, 0), parse_expression("3", m.group));
  EXPECT_TRUE(m.matrix.at(1, 1).is_zero());
  EXPECT_TRUE(m.matrix.at(0, 1).is_zero());
}

TEST(Model, StructuralErrors) {
  auto e = model_error("[group]\nkind = free\ngenerators = a\n[matrix]\nn = 1\nentry.1.1 = 2 + q\n");
  EXPECT_EQ(e.line, 6u);
  EXPECT_EQ(e.column, 17u);
  EXPECT_EQ(e.detail, "unknown generator 'q'");

  e = model_error("[group]\nkind = free\ngenerators = a\n[matrix]\nn = 1\nentry.1.1 = 1/2\n");
  EXPECT_EQ(e.line, 6u);
  EXPECT_EQ(e.detail, "non-integer coefficient");

  EXPECT_EQ(model_error("[grp]\n").detail, "unknown section 'grp'");
  EXPECT_EQ(model_error("[group]\n[group]\n").detail, "duplicate section 'group'");
  EXPECT_EQ(model_error("[group]\nkind = free\nkind = free\n").detail, "duplicate key 'kind'");
  EXPECT_EQ(model_error("[group]\ncolour = red\n").detail, "unknown key 'colour' in [group]");
  EXPECT_EQ(model_error("kind = free\n").detail, "key outside of a section");
  EXPECT_EQ(model_error("[matrix]\nn = 1\n").detail, "missing [group] section");
  EXPECT_EQ(model_error("[group]\nkind = free\n[matrix]\nn = 1\n").detail, "free groups need generators");
  EXPECT_EQ(model_error("[group]\nkind = free\ngenerators = a\n[matrix]\nn = 1\nentry.1 = 2\n").detail,
            "malformed entry key 'entry.1'");
  EXPECT_EQ(model_error("[group]\nkind = free\ngenerators = a\n[matrix]\nn = 1\nentry.2.1 = 2\n").detail,
            "entry index out of range in 'entry.2.1'");
  EXPECT_EQ(model_error("[group]\nkind = free\ngenerators = a\n[matrix]\nn = 0\n").detail, "n must be positive");
  EXPECT_EQ(model_error("[group]\nkind = free\ngenerators = a\n[matrix]\nn = 1\n[order]\nkind = homomorphism\n"
                        "weights = z:1\n")
                .detail,
            "unknown generator 'z'");
  auto bad = model_error("[group]\nkind = free\ngenerators = a\nnonsense\n");
  EXPECT_EQ(bad.line, 4u);
  EXPECT_EQ(bad.detail, "expected 'key = value'");
  EXPECT_NE(std::string(bad.what()).find("line 4, column 1"), std::string::npos);
}

// Property suites.

TEST(ModelProperties, ExpressionRoundTrip) {
  Rng rng(71);
  for (int i = 0; i < property_cases; ++i) {
    auto g = i % 2 ? GroupSpec::free_group({"a", "b"}) : GroupSpec::free_abelian({"a", "b", "c"});
    auto x = random_ring(g, rng, 5, 4, 20);
    ASSERT_EQ(parse_expression(x.to_string(), g), x) << x.to_string();
  }
}

TEST(ModelProperties, EmitParseRoundTrip) {
  Rng rng(72);
  for (int i = 0; i < property_cases; ++i) {
    auto g = i % 2 ? GroupSpec::free_group({"a", "b"}) : GroupSpec::free_abelian({"x", "y"});
    const std::size_t n = static_cast<std::size_t>(testing::uniform_int(rng, 1, 3));
    Model m{g, std::nullopt, random_matrix(g, rng, n, 3), {}};
    if (testing::uniform_int(rng, 0, 1)) {
      OrderSpec o;
      if (testing::uniform_int(rng, 0, 1)) {
        o.kind = OrderSpec::Kind::homomorphism;
        o.weights = {testing::uniform_int(rng, -3, 3), testing::uniform_int(rng, -3, 3)};
      } else {
        o.kind = OrderSpec::Kind::semigroup;
        auto s = testing::random_element(m.group, rng, 3);
        while (s == m.group->identity()) s = testing::random_element(m.group, rng, 3);
        o.generators = {s, m.group->generator(1)};
      }
      m.order = o;
    }
    if (testing::uniform_int(rng, 0, 1)) m.options["seed"] = std::to_string(i);
    const std::string text = emit_model(m);
    const Model back = parse_model(text);
    ASSERT_EQ(back.matrix, m.matrix) << text;
    ASSERT_EQ(back.options, m.options);
    ASSERT_EQ(back.order.has_value(), m.order.has_value());
    if (m.order) {
      ASSERT_EQ(back.order->kind, m.order->kind);
      ASSERT_EQ(back.order->weights, m.order->weights);
      ASSERT_EQ(back.order->generators, m.order->generators);
    }
    ASSERT_EQ(emit_model(back), text);
  }
}

}  // namespace
}  // namespace lopact
