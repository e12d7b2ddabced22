#include <gtest/gtest.h>

#include <cmath>

#include "lopact/dynamics.hpp"
#include "support.hpp"

namespace lopact {
namespace {

using testing::expr;
using testing::q;
using testing::Rng;
using testing::property_cases;
using testing::word;

RingMatrix scalar(const GroupPtr& g, std::string_view e) {
  RingMatrix f(g, 1);
  f.at(0, 0) = expr(g, e);
  return f;
}

// Inverse of f* at the given depth, unpruned, with the a priori bound.
TruncatedInverse adjoint_at_depth(const LopsidedDecomposition& d, int depth) {
  return adjoint_inverse(truncated_inverse_at_depth(d, depth, Side::column, false));
}

std::uint64_t reference_mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

TEST(Window, BallAndTranslate) {
  auto z = GroupSpec::free_abelian(1);
  auto w = Window::ball(z, 2);
  ASSERT_EQ(w.size(), 5u);
  EXPECT_TRUE(w.contains(word(z, "t^-2")));
  EXPECT_FALSE(w.contains(word(z, "t^3")));
  auto moved = w.translate(word(z, "t"));
  EXPECT_TRUE(moved.contains(word(z, "t^3")));
  EXPECT_FALSE(moved.contains(word(z, "t^-2")));
  EXPECT_THROW(Window(z, {z->identity(), z->identity()}), std::domain_error);
}

TEST(Configuration, ValidatesSymbols) {
  auto z = GroupSpec::free_abelian(1);
  SymbolAlphabet three{{3}};
  auto w = Window::ball(z, 1);
  EXPECT_THROW(Configuration(w, three, {{0}, {3}, {1}}), std::domain_error);
  EXPECT_THROW(Configuration(w, three, {{0}, {1}}), std::domain_error);
  Configuration y(w, three, {{2}, {1}, {0}});
  EXPECT_EQ(y.at(z->identity(), 0), 2);
  EXPECT_EQ(y.at(word(z, "t^5"), 0), 0);
  EXPECT_EQ(y.sup_norm(), 2);
}

TEST(Sampling, RangeAndDeterminism) {
  auto z = GroupSpec::free_abelian(1);
  auto m = SymbolMeasure::uniform(SymbolAlphabet{{3}});
  Window w(z, Window::ball(z, 2).elements());
  auto y = sample_configuration(m, w, 42);
  ASSERT_EQ(y.values().size(), 5u);
  for (const auto& s : y.values()) {
    ASSERT_GE(s[0], 0);
    ASSERT_LE(s[0], 2);
  }
  EXPECT_EQ(sample_configuration(m, w, 42), y);
  EXPECT_EQ(sample_configuration(m, w, 42, 3), sample_configuration(m, w, 42, 3));
  EXPECT_FALSE(sample_configuration(m, Window::ball(z, 20), 1) == sample_configuration(m, Window::ball(z, 20), 2));
}

TEST(Sampling, DrawMatchesReferenceChain) {
  Rng rng(61);
  for (int i = 0; i < property_cases; ++i) {
    const std::uint64_t seed = rng(), trial = rng() % 1000, index = rng() % 1000, comp = rng() % 4;
    const std::uint64_t k0 = reference_mix(seed), k1 = reference_mix(k0 ^ trial), k2 = reference_mix(k1 ^ index);
    ASSERT_EQ(draw(seed, trial, index, comp), reference_mix(k2 ^ ((comp + 1) * 0x9E3779B97F4A7C15ull)));
  }
}

TEST(Sampling, UniformMapsDrawsByMultiplyShift) {
  auto z = GroupSpec::free_abelian(1);
  auto w = Window::ball(z, 3);
  auto y = sample_configuration(SymbolMeasure::uniform(SymbolAlphabet{{7, 10}}), w, 9, 2);
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t k = 0; k < 2; ++k) {
      const unsigned __int128 u = draw(9, 2, i, k);
      const auto expected = static_cast<std::int64_t>((u * (k == 0 ? 7 : 10)) >> 64);
      ASSERT_EQ(y.values()[i][k], expected);
    }
  }
}

TEST(Sampling, NonProductTableHasUniformMarginals) {
  auto z = GroupSpec::free_abelian(1);
  SymbolAlphabet two_two{{2, 2}};
  auto m = SymbolMeasure::table(two_two, {q("3/8"), q("1/8"), q("1/8"), q("3/8")});
  EXPECT_TRUE(m.has_uniform_marginals());
  EXPECT_EQ(m.marginal(1), (std::vector<Rational>{q("1/2"), q("1/2")}));
  EXPECT_EQ(m.probability({1, 1}), q("3/8"));
  EXPECT_THROW(SymbolMeasure::table(two_two, {q("1/2"), q("1/2"), q("1/2"), q("-1/2")}), std::domain_error);
  EXPECT_THROW(SymbolMeasure::table(two_two, {q("1/2"), q("1/4"), q("0"), q("0")}), std::domain_error);

  constexpr std::size_t draws = 100'000;
  auto w = Window::ball(z, 49'999);  // 99'999 points
  std::size_t ones0 = 0, ones1 = 0, equal = 0, total = 0;
  for (std::uint64_t trial = 0; total < draws; ++trial) {
    auto y = sample_configuration(m, w, 5, trial);
    for (const auto& s : y.values()) {
      if (total == draws) break;
      ones0 += s[0];
      ones1 += s[1];
      equal += s[0] == s[1];
      ++total;
    }
  }
  const double tol = 4.0 / std::sqrt(static_cast<double>(draws));
  EXPECT_NEAR(static_cast<double>(ones0) / draws, 0.5, tol);
  EXPECT_NEAR(static_cast<double>(ones1) / draws, 0.5, tol);
  // The joint law is not the product: P(equal) = 3/4.
  EXPECT_NEAR(static_cast<double>(equal) / draws, 0.75, tol);
}

TEST(SymbolMeasure, FourierOfUniform) {
  auto m = SymbolMeasure::uniform(SymbolAlphabet{{3}});
  EXPECT_EQ(m.fourier({q("1/3")}), std::complex<double>(0, 0));
  EXPECT_EQ(m.fourier({q("2")}), std::complex<double>(1, 0));
  const auto half = SymbolMeasure::uniform(SymbolAlphabet{{2}}).fourier({q("1/4")});
  EXPECT_NEAR(half.real(), 0.5, 1e-15);
  EXPECT_NEAR(half.imag(), -0.5, 1e-15);
}

TEST(Shift, ActionLaws) {
  auto z = GroupSpec::free_abelian(1);
  auto g = GroupSpec::free_group({"a", "b"});
  auto y = sample_configuration(SymbolMeasure::uniform(SymbolAlphabet{{3}}), Window::ball(z, 2), 1);
  EXPECT_EQ(shift(z->identity(), y), y);
  Configuration delta(Window(z, {z->identity()}), SymbolAlphabet{{3}}, {{2}});
  EXPECT_EQ(shift(word(z, "t"), delta).at(word(z, "t"), 0), 2);
  EXPECT_EQ(shift(word(z, "t"), delta).at(z->identity(), 0), 0);

  Rng rng(62);
  auto yg = sample_configuration(SymbolMeasure::uniform(SymbolAlphabet{{4}}), Window::ball(g, 2), 3);
  for (int i = 0; i < 1000; ++i) {
    auto s = testing::random_element(g, rng, 3), t = testing::random_element(g, rng, 3);
    ASSERT_EQ(shift(s, shift(t, yg)), shift(s * t, yg));
    auto u = testing::random_element(g, rng, 4);
    ASSERT_EQ(shift(s, yg).at(s * u, 0), yg.at(u, 0));
  }
}

TEST(Pairing, Examples) {
  auto z = GroupSpec::free_abelian(1);
  TorusPoint x;
  x.set({z->identity(), 0}, q("1/3"), 0);
  auto p = pairing(x, RingVector{expr(z, "3")});
  EXPECT_EQ(p.value, 0);
  EXPECT_EQ(p.err, 0);
  EXPECT_EQ(pairing(x, RingVector{RingElement::zero(z)}).value, 0);
  EXPECT_THROW(pairing(x, RingVector{expr(z, "t")}), std::domain_error);

  x.set({word(z, "t"), 0}, q("7/4"), q("1/100"));
  EXPECT_EQ(x.find({word(z, "t"), 0})->value, q("3/4"));
  auto e = pairing(x, RingVector{expr(z, "2 - 3*t")});
  EXPECT_EQ(e.value, q("5/12"));  // 2/3 - 9/4 mod 1
  EXPECT_EQ(e.err, q("3/100"));
  EXPECT_THROW(x.set({z->identity(), 0}, 0, -1), std::domain_error);
}

TEST(Homoclinic, ScalarHasExactHalves) {
  auto z = GroupSpec::free_abelian(1);
  auto d = decompose(scalar(z, "2"));
  auto inv = adjoint_inverse(truncated_inverse(d, q("1/1000"), Side::column));
  auto w = Window::ball(z, 3);
  auto y = sample_configuration(SymbolMeasure::uniform(symbol_alphabet(d)), w, 4);
  std::vector<Coordinate> coords;
  for (const auto& s : w.elements()) coords.push_back({s, 0});
  auto x = homoclinic_image(y, inv, coords);
  for (const auto& c : coords) {
    EXPECT_EQ(x.find(c)->value, Rational(y.at(c.s, 0)) / 2);
    EXPECT_EQ(x.find(c)->err, 0);
  }
}

TEST(Homoclinic, DeltaGivesGeometricSequence) {
  auto z = GroupSpec::free_abelian(1);
  auto d = decompose(scalar(z, "3 - t"));
  auto inv = adjoint_at_depth(d, 12);
  Configuration delta(Window::ball(z, 4), symbol_alphabet(d), {{1}, {0}, {0}, {0}, {0}, {0}, {0}, {0}, {0}});
  std::vector<Coordinate> coords;
  for (int l = 0; l <= 8; ++l) coords.push_back({z->generator(0).power(-l), 0});
  coords.push_back({word(z, "t"), 0});
  auto x = homoclinic_image(delta, inv, coords);
  for (int l = 0; l <= 8; ++l) EXPECT_EQ(x.find(coords[l])->value, 1 / pow(Rational(3), l + 1)) << l;
  EXPECT_EQ(x.find({word(z, "t"), 0})->value, 0);
  EXPECT_THROW(homoclinic_image(Configuration::zero(Window::ball(z, 1), SymbolAlphabet{{4}}), inv, coords),
               std::domain_error);
}

// Property suites.

struct Instance {
  LopsidedDecomposition d;
  TruncatedInverse inv;  // of f*
  int radius;
};

// Radii keep the window cut-off small next to 1/2 for coordinates within
// distance 4 of the identity.
std::vector<Instance> instances() {
  auto z = GroupSpec::free_abelian(1);
  auto g = GroupSpec::free_group({"a", "b"});
  auto z2 = GroupSpec::free_abelian({"a", "b"});
  RingMatrix m2(z2, 2);
  m2.at(0, 0) = expr(z2, "9 - a");
  m2.at(0, 1) = expr(z2, "b");
  m2.at(1, 0) = expr(z2, "-a*b");
  m2.at(1, 1) = expr(z2, "9 + b^2");
  std::vector<Instance> out;
  const std::vector<std::pair<RingMatrix, int>> specs{{scalar(z, "3 - t"), 10}, {scalar(g, "9 - a - b"), 5}, {m2, 8}};
  for (const auto& [f, radius] : specs) {
    auto d = normalized(decompose(f));
    out.push_back({d, adjoint_inverse(truncated_inverse(d, q("1/100000"), Side::column)), radius});
  }
  return out;
}

TEST(DynamicsProperties, AnnihilationByRows) {
  Rng rng(63);
  auto cases = instances();
  int checked = 0;
  for (int i = 0; i < property_cases; ++i) {
    const auto& inst = cases[static_cast<std::size_t>(i) % cases.size()];
    const auto& group = inst.d.f.group();
    auto w = Window::ball(group, inst.radius);
    auto y = sample_configuration(SymbolMeasure::uniform(symbol_alphabet(inst.d)), w, rng());
    const std::size_t n = inst.d.size();
    const std::size_t k = static_cast<std::size_t>(testing::uniform_int(rng, 0, static_cast<std::int64_t>(n) - 1));
    auto s = testing::random_element(group, rng, 2);
    RingVector h;
    for (std::size_t m = 0; m < n; ++m) h.push_back(inst.d.f.at(k, m).left_translate(s));
    std::vector<Coordinate> coords;
    for (std::size_t m = 0; m < n; ++m)
      for (const auto& t : h[m].support()) coords.push_back({t, m});
    auto x = homoclinic_image(y, inst.inv, coords);
    auto p = pairing(x, h);
    ASSERT_LE(circle_distance(p.value, 0), p.err) << "case " << i;
    // The pairing is y_{s,k}: the error must not swallow everything.
    ASSERT_LT(p.err, Rational(1, 2));
    ++checked;
  }
  EXPECT_EQ(checked, property_cases);
}

TEST(DynamicsProperties, ShiftEquivariance) {
  Rng rng(64);
  auto cases = instances();
  for (int i = 0; i < property_cases; ++i) {
    const auto& inst = cases[static_cast<std::size_t>(i) % cases.size()];
    const auto& group = inst.d.f.group();
    auto y = sample_configuration(SymbolMeasure::uniform(symbol_alphabet(inst.d)), Window::ball(group, inst.radius),
                                  rng());
    auto s = testing::random_element(group, rng, 2);
    auto t = testing::random_element(group, rng, 2);
    const std::size_t k = static_cast<std::size_t>(testing::uniform_int(rng, 0, static_cast<std::int64_t>(inst.d.size()) - 1));
    auto base = homoclinic_image(y, inst.inv, {{t, k}});
    auto moved = homoclinic_image(shift(s, y), inst.inv, {{s * t, k}});
    auto shifted = shift(s, base);
    const TorusValue& a = *moved.find({s * t, k});
    const TorusValue& b = *shifted.find({s * t, k});
    ASSERT_LE(circle_distance(a.value, b.value), a.err + b.err);
    ASSERT_LT(a.err + b.err, Rational(1, 2));
  }
}

TEST(DynamicsProperties, Additivity) {
  Rng rng(65);
  auto cases = instances();
  for (int i = 0; i < 2000; ++i) {
    const auto& inst = cases[static_cast<std::size_t>(i) % cases.size()];
    const auto alphabet = symbol_alphabet(inst.d);
    auto w = Window::ball(inst.d.f.group(), inst.radius);
    std::vector<Symbol> a, b, sum;
    for (std::size_t p = 0; p < w.size(); ++p) {
      Symbol sa, sb, ss;
      for (auto size : alphabet.sizes) {
        const auto total = testing::uniform_int(rng, 0, size - 1);
        const auto part = testing::uniform_int(rng, 0, total);
        sa.push_back(part);
        sb.push_back(total - part);
        ss.push_back(total);
      }
      a.push_back(sa);
      b.push_back(sb);
      sum.push_back(ss);
    }
    Coordinate c{testing::random_element(inst.d.f.group(), rng, 2), 0};
    auto xa = homoclinic_image(Configuration(w, alphabet, a), inst.inv, {c});
    auto xb = homoclinic_image(Configuration(w, alphabet, b), inst.inv, {c});
    auto xs = homoclinic_image(Configuration(w, alphabet, sum), inst.inv, {c});
    const auto &va = *xa.find(c), &vb = *xb.find(c), &vs = *xs.find(c);
    ASSERT_LE(circle_distance(vs.value, va.value + vb.value), va.err + vb.err + vs.err);
  }
}

TEST(DynamicsProperties, ErrorIsSoundUnderDeepening) {
  Rng rng(66);
  auto z = GroupSpec::free_abelian(1);
  auto g = GroupSpec::free_group({"a", "b"});
  for (auto f : {scalar(z, "3 - t"), scalar(g, "5 - a - 2*b")}) {
    auto d = normalized(decompose(f));
    for (int i = 0; i < 300; ++i) {
      const int depth = static_cast<int>(testing::uniform_int(rng, 1, 5));
      auto shallow = adjoint_at_depth(d, depth);
      auto deep = adjoint_at_depth(d, 2 * depth + 2);
      auto y = sample_configuration(SymbolMeasure::uniform(symbol_alphabet(d)), Window::ball(d.f.group(), 2), rng());
      Coordinate c{testing::random_element(d.f.group(), rng, 2), 0};
      const auto old_x = homoclinic_image(y, shallow, {c});
      const auto new_x = homoclinic_image(y, deep, {c});
      ASSERT_LE(circle_distance(old_x.find(c)->value, new_x.find(c)->value), old_x.find(c)->err);
    }
  }
}

}  // namespace
}  // namespace lopact
