#include <gtest/gtest.h>

#include <algorithm>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "lopact/verify.hpp"
#include "oracles.hpp"
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

struct Setup {
  LopsidedDecomposition d;
  TruncatedInverse inv;
};

Setup three_minus_t(int depth = 8) {
  auto z = GroupSpec::free_abelian(1);
  auto d = with_certificates(normalized(decompose(scalar(z, "3 - t"))), OrderOracle::homomorphism({1}));
  return {d, truncated_inverse_at_depth(d, depth, Side::column)};
}

// 2x2 over F2, normalized and positively lopsided for <a, b>.
Setup free_pair(const Rational& eps) {
  auto g = GroupSpec::free_group({"a", "b"});
  RingMatrix f(g, 2);
  f.at(0, 0) = expr(g, "7 - a");
  f.at(0, 1) = expr(g, "-b");
  f.at(1, 0) = expr(g, "a*b");
  f.at(1, 1) = expr(g, "9 - b");
  auto d = with_certificates(normalized(decompose(f)), OrderOracle::semigroup({word(g, "a"), word(g, "b")}));
  return {d, truncated_inverse(d, eps, Side::column)};
}

RingVector random_q(const GroupPtr& group, Rng& rng, std::size_t n, int radius) {
  const auto ball = group->ball(radius);
  RingVector out(n, RingElement(group));
  for (auto& entry : out)
    for (const auto& s : ball) entry.add_term(s, Rational(testing::uniform_int(rng, -5, 5)));
  return out;
}

TEST(DefectHeight, Examples) {
  auto z = GroupSpec::free_abelian(1);
  auto d = decompose(scalar(z, "3 - t"));
  for (int depth : {2, 5, 20}) {
    auto adj = adjoint_inverse(truncated_inverse_at_depth(d, depth, Side::column));
    EXPECT_EQ(defect_height(d, adj), 2) << depth;
  }
  auto two = decompose(scalar(z, "2"));
  EXPECT_EQ(defect_height(two, adjoint_inverse(truncated_inverse(two, q("1/1000"), Side::column))), 1);
}

TEST(DefectHeight, MonotoneInDepth) {
  auto g = GroupSpec::free_group({"a", "b"});
  Rng rng(71);
  for (int i = 0; i < 200; ++i) {
    auto d = normalized(decompose(testing::random_lopsided(g, rng, static_cast<std::size_t>(testing::uniform_int(rng, 1, 2)), 2)));
    Integer previous = -1;
    for (int depth = 0; depth <= 6; ++depth) {
      auto adj = adjoint_inverse(truncated_inverse_at_depth(d, depth, Side::column));
      const Integer n = defect_height(d, adj);
      if (depth > 0) ASSERT_LE(n, previous) << "case " << i << " depth " << depth;
      previous = n;
    }
  }
}

TEST(Membership, Examples) {
  auto [d, inv] = three_minus_t();
  auto z = d.f.group();
  auto member = decide_membership({expr(z, "3 - t")}, d, inv);
  ASSERT_TRUE(std::holds_alternative<Member>(member));
  EXPECT_EQ(std::get<Member>(member).q[0], expr(z, "1"));

  auto product = decide_membership({expr(z, "2 - 5*t") * expr(z, "3 - t")}, d, inv);
  ASSERT_TRUE(std::holds_alternative<Member>(product));
  EXPECT_EQ(std::get<Member>(product).q[0], expr(z, "2 - 5*t"));

  auto delta = decide_membership({expr(z, "1")}, d, inv);
  ASSERT_TRUE(std::holds_alternative<NonMember>(delta));
  const auto& w = std::get<NonMember>(delta).witness;
  EXPECT_EQ(w.s, z->identity());
  EXPECT_EQ(w.k, 0u);
  EXPECT_EQ(w.j, 1);
  EXPECT_EQ(w.value, q("1/3"));
  EXPECT_TRUE(w.exact);
}

TEST(Membership, ScanRouteWithoutCertificate) {
  auto z = GroupSpec::free_abelian(1);
  auto d = normalized(decompose(scalar(z, "3 - t")));
  ASSERT_FALSE(d.column_certificate);
  auto inv = truncated_inverse_at_depth(d, 8, Side::column);
  auto verdict = decide_membership({expr(z, "2*t")}, d, inv);
  ASSERT_TRUE(std::holds_alternative<NonMember>(verdict));
  const auto& w = std::get<NonMember>(verdict).witness;
  EXPECT_FALSE(w.exact);
  EXPECT_EQ(w.s, word(z, "t"));
  EXPECT_EQ(w.j, 2);
  EXPECT_LE(circle_distance(frac(w.value), q("2/3")), w.err);
}

TEST(Membership, PrecisionErrors) {
  auto [d, coarse] = three_minus_t(0);
  auto z = d.f.group();
  EXPECT_THROW(decide_membership({expr(z, "9 - 9*t")}, d, coarse), InsufficientPrecision);
  EXPECT_THROW(decide_membership({expr(z, "1")}, d, adjoint_inverse(coarse)), std::domain_error);
}

TEST(HaarFourier, Examples) {
  auto [d, inv] = three_minus_t();
  auto z = d.f.group();
  auto uniform = SymbolMeasure::uniform(symbol_alphabet(d));
  auto one = haar_fourier({expr(z, "6 - 2*t")}, d, inv, uniform);
  EXPECT_TRUE(one.exact);
  EXPECT_EQ(one.value, std::complex<double>(1, 0));
  auto zero = haar_fourier({expr(z, "1")}, d, inv, uniform);
  EXPECT_TRUE(zero.exact);
  EXPECT_EQ(zero.value, std::complex<double>(0, 0));
  auto empty = haar_fourier({RingElement(z)}, d, inv, uniform);
  EXPECT_EQ(empty.value, std::complex<double>(1, 0));
}

TEST(HaarFourier, NonUniformProductWithinError) {
  auto z = GroupSpec::free_abelian(1);
  auto d = normalized(decompose(scalar(z, "3 - t")));
  auto inv = truncated_inverse_at_depth(d, 20, Side::column);
  auto skewed = SymbolMeasure::table(symbol_alphabet(d), {q("1/2"), q("1/4"), q("1/4")});
  // h = delta: (h f^-1)_{t^l} = 3^{-(l+1)}, so mu-hat = prod_l nu-hat(3^{-(l+1)}).
  auto value = haar_fourier({expr(z, "1")}, d, inv, skewed);
  EXPECT_FALSE(value.exact);
  std::complex<double> expected(1, 0);
  for (int l = 0; l <= 60; ++l) expected *= skewed.fourier({1 / pow(Rational(3), l + 1)});
  EXPECT_LE(std::abs(value.value - expected), to_double(value.err) + 1e-12);
  EXPECT_GT(std::abs(expected), 0.1);
}

TEST(EmpiricalFourier, MembersAndZero) {
  auto [d, inv] = three_minus_t(10);
  auto z = d.f.group();
  auto uniform = SymbolMeasure::uniform(symbol_alphabet(d));
  auto w = Window::ball(z, 12);
  auto zero = empirical_fourier({RingElement(z)}, inv, uniform, 100, w, 7);
  EXPECT_EQ(zero.value, std::complex<double>(1, 0));
  auto member = empirical_fourier({expr(z, "3 - t")}, inv, uniform, 500, w, 7);
  EXPECT_LE(std::abs(member.value - std::complex<double>(1, 0)), 2 * std::numbers::pi * to_double(member.pairing_err));
  auto again = empirical_fourier({expr(z, "3 - t")}, inv, uniform, 500, w, 7);
  EXPECT_EQ(again.value, member.value);
  EXPECT_THROW(empirical_fourier({expr(z, "1")}, inv, uniform, 10, Window::ball(z, 3), 7), std::domain_error);
}

TEST(EmpiricalFourier, NonMemberConcentratesAtZero) {
  auto [d, inv] = three_minus_t(10);
  auto z = d.f.group();
  const std::uint64_t trials = 10'000;
  auto result = empirical_fourier({expr(z, "1")}, inv, SymbolMeasure::uniform(symbol_alphabet(d)), trials,
                                  Window::ball(z, 12), 7);
  EXPECT_LE(std::abs(result.value), 4.0 / std::sqrt(double(trials)) + 2 * std::numbers::pi * to_double(result.pairing_err));
}

// Property suites.

TEST(VerifyProperties, MembershipDichotomy) {
  Rng rng(72);
  auto [d1, inv1] = three_minus_t(12);
  auto [d2, inv2] = free_pair(q("1/50000"));
  for (const auto* setup : {&d1, &d2}) {
    const auto& d = *setup;
    const auto& inv = setup == &d1 ? inv1 : inv2;
    const auto uniform = SymbolMeasure::uniform(symbol_alphabet(d));
    const auto group = d.f.group();
    for (int i = 0; i < 100; ++i) {
      auto qv = random_q(group, rng, d.size(), 2);
      auto h = vec_mat_mul(qv, d.f);
      auto verdict = decide_membership(h, d, inv);
      ASSERT_TRUE(std::holds_alternative<Member>(verdict));
      ASSERT_TRUE(vec_equal(std::get<Member>(verdict).q, qv));
      ASSERT_EQ(haar_fourier(h, d, inv, uniform).value, std::complex<double>(1, 0));

      // Perturb by a random delta; the witness must exist and be exact.
      auto s = testing::random_element(group, rng, 2);
      const std::size_t k = static_cast<std::size_t>(testing::uniform_int(rng, 0, static_cast<std::int64_t>(d.size()) - 1));
      h[k].add_term(s, Rational(1));
      auto nm = decide_membership(h, d, inv);
      ASSERT_TRUE(std::holds_alternative<NonMember>(nm)) << "case " << i;
      const auto& w = std::get<NonMember>(nm).witness;
      ASSERT_TRUE(w.exact);
      const std::int64_t mk = d.diagonal[w.k].coefficient;
      ASSERT_GE(w.j, 1);
      ASSERT_LE(w.j, mk - 1);
      ASSERT_EQ(frac(w.value), make_rational(w.j, mk));
      auto fourier = haar_fourier(h, d, inv, uniform);
      ASSERT_TRUE(fourier.exact);
      ASSERT_EQ(fourier.value, std::complex<double>(0, 0));
    }
  }
}

void expect_agreement(const std::string& f_text, int lo, int hi, std::int64_t height, SearchMode mode,
                      bool expect_nonempty) {
  auto z = GroupSpec::free_abelian(1);
  auto d = normalized(decompose(scalar(z, f_text)));
  std::map<std::int64_t, std::int64_t> coeffs;
  for (const auto& [s, c] : d.f.at(0, 0).terms()) {
    const auto coords = s.coordinates();
    coeffs[coords.empty() ? 0 : coords[0]] = c.get_num().get_si();
  }
  std::vector<GroupElement> elems;
  for (int x = lo; x <= hi; ++x) elems.push_back(z->generator(0).power(x));
  Window window(z, elems);
  auto result = collision_search(d, window, height, mode);
  ASSERT_FALSE(result.incomplete);
  auto brute = testing::brute_force(coeffs, d.diagonal[0].coefficient, lo, hi, height, mode == SearchMode::boundary_open);

  std::map<std::vector<std::int64_t>, std::uint64_t> found;
  for (const auto& col : result.collisions) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(hi - lo + 1), 0);
    for (const auto& [at, v] : col.c) {
      const auto coords = at.s.coordinates();
      c[static_cast<std::size_t>((coords.empty() ? 0 : coords[0]) - lo)] = v;
    }
    std::uint64_t count = 1;
    for (const auto& iv : col.constraints) count *= static_cast<std::uint64_t>(iv.hi - iv.lo + 1);
    found[c] = count;
    EXPECT_NO_THROW(classify_collision(col, d));
  }
  EXPECT_EQ(found, brute.admissible) << f_text << " on [" << lo << "," << hi << "] " << to_string(mode);
  EXPECT_EQ(!found.empty(), expect_nonempty);
}

TEST(CollisionSearch, OracleAgreementThreeMinusT) {
  expect_agreement("3 - t", -3, 3, 2, SearchMode::full, false);
  expect_agreement("3 - t", -3, 3, 2, SearchMode::boundary_open, true);
}

TEST(CollisionSearch, OracleAgreementNonPositive) {
  // Lopsided but not positively so: finite collisions exist.
  expect_agreement("3 - t - t^-1", -2, 2, 2, SearchMode::full, true);
  expect_agreement("3 - t - t^-1", -3, 3, 1, SearchMode::boundary_open, true);
  expect_agreement("5 - 2*t + t^2", -2, 2, 2, SearchMode::full, false);
}

TEST(CollisionSearch, FullModeEmptyOnWideWindow) {
  auto [d, inv] = three_minus_t();
  auto result = collision_search(d, Window::ball(d.f.group(), 8), 2, SearchMode::full);
  EXPECT_FALSE(result.incomplete);
  EXPECT_TRUE(result.collisions.empty());
}

TEST(CollisionSearch, BoundaryOpenCarryChains) {
  auto [d, inv] = three_minus_t();
  auto z = d.f.group();
  auto result = collision_search(d, Window::ball(z, 8), 2, SearchMode::boundary_open);
  ASSERT_FALSE(result.incomplete);
  // +-1 on [p, 8], or +-1 on [p, 7] with +-2 at 8, for p in [-8, 8].
  EXPECT_EQ(result.collisions.size(), 68u);
  const Collision* chain = nullptr;
  for (const auto& col : result.collisions) {
    if (col.c.size() != 8) continue;
    bool ones = true;
    for (const auto& [at, v] : col.c) ones = ones && v == 1 && at.s.coordinates()[0] >= 1;
    if (ones) chain = &col;
  }
  ASSERT_NE(chain, nullptr);
  for (int p = 1; p <= 7; ++p) {
    const auto* iv = chain->constraint_at({z->generator(0).power(p), 0});
    ASSERT_NE(iv, nullptr);
    EXPECT_EQ(iv->lo, 0);
    EXPECT_EQ(iv->hi, 0);
  }
  const auto* base = chain->constraint_at({z->identity(), 0});
  ASSERT_NE(base, nullptr);
  EXPECT_EQ(base->lo, 1);
  EXPECT_EQ(base->hi, 2);
  EXPECT_EQ(chain->constraint_at({z->generator(0).power(8), 0}), nullptr);

  auto labels = classify_collision(*chain, d);
  ASSERT_FALSE(labels.empty());
  const auto& at_t = labels.front();
  EXPECT_EQ(at_t.at.s, word(z, "t"));
  EXPECT_TRUE(at_t.positive);
  EXPECT_EQ(at_t.j, 1);
  ASSERT_EQ(at_t.a_set.size(), 1u);
  EXPECT_EQ(at_t.a_set[0].first, word(z, "t"));
  EXPECT_EQ(at_t.b_set.size(), 1u);
  EXPECT_EQ(at_t.l_b, 1);
  EXPECT_EQ(at_t.i_hi, 0);
  EXPECT_EQ(at_t.direct, at_t.decomposed);
  for (const auto& col : result.collisions) EXPECT_NO_THROW(classify_collision(col, d));
}

TEST(CollisionSearch, NoRemainderHasNoCollisions) {
  auto z = GroupSpec::free_abelian(1);
  auto d = decompose(scalar(z, "4"));
  EXPECT_TRUE(collision_search(d, Window::ball(z, 3), 3, SearchMode::full).collisions.empty());
  EXPECT_TRUE(collision_search(d, Window::ball(z, 3), 3, SearchMode::boundary_open).collisions.empty());
}

TEST(CollisionSearch, BudgetFlagsIncomplete) {
  auto [d, inv] = three_minus_t();
  auto result = collision_search(d, Window::ball(d.f.group(), 8), 2, SearchMode::boundary_open, 50);
  EXPECT_TRUE(result.incomplete);
}

TEST(CollisionSearch, ClassifyRejectsForgedRange) {
  auto [d, inv] = three_minus_t();
  auto z = d.f.group();
  auto result = collision_search(d, Window::ball(z, 8), 2, SearchMode::boundary_open);
  ASSERT_FALSE(result.collisions.empty());
  auto labelled = std::find_if(result.collisions.begin(), result.collisions.end(),
                               [&](const Collision& c) { return !classify_collision(c, d).empty(); });
  ASSERT_NE(labelled, result.collisions.end());
  Collision forged = *labelled;
  for (auto& iv : forged.constraints) {
    if (std::abs(forged.c_at(iv.at)) == forged.height()) {
      iv.lo = 0;
      iv.hi = 2;
    }
  }
  EXPECT_THROW(classify_collision(forged, d), InvariantFailure);
}

TEST(VerifyProperties, RangeSplitMatchesConvolution) {
  Rng rng(73);
  auto g = GroupSpec::free_group({"a", "b"});
  for (int i = 0; i < property_cases; ++i) {
    const std::size_t n = static_cast<std::size_t>(testing::uniform_int(rng, 1, 2));
    auto f = testing::random_matrix(g, rng, n, 3);
    std::vector<std::pair<Coordinate, std::int64_t>> c;
    RingVector cv(n, RingElement(g));
    std::set<Coordinate, CoordinateLess> used;
    for (int t = 0; t < 4; ++t) {
      Coordinate at{testing::random_element(g, rng, 2), static_cast<std::size_t>(testing::uniform_int(rng, 0, static_cast<std::int64_t>(n) - 1))};
      if (!used.insert(at).second) continue;
      const std::int64_t v = testing::uniform_int(rng, -3, 3);
      if (v == 0) continue;
      c.push_back({at, v});
      cv[at.k].add_term(at.s, Rational(v));
    }
    auto direct = vec_mat_mul(cv, mat_star(f));
    Coordinate probe{testing::random_element(g, rng, 3), static_cast<std::size_t>(testing::uniform_int(rng, 0, static_cast<std::int64_t>(n) - 1))};
    ASSERT_EQ(defect_shift(c, f, probe), direct[probe.k].coefficient(probe.s));
  }
}

}  // namespace
}  // namespace lopact
