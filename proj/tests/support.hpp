#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "lopact/group.hpp"
#include "lopact/lopsided.hpp"
#include "lopact/model.hpp"
#include "lopact/rational.hpp"
#include "lopact/ring.hpp"

namespace lopact::testing {

using Rng = std::mt19937_64;

inline constexpr int property_cases = 10'000;

inline Rational q(std::string_view text) { return parse_rational(text); }

inline RingElement expr(const GroupPtr& group, std::string_view text) { return parse_expression(text, group); }

inline GroupElement word(const GroupPtr& group, std::string_view text) { return group->parse(text); }

inline std::int64_t uniform_int(Rng& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Random unreduced word of up to `max_letters` letters, normalized by the
/// group constructor.
inline GroupElement random_element(const GroupPtr& group, Rng& rng, int max_letters = 4) {
  std::vector<Syllable> raw;
  const int letters = static_cast<int>(uniform_int(rng, 0, max_letters));
  for (int i = 0; i < letters; ++i) {
    const int gen = static_cast<int>(uniform_int(rng, 0, group->rank() - 1));
    raw.push_back({gen, uniform_int(rng, 0, 1) ? 1 : -1});
  }
  return GroupElement(group->kind(), group->rank(), normalize_word(group->kind(), std::move(raw)));
}

/// Rational with numerator in [-bound, bound] and denominator in [1, max_den].
inline Rational random_rational(Rng& rng, std::int64_t bound, std::int64_t max_den) {
  return make_rational(static_cast<long>(uniform_int(rng, -bound, bound)),
                       static_cast<long>(uniform_int(rng, 1, max_den)));
}

inline RingElement random_ring(const GroupPtr& group, Rng& rng, int max_terms = 4, int max_letters = 3,
                               std::int64_t bound = 5, std::int64_t max_den = 1) {
  RingElement f(group);
  const int terms = static_cast<int>(uniform_int(rng, 0, max_terms));
  for (int i = 0; i < terms; ++i)
    f.add_term(random_element(group, rng, max_letters), random_rational(rng, bound, max_den));
  return f;
}

inline RingMatrix random_matrix(const GroupPtr& group, Rng& rng, std::size_t n, int max_terms = 3,
                                std::int64_t max_den = 1) {
  RingMatrix f(group, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m) f.at(k, m) = random_ring(group, rng, max_terms, 3, 5, max_den);
  return f;
}

/// Integral matrix M - g with M = diag(M_k s_k) chosen larger than the l1
/// mass of both row k and column k of g, so both flags hold.
inline RingMatrix random_lopsided(const GroupPtr& group, Rng& rng, std::size_t n, int max_terms = 3,
                                  bool shifted = true) {
  RingMatrix g(group, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m) g.at(k, m) = random_ring(group, rng, max_terms, 3, 3);
  RingMatrix f(group, n);
  for (std::size_t k = 0; k < n; ++k) {
    Rational mass(0);
    for (std::size_t m = 0; m < n; ++m) mass += l1_norm(g.at(k, m)) + l1_norm(g.at(m, k));
    const GroupElement pos = shifted ? random_element(group, rng, 2) : group->identity();
    // Keep the diagonal monomial out of supp(g^(kk)).
    g.at(k, k).erase(pos);
    Integer big = floor_of(mass) + 1 + uniform_int(rng, 0, 3);
    if (uniform_int(rng, 0, 1)) big = -big;
    for (std::size_t m = 0; m < n; ++m) f.at(k, m) = -g.at(k, m);
    f.at(k, k).add_term(pos, Rational(big));
  }
  return f;
}

}  // namespace lopact::testing
