#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "lopact/group.hpp"
#include "lopact/inverse.hpp"
#include "lopact/lopsided.hpp"
#include "lopact/ring.hpp"

namespace lopact {

/// Finite set of group elements kept in enumeration order.
class Window {
 public:
  explicit Window(GroupPtr group) : group_(std::move(group)) {}
  /// Throws std::domain_error on duplicates or foreign elements.
  Window(GroupPtr group, std::vector<GroupElement> elements);
  /// Word-metric ball of the given radius.
  static Window ball(GroupPtr group, int radius);

  const GroupPtr& group() const { return group_; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool contains(const GroupElement& s) const { return index_.count(s) != 0; }
  std::optional<std::size_t> index_of(const GroupElement& s) const;
  /// s * window.
  Window translate(const GroupElement& s) const;

  friend bool operator==(const Window& a, const Window& b) { return a.elements_ == b.elements_; }

 private:
  GroupPtr group_;
  std::vector<GroupElement> elements_;
  std::map<GroupElement, std::size_t, EnumerationLess> index_;
};

using Symbol = std::vector<std::int64_t>;

/// Symbols on a window; every other coordinate reads as zero.
class Configuration {
 public:
  /// Throws std::domain_error when a symbol is outside the alphabet or the
  /// value count differs from the window size.
  Configuration(Window window, SymbolAlphabet alphabet, std::vector<Symbol> values);
  static Configuration zero(Window window, SymbolAlphabet alphabet);

  const Window& window() const { return window_; }
  const SymbolAlphabet& alphabet() const { return alphabet_; }
  const std::vector<Symbol>& values() const { return values_; }
  /// Symbol at s, zero outside the window.
  Symbol at(const GroupElement& s) const;
  std::int64_t at(const GroupElement& s, std::size_t k) const;
  /// Largest symbol component.
  std::int64_t sup_norm() const;

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.window_ == b.window_ && a.alphabet_ == b.alphabet_ && a.values_ == b.values_;
  }

 private:
  Window window_;
  SymbolAlphabet alphabet_;
  std::vector<Symbol> values_;
};

/// (s y)_t = y_{s^-1 t}; the window moves to s * window.
Configuration shift(const GroupElement& s, const Configuration& y);

/// Probability measure on the symbol alphabet: either the uniform marker or
/// an exact table indexed in mixed radix with component 0 most significant.
class SymbolMeasure {
 public:
  static SymbolMeasure uniform(SymbolAlphabet alphabet);
  /// Throws std::domain_error unless entries are nonnegative and sum to 1.
  static SymbolMeasure table(SymbolAlphabet alphabet, std::vector<Rational> probabilities);

  const SymbolAlphabet& alphabet() const { return alphabet_; }
  bool is_uniform() const { return !table_.has_value(); }
  const std::optional<std::vector<Rational>>& probabilities() const { return table_; }
  Rational probability(const Symbol& symbol) const;
  std::vector<Rational> marginal(std::size_t k) const;
  bool has_uniform_marginals() const;
  /// nu-hat(v) = sum_sigma p(sigma) exp(-2 pi i sigma . v).
  std::complex<double> fourier(const std::vector<Rational>& v) const;

 private:
  SymbolMeasure(SymbolAlphabet alphabet, std::optional<std::vector<Rational>> table)
      : alphabet_(std::move(alphabet)), table_(std::move(table)) {}

  SymbolAlphabet alphabet_;
  std::optional<std::vector<Rational>> table_;
};

/// Mixed-radix index of a symbol, component 0 most significant.
std::size_t symbol_index(const SymbolAlphabet& alphabet, const Symbol& symbol);
Symbol symbol_at(const SymbolAlphabet& alphabet, std::size_t index);

/// Counter-based 64-bit draw for (seed, trial, window index, component).
///
///   mix(x)  = splitmix64 finalizer applied to x + 0x9E3779B97F4A7C15
///   k0 = mix(seed), k1 = mix(k0 ^ trial), k2 = mix(k1 ^ index)
///   draw  = mix(k2 ^ ((component + 1) * 0x9E3779B97F4A7C15))
std::uint64_t draw(std::uint64_t seed, std::uint64_t trial, std::uint64_t index, std::uint64_t component);

/// Independent draws per window element. Uniform measures map each component
/// draw u to floor(u * M_k / 2^64); tables use component 0 against the exact
/// cumulative thresholds floor(F * 2^64).
Configuration sample_configuration(const SymbolMeasure& m, const Window& w, std::uint64_t seed,
                                   std::uint64_t trial = 0);

struct Coordinate {
  GroupElement s;
  std::size_t k = 0;

  friend bool operator==(const Coordinate&, const Coordinate&) = default;
};

/// Enumeration order on s, then k.
struct CoordinateLess {
  bool operator()(const Coordinate& a, const Coordinate& b) const;
};

struct TorusValue {
  Rational value;  // in [0, 1)
  Rational err;
};

/// Finitely many coordinates of a point of the n-fold torus over the group.
class TorusPoint {
 public:
  using Entries = std::map<Coordinate, TorusValue, CoordinateLess>;

  /// Reduces the value mod 1; throws on negative err.
  void set(const Coordinate& c, const Rational& value, const Rational& err);
  const TorusValue* find(const Coordinate& c) const;
  const Entries& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  Entries entries_;
};

/// (s x)_{t,k} = x_{s^-1 t, k}.
TorusPoint shift(const GroupElement& s, const TorusPoint& x);

struct PairingValue {
  Rational value;  // mod 1, in [0, 1)
  Rational err;
};

/// sum_{s,k} x_{s,k} h_{s,k} mod 1. Throws std::domain_error
/// ("insufficient support") when x lacks a coordinate of supp(h).
PairingValue pairing(const TorusPoint& x, const RingVector& h);

/// Coordinates of y A for an approximation A of (f*)^-1, y zero outside its
/// window. The error of each coordinate covers the inverse tail for every
/// configuration with symbols in the alphabet, plus the mass of A that the
/// window cuts off, so it stays valid when y is read as the window view of a
/// configuration on the whole group.
/// Throws std::domain_error on an alphabet mismatch.
TorusPoint homoclinic_image(const Configuration& y, const TruncatedInverse& inv,
                            const std::vector<Coordinate>& coords);

/// Bound on |x - x'| between two torus representatives, i.e. the circle
/// distance of values in [0, 1).
Rational circle_distance(const Rational& a, const Rational& b);

}  // namespace lopact
