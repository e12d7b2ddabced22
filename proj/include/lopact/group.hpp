#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lopact {

enum class GroupKind { free, free_abelian };

/// One run g^e of a reduced word, e != 0.
struct Syllable {
  int generator = 0;
  std::int64_t exponent = 0;

  friend bool operator==(const Syllable&, const Syllable&) = default;
};

/// Element of a free group or a free abelian group in canonical form.
///
/// Free groups store the freely reduced word run-length encoded, adjacent
/// syllables on distinct generators. Free abelian groups store the nonzero
/// coordinates as syllables sorted by generator index. Either way the
/// identity is the empty syllable list and the representation is unique, so
/// elements compare by value.
class GroupElement {
 public:
  GroupElement(GroupKind kind, int rank);
  GroupElement(GroupKind kind, int rank, std::vector<Syllable> syllables);

  static GroupElement from_coordinates(const std::vector<std::int64_t>& coords);

  GroupKind kind() const { return kind_; }
  int rank() const { return rank_; }
  const std::vector<Syllable>& syllables() const { return syllables_; }
  bool is_identity() const { return syllables_.empty(); }

  /// Word length: sum of |exponent|.
  std::int64_t length() const;

  /// Coordinate vector (free abelian only).
  std::vector<std::int64_t> coordinates() const;

  GroupElement operator*(const GroupElement& other) const;
  GroupElement inverse() const;
  GroupElement power(std::int64_t e) const;

  bool same_group(const GroupElement& other) const {
    return kind_ == other.kind_ && rank_ == other.rank_;
  }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  GroupKind kind_;
  int rank_;
  std::vector<Syllable> syllables_;
};

GroupElement mul(const GroupElement& s, const GroupElement& t);
GroupElement inv(const GroupElement& s);

/// Re-normalizes an arbitrary syllable list (zero exponents, adjacent
/// repeats, free cancellation, abelian sorting).
std::vector<Syllable> normalize_word(GroupKind kind, std::vector<Syllable> word);

/// Global enumeration order on the group: word length first, then the
/// letter sequence compared lexicographically with letters keyed by
/// (generator index, sign) and the positive letter before its inverse.
/// Total and deterministic; used for every tie-break in the library.
struct EnumerationLess {
  bool operator()(const GroupElement& a, const GroupElement& b) const;
};

int compare_enumeration(const GroupElement& a, const GroupElement& b);

class GroupSpec;
using GroupPtr = std::shared_ptr<const GroupSpec>;

class GroupSpec {
 public:
  static GroupPtr free_group(std::vector<std::string> generators);
  static GroupPtr free_abelian(std::vector<std::string> generators);
  /// Free abelian group of rank d with generator names x1..xd (t when d = 1).
  static GroupPtr free_abelian(int rank);

  GroupKind kind() const { return kind_; }
  int rank() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& generator_names() const { return names_; }

  GroupElement identity() const { return GroupElement(kind_, rank()); }
  GroupElement generator(int index) const;
  GroupElement generator(std::string_view name) const;
  int generator_index(std::string_view name) const;  // -1 when unknown

  bool contains(const GroupElement& s) const { return s.kind() == kind_ && s.rank() == rank(); }
  void require(const GroupElement& s) const;

  /// Renders "e" for the identity, otherwise atoms like "a^3*b^-1".
  std::string format(const GroupElement& s) const;

  /// Parses a product of atoms `name` or `name^k` separated by '*' or
  /// whitespace, or "e". Throws std::invalid_argument.
  GroupElement parse(std::string_view text) const;

  /// All elements of word length <= radius in enumeration order.
  std::vector<GroupElement> ball(int radius) const;

  friend bool operator==(const GroupSpec& a, const GroupSpec& b) {
    return a.kind_ == b.kind_ && a.names_ == b.names_;
  }

 private:
  GroupSpec(GroupKind kind, std::vector<std::string> names);

  GroupKind kind_;
  std::vector<std::string> names_;
};

/// Raised when a semigroup membership question falls outside the decidable
/// cases; never replaced by a guess.
class OracleIncomplete : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Right-invariant strict partial order given by a positivity semigroup P:
/// s < t iff t*s^-1 is in P.
///
/// The homomorphism variant takes P = {s : [s] > 0} for an integer-valued
/// homomorphism fixed by generator weights. The semigroup variant takes P
/// generated by explicit elements; membership is decided when all generators
/// are positive words (free groups) or lie in the nonnegative orthant (free
/// abelian groups, bounded search), and raises OracleIncomplete otherwise.
class OrderOracle {
 public:
  enum class Variant { homomorphism, semigroup };

  static OrderOracle homomorphism(std::vector<std::int64_t> weights);
  static OrderOracle semigroup(std::vector<GroupElement> generators);

  Variant variant() const { return variant_; }
  const std::vector<std::int64_t>& weights() const { return weights_; }
  const std::vector<GroupElement>& generators() const { return generators_; }

  /// [s] for the homomorphism variant.
  std::int64_t degree(const GroupElement& s) const;

  bool is_positive(const GroupElement& s) const;
  bool less(const GroupElement& s, const GroupElement& t) const;

  /// Cap on lattice points visited by the free-abelian membership search.
  static constexpr std::size_t abelian_search_limit = 1u << 20;

 private:
  OrderOracle() = default;

  bool semigroup_member(const GroupElement& s) const;

  Variant variant_ = Variant::homomorphism;
  std::vector<std::int64_t> weights_;
  std::vector<GroupElement> generators_;
};

}  // namespace lopact
