#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lopact/dynamics.hpp"
#include "lopact/inverse.hpp"
#include "lopact/lopsided.hpp"

namespace lopact {

/// A checked mathematical invariant did not hold.
class InvariantFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The inverse is too coarse to round or to localize a witness.
class InsufficientPrecision : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A non-member with no coordinate within err of a nonzero j/M_k.
class WitnessNotLocalized : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Smallest integer >= M_max * (||approx||_{1,inf} + column error) for an
/// inverse approximating (f*)^-1. Bounds the height of any difference c of
/// two preimages under the homoclinic map.
Integer defect_height(const LopsidedDecomposition& d, const TruncatedInverse& inv_adjoint);

struct Member {
  RingVector q;  // q f = h exactly
};

struct FractionalWitness {
  GroupElement s;
  std::size_t k = 0;
  std::int64_t j = 0;  // 1 <= j <= M_k - 1
  Rational value;      // (h f^-1)_{s,k}, or its approximation
  Rational err;        // |value - true coordinate| bound; 0 when exact
  bool exact = false;
};

struct NonMember {
  FractionalWitness witness;
};

using MembershipVerdict = std::variant<Member, NonMember>;

/// Decides whether h lies in (ZΓ)^n f using an inverse of f.
///
/// Rounds h * approx to the nearest integer vector q and checks q f = h
/// exactly. Otherwise reports a coordinate of h f^-1 congruent to j/M_k mod 1.
/// For a normalized decomposition with a positivity certificate the witness
/// comes from an order-minimal coordinate of the residue h - q f and is
/// exact; otherwise the approximation is scanned in enumeration order.
/// Throws InsufficientPrecision when the coordinate error is not below 1/2
/// (or below 1/(2 M_max) for a scanned witness), WitnessNotLocalized when
/// no coordinate qualifies.
MembershipVerdict decide_membership(const RingVector& h, const LopsidedDecomposition& d, const TruncatedInverse& inv);

struct FourierValue {
  std::complex<double> value;
  Rational err;  // certified radius around value, ignoring double rounding
  bool exact = false;
};

/// Fourier coefficient of the pushforward of the product measure, evaluated
/// as the product of nu-hat over the coordinates of h f^-1.
FourierValue haar_fourier(const RingVector& h, const LopsidedDecomposition& d, const TruncatedInverse& inv,
                          const SymbolMeasure& m);

struct EmpiricalFourier {
  std::complex<double> value;
  Rational pairing_err;  // largest per-sample pairing error
  std::uint64_t trials = 0;
};

/// Mean of exp(-2 pi i <phi_f(y), h>) over `trials` configurations drawn
/// from m on the window. `inv` approximates f^-1; the window must contain
/// supp(h) * supp(approx), otherwise std::domain_error.
EmpiricalFourier empirical_fourier(const RingVector& h, const TruncatedInverse& inv, const SymbolMeasure& m,
                                   std::uint64_t trials, const Window& window, std::uint64_t seed);

enum class SearchMode { full, boundary_open };

const char* to_string(SearchMode mode);

/// Admissible symbols at one constrained coordinate: y_{s,k} in [lo, hi]
/// keeps both y and y + c f* in the alphabet there.
struct SymbolInterval {
  Coordinate at;
  std::int64_t shift = 0;  // (c f*)_{s,k}
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};

struct Collision {
  /// Nonzero entries of c in coordinate order.
  std::vector<std::pair<Coordinate, std::int64_t>> c;
  /// One interval per checked coordinate, in coordinate order.
  std::vector<SymbolInterval> constraints;
  /// Representative y: the lower end of each interval, zero elsewhere.
  Configuration y;

  std::int64_t height() const;
  std::int64_t c_at(const Coordinate& at) const;
  const SymbolInterval* constraint_at(const Coordinate& at) const;
};

struct CollisionSearchResult {
  std::vector<Collision> collisions;
  std::uint64_t nodes = 0;
  bool incomplete = false;
};

/// Enumerates integer c on the window with 0 < ||c||_inf <= N such that
/// some y keeps y + c f* in the alphabet. `full` checks every coordinate
/// touched by c f* (c is zero outside the window); `boundary_open` checks
/// only coordinates whose dependencies lie in the window, and leaves out c
/// with an entry that reaches no checked coordinate. The search stops after
/// `node_budget` nodes and flags the result incomplete.
CollisionSearchResult collision_search(const LopsidedDecomposition& d, const Window& window, std::int64_t height,
                                       SearchMode mode, std::uint64_t node_budget = 50'000'000);

/// Labels of one realizing coordinate of a collision.
struct CollisionLabel {
  Coordinate at;
  bool positive = true;  // c_{s,k} = +j
  std::int64_t j = 0;
  std::vector<std::pair<GroupElement, std::size_t>> a_set;  // A_k
  std::vector<std::pair<GroupElement, std::size_t>> b_set;  // B_k
  std::int64_t l_b = 0;
  std::int64_t i_lo = 0;  // admissible y_{s,k} range
  std::int64_t i_hi = 0;
  std::int64_t direct = 0;      // (c f*)_{s,k} by convolution
  std::int64_t decomposed = 0;  // c_{s,k} M_k minus the g-sums
};

/// Labels every checked coordinate realizing +-||c||_inf and verifies the
/// symbol range bound (+: i <= L_B - 1, -: i >= M_k - L_B) for the whole
/// admissible range, plus the split of (c f*)_{s,k} along supp(g).
/// Requires a normalized row lopsided decomposition.
/// Throws InvariantFailure on any violation.
std::vector<CollisionLabel> classify_collision(const Collision& col, const LopsidedDecomposition& d);

/// (c f*)_{s,k} = sum_m sum_{a in supp f^(km)} c_{sa,m} f^(km)_a, with c
/// read as zero off its support.
Rational defect_shift(const std::vector<std::pair<Coordinate, std::int64_t>>& c, const RingMatrix& f,
                      const Coordinate& at);

}  // namespace lopact
