#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "lopact/lopsided.hpp"
#include "lopact/ring.hpp"

namespace lopact {

/// Which matrix norm certifies an inverse: `column` is ||.||_{1,inf},
/// `row` is ||.||_{inf,1}.
enum class Side { row, column };

const char* to_string(Side side);
Side opposite(Side side);

/// side-norm of x.
Rational side_norm(const RingMatrix& x, Side side);

/// Finitely supported approximation of the inverse of a lopsided matrix.
///
/// tail_bound bounds the side-norm distance from `approx` to the true
/// inverse in M_n(l^1). It is the smaller of the a priori geometric bound
/// (including the amplified pruning ledger) and the a posteriori bound
/// obtained from the exact residual.
struct TruncatedInverse {
  RingMatrix approx;
  Side side = Side::column;
  Rational tail_bound;
  int depth = 0;
  Rational pruned_mass;  // amplified ledger of dropped monomials
  Rational a_priori_bound;
  std::optional<Rational> a_posteriori_bound;
  std::optional<Rational> residual_norm;  // side-norm of f * approx - I
  Rational ratio;         // contraction ratio of the series
  SymbolAlphabet alphabet;
  bool adjoint = false;   // approximates (f*)^-1 rather than f^-1

  /// Bound on ||approx - inverse||_{1,inf}.
  Rational column_error() const;
  /// Bound on ||approx - inverse||_{inf,1}.
  Rational row_error() const;
};

/// ||g M^-1||_{1,inf} for the column side, ||M^-1 g||_{inf,1} for the row
/// side. Throws std::domain_error when the matching flag is false.
Rational contraction_ratio(const LopsidedDecomposition& d, Side side);

/// target_eps * (1 - r) / (16 n).
Rational default_prune_threshold(const Rational& target_eps, const Rational& ratio, std::size_t n);

/// Raised when the support cap is hit before the target accuracy.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, int depth_reached, int planned_depth, std::size_t support,
                 Rational ledger)
      : std::runtime_error(what),
        depth_reached(depth_reached),
        planned_depth(planned_depth),
        support(support),
        ledger(std::move(ledger)) {}

  int depth_reached;
  int planned_depth;
  std::size_t support;
  Rational ledger;
};

struct InverseOptions {
  Rational target_eps{1, 1000};
  Side side = Side::column;
  /// nullopt selects default_prune_threshold; zero disables pruning.
  std::optional<Rational> prune_threshold;
  std::size_t max_support = 4'000'000;
  bool residual_check = true;
};

/// Sums M^-1 (g M^-1)^l for l = 0..L with L the smallest depth whose
/// geometric tail fits the budget (half of target_eps when pruning, all of
/// it otherwise). Monomials below the prune threshold are dropped after each
/// level, smallest first, while the dropped side-norm amplified by 1/(1-r)
/// stays within the other half.
TruncatedInverse truncated_inverse(const LopsidedDecomposition& d, const InverseOptions& options);
TruncatedInverse truncated_inverse(const LopsidedDecomposition& d, const Rational& target_eps, Side side,
                                   std::optional<Rational> prune_threshold = std::nullopt);

/// Unpruned partial sum through level `depth`.
TruncatedInverse truncated_inverse_at_depth(const LopsidedDecomposition& d, int depth, Side side,
                                            bool residual_check = true);

/// Stars the approximation: an inverse of f becomes one of f*, with the
/// side swapped and the bound unchanged.
TruncatedInverse adjoint_inverse(const TruncatedInverse& t);

/// Exact side-norm of f * approx - I.
Rational residual(const RingMatrix& f, const TruncatedInverse& t);

/// Bound on sup_{s,k} |(h (approx - inverse))_{s,k}| for a row vector h.
Rational coordinate_error(const RingVector& h, const TruncatedInverse& t);

/// Bound on sum_{s,k} |(h (approx - inverse))_{s,k}|.
Rational l1_error(const RingVector& h, const TruncatedInverse& t);

}  // namespace lopact
