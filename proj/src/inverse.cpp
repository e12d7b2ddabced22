#include "lopact/inverse.hpp"

#include <algorithm>
#include <tuple>
#include <vector>

namespace lopact {

const char* to_string(Side side) { return side == Side::row ? "row" : "column"; }

Side opposite(Side side) { return side == Side::row ? Side::column : Side::row; }

Rational side_norm(const RingMatrix& x, Side side) {
  return side == Side::row ? row_norm(x) : column_norm(x);
}

Rational TruncatedInverse::column_error() const {
  return side == Side::column ? tail_bound : tail_bound * static_cast<long>(approx.size());
}

Rational TruncatedInverse::row_error() const {
  return side == Side::row ? tail_bound : tail_bound * static_cast<long>(approx.size());
}

namespace {

RingMatrix m_inverse(const LopsidedDecomposition& d) {
  std::vector<RingElement> entries;
  for (const auto& t : d.diagonal) {
    entries.push_back(
        RingElement::monomial(d.f.group(), t.position.inverse(), make_rational(1, static_cast<long>(t.coefficient))));
  }
  return RingMatrix::diagonal(entries);
}

Rational m_inverse_norm(const LopsidedDecomposition& d) {
  Rational best(0);
  for (const auto& t : d.diagonal) {
    Rational v(1, t.coefficient < 0 ? -t.coefficient : t.coefficient);
    if (v > best) best = v;
  }
  return best;
}

void require_flag(const LopsidedDecomposition& d, Side side) {
  if (side == Side::column && !d.column_lopsided)
    throw std::domain_error("not lopsided on this side: column");
  if (side == Side::row && !d.row_lopsided) throw std::domain_error("not lopsided on this side: row");
}

// Step matrix of the series: g M^-1 (column, multiplied on the right) or
// M^-1 g (row, multiplied on the left).
RingMatrix step_matrix(const LopsidedDecomposition& d, Side side) {
  return side == Side::column ? mat_mul(d.g, m_inverse(d)) : mat_mul(m_inverse(d), d.g);
}

RingMatrix advance(const RingMatrix& term, const RingMatrix& step, Side side) {
  return side == Side::column ? mat_mul(term, step) : mat_mul(step, term);
}

// Geometric tail ||M^-1|| r^{L+1} / (1 - r).
Rational geometric_tail(const Rational& minv_norm, const Rational& r, int depth) {
  return minv_norm * pow(r, static_cast<unsigned>(depth + 1)) / (Rational(1) - r);
}

int planned_depth(const Rational& minv_norm, const Rational& r, const Rational& budget) {
  if (r == 0) return 0;
  Rational power = r;  // r^{L+1}
  const Rational scale = minv_norm / (Rational(1) - r);
  for (int depth = 0; depth < 1'000'000; ++depth) {
    if (scale * power <= budget) return depth;
    power *= r;
  }
  throw BudgetExceeded("target accuracy needs more than 10^6 levels", 0, 0, 0, Rational(0));
}

// Drops monomials below `threshold` (smallest first, ties by entry then
// enumeration order) while the amplified ledger stays within `budget`.
// Returns the ledger increment.
Rational prune_level(RingMatrix& term, Side side, const Rational& threshold, const Rational& amplifier,
                     const Rational& ledger, const Rational& budget) {
  struct Candidate {
    Rational magnitude;
    std::size_t k, m;
    GroupElement s;
  };
  const std::size_t n = term.size();
  std::vector<Candidate> candidates;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < n; ++m) {
      for (const auto& [s, c] : term.at(k, m).terms()) {
        Rational a = abs(c);
        if (a < threshold) candidates.push_back({a, k, m, s});
      }
    }
  }
  if (candidates.empty()) return Rational(0);
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& x, const Candidate& y) {
    if (x.magnitude != y.magnitude) return x.magnitude < y.magnitude;
    if (x.k != y.k) return x.k < y.k;
    if (x.m != y.m) return x.m < y.m;
    return compare_enumeration(x.s, y.s) < 0;
  });
  // Dropped mass per column (column side) or per row (row side); the side
  // norm of the dropped matrix is the maximum of these.
  std::vector<Rational> dropped(n, Rational(0));
  Rational level_norm(0);
  for (const auto& cand : candidates) {
    const std::size_t line = side == Side::column ? cand.m : cand.k;
    Rational updated = dropped[line] + cand.magnitude;
    Rational new_norm = updated > level_norm ? updated : level_norm;
    if (ledger + new_norm * amplifier > budget) continue;
    dropped[line] = updated;
    level_norm = new_norm;
    term.at(cand.k, cand.m).erase(cand.s);
  }
  return level_norm * amplifier;
}

TruncatedInverse run_series(const LopsidedDecomposition& d, Side side, int depth,
                            const std::optional<Rational>& threshold, const Rational& prune_budget,
                            std::size_t max_support, bool residual_check) {
  require_flag(d, side);
  const Rational r = contraction_ratio(d, side);
  const Rational minv_norm = m_inverse_norm(d);
  const Rational amplifier = Rational(1) / (Rational(1) - r);
  const RingMatrix step = step_matrix(d, side);

  RingMatrix term = m_inverse(d);
  RingMatrix approx = term;
  Rational ledger(0);
  for (int level = 1; level <= depth; ++level) {
    term = advance(term, step, side);
    if (threshold && *threshold > 0) ledger += prune_level(term, side, *threshold, amplifier, ledger, prune_budget);
    approx += term;
    const std::size_t support = approx.support_size() + term.support_size();
    if (support > max_support) {
      throw BudgetExceeded("budget exceeded: support of the truncated inverse passed " +
                               std::to_string(max_support) + " monomials at level " + std::to_string(level) +
                               " of " + std::to_string(depth),
                           level, depth, support, ledger);
    }
  }

  TruncatedInverse out{approx, side, Rational(0), depth, ledger, Rational(0), std::nullopt, std::nullopt, r,
                       symbol_alphabet(d), false};
  out.a_priori_bound = geometric_tail(minv_norm, r, depth) + ledger;
  out.tail_bound = out.a_priori_bound;
  if (residual_check) {
    const Rational res = residual(d.f, out);
    out.residual_norm = res;
    Rational post = minv_norm * amplifier * res;
    out.a_posteriori_bound = post;
    if (post < out.tail_bound) out.tail_bound = post;
  }
  return out;
}

}  // namespace

Rational contraction_ratio(const LopsidedDecomposition& d, Side side) {
  require_flag(d, side);
  return side_norm(step_matrix(d, side), side);
}

Rational default_prune_threshold(const Rational& target_eps, const Rational& ratio, std::size_t n) {
  return target_eps * (Rational(1) - ratio) / Rational(static_cast<long>(16 * n));
}

TruncatedInverse truncated_inverse(const LopsidedDecomposition& d, const InverseOptions& options) {
  if (options.target_eps <= 0) throw std::domain_error("target_eps must be positive");
  require_flag(d, options.side);
  const Rational r = contraction_ratio(d, options.side);
  const Rational threshold =
      options.prune_threshold ? *options.prune_threshold : default_prune_threshold(options.target_eps, r, d.size());
  const bool pruning = threshold > 0;
  const Rational tail_budget = pruning ? options.target_eps / 2 : options.target_eps;
  const int depth = planned_depth(m_inverse_norm(d), r, tail_budget);
  return run_series(d, options.side, depth, pruning ? std::optional<Rational>(threshold) : std::nullopt,
                    options.target_eps / 2, options.max_support, options.residual_check);
}

TruncatedInverse truncated_inverse(const LopsidedDecomposition& d, const Rational& target_eps, Side side,
                                   std::optional<Rational> prune_threshold) {
  InverseOptions options;
  options.target_eps = target_eps;
  options.side = side;
  options.prune_threshold = std::move(prune_threshold);
  return truncated_inverse(d, options);
}

TruncatedInverse truncated_inverse_at_depth(const LopsidedDecomposition& d, int depth, Side side,
                                            bool residual_check) {
  if (depth < 0) throw std::domain_error("depth must be nonnegative");
  return run_series(d, side, depth, std::nullopt, Rational(0), static_cast<std::size_t>(-1), residual_check);
}

TruncatedInverse adjoint_inverse(const TruncatedInverse& t) {
  TruncatedInverse out = t;
  out.approx = mat_star(t.approx);
  out.side = opposite(t.side);
  out.adjoint = !t.adjoint;
  return out;
}

Rational residual(const RingMatrix& f, const TruncatedInverse& t) {
  RingMatrix r = mat_mul(f, t.approx);
  r -= RingMatrix::identity(f.group(), f.size());
  return side_norm(r, t.side);
}

Rational coordinate_error(const RingVector& h, const TruncatedInverse& t) {
  if (h.size() != t.approx.size()) throw std::domain_error("vector length does not match inverse size");
  Rational total(0), largest(0);
  for (const auto& e : h) {
    Rational a = l1_norm(e);
    total += a;
    if (a > largest) largest = a;
  }
  const Rational col = t.column_error();
  const Rational row = t.row_error();
  const Rational entry = col < row ? col : row;
  Rational a = total * entry;
  Rational b = largest * col;
  return a < b ? a : b;
}

Rational l1_error(const RingVector& h, const TruncatedInverse& t) {
  if (h.size() != t.approx.size()) throw std::domain_error("vector length does not match inverse size");
  Rational total(0), largest(0);
  for (const auto& e : h) {
    Rational a = l1_norm(e);
    total += a;
    if (a > largest) largest = a;
  }
  Rational a = total * t.row_error();
  Rational b = largest * static_cast<long>(h.size()) * t.column_error();
  return a < b ? a : b;
}

}  // namespace lopact
