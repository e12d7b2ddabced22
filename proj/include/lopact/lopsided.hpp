#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lopact/group.hpp"
#include "lopact/ring.hpp"

namespace lopact {

/// The monomial M_k s_k picked out of the k-th diagonal entry.
struct DiagonalTerm {
  std::int64_t coefficient = 0;
  GroupElement position;
};

/// f = M - g with M = diag(M_1 s_1, ..., M_n s_n) and supp(M) disjoint from
/// supp(g), together with the row and column lopsidedness flags.
struct LopsidedDecomposition {
  RingMatrix f;
  std::vector<DiagonalTerm> diagonal;
  RingMatrix g;
  bool row_lopsided = false;
  bool column_lopsided = false;
  /// Orders under which positivity has been verified, per side.
  std::optional<OrderOracle> row_certificate;
  std::optional<OrderOracle> column_certificate;
  /// Other diagonal monomials that also validate a flag, per k.
  std::vector<std::vector<DiagonalTerm>> alternatives;

  std::size_t size() const { return diagonal.size(); }
  RingMatrix m_matrix() const;

  /// M = diag(|M_1|, ..., |M_n|) at the identity.
  bool is_normalized() const;

  /// |M_k| minus the l1 mass of row k (resp. column k) of g.
  Rational row_slack(std::size_t k) const;
  Rational column_slack(std::size_t k) const;
};

/// Selects one diagonal monomial per k and classifies the result.
///
/// Row k's lopsidedness depends only on the choice in entry (k, k), so the
/// selection is made per index: a candidate validating both sides wins,
/// then row, then column; when none validates either side the candidate with
/// the largest row slack is kept. Ties go to the enumeration order.
/// Throws std::domain_error if a diagonal entry is zero or f is not integral.
LopsidedDecomposition decompose(const RingMatrix& f);

enum class Positivity { yes, no, undetermined, not_applicable };

const char* to_string(Positivity p);

struct PositivityResult {
  Positivity row = Positivity::not_applicable;
  Positivity column = Positivity::not_applicable;
};

/// Checks that every t*s_m^-1 with t in supp(g^(km)) is positive for the
/// oracle. Sides whose lopsidedness flag is false are not_applicable; an
/// oracle that cannot decide yields undetermined.
PositivityResult classify_positive(const LopsidedDecomposition& d, const OrderOracle& o);

/// Runs classify_positive and records o as the certificate of every side
/// that came out positive.
LopsidedDecomposition with_certificates(LopsidedDecomposition d, const OrderOracle& o);

struct SymbolAlphabet {
  std::vector<std::int64_t> sizes;

  std::size_t dimension() const { return sizes.size(); }
  std::int64_t max_size() const;
  /// |S_f| = product of the sizes.
  Integer cardinality() const;
  bool contains(const std::vector<std::int64_t>& symbol) const;

  friend bool operator==(const SymbolAlphabet&, const SymbolAlphabet&) = default;
};

SymbolAlphabet symbol_alphabet(const LopsidedDecomposition& d);

/// u = diag(sgn(M_k) s_k); u^-1 = u*.
RingMatrix normalizer(const LopsidedDecomposition& d);

/// f u^-1, whose diagonal part is diag(|M_1|, ..., |M_n|) at the identity.
RingMatrix normalize(const LopsidedDecomposition& d);

/// Decomposition of f u^-1 built directly from d: same flags, same
/// alphabet, g replaced by g u^-1, certificates carried over.
LopsidedDecomposition normalized(const LopsidedDecomposition& d);

}  // namespace lopact
