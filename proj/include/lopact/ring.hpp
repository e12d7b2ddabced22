#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "lopact/group.hpp"
#include "lopact/rational.hpp"

namespace lopact {

/// Finitely supported map from a group to the rationals, i.e. an element of
/// the rational group ring. Zero coefficients are never stored, so the key
/// set is exactly the support. Keys iterate in the group enumeration order.
class RingElement {
 public:
  using Terms = std::map<GroupElement, Rational, EnumerationLess>;

  explicit RingElement(GroupPtr group);

  static RingElement zero(GroupPtr group) { return RingElement(std::move(group)); }
  static RingElement one(GroupPtr group);
  static RingElement monomial(GroupPtr group, const GroupElement& s, const Rational& c);

  const GroupPtr& group() const { return group_; }
  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_integral() const;

  Rational coefficient(const GroupElement& s) const;
  std::vector<GroupElement> support() const;

  /// Adds c at s, dropping the key if the coefficient cancels.
  void add_term(const GroupElement& s, const Rational& c);
  void erase(const GroupElement& s) { terms_.erase(s); }

  RingElement& operator+=(const RingElement& other);
  RingElement& operator-=(const RingElement& other);
  RingElement& operator*=(const Rational& c);

  friend RingElement operator+(RingElement a, const RingElement& b) { return a += b; }
  friend RingElement operator-(RingElement a, const RingElement& b) { return a -= b; }
  friend RingElement operator*(RingElement a, const Rational& c) { return a *= c; }
  friend RingElement operator*(const Rational& c, RingElement a) { return a *= c; }
  RingElement operator-() const;

  /// Right translate f*s.
  RingElement right_translate(const GroupElement& s) const;
  /// Left translate s*f.
  RingElement left_translate(const GroupElement& s) const;

  friend bool operator==(const RingElement& a, const RingElement& b) {
    return *a.group_ == *b.group_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

 private:
  void require_same(const RingElement& other) const;

  GroupPtr group_;
  Terms terms_;
};

/// Convolution product (f g)_t = sum_s f_s g_{s^-1 t}.
RingElement ring_mul(const RingElement& f, const RingElement& g);
RingElement operator*(const RingElement& f, const RingElement& g);

/// Involution: the coefficient at s moves to s^-1.
RingElement star(const RingElement& f);

Rational l1_norm(const RingElement& f);
Rational linf_norm(const RingElement& f);

/// Row vector in (QΓ)^n.
using RingVector = std::vector<RingElement>;

/// Square n x n matrix over the group ring; entry (k, m) is stored
/// row-major with 0-based indices.
class RingMatrix {
 public:
  RingMatrix(GroupPtr group, std::size_t n);

  static RingMatrix identity(GroupPtr group, std::size_t n);
  static RingMatrix diagonal(const std::vector<RingElement>& entries);

  const GroupPtr& group() const { return group_; }
  std::size_t size() const { return n_; }

  const RingElement& at(std::size_t k, std::size_t m) const { return entries_[k * n_ + m]; }
  RingElement& at(std::size_t k, std::size_t m) { return entries_[k * n_ + m]; }

  bool is_integral() const;
  bool is_zero() const;
  std::size_t support_size() const;

  /// supp(f) as (s, k, m) triples, 0-based, ordered by (k, m, s).
  std::vector<std::tuple<GroupElement, std::size_t, std::size_t>> support() const;

  RingMatrix& operator+=(const RingMatrix& other);
  RingMatrix& operator-=(const RingMatrix& other);
  friend RingMatrix operator+(RingMatrix a, const RingMatrix& b) { return a += b; }
  friend RingMatrix operator-(RingMatrix a, const RingMatrix& b) { return a -= b; }

  friend bool operator==(const RingMatrix& a, const RingMatrix& b) {
    return a.n_ == b.n_ && a.entries_ == b.entries_;
  }

 private:
  void require_same(const RingMatrix& other) const;

  GroupPtr group_;
  std::size_t n_;
  std::vector<RingElement> entries_;
};

RingMatrix mat_mul(const RingMatrix& f, const RingMatrix& g);
RingMatrix operator*(const RingMatrix& f, const RingMatrix& g);

/// (f*)^(km) = (f^(mk))*.
RingMatrix mat_star(const RingMatrix& f);

/// ||f||_{inf,1}: maximum over rows of the summed l1 norms.
Rational row_norm(const RingMatrix& f);
/// ||f||_{1,inf}: maximum over columns of the summed l1 norms.
Rational column_norm(const RingMatrix& f);

struct MatrixNorms {
  Rational row;     // ||f||_{inf,1}
  Rational column;  // ||f||_{1,inf}
};
MatrixNorms mat_norms(const RingMatrix& f);

/// Row vector times matrix: (v f)_m = sum_k v_k f^(km).
RingVector vec_mat_mul(const RingVector& v, const RingMatrix& f);

RingVector vec_add(const RingVector& a, const RingVector& b);
RingVector vec_sub(const RingVector& a, const RingVector& b);

bool vec_equal(const RingVector& a, const RingVector& b);

}  // namespace lopact
