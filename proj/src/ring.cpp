#include "lopact/ring.hpp"

#include <algorithm>
#include <stdexcept>

#include "lopact/parallel.hpp"

namespace lopact {

RingElement::RingElement(GroupPtr group) : group_(std::move(group)) {
  if (!group_) throw std::domain_error("ring element without a group");
}

RingElement RingElement::one(GroupPtr group) {
  RingElement out(group);
  out.terms_.emplace(group->identity(), Rational(1));
  return out;
}

RingElement RingElement::monomial(GroupPtr group, const GroupElement& s, const Rational& c) {
  RingElement out(std::move(group));
  out.add_term(s, c);
  return out;
}

bool RingElement::is_integral() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const auto& kv) { return kv.second.get_den() == 1; });
}

Rational RingElement::coefficient(const GroupElement& s) const {
  auto it = terms_.find(s);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<GroupElement> RingElement::support() const {
  std::vector<GroupElement> out;
  out.reserve(terms_.size());
  for (const auto& kv : terms_) out.push_back(kv.first);
  return out;
}

void RingElement::add_term(const GroupElement& s, const Rational& c) {
  if (c == 0) return;
  group_->require(s);
  auto [it, inserted] = terms_.try_emplace(s, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

void RingElement::require_same(const RingElement& other) const {
  if (group_ != other.group_ && !(*group_ == *other.group_))
    throw std::domain_error("ring elements over different groups");
}

RingElement& RingElement::operator+=(const RingElement& other) {
  require_same(other);
  for (const auto& [s, c] : other.terms_) add_term(s, c);
  return *this;
}

RingElement& RingElement::operator-=(const RingElement& other) {
  require_same(other);
  for (const auto& [s, c] : other.terms_) add_term(s, -c);
  return *this;
}

RingElement& RingElement::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& kv : terms_) kv.second *= c;
  return *this;
}

RingElement RingElement::operator-() const {
  RingElement out = *this;
  for (auto& kv : out.terms_) kv.second = -kv.second;
  return out;
}

RingElement RingElement::right_translate(const GroupElement& s) const {
  RingElement out(group_);
  for (const auto& [t, c] : terms_) out.terms_.emplace(t * s, c);
  return out;
}

RingElement RingElement::left_translate(const GroupElement& s) const {
  RingElement out(group_);
  for (const auto& [t, c] : terms_) out.terms_.emplace(s * t, c);
  return out;
}

std::string RingElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [s, c] : terms_) {
    Rational a = abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    std::string coef = a.get_den() == 1 ? a.get_num().get_str() : to_fraction_string(a);
    if (s.is_identity()) {
      out += coef;
    } else {
      if (a != 1) out += coef + "*";
      out += group_->format(s);
    }
  }
  return out;
}

RingElement ring_mul(const RingElement& f, const RingElement& g) {
  if (f.group() != g.group() && !(*f.group() == *g.group()))
    throw std::domain_error("ring elements over different groups");
  RingElement out(f.group());
  if (f.is_zero() || g.is_zero()) return out;
  for (const auto& [s, a] : f.terms()) {
    for (const auto& [t, b] : g.terms()) out.add_term(s * t, a * b);
  }
  return out;
}

RingElement operator*(const RingElement& f, const RingElement& g) { return ring_mul(f, g); }

RingElement star(const RingElement& f) {
  RingElement out(f.group());
  for (const auto& [s, c] : f.terms()) out.add_term(s.inverse(), c);
  return out;
}

Rational l1_norm(const RingElement& f) {
  Rational sum(0);
  for (const auto& kv : f.terms()) sum += abs(kv.second);
  return sum;
}

Rational linf_norm(const RingElement& f) {
  Rational best(0);
  for (const auto& kv : f.terms()) {
    Rational a = abs(kv.second);
    if (a > best) best = a;
  }
  return best;
}

// ---------------------------------------------------------------------------

RingMatrix::RingMatrix(GroupPtr group, std::size_t n)
    : group_(std::move(group)), n_(n), entries_(n * n, RingElement(group_)) {
  if (n == 0) throw std::domain_error("matrix size must be positive");
}

RingMatrix RingMatrix::identity(GroupPtr group, std::size_t n) {
  RingMatrix out(group, n);
  for (std::size_t k = 0; k < n; ++k) out.at(k, k) = RingElement::one(group);
  return out;
}

RingMatrix RingMatrix::diagonal(const std::vector<RingElement>& entries) {
  if (entries.empty()) throw std::domain_error("empty diagonal");
  RingMatrix out(entries.front().group(), entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) out.at(k, k) = entries[k];
  return out;
}

bool RingMatrix::is_integral() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const RingElement& e) { return e.is_integral(); });
}

bool RingMatrix::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const RingElement& e) { return e.is_zero(); });
}

std::size_t RingMatrix::support_size() const {
  std::size_t total = 0;
  for (const auto& e : entries_) total += e.size();
  return total;
}

std::vector<std::tuple<GroupElement, std::size_t, std::size_t>> RingMatrix::support() const {
  std::vector<std::tuple<GroupElement, std::size_t, std::size_t>> out;
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t m = 0; m < n_; ++m) {
      for (const auto& kv : at(k, m).terms()) out.emplace_back(kv.first, k, m);
    }
  }
  return out;
}

void RingMatrix::require_same(const RingMatrix& other) const {
  if (n_ != other.n_) throw std::domain_error("matrix size mismatch");
  if (group_ != other.group_ && !(*group_ == *other.group_))
    throw std::domain_error("matrices over different groups");
}

RingMatrix& RingMatrix::operator+=(const RingMatrix& other) {
  require_same(other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

RingMatrix& RingMatrix::operator-=(const RingMatrix& other) {
  require_same(other);
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

RingMatrix mat_mul(const RingMatrix& f, const RingMatrix& g) {
  if (f.size() != g.size()) throw std::domain_error("matrix size mismatch");
  if (f.group() != g.group() && !(*f.group() == *g.group()))
    throw std::domain_error("matrices over different groups");
  const std::size_t n = f.size();
  RingMatrix out(f.group(), n);
  parallel_for(n * n, [&](std::size_t idx) {
    const std::size_t k = idx / n;
    const std::size_t m = idx % n;
    RingElement acc(f.group());
    for (std::size_t j = 0; j < n; ++j) {
      if (f.at(k, j).is_zero() || g.at(j, m).is_zero()) continue;
      acc += ring_mul(f.at(k, j), g.at(j, m));
    }
    out.at(k, m) = std::move(acc);
  });
  return out;
}

RingMatrix operator*(const RingMatrix& f, const RingMatrix& g) { return mat_mul(f, g); }

RingMatrix mat_star(const RingMatrix& f) {
  RingMatrix out(f.group(), f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    for (std::size_t m = 0; m < f.size(); ++m) out.at(k, m) = star(f.at(m, k));
  }
  return out;
}

Rational row_norm(const RingMatrix& f) {
  Rational best(0);
  for (std::size_t k = 0; k < f.size(); ++k) {
    Rational sum(0);
    for (std::size_t m = 0; m < f.size(); ++m) sum += l1_norm(f.at(k, m));
    if (sum > best) best = sum;
  }
  return best;
}

Rational column_norm(const RingMatrix& f) {
  Rational best(0);
  for (std::size_t m = 0; m < f.size(); ++m) {
    Rational sum(0);
    for (std::size_t k = 0; k < f.size(); ++k) sum += l1_norm(f.at(k, m));
    if (sum > best) best = sum;
  }
  return best;
}

MatrixNorms mat_norms(const RingMatrix& f) { return {row_norm(f), column_norm(f)}; }

RingVector vec_mat_mul(const RingVector& v, const RingMatrix& f) {
  if (v.size() != f.size()) throw std::domain_error("vector length does not match matrix size");
  RingVector out(f.size(), RingElement(f.group()));
  for (std::size_t m = 0; m < f.size(); ++m) {
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (v[k].is_zero() || f.at(k, m).is_zero()) continue;
      out[m] += ring_mul(v[k], f.at(k, m));
    }
  }
  return out;
}

RingVector vec_add(const RingVector& a, const RingVector& b) {
  if (a.size() != b.size()) throw std::domain_error("vector length mismatch");
  RingVector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

RingVector vec_sub(const RingVector& a, const RingVector& b) {
  if (a.size() != b.size()) throw std::domain_error("vector length mismatch");
  RingVector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

bool vec_equal(const RingVector& a, const RingVector& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] == b[i])) return false;
  }
  return true;
}

}  // namespace lopact
