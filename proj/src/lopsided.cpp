#include "lopact/lopsided.hpp"

#include <stdexcept>

namespace lopact {

RingMatrix LopsidedDecomposition::m_matrix() const {
  std::vector<RingElement> entries;
  for (const auto& d : diagonal)
    entries.push_back(RingElement::monomial(f.group(), d.position, Rational(d.coefficient)));
  return RingMatrix::diagonal(entries);
}

bool LopsidedDecomposition::is_normalized() const {
  for (const auto& d : diagonal) {
    if (d.coefficient <= 0 || !d.position.is_identity()) return false;
  }
  return true;
}

Rational LopsidedDecomposition::row_slack(std::size_t k) const {
  Rational mass(0);
  for (std::size_t m = 0; m < size(); ++m) mass += l1_norm(g.at(k, m));
  return Rational(diagonal[k].coefficient < 0 ? -diagonal[k].coefficient : diagonal[k].coefficient) - mass;
}

Rational LopsidedDecomposition::column_slack(std::size_t k) const {
  Rational mass(0);
  for (std::size_t m = 0; m < size(); ++m) mass += l1_norm(g.at(m, k));
  return Rational(diagonal[k].coefficient < 0 ? -diagonal[k].coefficient : diagonal[k].coefficient) - mass;
}

namespace {

std::int64_t to_int64(const Rational& c) {
  if (c.get_den() != 1 || !c.get_num().fits_slong_p())
    throw std::domain_error("diagonal coefficient is not a machine integer");
  return c.get_num().get_si();
}

bool validates(int category) { return category < 3; }

}  // namespace

LopsidedDecomposition decompose(const RingMatrix& f) {
  if (!f.is_integral()) throw std::domain_error("decompose expects a matrix over the integral group ring");
  const std::size_t n = f.size();

  std::vector<DiagonalTerm> chosen;
  std::vector<std::vector<DiagonalTerm>> alternatives(n);
  for (std::size_t k = 0; k < n; ++k) {
    const RingElement& entry = f.at(k, k);
    if (entry.is_zero()) throw std::domain_error("no candidate: diagonal entry " + std::to_string(k + 1) + " is zero");
    Rational diag_mass = l1_norm(entry);
    Rational off_row(0), off_col(0);
    for (std::size_t m = 0; m < n; ++m) {
      if (m == k) continue;
      off_row += l1_norm(f.at(k, m));
      off_col += l1_norm(f.at(m, k));
    }
    int best_category = 4;
    Rational best_slack;
    std::optional<DiagonalTerm> best;
    std::vector<DiagonalTerm> valid;
    for (const auto& [s, c] : entry.terms()) {  // enumeration order
      Rational a = abs(c);
      Rational rest = diag_mass - a;
      Rational row_slack = a - rest - off_row;
      Rational col_slack = a - rest - off_col;
      const bool row_ok = row_slack > 0;
      const bool col_ok = col_slack > 0;
      const int category = row_ok && col_ok ? 0 : row_ok ? 1 : col_ok ? 2 : 3;
      DiagonalTerm term{to_int64(c), s};
      if (validates(category)) valid.push_back(term);
      const bool better = category < best_category ||
                          (category == best_category && category == 3 && row_slack > best_slack);
      if (better) {
        best_category = category;
        best_slack = row_slack;
        best = term;
      }
    }
    for (const auto& v : valid) {
      if (!(v.position == best->position)) alternatives[k].push_back(v);
    }
    chosen.push_back(*best);
  }

  LopsidedDecomposition d{f, chosen, RingMatrix(f.group(), n), false, false, std::nullopt, std::nullopt,
                          std::move(alternatives)};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < n; ++m) d.g.at(k, m) = -f.at(k, m);
    d.g.at(k, k).add_term(chosen[k].position, Rational(chosen[k].coefficient));
  }
  d.row_lopsided = true;
  d.column_lopsided = true;
  for (std::size_t k = 0; k < n; ++k) {
    if (d.row_slack(k) <= 0) d.row_lopsided = false;
    if (d.column_slack(k) <= 0) d.column_lopsided = false;
  }
  return d;
}

const char* to_string(Positivity p) {
  switch (p) {
    case Positivity::yes: return "true";
    case Positivity::no: return "false";
    case Positivity::undetermined: return "undetermined";
    case Positivity::not_applicable: return "not-applicable";
  }
  return "?";
}

PositivityResult classify_positive(const LopsidedDecomposition& d, const OrderOracle& o) {
  if (!d.row_lopsided && !d.column_lopsided)
    throw std::domain_error("classify_positive needs a row or column lopsided decomposition");
  bool any_false = false;
  bool any_undetermined = false;
  for (std::size_t k = 0; k < d.size() && !any_false; ++k) {
    for (std::size_t m = 0; m < d.size() && !any_false; ++m) {
      const GroupElement s_inv = d.diagonal[m].position.inverse();
      for (const auto& kv : d.g.at(k, m).terms()) {
        try {
          if (!o.is_positive(kv.first * s_inv)) {
            any_false = true;
            break;
          }
        } catch (const OracleIncomplete&) {
          any_undetermined = true;
        }
      }
    }
  }
  const Positivity verdict =
      any_false ? Positivity::no : any_undetermined ? Positivity::undetermined : Positivity::yes;
  PositivityResult out;
  out.row = d.row_lopsided ? verdict : Positivity::not_applicable;
  out.column = d.column_lopsided ? verdict : Positivity::not_applicable;
  return out;
}

LopsidedDecomposition with_certificates(LopsidedDecomposition d, const OrderOracle& o) {
  const PositivityResult r = classify_positive(d, o);
  if (r.row == Positivity::yes) d.row_certificate = o;
  if (r.column == Positivity::yes) d.column_certificate = o;
  return d;
}

std::int64_t SymbolAlphabet::max_size() const {
  std::int64_t best = 0;
  for (auto s : sizes) best = std::max(best, s);
  return best;
}

Integer SymbolAlphabet::cardinality() const {
  Integer out(1);
  for (auto s : sizes) out *= static_cast<long>(s);
  return out;
}

bool SymbolAlphabet::contains(const std::vector<std::int64_t>& symbol) const {
  if (symbol.size() != sizes.size()) return false;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    if (symbol[k] < 0 || symbol[k] >= sizes[k]) return false;
  }
  return true;
}

SymbolAlphabet symbol_alphabet(const LopsidedDecomposition& d) {
  if (!d.row_lopsided && !d.column_lopsided)
    throw std::domain_error("the symbol alphabet needs a row or column lopsided decomposition");
  SymbolAlphabet out;
  for (const auto& t : d.diagonal) out.sizes.push_back(t.coefficient < 0 ? -t.coefficient : t.coefficient);
  return out;
}

RingMatrix normalizer(const LopsidedDecomposition& d) {
  std::vector<RingElement> entries;
  for (const auto& t : d.diagonal)
    entries.push_back(RingElement::monomial(d.f.group(), t.position, Rational(t.coefficient < 0 ? -1 : 1)));
  return RingMatrix::diagonal(entries);
}

namespace {

// X u^-1: column m is right-translated by s_m^-1 and multiplied by sgn(M_m).
RingMatrix times_normalizer_inverse(const RingMatrix& x, const std::vector<DiagonalTerm>& diagonal) {
  RingMatrix out(x.group(), x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (std::size_t m = 0; m < x.size(); ++m) {
      RingElement e = x.at(k, m).right_translate(diagonal[m].position.inverse());
      if (diagonal[m].coefficient < 0) e = -e;
      out.at(k, m) = std::move(e);
    }
  }
  return out;
}

}  // namespace

RingMatrix normalize(const LopsidedDecomposition& d) { return times_normalizer_inverse(d.f, d.diagonal); }

LopsidedDecomposition normalized(const LopsidedDecomposition& d) {
  LopsidedDecomposition out = d;
  out.f = normalize(d);
  out.g = times_normalizer_inverse(d.g, d.diagonal);
  for (auto& t : out.diagonal) {
    t.coefficient = t.coefficient < 0 ? -t.coefficient : t.coefficient;
    t.position = d.f.group()->identity();
  }
  for (auto& alts : out.alternatives) alts.clear();
  return out;
}

}  // namespace lopact
