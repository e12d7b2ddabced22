#include "lopact/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lopact/parallel.hpp"

namespace lopact {

Window::Window(GroupPtr group, std::vector<GroupElement> elements) : group_(std::move(group)) {
  std::sort(elements.begin(), elements.end(), EnumerationLess{});
  for (std::size_t i = 0; i < elements.size(); ++i) {
    group_->require(elements[i]);
    if (i > 0 && elements[i] == elements[i - 1]) throw std::domain_error("window elements must be distinct");
    index_.emplace(elements[i], i);
  }
  elements_ = std::move(elements);
}

Window Window::ball(GroupPtr group, int radius) {
  auto elements = group->ball(radius);
  return Window(std::move(group), std::move(elements));
}

std::optional<std::size_t> Window::index_of(const GroupElement& s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Window Window::translate(const GroupElement& s) const {
  std::vector<GroupElement> moved;
  moved.reserve(elements_.size());
  for (const auto& w : elements_) moved.push_back(s * w);
  return Window(group_, std::move(moved));
}

// ---------------------------------------------------------------------------

Configuration::Configuration(Window window, SymbolAlphabet alphabet, std::vector<Symbol> values)
    : window_(std::move(window)), alphabet_(std::move(alphabet)), values_(std::move(values)) {
  if (values_.size() != window_.size()) throw std::domain_error("one symbol per window element expected");
  for (const auto& v : values_) {
    if (!alphabet_.contains(v)) throw std::domain_error("symbol outside the alphabet");
  }
}

Configuration Configuration::zero(Window window, SymbolAlphabet alphabet) {
  std::vector<Symbol> values(window.size(), Symbol(alphabet.dimension(), 0));
  return Configuration(std::move(window), std::move(alphabet), std::move(values));
}

Symbol Configuration::at(const GroupElement& s) const {
  auto idx = window_.index_of(s);
  return idx ? values_[*idx] : Symbol(alphabet_.dimension(), 0);
}

std::int64_t Configuration::at(const GroupElement& s, std::size_t k) const {
  auto idx = window_.index_of(s);
  return idx ? values_[*idx].at(k) : 0;
}

std::int64_t Configuration::sup_norm() const {
  std::int64_t best = 0;
  for (const auto& v : values_)
    for (auto x : v) best = std::max(best, x);
  return best;
}

Configuration shift(const GroupElement& s, const Configuration& y) {
  Window moved = y.window().translate(s);
  std::vector<Symbol> values(moved.size());
  const auto& old = y.window().elements();
  for (std::size_t i = 0; i < old.size(); ++i) values[*moved.index_of(s * old[i])] = y.values()[i];
  return Configuration(std::move(moved), y.alphabet(), std::move(values));
}

// ---------------------------------------------------------------------------

std::size_t symbol_index(const SymbolAlphabet& alphabet, const Symbol& symbol) {
  if (!alphabet.contains(symbol)) throw std::domain_error("symbol outside the alphabet");
  std::size_t index = 0;
  for (std::size_t k = 0; k < alphabet.dimension(); ++k)
    index = index * static_cast<std::size_t>(alphabet.sizes[k]) + static_cast<std::size_t>(symbol[k]);
  return index;
}

Symbol symbol_at(const SymbolAlphabet& alphabet, std::size_t index) {
  Symbol out(alphabet.dimension(), 0);
  for (std::size_t k = alphabet.dimension(); k-- > 0;) {
    const auto size = static_cast<std::size_t>(alphabet.sizes[k]);
    out[k] = static_cast<std::int64_t>(index % size);
    index /= size;
  }
  return out;
}

SymbolMeasure SymbolMeasure::uniform(SymbolAlphabet alphabet) { return SymbolMeasure(std::move(alphabet), std::nullopt); }

SymbolMeasure SymbolMeasure::table(SymbolAlphabet alphabet, std::vector<Rational> probabilities) {
  if (Integer(static_cast<unsigned long>(probabilities.size())) != alphabet.cardinality())
    throw std::domain_error("probability table size does not match the alphabet");
  Rational total(0);
  for (const auto& p : probabilities) {
    if (p < 0) throw std::domain_error("negative probability");
    total += p;
  }
  if (total != 1) throw std::domain_error("probabilities must sum to 1");
  return SymbolMeasure(std::move(alphabet), std::move(probabilities));
}

Rational SymbolMeasure::probability(const Symbol& symbol) const {
  const std::size_t idx = symbol_index(alphabet_, symbol);
  if (table_) return (*table_)[idx];
  return Rational(1) / Rational(alphabet_.cardinality());
}

std::vector<Rational> SymbolMeasure::marginal(std::size_t k) const {
  const auto size = static_cast<std::size_t>(alphabet_.sizes.at(k));
  if (!table_) return std::vector<Rational>(size, Rational(1, static_cast<unsigned long>(size)));
  std::vector<Rational> out(size, Rational(0));
  for (std::size_t i = 0; i < table_->size(); ++i) out[symbol_at(alphabet_, i)[k]] += (*table_)[i];
  return out;
}

bool SymbolMeasure::has_uniform_marginals() const {
  for (std::size_t k = 0; k < alphabet_.dimension(); ++k) {
    const Rational expected(1, static_cast<unsigned long>(alphabet_.sizes[k]));
    for (const auto& p : marginal(k)) {
      if (p != expected) return false;
    }
  }
  return true;
}

namespace {

std::complex<double> unit(const Rational& phase) {
  const double angle = -2.0 * std::numbers::pi * to_double(frac(phase));
  return {std::cos(angle), std::sin(angle)};
}

}  // namespace

std::complex<double> SymbolMeasure::fourier(const std::vector<Rational>& v) const {
  if (v.size() != alphabet_.dimension()) throw std::domain_error("vector length does not match the alphabet");
  if (!table_) {
    std::complex<double> out(1.0, 0.0);
    for (std::size_t k = 0; k < v.size(); ++k) {
      const Rational x = frac(v[k]);
      const Rational scaled = x * alphabet_.sizes[k];
      // Full sum of M-th roots of unity.
      if (x != 0 && scaled.get_den() == 1) return {0.0, 0.0};
      std::complex<double> sum(0.0, 0.0);
      for (std::int64_t i = 0; i < alphabet_.sizes[k]; ++i) sum += unit(x * i);
      out *= sum / static_cast<double>(alphabet_.sizes[k]);
    }
    return out;
  }
  std::complex<double> out(0.0, 0.0);
  for (std::size_t i = 0; i < table_->size(); ++i) {
    if ((*table_)[i] == 0) continue;
    const Symbol sigma = symbol_at(alphabet_, i);
    Rational phase(0);
    for (std::size_t k = 0; k < v.size(); ++k) phase += v[k] * sigma[k];
    out += to_double((*table_)[i]) * unit(phase);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t x) {
  std::uint64_t z = x + golden;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

using u128 = unsigned __int128;

}  // namespace

std::uint64_t draw(std::uint64_t seed, std::uint64_t trial, std::uint64_t index, std::uint64_t component) {
  const std::uint64_t k0 = mix(seed);
  const std::uint64_t k1 = mix(k0 ^ trial);
  const std::uint64_t k2 = mix(k1 ^ index);
  return mix(k2 ^ ((component + 1) * golden));
}

Configuration sample_configuration(const SymbolMeasure& m, const Window& w, std::uint64_t seed, std::uint64_t trial) {
  const SymbolAlphabet& alphabet = m.alphabet();
  std::vector<Symbol> values(w.size());
  if (m.is_uniform()) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      Symbol sym(alphabet.dimension());
      for (std::size_t k = 0; k < alphabet.dimension(); ++k) {
        const u128 u = draw(seed, trial, i, k);
        sym[k] = static_cast<std::int64_t>((u * static_cast<u128>(alphabet.sizes[k])) >> 64);
      }
      values[i] = std::move(sym);
    }
  } else {
    const auto& table = *m.probabilities();
    const Integer two64 = Integer(1) << 64;
    std::vector<u128> thresholds;
    Rational cumulative(0);
    for (const auto& p : table) {
      cumulative += p;
      Integer t = floor_of(cumulative * two64);
      const u128 hi = static_cast<u128>(Integer(t >> 32).get_ui());
      const u128 lo = static_cast<u128>(Integer(t & Integer(0xFFFFFFFFUL)).get_ui());
      thresholds.push_back((hi << 32) | lo);
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
      const u128 u = draw(seed, trial, i, 0);
      const auto pos = std::upper_bound(thresholds.begin(), thresholds.end(), u);
      values[i] = symbol_at(alphabet, static_cast<std::size_t>(pos - thresholds.begin()));
    }
  }
  return Configuration(w, alphabet, std::move(values));
}

// ---------------------------------------------------------------------------

bool CoordinateLess::operator()(const Coordinate& a, const Coordinate& b) const {
  const int c = compare_enumeration(a.s, b.s);
  if (c != 0) return c < 0;
  return a.k < b.k;
}

void TorusPoint::set(const Coordinate& c, const Rational& value, const Rational& err) {
  if (err < 0) throw std::domain_error("negative error radius");
  entries_.insert_or_assign(c, TorusValue{frac(value), err});
}

const TorusValue* TorusPoint::find(const Coordinate& c) const {
  auto it = entries_.find(c);
  return it == entries_.end() ? nullptr : &it->second;
}

TorusPoint shift(const GroupElement& s, const TorusPoint& x) {
  TorusPoint out;
  for (const auto& [c, v] : x.entries()) out.set({s * c.s, c.k}, v.value, v.err);
  return out;
}

PairingValue pairing(const TorusPoint& x, const RingVector& h) {
  Rational value(0), err(0);
  for (std::size_t k = 0; k < h.size(); ++k) {
    for (const auto& [s, c] : h[k].terms()) {
      const TorusValue* v = x.find({s, k});
      if (!v) throw std::domain_error("insufficient support: coordinate (" + h[k].group()->format(s) + ", " +
                                      std::to_string(k + 1) + ") missing");
      value += v->value * c;
      err += v->err * abs(c);
    }
  }
  return {frac(value), err};
}

TorusPoint homoclinic_image(const Configuration& y, const TruncatedInverse& inv, const std::vector<Coordinate>& coords) {
  if (!(y.alphabet() == inv.alphabet)) throw std::domain_error("alphabet mismatch between configuration and inverse");
  const RingMatrix& a = inv.approx;
  const std::size_t n = a.size();
  const auto& sizes = inv.alphabet.sizes;
  const Rational max_symbol(inv.alphabet.max_size() - 1);
  const Rational approx_err = max_symbol * inv.column_error();

  std::vector<Rational> entry_mass(n * n);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k) entry_mass[m * n + k] = l1_norm(a.at(m, k));

  const auto& window = y.window().elements();
  std::vector<TorusValue> results(coords.size());
  parallel_for(coords.size(), [&](std::size_t idx) {
    const Coordinate& c = coords[idx];
    if (c.k >= n) throw std::domain_error("coordinate index out of range");
    Rational value(0), cut_off(0);
    for (std::size_t m = 0; m < n; ++m) {
      const RingElement& entry = a.at(m, c.k);
      Rational inside(0);
      if (!entry.is_zero()) {
        for (std::size_t i = 0; i < window.size(); ++i) {
          const Rational coef = entry.coefficient(window[i].inverse() * c.s);
          if (coef == 0) continue;
          inside += abs(coef);
          value += coef * y.values()[i][m];
        }
      }
      cut_off += Rational(sizes[m] - 1) * (entry_mass[m * n + c.k] - inside);
    }
    results[idx] = {frac(value), approx_err + cut_off};
  });

  TorusPoint out;
  for (std::size_t i = 0; i < coords.size(); ++i) out.set(coords[i], results[i].value, results[i].err);
  return out;
}

Rational circle_distance(const Rational& a, const Rational& b) {
  const Rational d = frac(a - b);
  const Rational other = Rational(1) - d;
  return d < other ? d : other;
}

}  // namespace lopact
