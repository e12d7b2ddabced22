#include "lopact/group.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace lopact {

std::vector<Syllable> normalize_word(GroupKind kind, std::vector<Syllable> word) {
  if (kind == GroupKind::free_abelian) {
    std::map<int, std::int64_t> sums;
    for (const auto& syl : word) sums[syl.generator] += syl.exponent;
    std::vector<Syllable> out;
    for (const auto& [gen, e] : sums) {
      if (e != 0) out.push_back({gen, e});
    }
    return out;
  }
  std::vector<Syllable> stack;
  stack.reserve(word.size());
  for (const auto& syl : word) {
    if (syl.exponent == 0) continue;
    if (!stack.empty() && stack.back().generator == syl.generator) {
      stack.back().exponent += syl.exponent;
      if (stack.back().exponent == 0) stack.pop_back();
    } else {
      stack.push_back(syl);
    }
  }
  return stack;
}

GroupElement::GroupElement(GroupKind kind, int rank) : kind_(kind), rank_(rank) {}

GroupElement::GroupElement(GroupKind kind, int rank, std::vector<Syllable> syllables)
    : kind_(kind), rank_(rank) {
  for (const auto& syl : syllables) {
    if (syl.generator < 0 || syl.generator >= rank)
      throw std::domain_error("generator index out of range");
  }
  syllables_ = normalize_word(kind, std::move(syllables));
}

GroupElement GroupElement::from_coordinates(const std::vector<std::int64_t>& coords) {
  std::vector<Syllable> word;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] != 0) word.push_back({static_cast<int>(i), coords[i]});
  }
  return GroupElement(GroupKind::free_abelian, static_cast<int>(coords.size()), std::move(word));
}

std::int64_t GroupElement::length() const {
  std::int64_t n = 0;
  for (const auto& syl : syllables_) n += syl.exponent < 0 ? -syl.exponent : syl.exponent;
  return n;
}

std::vector<std::int64_t> GroupElement::coordinates() const {
  if (kind_ != GroupKind::free_abelian) throw std::domain_error("coordinates of a free-group element");
  std::vector<std::int64_t> out(static_cast<std::size_t>(rank_), 0);
  for (const auto& syl : syllables_) out[static_cast<std::size_t>(syl.generator)] = syl.exponent;
  return out;
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  if (!same_group(other)) throw std::domain_error("group elements from different groups");
  if (other.is_identity()) return *this;
  if (is_identity()) return other;
  std::vector<Syllable> word = syllables_;
  word.insert(word.end(), other.syllables_.begin(), other.syllables_.end());
  GroupElement out(kind_, rank_);
  out.syllables_ = normalize_word(kind_, std::move(word));
  return out;
}

GroupElement GroupElement::inverse() const {
  GroupElement out(kind_, rank_);
  out.syllables_.reserve(syllables_.size());
  if (kind_ == GroupKind::free) {
    for (auto it = syllables_.rbegin(); it != syllables_.rend(); ++it)
      out.syllables_.push_back({it->generator, -it->exponent});
  } else {
    for (const auto& syl : syllables_) out.syllables_.push_back({syl.generator, -syl.exponent});
  }
  return out;
}

GroupElement GroupElement::power(std::int64_t e) const {
  GroupElement base = e < 0 ? inverse() : *this;
  GroupElement out(kind_, rank_);
  for (std::int64_t i = 0; i < (e < 0 ? -e : e); ++i) out = out * base;
  return out;
}

GroupElement mul(const GroupElement& s, const GroupElement& t) { return s * t; }
GroupElement inv(const GroupElement& s) { return s.inverse(); }

int compare_enumeration(const GroupElement& a, const GroupElement& b) {
  if (a.kind() != b.kind() || a.rank() != b.rank()) {
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    return a.rank() < b.rank() ? -1 : 1;
  }
  const std::int64_t la = a.length();
  const std::int64_t lb = b.length();
  if (la != lb) return la < lb ? -1 : 1;
  const auto& sa = a.syllables();
  const auto& sb = b.syllables();
  std::size_t i = 0, j = 0;
  std::int64_t used_a = 0, used_b = 0;
  while (i < sa.size() && j < sb.size()) {
    const auto key_a = 2 * sa[i].generator + (sa[i].exponent < 0 ? 1 : 0);
    const auto key_b = 2 * sb[j].generator + (sb[j].exponent < 0 ? 1 : 0);
    if (key_a != key_b) return key_a < key_b ? -1 : 1;
    const std::int64_t run_a = (sa[i].exponent < 0 ? -sa[i].exponent : sa[i].exponent) - used_a;
    const std::int64_t run_b = (sb[j].exponent < 0 ? -sb[j].exponent : sb[j].exponent) - used_b;
    const std::int64_t step = std::min(run_a, run_b);
    used_a += step;
    used_b += step;
    if (step == run_a) {
      ++i;
      used_a = 0;
    }
    if (step == run_b) {
      ++j;
      used_b = 0;
    }
  }
  return 0;  // equal lengths and equal letters
}

bool EnumerationLess::operator()(const GroupElement& a, const GroupElement& b) const {
  return compare_enumeration(a, b) < 0;
}

// ---------------------------------------------------------------------------

GroupSpec::GroupSpec(GroupKind kind, std::vector<std::string> names)
    : kind_(kind), names_(std::move(names)) {
  if (names_.empty()) throw std::domain_error("a group needs at least one generator");
  std::set<std::string> seen;
  for (const auto& name : names_) {
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_'))
      throw std::domain_error("invalid generator name '" + name + "'");
    for (char ch : name) {
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'))
        throw std::domain_error("invalid generator name '" + name + "'");
    }
    if (name == "e") throw std::domain_error("'e' is reserved for the identity");
    if (!seen.insert(name).second) throw std::domain_error("duplicate generator name '" + name + "'");
  }
}

GroupPtr GroupSpec::free_group(std::vector<std::string> generators) {
  return GroupPtr(new GroupSpec(GroupKind::free, std::move(generators)));
}

GroupPtr GroupSpec::free_abelian(std::vector<std::string> generators) {
  return GroupPtr(new GroupSpec(GroupKind::free_abelian, std::move(generators)));
}

GroupPtr GroupSpec::free_abelian(int rank) {
  if (rank < 1) throw std::domain_error("rank must be at least 1");
  std::vector<std::string> names;
  if (rank == 1) {
    names.push_back("t");
  } else {
    for (int i = 1; i <= rank; ++i) names.push_back("x" + std::to_string(i));
  }
  return free_abelian(std::move(names));
}

GroupElement GroupSpec::generator(int index) const {
  if (index < 0 || index >= rank()) throw std::domain_error("generator index out of range");
  return GroupElement(kind_, rank(), {{index, 1}});
}

GroupElement GroupSpec::generator(std::string_view name) const {
  int idx = generator_index(name);
  if (idx < 0) throw std::domain_error("unknown generator '" + std::string(name) + "'");
  return generator(idx);
}

int GroupSpec::generator_index(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return static_cast<int>(i);
  }
  return -1;
}

void GroupSpec::require(const GroupElement& s) const {
  if (!contains(s)) throw std::domain_error("group element does not belong to this group");
}

std::string GroupSpec::format(const GroupElement& s) const {
  require(s);
  if (s.is_identity()) return "e";
  std::string out;
  for (const auto& syl : s.syllables()) {
    if (!out.empty()) out += "*";
    out += names_[static_cast<std::size_t>(syl.generator)];
    if (syl.exponent != 1) out += "^" + std::to_string(syl.exponent);
  }
  return out;
}

GroupElement GroupSpec::parse(std::string_view text) const {
  std::vector<Syllable> word;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == '*')) ++i;
  };
  skip();
  if (i == text.size()) throw std::invalid_argument("empty group word");
  while (i < text.size()) {
    std::size_t start = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
    if (start == i) throw std::invalid_argument("unexpected character '" + std::string(1, text[i]) + "' in word");
    std::string_view name = text.substr(start, i - start);
    std::int64_t exponent = 1;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    if (i < text.size() && text[i] == '^') {
      ++i;
      while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      bool neg = false;
      if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
      }
      std::size_t ds = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (ds == i) throw std::invalid_argument("missing exponent after '^'");
      exponent = std::stoll(std::string(text.substr(ds, i - ds)));
      if (neg) exponent = -exponent;
    }
    if (name != "e") {  // e^k is the identity
      int idx = generator_index(name);
      if (idx < 0) throw std::invalid_argument("unknown generator '" + std::string(name) + "'");
      word.push_back({idx, exponent});
    }
    skip();
  }
  return GroupElement(kind_, rank(), std::move(word));
}

std::vector<GroupElement> GroupSpec::ball(int radius) const {
  if (radius < 0) throw std::domain_error("negative radius");
  std::vector<GroupElement> out;
  if (kind_ == GroupKind::free) {
    std::vector<GroupElement> frontier{identity()};
    out.push_back(identity());
    for (int len = 1; len <= radius; ++len) {
      std::vector<GroupElement> next;
      for (const auto& w : frontier) {
        for (int g = 0; g < rank(); ++g) {
          for (std::int64_t sign : {1, -1}) {
            const auto& syl = w.syllables();
            if (!syl.empty() && syl.back().generator == g && (syl.back().exponent > 0) != (sign > 0))
              continue;
            next.push_back(w * GroupElement(kind_, rank(), {{g, sign}}));
          }
        }
      }
      out.insert(out.end(), next.begin(), next.end());
      frontier = std::move(next);
    }
  } else {
    std::vector<std::int64_t> coords(static_cast<std::size_t>(rank()), 0);
    // Enumerate the L1 ball coordinate by coordinate.
    auto rec = [&](auto&& self, std::size_t axis, std::int64_t budget) -> void {
      if (axis == coords.size()) {
        out.push_back(GroupElement::from_coordinates(coords));
        return;
      }
      for (std::int64_t v = -budget; v <= budget; ++v) {
        coords[axis] = v;
        self(self, axis + 1, budget - (v < 0 ? -v : v));
      }
      coords[axis] = 0;
    };
    rec(rec, 0, radius);
    // from_coordinates tags rank by vector length, which equals rank().
  }
  std::sort(out.begin(), out.end(), EnumerationLess{});
  return out;
}

// ---------------------------------------------------------------------------

OrderOracle OrderOracle::homomorphism(std::vector<std::int64_t> weights) {
  if (weights.empty()) throw std::domain_error("homomorphism oracle needs one weight per generator");
  OrderOracle o;
  o.variant_ = Variant::homomorphism;
  o.weights_ = std::move(weights);
  return o;
}

OrderOracle OrderOracle::semigroup(std::vector<GroupElement> generators) {
  if (generators.empty()) throw std::domain_error("semigroup oracle needs at least one generator");
  for (const auto& g : generators) {
    if (!g.same_group(generators.front())) throw std::domain_error("semigroup generators from different groups");
    if (g.is_identity()) throw std::domain_error("the identity cannot be a positive generator");
  }
  OrderOracle o;
  o.variant_ = Variant::semigroup;
  o.generators_ = std::move(generators);
  return o;
}

std::int64_t OrderOracle::degree(const GroupElement& s) const {
  if (variant_ != Variant::homomorphism) throw std::domain_error("degree requires a homomorphism oracle");
  if (static_cast<std::size_t>(s.rank()) != weights_.size())
    throw std::domain_error("element rank does not match oracle weights");
  std::int64_t d = 0;
  for (const auto& syl : s.syllables()) d += weights_[static_cast<std::size_t>(syl.generator)] * syl.exponent;
  return d;
}

bool OrderOracle::is_positive(const GroupElement& s) const {
  if (variant_ == Variant::homomorphism) return degree(s) > 0;
  if (!s.same_group(generators_.front())) throw std::domain_error("element and oracle over different groups");
  return semigroup_member(s);
}

bool OrderOracle::less(const GroupElement& s, const GroupElement& t) const {
  return is_positive(t * s.inverse());
}

namespace {

using Letters = std::vector<int>;  // 2*generator + (negative ? 1 : 0)

Letters expand(const GroupElement& s) {
  Letters out;
  for (const auto& syl : s.syllables()) {
    const int key = 2 * syl.generator + (syl.exponent < 0 ? 1 : 0);
    const std::int64_t run = syl.exponent < 0 ? -syl.exponent : syl.exponent;
    for (std::int64_t i = 0; i < run; ++i) out.push_back(key);
  }
  return out;
}

bool all_positive(const GroupElement& s) {
  return std::all_of(s.syllables().begin(), s.syllables().end(),
                     [](const Syllable& syl) { return syl.exponent > 0; });
}

}  // namespace

bool OrderOracle::semigroup_member(const GroupElement& s) const {
  const GroupKind kind = generators_.front().kind();
  if (!std::all_of(generators_.begin(), generators_.end(), all_positive)) {
    throw OracleIncomplete(
        "semigroup membership is only decided for generators that are positive words");
  }
  if (s.is_identity() || !all_positive(s)) return false;

  if (kind == GroupKind::free) {
    // Products of positive words never cancel, so s is in P iff its letter
    // sequence factors into generator words.
    const Letters target = expand(s);
    std::vector<Letters> gens;
    for (const auto& g : generators_) gens.push_back(expand(g));
    std::vector<char> reach(target.size() + 1, 0);
    reach[0] = 1;
    for (std::size_t pos = 0; pos < target.size(); ++pos) {
      if (!reach[pos]) continue;
      for (const auto& g : gens) {
        if (pos + g.size() <= target.size() &&
            std::equal(g.begin(), g.end(), target.begin() + static_cast<std::ptrdiff_t>(pos)))
          reach[pos + g.size()] = 1;
      }
    }
    return reach[target.size()] != 0;
  }

  // Free abelian, generators in the nonnegative orthant: reachability over
  // the box [0, s].
  const auto target = s.coordinates();
  std::size_t states = 1;
  for (auto v : target) {
    const auto side = static_cast<std::size_t>(v) + 1;
    if (states > abelian_search_limit / side) {
      throw OracleIncomplete("semigroup membership search exceeds the lattice-point limit");
    }
    states *= side;
  }
  std::vector<std::vector<std::int64_t>> gens;
  for (const auto& g : generators_) gens.push_back(g.coordinates());
  const std::size_t d = target.size();
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t i = 1; i < d; ++i) stride[i] = stride[i - 1] * static_cast<std::size_t>(target[i - 1] + 1);
  std::vector<char> reach(states, 0);
  reach[0] = 1;
  std::vector<std::int64_t> point(d, 0);
  for (std::size_t idx = 0; idx < states; ++idx) {
    // decode idx into point
    std::size_t rem = idx;
    for (std::size_t i = d; i-- > 0;) {
      point[i] = static_cast<std::int64_t>(rem / stride[i]);
      rem %= stride[i];
    }
    if (idx == 0) continue;
    for (const auto& g : gens) {
      bool fits = true;
      std::size_t prev = 0;
      for (std::size_t i = 0; i < d; ++i) {
        if (g[i] > point[i]) {
          fits = false;
          break;
        }
        prev += static_cast<std::size_t>(point[i] - g[i]) * stride[i];
      }
      if (fits && reach[prev]) {
        reach[idx] = 1;
        break;
      }
    }
  }
  return reach[states - 1] != 0;
}

}  // namespace lopact
