#include "lopact/model.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace lopact {

ModelError::ModelError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line(line),
      column(column),
      detail(message) {}

OrderOracle OrderSpec::oracle() const {
  return kind == Kind::homomorphism ? OrderOracle::homomorphism(weights) : OrderOracle::semigroup(generators);
}

namespace {

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

// Cursor over one expression; columns are 1-based.
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text, const GroupPtr& group) : text_(text), group_(group) {}

  RingElement parse() {
    RingElement out(group_);
    skip_space();
    if (at_end()) fail("empty expression");
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = peek() == '-';
      ++pos_;
    }
    while (true) {
      auto [element, coefficient] = term();
      out.add_term(element, negative ? Rational(-coefficient) : Rational(coefficient));
      skip_space();
      if (at_end()) break;
      if (peek() != '+' && peek() != '-') fail(std::string("unexpected '") + peek() + "'");
      negative = peek() == '-';
      ++pos_;
    }
    return out;
  }

  GroupElement parse_word_only() {
    skip_space();
    GroupElement w = word();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return w;
  }

 private:
  std::pair<GroupElement, Integer> term() {
    skip_space();
    if (at_end()) fail("missing term");
    if (is_digit(peek())) {
      Integer coefficient = integer();
      skip_space();
      if (!at_end() && (peek() == '/' || peek() == '.'))
        fail("non-integer coefficient");
      if (!at_end() && peek() == '*') {
        ++pos_;
        return {word(), coefficient};
      }
      return {group_->identity(), coefficient};
    }
    return {word(), Integer(1)};
  }

  GroupElement word() {
    GroupElement out = atom();
    while (true) {
      skip_space();
      if (at_end() || peek() != '*') return out;
      ++pos_;
      out = out * atom();
    }
  }

  GroupElement atom() {
    skip_space();
    if (at_end()) fail("missing generator");
    if (is_digit(peek())) fail("coefficient must come first in a term");
    if (!is_name_start(peek())) fail(std::string("unexpected '") + peek() + "'");
    const std::size_t start = pos_;
    while (!at_end() && is_name_char(peek())) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    GroupElement base = group_->identity();
    if (name != "e") {
      const int idx = group_->generator_index(name);
      if (idx < 0) fail_at(start, "unknown generator '" + name + "'");
      base = group_->generator(idx);
    }
    skip_space();
    if (at_end() || peek() != '^') return base;
    ++pos_;
    skip_space();
    const bool paren = !at_end() && peek() == '(';
    if (paren) ++pos_;
    skip_space();
    bool negative = false;
    if (!at_end() && (peek() == '-' || peek() == '+')) {
      negative = peek() == '-';
      ++pos_;
    }
    skip_space();
    if (at_end() || !is_digit(peek())) fail("exponent must be an integer");
    Integer e = integer();
    if (paren) {
      skip_space();
      if (at_end() || peek() != ')') fail("missing ')'");
      ++pos_;
    }
    if (!e.fits_slong_p()) fail("exponent out of range");
    return base.power(negative ? -e.get_si() : e.get_si());
  }

  Integer integer() {
    const std::size_t start = pos_;
    while (!at_end() && is_digit(peek())) ++pos_;
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }
  [[noreturn]] void fail_at(std::size_t pos, const std::string& message) const {
    throw ModelError(1, pos + 1, message);
  }

  std::string_view text_;
  const GroupPtr& group_;
  std::size_t pos_ = 0;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct Field {
  std::string value;
  std::size_t line;
  std::size_t column;  // of the first value character
};

std::vector<Field> split_list(const Field& f) {
  std::vector<Field> out;
  std::size_t start = 0;
  const std::string& v = f.value;
  while (start <= v.size()) {
    std::size_t comma = v.find(',', start);
    if (comma == std::string::npos) comma = v.size();
    std::string piece = v.substr(start, comma - start);
    std::size_t lead = 0;
    while (lead < piece.size() && std::isspace(static_cast<unsigned char>(piece[lead]))) ++lead;
    out.push_back({trim(piece), f.line, f.column + start + lead});
    start = comma + 1;
  }
  return out;
}

std::int64_t parse_int(const Field& f, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(f.value, &used);
    if (used != f.value.size()) throw std::invalid_argument(what);
    return v;
  } catch (const std::exception&) {
    throw ModelError(f.line, f.column, what + " must be an integer");
  }
}

RingElement expression_at(const Field& f, const GroupPtr& group) {
  try {
    return parse_expression(f.value, group);
  } catch (const ModelError& e) {
    throw ModelError(f.line, f.column + e.column - 1, e.detail);
  }
}

GroupElement word_at(const Field& f, const GroupPtr& group) {
  try {
    return ExpressionParser(f.value, group).parse_word_only();
  } catch (const ModelError& e) {
    throw ModelError(f.line, f.column + e.column - 1, e.detail);
  }
}

}  // namespace

RingElement parse_expression(std::string_view text, const GroupPtr& group) {
  return ExpressionParser(text, group).parse();
}

Model parse_model(std::string_view text) {
  std::map<std::string, std::map<std::string, Field>> sections;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  static const std::map<std::string, std::vector<std::string>> known = {
      {"group", {"kind", "generators", "rank"}},
      {"order", {"kind", "weights", "generators"}},
      {"matrix", {"n"}},
      {"options", {}},
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t indent = raw.find_first_not_of(" \t");
    if (line[0] == '[') {
      if (line.back() != ']') throw ModelError(line_no, indent + 1, "unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (!known.count(section)) throw ModelError(line_no, indent + 2, "unknown section '" + section + "'");
      if (sections.count(section)) throw ModelError(line_no, indent + 1, "duplicate section '" + section + "'");
      sections[section];
      continue;
    }
    if (section.empty()) throw ModelError(line_no, indent + 1, "key outside of a section");
    const std::size_t eq = raw.find('=');
    if (eq == std::string::npos) throw ModelError(line_no, indent + 1, "expected 'key = value'");
    const std::string key = trim(std::string_view(raw).substr(0, eq));
    if (key.empty()) throw ModelError(line_no, indent + 1, "missing key");
    std::size_t value_col = eq + 1;
    while (value_col < raw.size() && std::isspace(static_cast<unsigned char>(raw[value_col]))) ++value_col;
    const std::string value = trim(std::string_view(raw).substr(eq + 1));
    const auto& allowed = known.at(section);
    const bool entry_key = section == "matrix" && key.rfind("entry.", 0) == 0;
    if (section != "options" && !entry_key && std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ModelError(line_no, indent + 1, "unknown key '" + key + "' in [" + section + "]");
    if (sections[section].count(key)) throw ModelError(line_no, indent + 1, "duplicate key '" + key + "'");
    sections[section][key] = Field{value, line_no, value_col + 1};
  }

  auto field = [&](const std::string& sec, const std::string& key) -> const Field* {
    auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  };
  const std::size_t end_line = line_no + 1;

  // [group]
  if (!sections.count("group")) throw ModelError(end_line, 1, "missing [group] section");
  const Field* kind = field("group", "kind");
  if (!kind) throw ModelError(end_line, 1, "missing group kind");
  const Field* gens = field("group", "generators");
  const Field* rank = field("group", "rank");
  GroupPtr group;
  try {
    std::vector<std::string> names;
    if (gens)
      for (const auto& piece : split_list(*gens)) names.push_back(piece.value);
    if (kind->value == "free") {
      if (!gens) throw ModelError(kind->line, kind->column, "free groups need generators");
      group = GroupSpec::free_group(names);
    } else if (kind->value == "free_abelian") {
      if (gens) {
        group = GroupSpec::free_abelian(names);
      } else if (rank) {
        const auto r = parse_int(*rank, "rank");
        if (r < 1) throw ModelError(rank->line, rank->column, "rank must be positive");
        group = GroupSpec::free_abelian(static_cast<int>(r));
      } else {
        throw ModelError(kind->line, kind->column, "free abelian groups need generators or rank");
      }
    } else {
      throw ModelError(kind->line, kind->column, "unknown group kind '" + kind->value + "'");
    }
  } catch (const std::invalid_argument& e) {
    const Field* at = gens ? gens : kind;
    throw ModelError(at->line, at->column, e.what());
  }

  // [order]
  std::optional<OrderSpec> order;
  if (sections.count("order")) {
    const Field* okind = field("order", "kind");
    if (!okind) throw ModelError(end_line, 1, "missing order kind");
    OrderSpec spec;
    if (okind->value == "homomorphism") {
      spec.kind = OrderSpec::Kind::homomorphism;
      spec.weights.assign(static_cast<std::size_t>(group->rank()), 0);
      const Field* w = field("order", "weights");
      if (!w) throw ModelError(okind->line, okind->column, "homomorphism orders need weights");
      for (const auto& piece : split_list(*w)) {
        const std::size_t colon = piece.value.find(':');
        if (colon == std::string::npos) throw ModelError(piece.line, piece.column, "expected 'generator:weight'");
        const std::string name = trim(std::string_view(piece.value).substr(0, colon));
        const int idx = group->generator_index(name);
        if (idx < 0) throw ModelError(piece.line, piece.column, "unknown generator '" + name + "'");
        Field number{trim(std::string_view(piece.value).substr(colon + 1)), piece.line, piece.column + colon + 1};
        spec.weights[static_cast<std::size_t>(idx)] = parse_int(number, "weight");
      }
    } else if (okind->value == "semigroup") {
      spec.kind = OrderSpec::Kind::semigroup;
      const Field* g = field("order", "generators");
      if (!g) throw ModelError(okind->line, okind->column, "semigroup orders need generators");
      for (const auto& piece : split_list(*g)) spec.generators.push_back(word_at(piece, group));
      try {
        (void)spec.oracle();
      } catch (const std::exception& e) {
        throw ModelError(g->line, g->column, e.what());
      }
    } else {
      throw ModelError(okind->line, okind->column, "unknown order kind '" + okind->value + "'");
    }
    order = std::move(spec);
  }

  // [matrix]
  const Field* nf = field("matrix", "n");
  if (!nf) throw ModelError(end_line, 1, "missing matrix size n");
  const auto n = parse_int(*nf, "n");
  if (n < 1) throw ModelError(nf->line, nf->column, "n must be positive");
  RingMatrix matrix(group, static_cast<std::size_t>(n));
  for (const auto& [key, f] : sections["matrix"]) {
    if (key == "n") continue;
    const std::string rest = key.substr(6);
    const std::size_t dot = rest.find('.');
    std::size_t k = 0, m = 0;
    try {
      if (dot == std::string::npos) throw std::invalid_argument(key);
      std::size_t used = 0;
      k = std::stoul(rest.substr(0, dot), &used);
      if (used != dot) throw std::invalid_argument(key);
      m = std::stoul(rest.substr(dot + 1), &used);
      if (used != rest.size() - dot - 1) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ModelError(f.line, 1, "malformed entry key '" + key + "'");
    }
    if (k < 1 || m < 1 || k > static_cast<std::size_t>(n) || m > static_cast<std::size_t>(n))
      throw ModelError(f.line, 1, "entry index out of range in '" + key + "'");
    matrix.at(k - 1, m - 1) = expression_at(f, group);
  }

  Model model{group, std::move(order), std::move(matrix), {}};
  for (const auto& [key, f] : sections["options"]) model.options[key] = f.value;
  return model;
}

std::string emit_model(const Model& model) {
  std::ostringstream out;
  const GroupSpec& g = *model.group;
  out << "[group]\n";
  out << "kind = " << (g.kind() == GroupKind::free ? "free" : "free_abelian") << "\n";
  out << "generators = ";
  for (int i = 0; i < g.rank(); ++i) out << (i ? ", " : "") << g.generator_names()[static_cast<std::size_t>(i)];
  out << "\n";
  if (model.order) {
    out << "\n[order]\n";
    if (model.order->kind == OrderSpec::Kind::homomorphism) {
      out << "kind = homomorphism\nweights = ";
      for (int i = 0; i < g.rank(); ++i)
        out << (i ? ", " : "") << g.generator_names()[static_cast<std::size_t>(i)] << ":"
            << model.order->weights[static_cast<std::size_t>(i)];
      out << "\n";
    } else {
      out << "kind = semigroup\ngenerators = ";
      for (std::size_t i = 0; i < model.order->generators.size(); ++i)
        out << (i ? ", " : "") << g.format(model.order->generators[i]);
      out << "\n";
    }
  }
  out << "\n[matrix]\nn = " << model.matrix.size() << "\n";
  for (std::size_t k = 0; k < model.matrix.size(); ++k) {
    for (std::size_t m = 0; m < model.matrix.size(); ++m) {
      const RingElement& e = model.matrix.at(k, m);
      if (!e.is_zero()) out << "entry." << k + 1 << "." << m + 1 << " = " << e.to_string() << "\n";
    }
  }
  if (!model.options.empty()) {
    out << "\n[options]\n";
    for (const auto& [key, value] : model.options) out << key << " = " << value << "\n";
  }
  return out.str();
}

}  // namespace lopact
