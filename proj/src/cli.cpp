#include "lopact/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lopact/dynamics.hpp"
#include "lopact/inverse.hpp"
#include "lopact/lopsided.hpp"
#include "lopact/verify.hpp"

namespace lopact::cli {

Json rational_json(const Rational& q) {
  Json out;
  out["fraction"] = to_fraction_string(q);
  out["decimal"] = to_decimal_string(q);
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Doubles go through a fixed format so reports stay byte-stable.
std::string real(double v) {
  if (v == 0.0) v = 0.0;  // drop negative zero
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::optional<std::string> model_option(const Model& m, const std::string& key) {
  auto it = m.options.find(key);
  if (it == m.options.end()) return std::nullopt;
  return it->second;
}

std::string pick(const std::optional<std::string>& flag, const Model& m, const std::string& key,
                 const std::string& fallback) {
  if (flag) return *flag;
  if (auto v = model_option(m, key)) return *v;
  return fallback;
}

template <typename T>
T pick_number(const std::optional<T>& flag, const Model& m, const std::string& key, T fallback) {
  if (flag) return *flag;
  if (auto v = model_option(m, key)) {
    std::istringstream in(*v);
    T out{};
    if (!(in >> out) || !in.eof()) throw std::invalid_argument("option " + key + " must be an integer");
    return out;
  }
  return fallback;
}

std::string coordinate_text(const GroupSpec& g, const Coordinate& c) {
  return g.format(c.s) + ":" + std::to_string(c.k + 1);
}

std::string vector_text(const RingVector& v) {
  std::string out = "(";
  for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ", " : "") + v[k].to_string();
  return out + ")";
}

std::string symbol_text(const Symbol& s) {
  std::string out = "(";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k]);
  return out + ")";
}

Json matrix_json(const RingMatrix& f) {
  Json out = Json::object();
  for (std::size_t k = 0; k < f.size(); ++k)
    for (std::size_t m = 0; m < f.size(); ++m) out[std::to_string(k + 1) + "." + std::to_string(m + 1)] = f.at(k, m).to_string();
  return out;
}

Json group_json(const GroupSpec& g) {
  Json out;
  out["kind"] = g.kind() == GroupKind::free ? "free" : "free_abelian";
  out["generators"] = g.generator_names();
  return out;
}

std::optional<OrderOracle> oracle_of(const Model& m) {
  if (!m.order) return std::nullopt;
  return m.order->oracle();
}

Side choose_side(const LopsidedDecomposition& d, const std::optional<std::string>& requested) {
  if (requested) {
    if (*requested == "row") return Side::row;
    if (*requested == "column") return Side::column;
    throw std::invalid_argument("side must be 'row' or 'column'");
  }
  if (d.column_lopsided) return Side::column;
  if (d.row_lopsided) return Side::row;
  throw std::domain_error("not lopsided on either side");
}

Json alphabet_json(const SymbolAlphabet& a) {
  Json out;
  out["sizes"] = a.sizes;
  out["cardinality"] = a.cardinality().get_str();
  return out;
}

// ---------------------------------------------------------------------------

void classify(const Model& model, Json& report) {
  const LopsidedDecomposition d = decompose(model.matrix);
  const GroupSpec& g = *model.group;
  Json dec;
  Json diag = Json::array();
  for (std::size_t k = 0; k < d.size(); ++k) {
    Json t;
    t["k"] = k + 1;
    t["coefficient"] = d.diagonal[k].coefficient;
    t["position"] = g.format(d.diagonal[k].position);
    diag.push_back(t);
  }
  dec["diagonal"] = diag;
  dec["row_lopsided"] = d.row_lopsided;
  dec["column_lopsided"] = d.column_lopsided;
  PositivityResult pos;
  if (d.row_lopsided || d.column_lopsided) {
    if (auto oracle = oracle_of(model)) {
      pos = classify_positive(d, *oracle);
    } else {
      pos.row = d.row_lopsided ? Positivity::undetermined : Positivity::not_applicable;
      pos.column = d.column_lopsided ? Positivity::undetermined : Positivity::not_applicable;
    }
  }
  dec["positive_row"] = to_string(pos.row);
  dec["positive_column"] = to_string(pos.column);
  Json slack_row = Json::array(), slack_col = Json::array();
  for (std::size_t k = 0; k < d.size(); ++k) {
    slack_row.push_back(rational_json(d.row_slack(k)));
    slack_col.push_back(rational_json(d.column_slack(k)));
  }
  dec["row_slack"] = slack_row;
  dec["column_slack"] = slack_col;
  if (d.row_lopsided || d.column_lopsided) {
    dec["alphabet"] = alphabet_json(symbol_alphabet(d));
  } else {
    dec["alphabet"] = "none";
  }
  Json ratio;
  ratio["row"] = d.row_lopsided ? rational_json(contraction_ratio(d, Side::row)) : Json("not-applicable");
  ratio["column"] = d.column_lopsided ? rational_json(contraction_ratio(d, Side::column)) : Json("not-applicable");
  dec["contraction_ratio"] = ratio;
  dec["normalized"] = d.is_normalized();
  Json alts = Json::array();
  for (std::size_t k = 0; k < d.size(); ++k)
    for (const auto& a : d.alternatives[k]) alts.push_back(std::to_string(k + 1) + ": " + std::to_string(a.coefficient) + "*" + g.format(a.position));
  dec["alternatives"] = alts;
  report["decomposition"] = dec;
  Json norms;
  norms["row"] = rational_json(row_norm(model.matrix));
  norms["column"] = rational_json(column_norm(model.matrix));
  report["norms"] = norms;
}

TruncatedInverse invert_for(const LopsidedDecomposition& d, const Flags& flags, const Model& model, Json& inputs,
                            const std::string& default_eps) {
  InverseOptions options;
  options.target_eps = parse_rational(pick(flags.eps, model, "eps", default_eps));
  options.side = choose_side(d, flags.side ? flags.side : model_option(model, "side"));
  const std::string prune = pick(flags.prune, model, "prune", "default");
  if (prune != "default") options.prune_threshold = parse_rational(prune);
  options.max_support = pick_number<std::uint64_t>(flags.max_support, model, "max_support", options.max_support);
  inputs["eps"] = to_fraction_string(options.target_eps);
  inputs["side"] = to_string(options.side);
  inputs["prune"] = prune == "default" ? prune : to_fraction_string(*options.prune_threshold);
  inputs["max_support"] = options.max_support;
  return truncated_inverse(d, options);
}

Json inverse_json(const TruncatedInverse& inv, const Rational& eps) {
  Json out;
  out["side"] = to_string(inv.side);
  out["depth"] = inv.depth;
  out["ratio"] = rational_json(inv.ratio);
  out["tail_bound"] = rational_json(inv.tail_bound);
  out["a_priori_bound"] = rational_json(inv.a_priori_bound);
  out["a_posteriori_bound"] = inv.a_posteriori_bound ? rational_json(*inv.a_posteriori_bound) : Json("not-computed");
  out["residual"] = inv.residual_norm ? rational_json(*inv.residual_norm) : Json("not-computed");
  out["pruned_mass"] = rational_json(inv.pruned_mass);
  out["support"] = inv.approx.support_size();
  out["target_met"] = inv.tail_bound <= eps;
  return out;
}

void invert(const Model& model, const Flags& flags, Json& report) {
  const LopsidedDecomposition d = decompose(model.matrix);
  try {
    const TruncatedInverse inv = invert_for(d, flags, model, report["inputs"], "1/1000");
    Json out = inverse_json(inv, parse_rational(report["inputs"]["eps"].get<std::string>()));
    if (inv.approx.support_size() <= 64) out["approx"] = matrix_json(inv.approx);
    report["inverse"] = out;
  } catch (const BudgetExceeded& e) {
    Json out;
    out["depth_reached"] = e.depth_reached;
    out["planned_depth"] = e.planned_depth;
    out["support"] = e.support;
    out["ledger"] = rational_json(e.ledger);
    report["budget"] = out;
    throw;
  }
}

std::vector<Coordinate> parse_coords(const std::string& text, const GroupSpec& g, std::size_t n) {
  std::vector<Coordinate> out;
  std::stringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    const auto b = piece.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    piece = piece.substr(b, piece.find_last_not_of(" \t") - b + 1);
    const auto colon = piece.rfind(':');
    if (colon != std::string::npos) {
      const std::string index = piece.substr(colon + 1);
      const std::size_t k = std::stoul(index);
      if (k < 1 || k > n) throw std::invalid_argument("coordinate index out of range: " + piece);
      out.push_back({g.parse(piece.substr(0, colon)), k - 1});
    } else {
      const GroupElement s = g.parse(piece);
      for (std::size_t k = 0; k < n; ++k) out.push_back({s, k});
    }
  }
  if (out.empty()) throw std::invalid_argument("no coordinates requested");
  return out;
}

void map_command(const Model& model, const Flags& flags, Json& report) {
  const GroupSpec& g = *model.group;
  const LopsidedDecomposition d = decompose(model.matrix);
  Json& inputs = report["inputs"];
  const TruncatedInverse inv = invert_for(d, flags, model, inputs, "1/1000000");
  const TruncatedInverse adjoint = adjoint_inverse(inv);
  const int radius = pick_number<int>(flags.window, model, "window", 6);
  const auto seed = pick_number<std::uint64_t>(flags.seed, model, "seed", 0);
  const std::string coords_text = pick(flags.coords, model, "coords", "e");
  inputs["window"] = radius;
  inputs["seed"] = seed;
  inputs["coords"] = coords_text;
  const auto coords = parse_coords(coords_text, g, model.matrix.size());
  const Window window = Window::ball(model.group, radius);
  const Configuration y = sample_configuration(SymbolMeasure::uniform(inv.alphabet), window, seed);
  const TorusPoint x = homoclinic_image(y, adjoint, coords);
  Json ys = Json::object();
  for (std::size_t i = 0; i < window.size(); ++i) ys[g.format(window.elements()[i])] = symbol_text(y.values()[i]);
  report["inverse"] = inverse_json(inv, parse_rational(inputs["eps"].get<std::string>()));
  report["y"] = ys;
  Json xs = Json::array();
  for (const auto& c : coords) {
    const TorusValue* v = x.find(c);
    Json e;
    e["coordinate"] = coordinate_text(g, c);
    e["value"] = rational_json(v->value);
    e["err"] = rational_json(v->err);
    xs.push_back(e);
  }
  report["image"] = xs;
}

struct TestVector {
  std::string role;
  RingVector h;
};

std::vector<TestVector> haar_test_vectors(const RingMatrix& f) {
  const GroupPtr& group = f.group();
  const std::size_t n = f.size();
  const GroupElement x = group->generator(0);
  auto row = [&](std::size_t k) {
    RingVector v;
    for (std::size_t m = 0; m < n; ++m) v.push_back(f.at(k, m));
    return v;
  };
  auto delta = [&](const GroupElement& s, std::size_t k, long c) {
    RingVector v(n, RingElement(group));
    v[k].add_term(s, Rational(c));
    return v;
  };
  std::vector<TestVector> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back({"row", row(k)});
  RingVector shifted;
  const RingElement e_plus_x = RingElement::one(group) + RingElement::monomial(group, x, Rational(1));
  for (const auto& entry : row(0)) shifted.push_back(e_plus_x * entry);
  out.push_back({"(e+x)*row", shifted});
  for (std::size_t k = 0; k < n; ++k) out.push_back({"delta", delta(group->identity(), k, 1)});
  out.push_back({"delta", delta(x, 0, 1)});
  out.push_back({"2*delta", delta(group->identity(), 0, 2)});
  out.push_back({"delta+delta", vec_add(delta(group->identity(), 0, 1), delta(x, 0, 1))});
  out.push_back({"row+delta", vec_add(row(0), delta(group->identity(), 0, 1))});
  return out;
}

void verify_haar(const Model& model, const Flags& flags, Json& report) {
  const GroupSpec& g = *model.group;
  LopsidedDecomposition d = normalized(decompose(model.matrix));
  if (auto oracle = oracle_of(model)) d = with_certificates(d, *oracle);
  Json& inputs = report["inputs"];
  const TruncatedInverse inv = invert_for(d, flags, model, inputs, "1/1000");
  const auto trials = pick_number<std::uint64_t>(flags.trials, model, "trials", 10000);
  const auto seed = pick_number<std::uint64_t>(flags.seed, model, "seed", 0);
  const int radius = pick_number<int>(flags.window, model, "window", 12);
  inputs["trials"] = trials;
  inputs["seed"] = seed;
  inputs["window"] = radius;
  const Window window = Window::ball(model.group, radius);
  const SymbolMeasure nu = SymbolMeasure::uniform(inv.alphabet);

  report["normalized_matrix"] = matrix_json(d.f);
  report["column_positive"] = d.column_certificate.has_value();
  report["inverse"] = inverse_json(inv, parse_rational(inputs["eps"].get<std::string>()));
  const double clt = 4.0 / std::sqrt(static_cast<double>(trials));
  Json rows = Json::array();
  bool all_pass = true;
  for (const auto& tv : haar_test_vectors(d.f)) {
    Json row;
    row["role"] = tv.role;
    row["h"] = vector_text(tv.h);
    const MembershipVerdict verdict = decide_membership(tv.h, d, inv);
    const bool member = std::holds_alternative<Member>(verdict);
    if (member) {
      row["verdict"] = "member";
      row["q"] = vector_text(std::get<Member>(verdict).q);
    } else {
      const auto& w = std::get<NonMember>(verdict).witness;
      row["verdict"] = "non-member";
      Json wj;
      wj["coordinate"] = coordinate_text(g, {w.s, w.k});
      wj["j"] = w.j;
      wj["value"] = rational_json(w.value);
      wj["err"] = rational_json(w.err);
      wj["exact"] = w.exact;
      row["witness"] = wj;
    }
    const FourierValue hf = haar_fourier(tv.h, d, inv, nu);
    Json hj;
    hj["re"] = real(hf.value.real());
    hj["im"] = real(hf.value.imag());
    hj["err"] = rational_json(hf.err);
    hj["exact"] = hf.exact;
    row["haar"] = hj;
    try {
      const EmpiricalFourier ef = empirical_fourier(tv.h, inv, nu, trials, window, seed);
      const double pair_err = to_double(Rational(44, 7) * ef.pairing_err);
      const double tolerance = member ? pair_err : clt + pair_err + to_double(hf.err);
      const double distance = std::abs(ef.value - hf.value);
      Json ej;
      ej["re"] = real(ef.value.real());
      ej["im"] = real(ef.value.imag());
      ej["abs"] = real(std::abs(ef.value));
      ej["distance_to_haar"] = real(distance);
      ej["tolerance"] = real(tolerance);
      ej["pass"] = distance <= tolerance;
      all_pass = all_pass && distance <= tolerance;
      row["empirical"] = ej;
    } catch (const std::domain_error& e) {
      row["empirical"] = std::string("skipped: ") + e.what();
    }
    rows.push_back(row);
  }
  report["table"] = rows;
  report["all_pass"] = all_pass;
}

void verify_collisions(const Model& model, const Flags& flags, Json& report) {
  const GroupSpec& g = *model.group;
  const LopsidedDecomposition d = normalized(decompose(model.matrix));
  Json& inputs = report["inputs"];
  const int radius = pick_number<int>(flags.window, model, "window", 8);
  const SearchMode mode = flags.boundary_open || pick(std::nullopt, model, "boundary_open", "false") == "true"
                              ? SearchMode::boundary_open
                              : SearchMode::full;
  const auto budget = pick_number<std::uint64_t>(flags.node_budget, model, "node_budget", 50'000'000);
  std::int64_t height = 0;
  std::string height_source = "flag";
  if (flags.height || model_option(model, "height")) {
    height = pick_number<std::int64_t>(flags.height, model, "height", 0);
  } else {
    const TruncatedInverse inv = invert_for(d, flags, model, inputs, "1/1000");
    height = defect_height(d, adjoint_inverse(inv)).get_si();
    height_source = "defect_height";
  }
  inputs["window"] = radius;
  inputs["height"] = height;
  inputs["height_source"] = height_source;
  inputs["mode"] = to_string(mode);
  inputs["node_budget"] = budget;

  const Window window = Window::ball(model.group, radius);
  const CollisionSearchResult result = collision_search(d, window, height, mode, budget);
  report["window_size"] = window.size();
  report["nodes"] = result.nodes;
  report["incomplete"] = result.incomplete;
  report["count"] = result.collisions.size();

  constexpr std::size_t listed = 100;
  Json list = Json::array();
  std::size_t checked = 0;
  const bool classifiable = d.row_lopsided;
  for (std::size_t i = 0; i < result.collisions.size(); ++i) {
    const Collision& col = result.collisions[i];
    std::vector<CollisionLabel> labels;
    if (classifiable) {
      labels = classify_collision(col, d);  // throws InvariantFailure
      ++checked;
    }
    if (i >= listed) continue;
    Json cj;
    Json cs = Json::array();
    for (const auto& [at, v] : col.c) cs.push_back(coordinate_text(g, at) + "=" + std::to_string(v));
    cj["c"] = cs;
    Json ys = Json::array();
    for (const auto& iv : col.constraints) {
      if (iv.lo == 0 && iv.hi == d.diagonal[iv.at.k].coefficient - 1) continue;
      ys.push_back(coordinate_text(g, iv.at) + " in [" + std::to_string(iv.lo) + "," + std::to_string(iv.hi) + "]");
    }
    cj["y_constraints"] = ys;
    Json ls = Json::array();
    for (const auto& l : labels) {
      Json lj;
      lj["at"] = coordinate_text(g, l.at);
      lj["sign"] = l.positive ? "+" : "-";
      lj["j"] = l.j;
      lj["A"] = l.a_set.size();
      lj["B"] = l.b_set.size();
      lj["L_B"] = l.l_b;
      lj["i"] = "[" + std::to_string(l.i_lo) + "," + std::to_string(l.i_hi) + "]";
      lj["shift"] = l.direct;
      ls.push_back(lj);
    }
    cj["labels"] = ls;
    list.push_back(cj);
  }
  report["collisions"] = list;
  report["listed"] = std::min(listed, result.collisions.size());
  report["range_checks"] = classifiable ? Json(checked) : Json("needs a row lopsided matrix");
}

void flatten(const Json& j, const std::string& prefix, std::string& out) {
  const bool is_rational = j.is_object() && j.size() == 2 && j.contains("fraction") && j.contains("decimal");
  if (is_rational) {
    out += prefix + " = " + j["fraction"].get<std::string>() + " (" + j["decimal"].get<std::string>() + ")\n";
  } else if (j.is_object()) {
    if (j.empty()) out += prefix + " = {}\n";
    for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_array()) {
    if (j.empty()) out += prefix + " = []\n";
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else if (j.is_string()) {
    out += prefix + " = " + j.get<std::string>() + "\n";
  } else {
    out += prefix + " = " + j.dump() + "\n";
  }
}

}  // namespace

std::string render_text(const Json& report) {
  std::string out;
  flatten(report, "", out);
  return out;
}

std::string render_json(const Json& report) { return report.dump(2) + "\n"; }

Outcome run(const std::string& command, const Model& model, const Flags& flags) {
  Outcome outcome;
  Json& report = outcome.report;
  report["command"] = command;
  report["digest"] = "";
  report["inputs"] = Json::object();
  report["group"] = group_json(*model.group);
  report["matrix"] = matrix_json(model.matrix);
  try {
    if (command == "classify") {
      classify(model, report);
    } else if (command == "invert") {
      invert(model, flags, report);
    } else if (command == "map") {
      map_command(model, flags, report);
    } else if (command == "verify-haar") {
      verify_haar(model, flags, report);
    } else if (command == "verify-collisions") {
      verify_collisions(model, flags, report);
    } else {
      throw std::invalid_argument("unknown command '" + command + "'");
    }
    report["status"] = "ok";
  } catch (const InvariantFailure& e) {
    report["status"] = "invariant-failure";
    report["error"] = e.what();
    outcome.exit_code = 2;
  } catch (const std::exception& e) {
    report["status"] = "error";
    report["error"] = e.what();
    outcome.exit_code = 1;
  }
  report["digest"] = hex64(fnv1a64(emit_model(model) + "\n" + command + "\n" + report["inputs"].dump()));
  return outcome;
}

int main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lopsided group-ring matrices: classification, certified inversion, homoclinic map, verification"};
  app.require_subcommand(1);
  std::string out_path;
  bool json = false;
  app.add_option("--out", out_path, "write the report to PATH")->option_text("PATH");
  app.add_flag("--json", json, "emit JSON instead of key = value text");
  app.fallthrough();

  std::string model_path;
  Flags flags;
  std::string eps, prune, side, coords;
  int window = 0;
  std::uint64_t trials = 0, seed = 0, node_budget = 0, max_support = 0;
  std::int64_t height = 0;

  struct Registered {
    CLI::App* app;
    std::vector<std::pair<CLI::Option*, std::function<void()>>> bindings;
  };
  std::vector<Registered> subs;
  subs.reserve(8);
  auto add = [&](const std::string& name, const std::string& help) -> Registered& {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("model", model_path, "model file")->required();
    subs.push_back({sub, {}});
    return subs.back();
  };
  auto bind_inverse = [&](Registered& r) {
    r.bindings.push_back({r.app->add_option("--eps", eps, "target accuracy (p/q or decimal)"), [&] { flags.eps = eps; }});
    r.bindings.push_back({r.app->add_option("--prune", prune, "prune threshold, 0 disables"), [&] { flags.prune = prune; }});
    r.bindings.push_back({r.app->add_option("--side", side, "row or column"), [&] { flags.side = side; }});
    r.bindings.push_back({r.app->add_option("--max-support", max_support, "support cap"), [&] { flags.max_support = max_support; }});
  };
  add("classify", "decompose f and report lopsidedness, positivity and the symbol alphabet");
  bind_inverse(add("invert", "certified truncated inverse"));
  {
    Registered& r = add("map", "evaluate the homoclinic map on a sampled configuration");
    bind_inverse(r);
    r.bindings.push_back({r.app->add_option("--coords", coords, "comma-separated s:k list"), [&] { flags.coords = coords; }});
    r.bindings.push_back({r.app->add_option("--window", window, "window radius"), [&] { flags.window = window; }});
    r.bindings.push_back({r.app->add_option("--seed", seed, "sampling seed"), [&] { flags.seed = seed; }});
  }
  {
    Registered& r = add("verify-haar", "membership, Fourier coefficients and Monte Carlo estimates");
    bind_inverse(r);
    r.bindings.push_back({r.app->add_option("--trials", trials, "Monte Carlo trials"), [&] { flags.trials = trials; }});
    r.bindings.push_back({r.app->add_option("--seed", seed, "sampling seed"), [&] { flags.seed = seed; }});
    r.bindings.push_back({r.app->add_option("--window", window, "window radius"), [&] { flags.window = window; }});
  }
  {
    Registered& r = add("verify-collisions", "search the defect set on a window");
    bind_inverse(r);
    r.bindings.push_back({r.app->add_option("--window", window, "window radius"), [&] { flags.window = window; }});
    r.bindings.push_back({r.app->add_option("--height", height, "height bound N"), [&] { flags.height = height; }});
    r.bindings.push_back({r.app->add_option("--node-budget", node_budget, "search node budget"), [&] { flags.node_budget = node_budget; }});
    r.app->add_flag("--boundary-open", flags.boundary_open, "check only window-determined coordinates");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  std::string command;
  for (auto& r : subs) {
    if (!r.app->parsed()) continue;
    command = r.app->get_name();
    for (auto& [opt, apply] : r.bindings)
      if (opt->count() > 0) apply();
  }

  std::ifstream in(model_path, std::ios::binary);
  if (!in) {
    err << "error: cannot read model file " << model_path << "\n";
    return 1;
  }
  std::ostringstream text;
  text << in.rdbuf();
  std::optional<Model> model;
  try {
    model = parse_model(text.str());
  } catch (const ModelError& e) {
    err << model_path << ": " << e.what() << "\n";
    return 1;
  }

  const Outcome outcome = run(command, *model, flags);
  const std::string rendered = json ? render_json(outcome.report) : render_text(outcome.report);
  if (!out_path.empty()) {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << out_path << "\n";
      return 1;
    }
    file << rendered;
  } else {
    out << rendered;
  }
  if (outcome.exit_code != 0) err << "error: " << outcome.report.value("error", std::string()) << "\n";
  return outcome.exit_code;
}

}  // namespace lopact::cli
