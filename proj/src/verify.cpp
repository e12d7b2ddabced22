#include "lopact/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <map>
#include <set>

#include "lopact/parallel.hpp"

namespace lopact {

namespace {

std::int64_t abs_coefficient(const DiagonalTerm& t) { return t.coefficient < 0 ? -t.coefficient : t.coefficient; }

std::int64_t max_diagonal(const LopsidedDecomposition& d) {
  std::int64_t best = 0;
  for (const auto& t : d.diagonal) best = std::max(best, abs_coefficient(t));
  return best;
}

void require_vector(const RingVector& h, std::size_t n) {
  if (h.size() != n) throw std::domain_error("vector length does not match matrix size");
  for (const auto& e : h) {
    if (!e.is_integral()) throw std::domain_error("h must have integer coefficients");
  }
}

// Coordinates of a row vector in coordinate order.
std::vector<std::pair<Coordinate, Rational>> coordinates_of(const RingVector& v) {
  std::vector<std::pair<Coordinate, Rational>> out;
  for (std::size_t k = 0; k < v.size(); ++k)
    for (const auto& [s, c] : v[k].terms()) out.push_back({{s, k}, c});
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return CoordinateLess{}(a.first, b.first); });
  return out;
}

std::int64_t to_small(const Integer& z) {
  if (!z.fits_slong_p()) throw std::overflow_error("integer does not fit a machine word");
  return z.get_si();
}

// Exact witness from an order-minimal coordinate of the residue r = h - q f:
// there (r f^-1)_{s,k} = r_{s,k} / M_k because every other contribution
// sits at t * p with t in supp(r) and p positive.
std::optional<FractionalWitness> exact_witness(const RingVector& residue, const RingVector& q,
                                               const LopsidedDecomposition& d) {
  const std::optional<OrderOracle>& cert = d.column_certificate ? d.column_certificate : d.row_certificate;
  if (!cert || !d.is_normalized()) return std::nullopt;
  const auto support = coordinates_of(residue);
  try {
    for (const auto& [at, r] : support) {
      bool minimal = true;
      for (const auto& other : support) {
        if (other.first.s == at.s) continue;
        if (cert->is_positive(other.first.s.inverse() * at.s)) {
          minimal = false;
          break;
        }
      }
      if (!minimal) continue;
      const std::int64_t mk = d.diagonal[at.k].coefficient;
      Integer j = r.get_num() % mk;
      if (j < 0) j += mk;
      if (j == 0) continue;
      FractionalWitness w{at.s, at.k, to_small(j), q[at.k].coefficient(at.s) + r / mk, Rational(0), true};
      return w;
    }
  } catch (const OracleIncomplete&) {
    return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Integer defect_height(const LopsidedDecomposition& d, const TruncatedInverse& inv_adjoint) {
  const Rational bound = Rational(max_diagonal(d)) * (column_norm(inv_adjoint.approx) + inv_adjoint.column_error());
  return ceil_of(bound);
}

MembershipVerdict decide_membership(const RingVector& h, const LopsidedDecomposition& d, const TruncatedInverse& inv) {
  require_vector(h, d.size());
  if (inv.adjoint) throw std::domain_error("decide_membership needs an inverse of f, not of f*");
  const Rational budget = coordinate_error(h, inv);
  if (budget >= Rational(1, 2))
    throw InsufficientPrecision("insufficient precision: coordinate error " + to_decimal_string(budget) +
                                " is not below 1/2");

  const RingVector p = vec_mat_mul(h, inv.approx);
  RingVector q(d.size(), RingElement(d.f.group()));
  for (std::size_t k = 0; k < p.size(); ++k)
    for (const auto& [s, c] : p[k].terms()) q[k].add_term(s, Rational(round_of(c)));

  const RingVector residue = vec_sub(h, vec_mat_mul(q, d.f));
  const bool member = std::all_of(residue.begin(), residue.end(), [](const RingElement& e) { return e.is_zero(); });
  if (member) return Member{q};

  if (auto w = exact_witness(residue, q, d)) return NonMember{*w};

  if (budget * 2 * max_diagonal(d) >= 1)
    throw InsufficientPrecision("insufficient precision: coordinate error " + to_decimal_string(budget) +
                                " is too large to localize a witness");
  for (const auto& [at, value] : coordinates_of(p)) {
    const std::int64_t mk = abs_coefficient(d.diagonal[at.k]);
    const Rational x = frac(value);
    for (std::int64_t j = 1; j < mk; ++j) {
      if (circle_distance(x, make_rational(static_cast<long>(j), static_cast<long>(mk))) <= budget) return NonMember{{at.s, at.k, j, value, budget, false}};
    }
  }
  throw WitnessNotLocalized("witness not localized: no coordinate of h f^-1 lies within " +
                            to_decimal_string(budget) + " of a nonzero multiple of 1/M_k");
}

FourierValue haar_fourier(const RingVector& h, const LopsidedDecomposition& d, const TruncatedInverse& inv,
                          const SymbolMeasure& m) {
  if (!(m.alphabet() == inv.alphabet)) throw std::domain_error("measure alphabet does not match the inverse");
  const MembershipVerdict verdict = decide_membership(h, d, inv);
  if (std::holds_alternative<Member>(verdict)) return {{1.0, 0.0}, Rational(0), true};
  const auto& witness = std::get<NonMember>(verdict).witness;
  if (witness.exact && m.is_uniform()) return {{0.0, 0.0}, Rational(0), true};

  const RingVector p = vec_mat_mul(h, inv.approx);
  std::map<GroupElement, std::vector<Rational>, EnumerationLess> by_position;
  for (std::size_t k = 0; k < p.size(); ++k) {
    for (const auto& [s, c] : p[k].terms()) {
      auto [it, inserted] = by_position.try_emplace(s, std::vector<Rational>(p.size(), Rational(0)));
      it->second[k] = c;
    }
  }
  std::complex<double> value(1.0, 0.0);
  for (const auto& [s, v] : by_position) value *= m.fourier(v);
  // Each factor is 2 pi (M_max - 1)-Lipschitz in l1; 44/7 > 2 pi.
  const Rational err = Rational(44, 7) * (max_diagonal(d) - 1) * l1_error(h, inv);
  return {value, err, false};
}

EmpiricalFourier empirical_fourier(const RingVector& h, const TruncatedInverse& inv, const SymbolMeasure& m,
                                   std::uint64_t trials, const Window& window, std::uint64_t seed) {
  if (inv.adjoint) throw std::domain_error("empirical_fourier needs an inverse of f, not of f*");
  if (h.size() != inv.approx.size()) throw std::domain_error("vector length does not match inverse size");
  if (!(m.alphabet() == inv.alphabet)) throw std::domain_error("measure alphabet does not match the inverse");
  if (trials == 0) throw std::domain_error("at least one trial is required");

  std::vector<Coordinate> coords;
  for (std::size_t k = 0; k < h.size(); ++k) {
    for (const auto& kv : h[k].terms()) {
      const GroupElement& t = kv.first;
      coords.push_back({t, k});
      for (std::size_t col = 0; col < h.size(); ++col) {
        for (const auto& entry : inv.approx.at(k, col).terms()) {
          if (!window.contains(t * entry.first))
            throw std::domain_error("window too small: it must contain supp(h) * supp(approx)");
        }
      }
    }
  }
  if (coords.empty()) return {{1.0, 0.0}, Rational(0), trials};

  const TruncatedInverse adjoint = adjoint_inverse(inv);
  std::vector<std::complex<double>> samples(trials);
  std::vector<Rational> errs(trials);
  parallel_for(trials, [&](std::size_t trial) {
    const Configuration y = sample_configuration(m, window, seed, trial);
    const TorusPoint x = homoclinic_image(y, adjoint, coords);
    const PairingValue v = pairing(x, h);
    const double angle = -2.0 * std::numbers::pi * to_double(v.value);
    samples[trial] = {std::cos(angle), std::sin(angle)};
    errs[trial] = v.err;
  });
  std::complex<double> sum(0.0, 0.0);
  Rational worst(0);
  for (std::size_t i = 0; i < trials; ++i) {
    sum += samples[i];
    if (errs[i] > worst) worst = errs[i];
  }
  return {sum / static_cast<double>(trials), worst, trials};
}

// ---------------------------------------------------------------------------

const char* to_string(SearchMode mode) { return mode == SearchMode::full ? "full" : "boundary-open"; }

std::int64_t Collision::height() const {
  std::int64_t best = 0;
  for (const auto& entry : c) best = std::max(best, entry.second < 0 ? -entry.second : entry.second);
  return best;
}

std::int64_t Collision::c_at(const Coordinate& at) const {
  for (const auto& [where, value] : c) {
    if (where == at) return value;
  }
  return 0;
}

const SymbolInterval* Collision::constraint_at(const Coordinate& at) const {
  for (const auto& iv : constraints) {
    if (iv.at == at) return &iv;
  }
  return nullptr;
}

Rational defect_shift(const std::vector<std::pair<Coordinate, std::int64_t>>& c, const RingMatrix& f,
                      const Coordinate& at) {
  std::map<Coordinate, std::int64_t, CoordinateLess> lookup(c.begin(), c.end());
  Rational total(0);
  for (std::size_t m = 0; m < f.size(); ++m) {
    for (const auto& [a, coef] : f.at(at.k, m).terms()) {
      auto it = lookup.find({at.s * a, m});
      if (it != lookup.end()) total += coef * it->second;
    }
  }
  return total;
}

namespace {

struct Term {
  std::size_t var;
  std::int64_t coef;
};

struct Constraint {
  Coordinate at;
  std::int64_t limit;  // M_k - 1
  std::vector<Term> terms;
};

struct SearchPlan {
  std::vector<Coordinate> variables;  // active variables in search order
  std::vector<Constraint> constraints;
  std::vector<std::vector<std::pair<std::size_t, std::int64_t>>> touching;  // var -> (constraint, coef)
};

SearchPlan plan_search(const LopsidedDecomposition& d, const Window& window, SearchMode mode) {
  const RingMatrix& f = d.f;
  const std::size_t n = f.size();
  // Every coordinate (t, k) with t a in the window for some a in supp f^(km).
  std::set<Coordinate, CoordinateLess> touched;
  for (const auto& s : window.elements())
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t m = 0; m < n; ++m)
        for (const auto& kv : f.at(k, m).terms()) touched.insert({s * kv.first.inverse(), k});

  std::map<Coordinate, std::size_t, CoordinateLess> var_index;
  std::vector<Coordinate> all_vars;
  for (const auto& s : window.elements()) {
    for (std::size_t m = 0; m < n; ++m) {
      var_index.emplace(Coordinate{s, m}, all_vars.size());
      all_vars.push_back({s, m});
    }
  }

  std::vector<Constraint> constraints;
  for (const auto& at : touched) {
    Constraint con{at, abs_coefficient(d.diagonal[at.k]) - 1, {}};
    bool determined = true;
    for (std::size_t m = 0; m < n; ++m) {
      for (const auto& [a, coef] : f.at(at.k, m).terms()) {
        auto it = var_index.find({at.s * a, m});
        if (it == var_index.end()) {
          determined = false;
          continue;
        }
        con.terms.push_back({it->second, to_small(coef.get_num())});
      }
    }
    if (mode == SearchMode::boundary_open && !determined) continue;
    if (!con.terms.empty()) constraints.push_back(std::move(con));
  }

  // Keep variables that reach a checked coordinate, renumbered in order.
  std::vector<std::size_t> renumber(all_vars.size(), static_cast<std::size_t>(-1));
  for (const auto& con : constraints)
    for (const auto& t : con.terms) renumber[t.var] = 0;
  SearchPlan plan;
  for (std::size_t v = 0; v < all_vars.size(); ++v) {
    if (renumber[v] == 0) {
      renumber[v] = plan.variables.size();
      plan.variables.push_back(all_vars[v]);
    }
  }
  for (auto& con : constraints)
    for (auto& t : con.terms) t.var = renumber[t.var];
  plan.touching.resize(plan.variables.size());
  for (std::size_t ci = 0; ci < constraints.size(); ++ci)
    for (const auto& t : constraints[ci].terms) plan.touching[t.var].push_back({ci, t.coef});
  plan.constraints = std::move(constraints);
  return plan;
}

class Searcher {
 public:
  Searcher(const SearchPlan& plan, std::int64_t height, std::uint64_t budget)
      : plan_(plan), height_(height), budget_(budget), values_(plan.variables.size(), 0),
        partial_(plan.constraints.size(), 0), remaining_(plan.constraints.size(), 0) {
    for (std::size_t ci = 0; ci < plan.constraints.size(); ++ci)
      for (const auto& t : plan.constraints[ci].terms) remaining_[ci] += (t.coef < 0 ? -t.coef : t.coef) * height;
  }

  void run_branch(std::int64_t first_value) {
    if (plan_.variables.empty()) return;
    if (assign(0, first_value)) descend(1);
    unassign(0, first_value);
  }

  std::vector<std::vector<std::int64_t>> solutions;
  std::vector<std::vector<std::int64_t>> shifts;
  std::uint64_t nodes = 0;
  bool incomplete = false;

 private:
  // Applies the value and reports whether every touched constraint can
  // still be met by the unassigned variables.
  bool assign(std::size_t var, std::int64_t value) {
    ++nodes;
    values_[var] = value;
    if (value != 0) ++nonzero_;
    bool feasible = true;
    for (const auto& [ci, coef] : plan_.touching[var]) {
      partial_[ci] += coef * value;
      remaining_[ci] -= (coef < 0 ? -coef : coef) * height_;
      const std::int64_t p = partial_[ci] < 0 ? -partial_[ci] : partial_[ci];
      if (p - remaining_[ci] > plan_.constraints[ci].limit) feasible = false;
    }
    return feasible;
  }

  void unassign(std::size_t var, std::int64_t value) {
    if (value != 0) --nonzero_;
    for (const auto& [ci, coef] : plan_.touching[var]) {
      partial_[ci] -= coef * value;
      remaining_[ci] += (coef < 0 ? -coef : coef) * height_;
    }
    values_[var] = 0;
  }

  void descend(std::size_t var) {
    if (incomplete) return;
    if (var == values_.size()) {
      if (nonzero_ > 0) {
        solutions.push_back(values_);
        shifts.push_back(partial_);
      }
      return;
    }
    for (std::int64_t v = -height_; v <= height_; ++v) {
      if (nodes >= budget_) {
        incomplete = true;
        return;
      }
      if (assign(var, v)) descend(var + 1);
      unassign(var, v);
      if (incomplete) return;
    }
  }

  const SearchPlan& plan_;
  std::int64_t height_;
  std::uint64_t budget_;
  std::vector<std::int64_t> values_;
  std::vector<std::int64_t> partial_;
  std::vector<std::int64_t> remaining_;
  std::size_t nonzero_ = 0;
};

}  // namespace

CollisionSearchResult collision_search(const LopsidedDecomposition& d, const Window& window, std::int64_t height,
                                       SearchMode mode, std::uint64_t node_budget) {
  if (height < 1) throw std::domain_error("height N must be at least 1");
  if (!d.f.is_integral()) throw std::domain_error("collision search needs an integral matrix");
  const SymbolAlphabet alphabet = symbol_alphabet(d);
  const SearchPlan plan = plan_search(d, window, mode);

  // One branch per value of the first variable; branches are concatenated
  // in value order, so solutions come out in lexicographic order of c.
  const std::size_t branches = plan.variables.empty() ? 0 : static_cast<std::size_t>(2 * height + 1);
  std::vector<Searcher> searchers;
  const std::uint64_t share = std::max<std::uint64_t>(1, node_budget / std::max<std::size_t>(1, branches));
  for (std::size_t b = 0; b < branches; ++b) searchers.emplace_back(plan, height, share);
  parallel_for(branches, [&](std::size_t b) { searchers[b].run_branch(static_cast<std::int64_t>(b) - height); });

  CollisionSearchResult result;
  std::vector<GroupElement> y_support = window.elements();
  for (const auto& con : plan.constraints) y_support.push_back(con.at.s);
  std::sort(y_support.begin(), y_support.end(), EnumerationLess{});
  y_support.erase(std::unique(y_support.begin(), y_support.end()), y_support.end());
  const Window y_window(window.group(), y_support);

  for (const auto& s : searchers) {
    result.nodes += s.nodes;
    result.incomplete = result.incomplete || s.incomplete;
    for (std::size_t idx = 0; idx < s.solutions.size(); ++idx) {
      const auto& values = s.solutions[idx];
      const auto& shift_values = s.shifts[idx];
      std::vector<std::pair<Coordinate, std::int64_t>> c;
      for (std::size_t v = 0; v < values.size(); ++v) {
        if (values[v] != 0) c.push_back({plan.variables[v], values[v]});
      }
      std::sort(c.begin(), c.end(), [](const auto& a, const auto& b) { return CoordinateLess{}(a.first, b.first); });
      std::vector<SymbolInterval> constraints;
      std::vector<Symbol> y_values(y_window.size(), Symbol(alphabet.dimension(), 0));
      for (std::size_t ci = 0; ci < plan.constraints.size(); ++ci) {
        const Constraint& con = plan.constraints[ci];
        const std::int64_t shift = shift_values[ci];
        const std::int64_t lo = std::max<std::int64_t>(0, -shift);
        const std::int64_t hi = std::min<std::int64_t>(con.limit, con.limit - shift);
        constraints.push_back({con.at, shift, lo, hi});
        y_values[*y_window.index_of(con.at.s)][con.at.k] = lo;
      }
      result.collisions.push_back(
          Collision{std::move(c), std::move(constraints), Configuration(y_window, alphabet, std::move(y_values))});
    }
  }
  return result;
}

std::vector<CollisionLabel> classify_collision(const Collision& col, const LopsidedDecomposition& d) {
  if (!d.is_normalized()) throw std::domain_error("classify_collision needs a normalized decomposition");
  if (!d.row_lopsided) throw std::domain_error("classify_collision needs a row lopsided decomposition");
  const std::int64_t j = col.height();
  if (j == 0) throw InvariantFailure("collision with c = 0");

  std::vector<CollisionLabel> labels;
  for (const auto& iv : col.constraints) {
    if (iv.lo > iv.hi) throw InvariantFailure("collision with an empty symbol range");
    const std::int64_t c_sk = col.c_at(iv.at);
    if (c_sk != j && c_sk != -j) continue;
    const std::size_t k = iv.at.k;
    const std::int64_t mk = d.diagonal[k].coefficient;
    const std::int64_t sign = c_sk > 0 ? 1 : -1;

    CollisionLabel label{iv.at, sign > 0, j, {}, {}, 0, iv.lo, iv.hi, 0, 0};
    Rational b_sum(0), rest_sum(0);
    for (std::size_t m = 0; m < d.size(); ++m) {
      for (const auto& [a, coef] : d.g.at(k, m).terms()) {
        label.a_set.push_back({a, m});
        const std::int64_t c_am = col.c_at({iv.at.s * a, m});
        const std::int64_t g_sign = coef > 0 ? 1 : -1;
        if (c_am == sign * g_sign * j) {
          label.b_set.push_back({a, m});
          label.l_b += to_small(Rational(abs(coef)).get_num());
          b_sum += coef * c_am;
        } else {
          rest_sum += coef * c_am;
        }
      }
    }
    const Rational direct = defect_shift(col.c, d.f, iv.at);
    const Rational decomposed = Rational(c_sk * mk) - b_sum - rest_sum;
    label.direct = to_small(direct.get_num());
    label.decomposed = to_small(decomposed.get_num());
    if (direct != decomposed) throw InvariantFailure("range split of (c f*)_{s,k} disagrees with the convolution");
    if (direct != iv.shift) throw InvariantFailure("recorded (c f*)_{s,k} disagrees with the convolution");
    if (label.positive && label.i_hi > label.l_b - 1)
      throw InvariantFailure("symbol range bound violated: i = " + std::to_string(label.i_hi) +
                             " exceeds L_B - 1 = " + std::to_string(label.l_b - 1));
    if (!label.positive && label.i_lo < mk - label.l_b)
      throw InvariantFailure("symbol range bound violated: i = " + std::to_string(label.i_lo) +
                             " is below M_k - L_B = " + std::to_string(mk - label.l_b));
    labels.push_back(std::move(label));
  }
  return labels;
}

}  // namespace lopact
