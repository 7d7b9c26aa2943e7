#pragma once

#include <set>
#include <string>
#include <vector>

#include "liftcert/json_io.hpp"
#include "liftcert/lifting.hpp"

namespace liftcert {

// ------------------------------------------------------ quantitative theories

// Assertion form of a quantitative (in)equation: forall (B,d_B). s = t or
// s =_eps t. (Judgment in proofs.hpp is the proof-system form.)
struct QuantEquation {
  FuzzyRelation context;
  ConvexTerm lhs, rhs;
  bool is_eps;
  Rat eps;  // meaningful when is_eps

  static QuantEquation eq(FuzzyRelation ctx, ConvexTerm l, ConvexTerm r) {
    return {std::move(ctx), std::move(l), std::move(r), false, Rat(0)};
  }
  static QuantEquation eq_eps(FuzzyRelation ctx, ConvexTerm l, ConvexTerm r, const Rat& eps) {
    if (eps < 0 || eps > 1) throw domain_error("equation bound outside [0,1]");
    return {std::move(ctx), std::move(l), std::move(r), true, eps};
  }
};

// The oplus_p-interpolative axiom scheme instance: context over {x,y,w,z}
// with d(x,w) = eps, d(y,z) = delta, every other entry 1, concluding
// x +_p y =_{eps oplus_p delta} w +_p z. In the Approx regime the bound is
// the certified upper endpoint of the enclosure of eps oplus_p delta.
inline QuantEquation ica_axiom(const LiftOperator& op, const Rat& p, const Rat& eps,
                               const Rat& delta, const Rat& precision = default_precision()) {
  require_interior(p, "axiom probability");
  if (eps < 0 || eps > 1 || delta < 0 || delta > 1)
    throw domain_error("axiom distances must lie in [0,1]");
  std::vector<std::vector<Rat>> m(4, std::vector<Rat>(4, Rat(1)));
  m[0][2] = eps;
  m[1][3] = delta;
  FuzzyRelation ctx({"x", "y", "w", "z"}, m);
  ConvexTerm lhs = ConvexTerm::combine(p, ConvexTerm::leaf("x"), ConvexTerm::leaf("y"));
  ConvexTerm rhs = ConvexTerm::combine(p, ConvexTerm::leaf("w"), ConvexTerm::leaf("z"));
  LiftValue bound = oplus(op, p, eps, delta, precision);
  return QuantEquation::eq_eps(std::move(ctx), std::move(lhs), std::move(rhs),
                               rat_min(Rat(1), bound.hi));
}

// --------------------------------------------------- finite quantitative algebras

// A finite quantitative algebra presented by tables: carrier with distances,
// plus for each probability p a total binary operation table. Tables for
// probabilities not present simply leave those terms uninterpretable.
struct Model {
  FuzzyRelation space;
  std::map<Rat, std::vector<std::vector<std::size_t>>> ops;  // p -> table[i][j]

  std::size_t apply(const Rat& p, std::size_t i, std::size_t j) const {
    auto it = ops.find(p);
    if (it == ops.end()) throw domain_error("model has no table for p = " + rat_to_string(p));
    if (it->second.size() != space.size()) throw domain_error("op table row count mismatch");
    const auto& row = it->second.at(i);
    if (row.size() != space.size()) throw domain_error("op table column count mismatch");
    std::size_t out = row.at(j);
    if (out >= space.size()) throw domain_error("op table entry outside carrier");
    return out;
  }

  std::size_t eval(const ConvexTerm& t, const FuzzyRelation& ctx, const CarrierMap& iota) const {
    if (t.is_leaf()) return iota.at(ctx.index_of(t.var()));
    return apply(t.prob(), eval(t.left(), ctx, iota), eval(t.right(), ctx, iota));
  }
};

// Satisfaction by exhaustive enumeration of 1-Lipschitz interpretations; an
// equation with no 1-Lipschitz interpretation is trivially satisfied.
inline bool satisfies(const Model& model, const QuantEquation& eq) {
  for (const CarrierMap& iota : lipschitz_maps(eq.context, model.space)) {
    std::size_t l = model.eval(eq.lhs, eq.context, iota);
    std::size_t r = model.eval(eq.rhs, eq.context, iota);
    if (eq.is_eps) {
      if (model.space.at(l, r) > eq.eps) return false;
    } else {
      if (l != r) return false;
    }
  }
  return true;
}

// The lifted algebra (D(A), K^op(d)) finitized to a candidate set of
// distributions: interpretations range over candidates, terms evaluate by
// convex combination, distances by exact lifting. Comparisons against the
// rational context entries and bound stay exact via the pre-root form.
inline bool lifted_satisfies(const LiftOperator& op, const FuzzyRelation& d,
                             const QuantEquation& eq, const std::vector<Distribution>& candidates,
                             const Rat& precision = default_precision()) {
  if (candidates.empty()) throw domain_error("lifted_satisfies: no candidate distributions");
  std::size_t k = candidates.size(), nvars = eq.context.size();
  double count = 1;
  for (std::size_t i = 0; i < nvars; ++i) {
    count *= double(k);
    if (count > 1e6) throw domain_error("lifted_satisfies: enumeration guard exceeded");
  }

  // pairwise lifted distances, computed once
  std::vector<std::vector<PreRoot>> dist(k, std::vector<PreRoot>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      dist[i][j] = lift(op, d, candidates[i], candidates[j], precision).value_preroot;

  auto eval = [&](const auto& self, const ConvexTerm& t,
                  const std::vector<std::size_t>& iota) -> Distribution {
    if (t.is_leaf()) return candidates[iota[eq.context.index_of(t.var())]];
    return convex_combine(self(self, t.left(), iota), self(self, t.right(), iota), t.prob());
  };

  std::vector<std::size_t> iota(nvars, 0);
  while (true) {
    bool lipschitz = true;
    for (std::size_t i = 0; i < nvars && lipschitz; ++i)
      for (std::size_t j = 0; j < nvars && lipschitz; ++j)
        if (!preroot_leq(dist[iota[i]][iota[j]], PreRoot::of(eq.context.at(i, j))))
          lipschitz = false;
    if (lipschitz) {
      Distribution ls = eval(eval, eq.lhs, iota);
      Distribution rs = eval(eval, eq.rhs, iota);
      if (eq.is_eps) {
        PreRoot v = lift(op, d, ls, rs, precision).value_preroot;
        if (!preroot_leq(v, PreRoot::of(eq.eps))) return false;
      } else {
        if (ls != rs) return false;
      }
    }
    std::size_t i = 0;
    while (i < nvars) {
      if (++iota[i] < k) break;
      iota[i] = 0;
      ++i;
    }
    if (i == nvars) break;
  }
  return true;
}

// ------------------------------------------------- the two-zeros countermodel

// Relational structure (C, {R_eps}) over the grid-finitized "unit interval
// with two zeros": carrier {0, 0'} plus a point for each grid value.
struct RelationalModel {
  std::vector<std::string> carrier;          // "0", "0'", then grid values
  std::vector<Rat> levels;                   // 0 followed by the sorted grid
  std::map<Rat, std::set<std::pair<std::size_t, std::size_t>>> rel;

  bool related(const Rat& eps, std::size_t i, std::size_t j) const {
    auto it = rel.find(eps);
    if (it == rel.end()) throw domain_error("no relation at level " + rat_to_string(eps));
    return it->second.count({i, j}) > 0;
  }
  std::size_t index_of(const std::string& name) const {
    for (std::size_t i = 0; i < carrier.size(); ++i)
      if (carrier[i] == name) return i;
    throw domain_error("name not in relational carrier: " + name);
  }
};

// R_0 = Id; for grid eps > 0, R_eps is the symmetric reflexive relation with
//   (0, 0') in R_eps,
//   (z, delta) in R_eps for z in {0, 0'} and grid delta <= eps,
//   (delta, lambda) in R_eps for |delta - lambda| <= eps.
inline RelationalModel two_zeros_model(std::vector<Rat> grid) {
  if (grid.empty()) throw domain_error("two_zeros_model: empty grid");
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  for (auto& g : grid)
    if (g <= 0 || g > 1) throw domain_error("two_zeros_model: grid value outside (0,1]");

  RelationalModel m;
  m.carrier = {"0", "0'"};
  for (auto& g : grid) m.carrier.push_back(rat_to_string(g));
  m.levels.push_back(Rat(0));
  for (auto& g : grid) m.levels.push_back(g);

  std::size_t n = m.carrier.size();
  auto& r0 = m.rel[Rat(0)];
  for (std::size_t i = 0; i < n; ++i) r0.insert({i, i});

  for (auto& eps : grid) {
    auto& r = m.rel[eps];
    for (std::size_t i = 0; i < n; ++i) r.insert({i, i});
    auto put = [&r](std::size_t i, std::size_t j) {
      r.insert({i, j});
      r.insert({j, i});
    };
    put(0, 1);
    for (std::size_t gi = 0; gi < grid.size(); ++gi) {
      if (grid[gi] <= eps) {
        put(0, 2 + gi);
        put(1, 2 + gi);
      }
      for (std::size_t gj = 0; gj < grid.size(); ++gj) {
        Rat diff = grid[gi] > grid[gj] ? grid[gi] - grid[gj] : grid[gj] - grid[gi];
        if (diff <= eps) put(2 + gi, 2 + gj);
      }
    }
  }
  return m;
}

// Report of the finitary-rule checks on a relational model: the model should
// validate weakening, the assumption instances, and the pseudometric equation
// families (self-distance, symmetry, triangle) on the grid, while exhibiting
// the witness pair that breaks the infinitary limit rule.
struct TheoryReport {
  bool weakening_ok = true;
  bool self_distance_ok = true;
  bool symmetry_ok = true;
  bool triangle_ok = true;
  bool noncompact_witness = false;  // (0,0') at every positive level, not at 0
  std::size_t triangle_instances = 0;
  std::vector<std::string> violations;

  bool finitary_ok() const {
    return weakening_ok && self_distance_ok && symmetry_ok && triangle_ok;
  }
};

inline TheoryReport model_respects_finitary_rules(const RelationalModel& m) {
  TheoryReport rep;
  auto note = [&rep](bool& flag, const std::string& msg) {
    flag = false;
    rep.violations.push_back(msg);
  };
  std::size_t n = m.carrier.size();

  // weakening: R_eps included in R_delta for eps <= delta
  for (std::size_t a = 0; a < m.levels.size(); ++a)
    for (std::size_t b = a + 1; b < m.levels.size(); ++b) {
      const auto& small = m.rel.at(m.levels[a]);
      const auto& large = m.rel.at(m.levels[b]);
      for (auto& pr : small)
        if (!large.count(pr))
          note(rep.weakening_ok, "weakening fails: R_" + rat_to_string(m.levels[a]) +
                                     " not included in R_" + rat_to_string(m.levels[b]));
    }

  // self-distance zero and symmetry at every level
  for (auto& eps : m.levels) {
    const auto& r = m.rel.at(eps);
    for (std::size_t i = 0; i < n; ++i)
      if (!r.count({i, i}))
        note(rep.self_distance_ok,
             "self-distance fails at level " + rat_to_string(eps) + " for " + m.carrier[i]);
    for (auto& [i, j] : r)
      if (!r.count({j, i}))
        note(rep.symmetry_ok, "symmetry fails at level " + rat_to_string(eps) + " for (" +
                                  m.carrier[i] + "," + m.carrier[j] + ")");
  }

  // triangle scheme: relatedness at eps1 and eps2 composes to min(1, eps1+eps2),
  // on the instances whose composite level lies in the grid
  for (auto& e1 : m.levels)
    for (auto& e2 : m.levels) {
      Rat comp = rat_min(Rat(1), e1 + e2);
      if (!m.rel.count(comp)) continue;
      const auto& r1 = m.rel.at(e1);
      const auto& r2 = m.rel.at(e2);
      const auto& rc = m.rel.at(comp);
      for (auto& [i, j] : r1)
        for (std::size_t k = 0; k < n; ++k)
          if (r2.count({j, k})) {
            ++rep.triangle_instances;
            if (!rc.count({i, k}))
              note(rep.triangle_ok, "triangle fails: (" + m.carrier[i] + "," + m.carrier[j] +
                                        ") at " + rat_to_string(e1) + ", (" + m.carrier[j] + "," +
                                        m.carrier[k] + ") at " + rat_to_string(e2));
          }
    }

  // the infinitary-limit witness: 0 and 0' related at every positive level
  // yet unrelated at level 0
  bool at_all_positive = true;
  for (std::size_t a = 1; a < m.levels.size(); ++a)
    if (!m.related(m.levels[a], 0, 1)) at_all_positive = false;
  rep.noncompact_witness = at_all_positive && !m.related(Rat(0), 0, 1);
  return rep;
}

// ------------------------------------------------------------- serialization

inline Json equation_to_json(const QuantEquation& eq) {
  Json j;
  j["context"] = fuzzy_to_json(eq.context);
  j["lhs"] = term_to_string(eq.lhs);
  j["rhs"] = term_to_string(eq.rhs);
  j["kind"] = eq.is_eps ? "eqeps" : "eq";
  if (eq.is_eps) j["eps"] = rat_to_string(eq.eps);
  return j;
}

inline QuantEquation equation_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("context") || !j.contains("lhs") || !j.contains("rhs"))
    throw parse_error("equation JSON needs \"context\", \"lhs\" and \"rhs\"");
  FuzzyRelation ctx = fuzzy_from_json(j.at("context"));
  ConvexTerm lhs = parse_term(j.at("lhs").get<std::string>());
  ConvexTerm rhs = parse_term(j.at("rhs").get<std::string>());
  std::string kind = j.value("kind", "eqeps");
  if (kind == "eq") return QuantEquation::eq(std::move(ctx), std::move(lhs), std::move(rhs));
  if (kind != "eqeps") throw parse_error("unknown equation kind: " + kind);
  return QuantEquation::eq_eps(std::move(ctx), std::move(lhs), std::move(rhs),
                               parse_rational(j.at("eps").get<std::string>()));
}

// Model schema: {"space": {...}, "ops": {"1/2": [["a","b"],["b","a"]]}} with
// table entries naming carrier elements, table[i][j] = carrier[i] +_p carrier[j].
inline Json model_to_json(const Model& m) {
  Json j;
  j["space"] = fuzzy_to_json(m.space);
  Json ops = Json::object();
  for (auto& [p, table] : m.ops) {
    Json rows = Json::array();
    for (auto& row : table) {
      Json r = Json::array();
      for (auto idx : row) r.push_back(m.space.carrier().at(idx));
      rows.push_back(r);
    }
    ops[rat_to_string(p)] = rows;
  }
  j["ops"] = ops;
  return j;
}

inline Model model_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("space"))
    throw parse_error("model JSON needs \"space\"");
  Model m;
  m.space = fuzzy_from_json(j.at("space"));
  if (j.contains("ops"))
    for (auto& [ptok, rows] : j.at("ops").items()) {
      Rat p = parse_rational(ptok);
      require_interior(p, "model op probability");
      std::vector<std::vector<std::size_t>> table;
      for (auto& row : rows) {
        std::vector<std::size_t> r;
        for (auto& cell : row) r.push_back(m.space.index_of(cell.get<std::string>()));
        table.push_back(std::move(r));
      }
      if (table.size() != m.space.size()) throw parse_error("model op table row count mismatch");
      for (auto& r : table)
        if (r.size() != m.space.size()) throw parse_error("model op table column count mismatch");
      m.ops.emplace(p, std::move(table));
    }
  return m;
}

}  // namespace liftcert
