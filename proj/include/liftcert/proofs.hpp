#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "liftcert/json_io.hpp"
#include "liftcert/lifting.hpp"

namespace liftcert {

// ---------------------------------------------------------------- judgments

// Symbolic bound: a rational leaf, or eps oplus_p delta over sub-bounds. The
// operator tag lives in the certificate header, so the tree stores only p.
class BoundExpr {
 public:
  static BoundExpr leaf(const Rat& v) {
    if (v < 0 || v > 1) throw domain_error("bound leaf outside [0,1]");
    BoundExpr b;
    b.node_ = std::make_shared<const Node>(Node{v, Rat(0), {}, {}});
    return b;
  }
  static BoundExpr mix(const Rat& p, BoundExpr l, BoundExpr r) {
    require_interior(p, "bound mixing probability");
    BoundExpr b;
    b.node_ = std::make_shared<const Node>(Node{Rat(0), p, std::move(l).node_, std::move(r).node_});
    return b;
  }

  bool is_leaf() const { return !node_->l; }
  const Rat& value() const { return node_->value; }
  const Rat& prob() const { return node_->p; }
  BoundExpr left() const { return BoundExpr(node_->l); }
  BoundExpr right() const { return BoundExpr(node_->r); }

  // Exact lazily-rooted evaluation under the given operator family.
  PreRoot eval(const LiftOperator& op) const {
    if (is_leaf()) return PreRoot::of(value());
    return oplus_preroot(op, prob(), left().eval(op), right().eval(op));
  }

  bool operator==(const BoundExpr& o) const {
    if (node_ == o.node_) return true;
    if (is_leaf() != o.is_leaf()) return false;
    if (is_leaf()) return value() == o.value();
    return prob() == o.prob() && left() == o.left() && right() == o.right();
  }

 private:
  struct Node {
    Rat value;
    Rat p;
    std::shared_ptr<const Node> l, r;
  };
  BoundExpr() = default;
  explicit BoundExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Quantitative (in)equation in context: forall (B,d_B). s = t or s =_eps t.
// For Approx-regime operators an EqEps judgment additionally carries a
// claimed rational upper bound on the (possibly irrational) bound value.
struct Judgment {
  enum class Kind { Eq, EqEps };

  FuzzyRelation context;
  ConvexTerm lhs, rhs;
  Kind kind;
  std::optional<BoundExpr> bound;  // EqEps only
  std::optional<Rat> claimed;      // Approx regime only

  static Judgment eq(FuzzyRelation ctx, ConvexTerm l, ConvexTerm r) {
    return {std::move(ctx), std::move(l), std::move(r), Kind::Eq, std::nullopt, std::nullopt};
  }
  static Judgment eq_eps(FuzzyRelation ctx, ConvexTerm l, ConvexTerm r, BoundExpr b,
                         std::optional<Rat> claimed = std::nullopt) {
    return {std::move(ctx), std::move(l), std::move(r), Kind::EqEps, std::move(b),
            std::move(claimed)};
  }
};

enum class RuleTag { Refl, SymEq, CAEq, Assum, Top, Weaken, InterpAxiom, Subst, Congruence, InfRule };

inline const char* rule_name(RuleTag t) {
  switch (t) {
    case RuleTag::Refl: return "Refl";
    case RuleTag::SymEq: return "SymEq";
    case RuleTag::CAEq: return "CAEq";
    case RuleTag::Assum: return "Assum";
    case RuleTag::Top: return "Top";
    case RuleTag::Weaken: return "Weaken";
    case RuleTag::InterpAxiom: return "InterpAxiom";
    case RuleTag::Subst: return "Subst";
    case RuleTag::Congruence: return "Congruence";
    case RuleTag::InfRule: return "InfRule";
  }
  return "?";
}

inline RuleTag rule_from_name(const std::string& s) {
  for (RuleTag t : {RuleTag::Refl, RuleTag::SymEq, RuleTag::CAEq, RuleTag::Assum, RuleTag::Top,
                    RuleTag::Weaken, RuleTag::InterpAxiom, RuleTag::Subst, RuleTag::Congruence,
                    RuleTag::InfRule})
    if (s == rule_name(t)) return t;
  throw parse_error("unknown rule tag: " + s);
}

// Rule-specific side data; which fields are meaningful depends on the tag.
struct SideData {
  std::optional<Rat> p;                                     // InterpAxiom
  std::map<VarName, ConvexTerm> sigma;                      // Subst
  std::vector<std::pair<VarName, VarName>> witness_pairs;   // Subst, aligned to premises[1..]
};

struct Derivation {
  Judgment conclusion;
  RuleTag rule;
  SideData side;
  std::vector<Derivation> premises;
};

// ------------------------------------------------------------------ checking

struct CheckResult {
  bool ok = true;
  std::string node;    // path of the offending node, e.g. "root.premises[1]"
  std::string reason;  // violated side condition

  static CheckResult pass() { return {}; }
  static CheckResult fail(std::string node, std::string reason) {
    return {false, std::move(node), std::move(reason)};
  }
};

namespace detail {

inline bool terms_in_carrier(const ConvexTerm& t, const FuzzyRelation& ctx) {
  for (auto& v : t.vars())
    if (!ctx.contains(v)) return false;
  return true;
}

// The ordered pairs (b,b') with d_B(b,b') < 1, row-major in carrier order:
// exactly the pairs needing a 1-Lipschitz witness under the substitution rule.
inline std::vector<std::pair<VarName, VarName>> witness_pairs_of(const FuzzyRelation& ctx) {
  std::vector<std::pair<VarName, VarName>> out;
  for (std::size_t i = 0; i < ctx.size(); ++i)
    for (std::size_t j = 0; j < ctx.size(); ++j)
      if (ctx.at(i, j) < 1) out.emplace_back(ctx.carrier()[i], ctx.carrier()[j]);
  return out;
}

}  // namespace detail

// Validates every node's side conditions. Purely local: consults only the
// certificate and each judgment's own context -- never a solver. Equality
// judgments (CAEq) are checked semantically via denote(), see the certificate
// header's "equality_mode".
inline CheckResult check(const LiftOperator& op, const Derivation& deriv, bool finite_mode) {
  struct Walker {
    const LiftOperator& op;
    bool finite_mode;

    CheckResult walk(const Derivation& d, const std::string& path) {
      const Judgment& c = d.conclusion;
      auto fail = [&](const std::string& why) { return CheckResult::fail(path, why); };

      if (!detail::terms_in_carrier(c.lhs, c.context) || !detail::terms_in_carrier(c.rhs, c.context))
        return fail("judgment terms mention variables outside the context carrier");
      if (c.kind == Judgment::Kind::EqEps && !c.bound)
        return fail("quantitative judgment without a bound");
      if (c.kind == Judgment::Kind::Eq && c.bound)
        return fail("equality judgment carrying a bound");
      if (c.kind == Judgment::Kind::EqEps && !op.exact_regime() && !c.claimed)
        return fail("Approx-regime judgment without a claimed upper bound");
      if (c.claimed) {
        if (!c.bound) return fail("claimed bound without a symbolic bound");
        if (*c.claimed < 0 || *c.claimed > 1) return fail("claimed bound outside [0,1]");
        if (!preroot_leq(c.bound->eval(op), PreRoot::of(*c.claimed)))
          return fail("claimed bound is below the evaluated bound");
      }

      switch (d.rule) {
        case RuleTag::Refl:
          if (c.kind != Judgment::Kind::Eq) return fail("Refl must conclude an equality");
          if (!d.premises.empty()) return fail("Refl takes no premises");
          if (c.lhs != c.rhs) return fail("Refl: sides are not structurally equal");
          break;

        case RuleTag::SymEq: {
          if (c.kind != Judgment::Kind::Eq) return fail("SymEq must conclude an equality");
          if (d.premises.size() != 1) return fail("SymEq takes one premise");
          const Judgment& p = d.premises[0].conclusion;
          if (p.kind != Judgment::Kind::Eq || p.context != c.context || p.lhs != c.rhs ||
              p.rhs != c.lhs)
            return fail("SymEq: premise is not the flipped equality");
          break;
        }

        case RuleTag::CAEq:
          if (c.kind != Judgment::Kind::Eq) return fail("CAEq must conclude an equality");
          if (!d.premises.empty()) return fail("CAEq takes no premises");
          if (denote(c.lhs) != denote(c.rhs))
            return fail("CAEq: sides denote different distributions");
          break;

        case RuleTag::Assum: {
          if (c.kind != Judgment::Kind::EqEps) return fail("Assum must conclude =_eps");
          if (!d.premises.empty()) return fail("Assum takes no premises");
          if (!c.lhs.is_leaf() || !c.rhs.is_leaf())
            return fail("Assum: sides must be single variables");
          Rat dist = c.context.at(c.lhs.var(), c.rhs.var());
          if (!preroot_eq(c.bound->eval(op), PreRoot::of(dist)))
            return fail("Assum: bound does not evaluate to the context distance");
          break;
        }

        case RuleTag::Top:
          if (c.kind != Judgment::Kind::EqEps) return fail("Top must conclude =_eps");
          if (!d.premises.empty()) return fail("Top takes no premises");
          if (preroot_cmp(c.bound->eval(op), PreRoot::of(Rat(1))) < 0)
            return fail("Top: bound evaluates below 1");
          break;

        case RuleTag::Weaken: {
          if (c.kind != Judgment::Kind::EqEps) return fail("Weaken must conclude =_eps");
          if (d.premises.size() != 1) return fail("Weaken takes one premise");
          const Judgment& p = d.premises[0].conclusion;
          if (p.kind != Judgment::Kind::EqEps || !p.bound || p.context != c.context ||
              p.lhs != c.lhs || p.rhs != c.rhs)
            return fail("Weaken: premise must state the same judgment up to the bound");
          if (!preroot_leq(p.bound->eval(op), c.bound->eval(op)))
            return fail("Weaken: premise bound exceeds the weakened bound");
          break;
        }

        case RuleTag::InterpAxiom: {
          if (c.kind != Judgment::Kind::EqEps) return fail("InterpAxiom must conclude =_eps");
          if (!d.premises.empty()) return fail("InterpAxiom takes no premises");
          if (!d.side.p) return fail("InterpAxiom without its probability");
          const FuzzyRelation& ctx = c.context;
          if (ctx.size() != 4) return fail("InterpAxiom: context must have four variables");
          for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
              if (!((i == 0 && j == 2) || (i == 1 && j == 3)) && ctx.at(i, j) != 1)
                return fail("InterpAxiom: context entry other than (x,w),(y,z) differs from 1");
          const Rat& p = *d.side.p;
          const auto& v = ctx.carrier();
          ConvexTerm want_l = ConvexTerm::combine(p, ConvexTerm::leaf(v[0]), ConvexTerm::leaf(v[1]));
          ConvexTerm want_r = ConvexTerm::combine(p, ConvexTerm::leaf(v[2]), ConvexTerm::leaf(v[3]));
          if (c.lhs != want_l || c.rhs != want_r)
            return fail("InterpAxiom: terms are not x +_p y and w +_p z over the context");
          BoundExpr want_b =
              BoundExpr::mix(p, BoundExpr::leaf(ctx.at(0, 2)), BoundExpr::leaf(ctx.at(1, 3)));
          if (!(*c.bound == want_b))
            return fail("InterpAxiom: bound is not eps oplus_p delta for the context entries");
          break;
        }

        case RuleTag::Subst: {
          if (d.premises.empty()) return fail("Subst needs a main premise");
          const Judgment& p = d.premises[0].conclusion;
          const FuzzyRelation& B = p.context;
          // sigma total on B
          if (d.side.sigma.size() != B.size()) return fail("Subst: sigma is not total on the source carrier");
          for (auto& name : B.carrier())
            if (!d.side.sigma.count(name)) return fail("Subst: sigma misses variable " + name);
          for (auto& [_, img] : d.side.sigma)
            if (!detail::terms_in_carrier(img, c.context))
              return fail("Subst: sigma image leaves the target carrier");
          if (c.kind != p.kind) return fail("Subst: conclusion kind differs from the premise");
          if (substitute(p.lhs, d.side.sigma) != c.lhs || substitute(p.rhs, d.side.sigma) != c.rhs)
            return fail("Subst: conclusion terms are not the substituted premise terms");
          if (c.kind == Judgment::Kind::EqEps) {
            if (!p.bound) return fail("Subst: quantitative premise without a bound");
            if (!preroot_eq(p.bound->eval(op), c.bound->eval(op)))
              return fail("Subst: bound changed across the substitution");
          }
          // provably 1-Lipschitz: one witness per ordered pair with d_B < 1
          auto required = detail::witness_pairs_of(B);
          if (d.side.witness_pairs != required)
            return fail("Subst: witness pairs do not cover { (b,b') | d_B(b,b') < 1 }");
          if (d.premises.size() != 1 + required.size())
            return fail("Subst: premise count does not match the witness pairs");
          for (std::size_t i = 0; i < required.size(); ++i) {
            const auto& [b, b2] = required[i];
            const Judgment& w = d.premises[1 + i].conclusion;
            if (w.kind != Judgment::Kind::EqEps || !w.bound || w.context != c.context)
              return fail("Subst: witness for (" + b + "," + b2 + ") has the wrong form");
            if (w.lhs != d.side.sigma.at(b) || w.rhs != d.side.sigma.at(b2))
              return fail("Subst: witness terms for (" + b + "," + b2 + ") are not sigma images");
            if (!preroot_eq(w.bound->eval(op), PreRoot::of(B.at(b, b2))))
              return fail("Subst: witness bound for (" + b + "," + b2 + ") differs from d_B");
          }
          break;
        }

        case RuleTag::Congruence: {
          if (c.kind != Judgment::Kind::EqEps) return fail("Congruence must conclude =_eps");
          if (d.premises.size() != 3) return fail("Congruence takes premises s=u, u=_eps v, v=t");
          const Judgment& a = d.premises[0].conclusion;
          const Judgment& m = d.premises[1].conclusion;
          const Judgment& z = d.premises[2].conclusion;
          if (a.kind != Judgment::Kind::Eq || z.kind != Judgment::Kind::Eq ||
              m.kind != Judgment::Kind::EqEps || !m.bound)
            return fail("Congruence: premise kinds must be Eq, EqEps, Eq");
          if (a.context != c.context || m.context != c.context || z.context != c.context)
            return fail("Congruence: premises over a different context");
          if (a.lhs != c.lhs) return fail("Congruence: first premise does not start at s");
          if (a.rhs != m.lhs) return fail("Congruence: s=u and u=_eps v do not meet at u");
          if (m.rhs != z.lhs) return fail("Congruence: u=_eps v and v=t do not meet at v");
          if (z.rhs != c.rhs) return fail("Congruence: last premise does not end at t");
          if (!preroot_eq(m.bound->eval(op), c.bound->eval(op)))
            return fail("Congruence: conclusion bound differs from the middle premise");
          break;
        }

        case RuleTag::InfRule: {
          if (finite_mode) return fail("InfRule is not allowed in finite mode");
          // represent-only: sanity-check the finite stand-in premises
          if (c.kind != Judgment::Kind::EqEps) return fail("InfRule must conclude =_eps");
          for (auto& pr : d.premises) {
            const Judgment& p = pr.conclusion;
            if (p.kind != Judgment::Kind::EqEps || !p.bound || p.context != c.context ||
                p.lhs != c.lhs || p.rhs != c.rhs)
              return fail("InfRule: premises must bound the same judgment");
            if (!preroot_leq(c.bound->eval(op), p.bound->eval(op)))
              return fail("InfRule: conclusion bound above a premise bound");
          }
          break;
        }
      }

      for (std::size_t i = 0; i < d.premises.size(); ++i) {
        CheckResult r = walk(d.premises[i], path + ".premises[" + std::to_string(i) + "]");
        if (!r.ok) return r;
      }
      return CheckResult::pass();
    }
  };
  return Walker{op, finite_mode}.walk(deriv, "root");
}

// ----------------------------------------------------------------- synthesis

namespace detail {

// Smallest handy rational upper bound on v = radicand^(1/index): exact when
// the root is rational, else the verified dyadic hi endpoint.
inline Rat preroot_upper(const PreRoot& v, const Rat& precision) {
  RootResult r = kth_root(v.radicand, v.index, precision);
  return r.hi;
}

inline std::optional<Rat> claim_for(const LiftOperator& op, const BoundExpr& b,
                                    const Rat& precision) {
  if (op.exact_regime()) return std::nullopt;
  // round the verified upper endpoint up to 18 decimal digits
  Rat hi = preroot_upper(b.eval(op), precision);
  Int s = int_pow(10, 18);
  Int num = rat_num(hi) * s;
  Int den = rat_den(hi);
  Int q = num / den;
  if (q * den != num) ++q;
  return rat_min(Rat(1), Rat(q, s));
}

inline Derivation assum_node(const LiftOperator& op, const FuzzyRelation& ctx, const VarName& a,
                             const VarName& b, const Rat& precision) {
  BoundExpr bound = BoundExpr::leaf(ctx.at(a, b));
  return Derivation{Judgment::eq_eps(ctx, ConvexTerm::leaf(a), ConvexTerm::leaf(b), bound,
                                     claim_for(op, bound, precision)),
                    RuleTag::Assum,
                    {},
                    {}};
}

}  // namespace detail

// Finite derivation of e(avec) =_eps e(bvec) with eps = oplus_i p_i d(a_i,b_i),
// by the interpolative induction: Assum at the base, one InterpAxiom instance
// plus a substitution (whose 1-Lipschitz witnesses are the Assum leaf and the
// recursive chain) at each step.
inline Derivation interpolation_chain(const LiftOperator& op, const FuzzyRelation& context,
                                      const NAryCombination& e, const std::vector<VarName>& avec,
                                      const std::vector<VarName>& bvec,
                                      const Rat& precision = default_precision()) {
  e.validate();
  if (avec.size() != e.entries.size() || bvec.size() != e.entries.size())
    throw domain_error("interpolation_chain: tuple length mismatch");
  for (auto& v : avec)
    if (!context.contains(v)) throw domain_error("interpolation_chain: name outside carrier: " + v);
  for (auto& v : bvec)
    if (!context.contains(v)) throw domain_error("interpolation_chain: name outside carrier: " + v);

  struct Builder {
    const LiftOperator& op;
    const FuzzyRelation& ctx;
    const std::vector<VarName>& avec;
    const std::vector<VarName>& bvec;
    const Rat& precision;

    // entries[i..] renormalized to sum 1
    Derivation build(const std::vector<std::pair<Rat, VarName>>& entries, std::size_t i) {
      const Rat& p1 = entries[i].first;
      if (p1 == 1 || i + 1 == entries.size())
        return detail::assum_node(op, ctx, avec[i], bvec[i], precision);
      if (p1 == 0) return build(entries, i + 1);

      // renormalized tail
      std::vector<std::pair<Rat, VarName>> tail;
      Rat scale = 1 - p1;
      for (std::size_t j = i + 1; j < entries.size(); ++j)
        tail.emplace_back(entries[j].first / scale, entries[j].second);
      Derivation rest = build(tail_shifted(tail, i + 1), i + 1);

      Rat eps = ctx.at(avec[i], bvec[i]);
      Rat delta = detail::preroot_upper(rest.conclusion.bound->eval(op), precision);
      delta = rat_min(Rat(1), delta);

      // the oplus_p-interpolative scheme instance over {x,y,w,z}
      std::vector<std::vector<Rat>> m(4, std::vector<Rat>(4, Rat(1)));
      m[0][2] = eps;
      m[1][3] = delta;
      FuzzyRelation scheme({"x", "y", "w", "z"}, m);
      BoundExpr bound = BoundExpr::mix(p1, BoundExpr::leaf(eps), BoundExpr::leaf(delta));
      ConvexTerm ax_l = ConvexTerm::combine(p1, ConvexTerm::leaf("x"), ConvexTerm::leaf("y"));
      ConvexTerm ax_r = ConvexTerm::combine(p1, ConvexTerm::leaf("w"), ConvexTerm::leaf("z"));
      Derivation axiom{Judgment::eq_eps(scheme, ax_l, ax_r, bound, detail::claim_for(op, bound, precision)),
                       RuleTag::InterpAxiom,
                       SideData{p1, {}, {}},
                       {}};

      std::map<VarName, ConvexTerm> sigma{
          {"x", ConvexTerm::leaf(avec[i])},
          {"y", rest.conclusion.lhs},
          {"w", ConvexTerm::leaf(bvec[i])},
          {"z", rest.conclusion.rhs},
      };
      // witnesses for the context pairs below 1, in carrier row-major order
      std::vector<Derivation> premises{std::move(axiom)};
      std::vector<std::pair<VarName, VarName>> pairs;
      if (eps < 1) {
        pairs.emplace_back("x", "w");
        premises.push_back(detail::assum_node(op, ctx, avec[i], bvec[i], precision));
      }
      if (delta < 1) {
        pairs.emplace_back("y", "z");
        premises.push_back(weaken_to(std::move(rest), delta));
      }

      ConvexTerm lhs = ConvexTerm::combine(p1, ConvexTerm::leaf(avec[i]), sigma.at("y"));
      ConvexTerm rhs = ConvexTerm::combine(p1, ConvexTerm::leaf(bvec[i]), sigma.at("z"));
      return Derivation{
          Judgment::eq_eps(ctx, lhs, rhs, bound, detail::claim_for(op, bound, precision)),
          RuleTag::Subst,
          SideData{std::nullopt, std::move(sigma), std::move(pairs)},
          std::move(premises)};
    }

    // re-anchor a renormalized tail at absolute position `from` so that
    // avec/bvec indices stay aligned
    std::vector<std::pair<Rat, VarName>> tail_shifted(std::vector<std::pair<Rat, VarName>> tail,
                                                      std::size_t from) {
      std::vector<std::pair<Rat, VarName>> padded(from, {Rat(0), VarName("_")});
      for (auto& t : tail) padded.push_back(std::move(t));
      return padded;
    }

    Derivation weaken_to(Derivation inner, const Rat& target) {
      if (inner.conclusion.bound->is_leaf() && inner.conclusion.bound->value() == target)
        return inner;
      BoundExpr b = BoundExpr::leaf(target);
      Judgment j = Judgment::eq_eps(inner.conclusion.context, inner.conclusion.lhs,
                                    inner.conclusion.rhs, b, detail::claim_for(op, b, precision));
      return Derivation{std::move(j), RuleTag::Weaken, {}, {std::move(inner)}};
    }
  };

  Builder builder{op, context, avec, bvec, precision};
  return builder.build(e.entries, 0);
}

// A coupling is a recipe for a proof: rewrite s and t into the common shape
// e(x_ab) = sum gamma(a,b) x_ab (CAEq), chain the interpolative axiom across
// the cells, and glue with congruence. Valid for ANY coupling of
// ([s], [t]), optimal or not; the certified bound is V(gamma).
inline Derivation synthesize(const LiftOperator& op, const FuzzyRelation& context,
                             const ConvexTerm& s, const ConvexTerm& t, const Coupling& gamma,
                             const Rat& precision = default_precision()) {
  if (gamma.left_marginal() != denote(s) || gamma.right_marginal() != denote(t))
    throw domain_error("synthesize: coupling marginals do not match [s], [t]");

  // cells ordered by carrier position for deterministic certificates
  std::vector<std::pair<Coupling::Cell, Rat>> cells(gamma.mass().begin(), gamma.mass().end());
  std::stable_sort(cells.begin(), cells.end(), [&](const auto& x, const auto& y) {
    auto kx = std::make_pair(context.index_of(x.first.first), context.index_of(x.first.second));
    auto ky = std::make_pair(context.index_of(y.first.first), context.index_of(y.first.second));
    return kx < ky;
  });

  NAryCombination e;
  std::vector<VarName> avec, bvec;
  for (auto& [cell, w] : cells) {
    e.entries.emplace_back(w, cell.first + "|" + cell.second);
    avec.push_back(cell.first);
    bvec.push_back(cell.second);
  }

  Derivation chain = interpolation_chain(op, context, e, avec, bvec, precision);
  Derivation left{Judgment::eq(context, s, chain.conclusion.lhs), RuleTag::CAEq, {}, {}};
  Derivation right{Judgment::eq(context, chain.conclusion.rhs, t), RuleTag::CAEq, {}, {}};

  Judgment conclusion = Judgment::eq_eps(context, s, t, *chain.conclusion.bound,
                                         chain.conclusion.claimed);
  return Derivation{std::move(conclusion),
                    RuleTag::Congruence,
                    {},
                    {std::move(left), std::move(chain), std::move(right)}};
}

// Constructive compactness: certify s =_eps t at the optimal coupling's value.
inline Derivation prove_lift(const LiftOperator& op, const FuzzyRelation& context,
                             const ConvexTerm& s, const ConvexTerm& t,
                             const Rat& precision = default_precision()) {
  LiftResult r = lift(op, context, denote(s), denote(t), precision);
  return synthesize(op, context, s, t, r.witness, precision);
}

// ------------------------------------------------------------- serialization

inline Json bound_to_json(const BoundExpr& b) {
  if (b.is_leaf()) return Json{{"leaf", rat_to_string(b.value())}};
  return Json{{"p", rat_to_string(b.prob())},
              {"lhs", bound_to_json(b.left())},
              {"rhs", bound_to_json(b.right())}};
}

inline BoundExpr bound_from_json(const Json& j) {
  if (j.contains("leaf")) return BoundExpr::leaf(parse_rational(j.at("leaf").get<std::string>()));
  return BoundExpr::mix(parse_rational(j.at("p").get<std::string>()),
                        bound_from_json(j.at("lhs")), bound_from_json(j.at("rhs")));
}

inline Json judgment_to_json(const Judgment& j) {
  Json out;
  out["context"] = fuzzy_to_json(j.context);
  out["lhs"] = term_to_string(j.lhs);
  out["rhs"] = term_to_string(j.rhs);
  out["kind"] = j.kind == Judgment::Kind::Eq ? "eq" : "eqeps";
  if (j.bound) out["bound"] = bound_to_json(*j.bound);
  if (j.claimed) out["claimed"] = rat_to_decimal(*j.claimed, 20);
  return out;
}

inline Judgment judgment_from_json(const Json& j) {
  FuzzyRelation ctx = fuzzy_from_json(j.at("context"));
  ConvexTerm lhs = parse_term(j.at("lhs").get<std::string>());
  ConvexTerm rhs = parse_term(j.at("rhs").get<std::string>());
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "eq") return Judgment::eq(std::move(ctx), std::move(lhs), std::move(rhs));
  if (kind != "eqeps") throw parse_error("unknown judgment kind: " + kind);
  std::optional<Rat> claimed;
  if (j.contains("claimed")) claimed = parse_rational(j.at("claimed").get<std::string>());
  return Judgment::eq_eps(std::move(ctx), std::move(lhs), std::move(rhs),
                          bound_from_json(j.at("bound")), std::move(claimed));
}

inline Json derivation_to_json(const Derivation& d) {
  Json out;
  out["rule"] = rule_name(d.rule);
  out["conclusion"] = judgment_to_json(d.conclusion);
  Json side = Json::object();
  if (d.side.p) side["p"] = rat_to_string(*d.side.p);
  if (!d.side.sigma.empty()) {
    Json sigma = Json::object();
    for (auto& [v, t] : d.side.sigma) sigma[v] = term_to_string(t);
    side["sigma"] = sigma;
    Json witnesses = Json::array();
    for (auto& [b, b2] : d.side.witness_pairs) witnesses.push_back(b + "|" + b2);
    side["witnesses"] = witnesses;
  }
  out["side"] = side;
  Json premises = Json::array();
  for (auto& p : d.premises) premises.push_back(derivation_to_json(p));
  out["premises"] = premises;
  return out;
}

inline Derivation derivation_from_json(const Json& j) {
  Derivation d{judgment_from_json(j.at("conclusion")), rule_from_name(j.at("rule").get<std::string>()),
               {}, {}};
  if (j.contains("side")) {
    const Json& side = j.at("side");
    if (side.contains("p")) d.side.p = parse_rational(side.at("p").get<std::string>());
    if (side.contains("sigma"))
      for (auto& [v, t] : side.at("sigma").items())
        d.side.sigma.emplace(v, parse_term(t.get<std::string>()));
    if (side.contains("witnesses"))
      for (auto& w : side.at("witnesses")) {
        std::string ws = w.get<std::string>();
        auto bar = ws.find('|');
        if (bar == std::string::npos) throw parse_error("witness pair without '|': " + ws);
        d.side.witness_pairs.emplace_back(ws.substr(0, bar), ws.substr(bar + 1));
      }
  }
  for (auto& p : j.at("premises")) d.premises.push_back(derivation_from_json(p));
  return d;
}

// Certificate file = header + derivation tree. Canonical key order and
// lowest-terms rationals keep re-serialization byte-stable.
inline Json certificate_to_json(const LiftOperator& op, const Derivation& d,
                                const std::string& precision_token = "1e-12") {
  Json out;
  out["equality_mode"] = "semantic-CA";
  out["operator"] = op.token();
  out["precision"] = precision_token;
  out["derivation"] = derivation_to_json(d);
  return out;
}

struct Certificate {
  LiftOperator op;
  Rat precision;
  Derivation derivation;
};

inline Certificate certificate_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("operator") || !j.contains("derivation"))
    throw parse_error("certificate JSON needs \"operator\" and \"derivation\"");
  LiftOperator op = LiftOperator::from_token(j.at("operator").get<std::string>());
  Rat precision = j.contains("precision")
                      ? parse_rational(j.at("precision").get<std::string>())
                      : Rat(1, int_pow(10, 12));
  return Certificate{op, precision, derivation_from_json(j.at("derivation"))};
}

}  // namespace liftcert
