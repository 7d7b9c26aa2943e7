#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "liftcert/rational.hpp"

namespace liftcert {

using VarName = std::string;

struct domain_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline void require_interior(const Rat& p, const char* what) {
  if (p <= 0 || p >= 1) throw domain_error(std::string(what) + " must lie strictly in (0,1)");
}

// Finitely supported probability distribution: strictly positive weights
// summing to one, keyed by variable name (map order fixes iteration order).
class Distribution {
 public:
  Distribution() = default;

  // Normalizes away zero weights; rejects negatives and bad totals.
  explicit Distribution(std::map<VarName, Rat> weights) {
    Rat total = 0;
    for (auto& [v, w] : weights) {
      if (w < 0) throw domain_error("negative weight for " + v);
      total += w;
      if (w > 0) weights_.emplace(v, w);
    }
    if (total != 1) throw domain_error("weights sum to " + rat_to_string(total) + ", expected 1");
  }

  static Distribution dirac(const VarName& v) { return Distribution({{v, Rat(1)}}); }

  const std::map<VarName, Rat>& weights() const { return weights_; }
  Rat at(const VarName& v) const {
    auto it = weights_.find(v);
    return it == weights_.end() ? Rat(0) : it->second;
  }
  bool operator==(const Distribution& o) const { return weights_ == o.weights_; }
  bool operator!=(const Distribution& o) const { return !(*this == o); }

 private:
  std::map<VarName, Rat> weights_;
};

// Binary convex-algebra term: a leaf variable or t +_p u with p in (0,1).
// Immutable; shared subtrees are fine.
class ConvexTerm {
 public:
  static ConvexTerm leaf(VarName v) {
    ConvexTerm t;
    t.node_ = std::make_shared<const Node>(Node{std::move(v), Rat(0), {}, {}});
    return t;
  }
  static ConvexTerm combine(const Rat& p, ConvexTerm left, ConvexTerm right) {
    require_interior(p, "node probability");
    ConvexTerm t;
    t.node_ = std::make_shared<const Node>(
        Node{{}, p, std::move(left).node_, std::move(right).node_});
    return t;
  }

  bool is_leaf() const { return !node_->left; }
  const VarName& var() const { return node_->var; }
  const Rat& prob() const { return node_->p; }
  ConvexTerm left() const { return ConvexTerm(node_->left); }
  ConvexTerm right() const { return ConvexTerm(node_->right); }

  bool operator==(const ConvexTerm& o) const {
    if (node_ == o.node_) return true;
    if (is_leaf() != o.is_leaf()) return false;
    if (is_leaf()) return var() == o.var();
    return prob() == o.prob() && left() == o.left() && right() == o.right();
  }
  bool operator!=(const ConvexTerm& o) const { return !(*this == o); }

  void collect_vars(std::map<VarName, bool>& out) const {
    if (is_leaf()) {
      out[var()] = true;
    } else {
      left().collect_vars(out);
      right().collect_vars(out);
    }
  }
  std::vector<VarName> vars() const {
    std::map<VarName, bool> m;
    collect_vars(m);
    std::vector<VarName> out;
    for (auto& [v, _] : m) out.push_back(v);
    return out;
  }

 private:
  struct Node {
    VarName var;
    Rat p;
    std::shared_ptr<const Node> left, right;
  };
  ConvexTerm() = default;
  explicit ConvexTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// n-ary convex combination sum_i p_i x_i with p_i in [0,1] (0 and 1 allowed)
// and total exactly 1.
struct NAryCombination {
  std::vector<std::pair<Rat, VarName>> entries;

  void validate() const {
    if (entries.empty()) throw domain_error("empty n-ary combination");
    Rat total = 0;
    for (auto& [p, v] : entries) {
      if (p < 0 || p > 1) throw domain_error("n-ary weight out of [0,1] for " + v);
      total += p;
    }
    if (total != 1) throw domain_error("n-ary weights sum to " + rat_to_string(total));
  }
};

// Recursive rewrite of an n-ary combination into binary +_p nodes:
// p1 = 1 keeps x1, p1 = 0 drops the head, 0 < p1 < 1 renormalizes the tail.
inline ConvexTerm nary_to_binary(const NAryCombination& e) {
  e.validate();
  auto rec = [](auto&& self, const std::vector<std::pair<Rat, VarName>>& es,
                std::size_t i) -> ConvexTerm {
    const auto& [p1, x1] = es[i];
    if (p1 == 1 || i + 1 == es.size()) return ConvexTerm::leaf(x1);
    if (p1 == 0) return self(self, es, i + 1);
    // tail weights get divided by (1 - p1); build the tail as a fresh
    // renormalized combination
    std::vector<std::pair<Rat, VarName>> tail;
    Rat scale = 1 - p1;
    for (std::size_t j = i + 1; j < es.size(); ++j)
      tail.emplace_back(es[j].first / scale, es[j].second);
    NAryCombination rest{tail};
    return ConvexTerm::combine(p1, ConvexTerm::leaf(x1), self(self, rest.entries, 0));
  };
  return rec(rec, e.entries, 0);
}

// [s]: total mass reaching each leaf variable.
inline Distribution denote(const ConvexTerm& t) {
  std::map<VarName, Rat> acc;
  auto walk = [&acc](auto&& self, const ConvexTerm& u, const Rat& mass) -> void {
    if (u.is_leaf()) {
      acc[u.var()] += mass;
    } else {
      self(self, u.left(), mass * u.prob());
      self(self, u.right(), mass * (1 - u.prob()));
    }
  };
  walk(walk, t, Rat(1));
  return Distribution(acc);
}

inline Distribution convex_combine(const Distribution& mu, const Distribution& nu, const Rat& p) {
  require_interior(p, "mixing probability");
  std::map<VarName, Rat> out;
  for (auto& [v, w] : mu.weights()) out[v] += p * w;
  for (auto& [v, w] : nu.weights()) out[v] += (1 - p) * w;
  return Distribution(out);
}

inline ConvexTerm substitute(const ConvexTerm& t, const std::map<VarName, ConvexTerm>& sigma) {
  if (t.is_leaf()) {
    auto it = sigma.find(t.var());
    if (it == sigma.end()) throw domain_error("unmapped variable " + t.var());
    return it->second;
  }
  return ConvexTerm::combine(t.prob(), substitute(t.left(), sigma), substitute(t.right(), sigma));
}

// Canonical n-ary presentation of a distribution, in key order.
inline NAryCombination to_nary(const Distribution& mu) {
  NAryCombination e;
  for (auto& [v, w] : mu.weights()) e.entries.emplace_back(w, v);
  return e;
}

// ---- canonical text form: `x`, `(t +_{p/q} u)`, `[p1 x1, ..., pn xn]` ----

inline std::string term_to_string(const ConvexTerm& t) {
  if (t.is_leaf()) return t.var();
  return "(" + term_to_string(t.left()) + " +_{" + rat_to_string(t.prob()) + "} " +
         term_to_string(t.right()) + ")";
}

inline std::string nary_to_string(const NAryCombination& e) {
  std::string out = "[";
  bool first = true;
  for (auto& [p, v] : e.entries) {
    if (!first) out += ", ";
    first = false;
    out += rat_to_string(p) + " " + v;
  }
  return out + "]";
}

namespace detail {

struct TermParser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool name_char(char c) const {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '\'' || c == '.';
  }
  std::string parse_name() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && name_char(s[pos])) ++pos;
    if (start == pos) throw parse_error("expected variable name at position " + std::to_string(start));
    return s.substr(start, pos - start);
  }
  std::string parse_number_token() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() &&
           ((s[pos] >= '0' && s[pos] <= '9') || s[pos] == '/' || s[pos] == '.' || s[pos] == '-'))
      ++pos;
    if (start == pos) throw parse_error("expected rational at position " + std::to_string(start));
    return s.substr(start, pos - start);
  }
  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c)
      throw parse_error(std::string("expected '") + c + "' at position " + std::to_string(pos));
    ++pos;
  }

  ConvexTerm parse_term() {
    skip_ws();
    if (pos >= s.size()) throw parse_error("unexpected end of term");
    if (s[pos] == '(') {
      ++pos;
      ConvexTerm l = parse_term();
      skip_ws();
      expect('+');
      expect('_');
      expect('{');
      Rat p = parse_rational(parse_number_token());
      expect('}');
      ConvexTerm r = parse_term();
      expect(')');
      return ConvexTerm::combine(p, l, r);
    }
    if (s[pos] == '[') {
      ++pos;
      NAryCombination e;
      while (true) {
        Rat p = parse_rational(parse_number_token());
        std::string v = parse_name();
        e.entries.emplace_back(p, v);
        skip_ws();
        if (pos < s.size() && s[pos] == ',') {
          ++pos;
          continue;
        }
        break;
      }
      expect(']');
      return nary_to_binary(e);
    }
    return ConvexTerm::leaf(parse_name());
  }
};

}  // namespace detail

inline ConvexTerm parse_term(const std::string& text) {
  detail::TermParser p{text};
  ConvexTerm t = p.parse_term();
  p.skip_ws();
  if (p.pos != text.size())
    throw parse_error("trailing input after term at position " + std::to_string(p.pos));
  return t;
}

}  // namespace liftcert
