#pragma once

#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "liftcert/fuzzy.hpp"
#include "liftcert/rational.hpp"
#include "liftcert/simplex.hpp"
#include "liftcert/terms.hpp"

namespace liftcert {

// ---------------------------------------------------------------- couplings

// Joint distribution on pairs with prescribed marginals; an element of the
// transportation polytope Gamma(mu, nu).
class Coupling {
 public:
  using Cell = std::pair<VarName, VarName>;

  Coupling(std::map<Cell, Rat> mass, Distribution mu, Distribution nu)
      : mu_(std::move(mu)), nu_(std::move(nu)) {
    std::map<VarName, Rat> row, col;
    for (auto& [cell, w] : mass) {
      if (w < 0) throw domain_error("negative coupling mass");
      if (w == 0) continue;
      if (mu_.at(cell.first) == 0 || nu_.at(cell.second) == 0)
        throw domain_error("coupling support outside supp(mu) x supp(nu)");
      mass_.emplace(cell, w);
      row[cell.first] += w;
      col[cell.second] += w;
    }
    for (auto& [v, w] : mu_.weights())
      if (row[v] != w) throw domain_error("left marginal mismatch at " + v);
    for (auto& [v, w] : nu_.weights())
      if (col[v] != w) throw domain_error("right marginal mismatch at " + v);
  }

  const std::map<Cell, Rat>& mass() const { return mass_; }
  const Distribution& left_marginal() const { return mu_; }
  const Distribution& right_marginal() const { return nu_; }

  bool operator==(const Coupling& o) const {
    return mass_ == o.mass_ && mu_ == o.mu_ && nu_ == o.nu_;
  }

 private:
  std::map<Cell, Rat> mass_;
  Distribution mu_, nu_;
};

// Independent product mu x nu.
inline Coupling product_coupling(const Distribution& mu, const Distribution& nu) {
  std::map<Coupling::Cell, Rat> mass;
  for (auto& [a, wa] : mu.weights())
    for (auto& [b, wb] : nu.weights()) mass[{a, b}] = wa * wb;
  return Coupling(std::move(mass), mu, nu);
}

// Pointwise p-mix; marginals mix accordingly.
inline Coupling combine_couplings(const Coupling& g1, const Coupling& g2, const Rat& p) {
  require_interior(p, "mixing probability");
  std::map<Coupling::Cell, Rat> mass;
  for (auto& [cell, w] : g1.mass()) mass[cell] += p * w;
  for (auto& [cell, w] : g2.mass()) mass[cell] += (1 - p) * w;
  return Coupling(std::move(mass),
                  convex_combine(g1.left_marginal(), g2.left_marginal(), p),
                  convex_combine(g1.right_marginal(), g2.right_marginal(), p));
}

// ---------------------------------------------------------------- operators

// The four convex-algebra structures on [0,1] used for lifting.
struct LiftOperator {
  enum class Tag { Standard, Max, PowerMean, Geometric };
  Tag tag = Tag::Standard;
  unsigned k = 1;  // PowerMean order

  static LiftOperator standard() { return {Tag::Standard, 1}; }
  static LiftOperator max() { return {Tag::Max, 1}; }
  static LiftOperator power_mean(unsigned k) {
    if (k < 1) throw domain_error("power mean order must be >= 1");
    return {Tag::PowerMean, k};
  }
  static LiftOperator geometric() { return {Tag::Geometric, 1}; }

  // Exact-regime operators evaluate to a single rational.
  bool exact_regime() const {
    return tag == Tag::Standard || tag == Tag::Max || (tag == Tag::PowerMean && k == 1);
  }

  std::string token() const {
    switch (tag) {
      case Tag::Standard: return "standard";
      case Tag::Max: return "max";
      case Tag::PowerMean: return "power:" + std::to_string(k);
      case Tag::Geometric: return "geometric";
    }
    return "?";
  }

  static LiftOperator from_token(const std::string& tok) {
    if (tok == "standard") return standard();
    if (tok == "max") return max();
    if (tok == "geometric") return geometric();
    if (tok.rfind("power:", 0) == 0) {
      long k = std::strtol(tok.c_str() + 6, nullptr, 10);
      if (k < 1) throw parse_error("bad power mean order in " + tok);
      return power_mean(unsigned(k));
    }
    throw parse_error("unknown operator token: " + tok);
  }

  bool operator==(const LiftOperator& o) const { return tag == o.tag && k == o.k; }
};

// Interval precision: default 1e-12 width, overridable by LIFTCERT_PRECISION.
inline Rat default_precision() {
  if (const char* env = std::getenv("LIFTCERT_PRECISION")) return parse_rational(env);
  return Rat(1, int_pow(10, 12));
}

// Exact rational, or a certified enclosure, in [0,1].
struct LiftValue {
  bool exact;
  Rat lo, hi;

  static LiftValue from_exact(const Rat& v) { return {true, v, v}; }
  static LiftValue from_root(const RootResult& r) { return {r.exact, r.lo, r.hi}; }
  Rat width() const { return hi - lo; }
};

inline LiftValue preroot_to_value(const PreRoot& v, const Rat& precision) {
  return LiftValue::from_root(kth_root(v.radicand, v.index, precision));
}

// x oplus_p y in the lazily-rooted representation; exact in all four families.
inline PreRoot oplus_preroot(const LiftOperator& op, const Rat& p, const PreRoot& x,
                             const PreRoot& y) {
  require_interior(p, "oplus probability");
  switch (op.tag) {
    case LiftOperator::Tag::Standard:
      if (x.index != 1 || y.index != 1) throw std::logic_error("standard oplus on rooted value");
      return PreRoot{p * x.radicand + (1 - p) * y.radicand, 1};
    case LiftOperator::Tag::Max:
      if (x.index != 1 || y.index != 1) throw std::logic_error("max oplus on rooted value");
      return PreRoot{rat_max(x.radicand, y.radicand), 1};
    case LiftOperator::Tag::PowerMean: {
      // normalize both sides to (.)^(1/k); plain rationals are raised
      auto lift_arg = [&](const PreRoot& v) -> Rat {
        if (v.index == op.k) return v.radicand;
        if (v.index == 1) return rat_pow(v.radicand, op.k);
        throw std::logic_error("power mean oplus on incompatible root index");
      };
      return PreRoot{p * lift_arg(x) + (1 - p) * lift_arg(y), Int(op.k)};
    }
    case LiftOperator::Tag::Geometric: {
      if (x.radicand == 0 || y.radicand == 0) return PreRoot::zero();
      // x^(1/ix) ^ p * y^(1/iy) ^ (1-p) with p = pn/pd, as one radical
      Int pn = rat_num(p), pd = rat_den(p);
      Int la = pd * x.index, lb = pd * y.index;
      Int l = int_lcm(la, lb);
      Int ea = pn * (l / la), eb = (pd - pn) * (l / lb);
      Int g = boost::multiprecision::gcd(boost::multiprecision::gcd(ea, eb), l);
      ea /= g; eb /= g; l /= g;
      Rat radicand = rat_pow(x.radicand, ea.convert_to<unsigned long>()) *
                     rat_pow(y.radicand, eb.convert_to<unsigned long>());
      return PreRoot{radicand, l};
    }
  }
  throw std::logic_error("unreachable");
}

// Binary table formula on [0,1] values.
inline LiftValue oplus(const LiftOperator& op, const Rat& p, const Rat& x, const Rat& y,
                       const Rat& precision = default_precision()) {
  if (x < 0 || x > 1 || y < 0 || y > 1) throw domain_error("oplus argument outside [0,1]");
  return preroot_to_value(oplus_preroot(op, p, PreRoot::of(x), PreRoot::of(y)), precision);
}

// V_d(gamma) in the lazily-rooted representation (exact up to one final root):
//   standard:      sum gamma * d
//   max:           max d over supp(gamma)
//   power mean k:  (sum gamma * d^k)^(1/k)
//   geometric:     prod d^gamma, i.e. (prod d^n_i)^(1/D) over a common
//                  denominator D of the masses; 0 if any support cell has d=0
inline PreRoot evaluate_preroot(const LiftOperator& op, const FuzzyRelation& d,
                                const Coupling& g) {
  if (g.mass().empty()) throw domain_error("evaluate: empty coupling");
  for (auto& [cell, w] : g.mass())
    if (!d.contains(cell.first) || !d.contains(cell.second))
      throw domain_error("evaluate: coupling support outside carrier");

  switch (op.tag) {
    case LiftOperator::Tag::Standard: {
      Rat acc = 0;
      for (auto& [cell, w] : g.mass()) acc += w * d.at(cell.first, cell.second);
      return PreRoot{acc, 1};
    }
    case LiftOperator::Tag::Max: {
      Rat best = 0;
      for (auto& [cell, w] : g.mass()) best = rat_max(best, d.at(cell.first, cell.second));
      return PreRoot{best, 1};
    }
    case LiftOperator::Tag::PowerMean: {
      Rat acc = 0;
      for (auto& [cell, w] : g.mass()) acc += w * rat_pow(d.at(cell.first, cell.second), op.k);
      if (op.k == 1) return PreRoot{acc, 1};
      return PreRoot{acc, Int(op.k)};
    }
    case LiftOperator::Tag::Geometric: {
      Int denom = 1;
      for (auto& [cell, w] : g.mass()) {
        if (d.at(cell.first, cell.second) == 0) return PreRoot::zero();
        denom = int_lcm(denom, rat_den(w));
      }
      Rat radicand = 1;
      for (auto& [cell, w] : g.mass()) {
        Int e = rat_num(w) * (denom / rat_den(w));
        radicand *= rat_pow(d.at(cell.first, cell.second), e.convert_to<unsigned long>());
      }
      return PreRoot{radicand, denom};
    }
  }
  throw std::logic_error("unreachable");
}

inline LiftValue evaluate(const LiftOperator& op, const FuzzyRelation& d, const Coupling& g,
                          const Rat& precision = default_precision()) {
  return preroot_to_value(evaluate_preroot(op, d, g), precision);
}

// --------------------------------------------------- vertex enumeration oracle

namespace detail {

// Solves M x = rhs exactly. Returns the solution iff it exists and is unique.
inline std::optional<std::vector<Rat>> solve_unique(std::vector<std::vector<Rat>> M,
                                                    std::vector<Rat> rhs) {
  std::size_t rows = M.size(), cols = rows ? M[0].size() : 0;
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t sel = r;
    while (sel < rows && M[sel][c] == 0) ++sel;
    if (sel == rows) continue;
    std::swap(M[sel], M[r]);
    std::swap(rhs[sel], rhs[r]);
    Rat piv = M[r][c];
    for (auto& v : M[r]) v /= piv;
    rhs[r] /= piv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || M[i][c] == 0) continue;
      Rat f = M[i][c];
      for (std::size_t j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
      rhs[i] -= f * rhs[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < rows; ++i)
    if (rhs[i] != 0) return std::nullopt;  // inconsistent
  if (pivot_col.size() < cols) return std::nullopt;  // underdetermined
  std::vector<Rat> x(cols);
  for (std::size_t i = 0; i < cols; ++i) x[pivot_col[i]] = rhs[i];
  return x;
}

struct CellGrid {
  std::vector<VarName> rows, cols;
  std::vector<Coupling::Cell> cells;  // row-major, carrier iteration order

  CellGrid(const Distribution& mu, const Distribution& nu) {
    for (auto& [a, _] : mu.weights()) rows.push_back(a);
    for (auto& [b, _] : nu.weights()) cols.push_back(b);
    for (auto& a : rows)
      for (auto& b : cols) cells.emplace_back(a, b);
  }
};

}  // namespace detail

// All vertices of the transportation polytope Gamma(mu, nu), by brute force
// over cell subsets of size <= m+n-1 with a unique nonnegative solution.
// Oracle guard: |supp(mu)| * |supp(nu)| <= 20.
inline std::vector<Coupling> enumerate_vertices(const Distribution& mu, const Distribution& nu) {
  detail::CellGrid grid(mu, nu);
  std::size_t m = grid.rows.size(), n = grid.cols.size();
  std::size_t ncells = m * n;
  if (ncells > 20) throw domain_error("enumerate_vertices: guard |supp|*|supp| <= 20 exceeded");

  std::size_t max_size = m + n - 1;
  std::set<std::map<Coupling::Cell, Rat>> seen;
  std::vector<Coupling> out;

  for (std::uint32_t mask = 1; mask < (1u << ncells); ++mask) {
    if (std::size_t(__builtin_popcount(mask)) > max_size) continue;
    // a coupling support must touch every row and every column
    std::uint32_t rows_hit = 0, cols_hit = 0;
    for (std::size_t i = 0; i < ncells; ++i)
      if (mask & (1u << i)) {
        rows_hit |= 1u << (i / n);
        cols_hit |= 1u << (i % n);
      }
    if (rows_hit != (1u << m) - 1 || cols_hit != (1u << n) - 1) continue;
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < ncells; ++i)
      if (mask & (1u << i)) chosen.push_back(i);

    // incidence system: one equation per row and column marginal
    std::vector<std::vector<Rat>> M(m + n, std::vector<Rat>(chosen.size(), Rat(0)));
    std::vector<Rat> rhs(m + n);
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      M[chosen[j] / n][j] = 1;
      M[m + chosen[j] % n][j] = 1;
    }
    std::size_t idx = 0;
    for (auto& [_, w] : mu.weights()) rhs[idx++] = w;
    for (auto& [_, w] : nu.weights()) rhs[idx++] = w;

    auto sol = detail::solve_unique(M, rhs);
    if (!sol) continue;
    bool feasible = true;
    std::map<Coupling::Cell, Rat> mass;
    for (std::size_t j = 0; j < chosen.size(); ++j) {
      if ((*sol)[j] < 0) {
        feasible = false;
        break;
      }
      if ((*sol)[j] > 0) mass[grid.cells[chosen[j]]] = (*sol)[j];
    }
    if (!feasible || !seen.insert(mass).second) continue;
    out.emplace_back(std::move(mass), mu, nu);
  }
  return out;
}

// --------------------------------------------------------- transportation LP

// Vertex-optimal basic solution of min sum costs*gamma over Gamma(mu, nu),
// exact rational arithmetic, Bland pivoting. costs is indexed by the cells of
// supp(mu) x supp(nu) in carrier iteration (row-major) order.
inline Coupling transportation_lp(const std::vector<Rat>& costs, const Distribution& mu,
                                  const Distribution& nu) {
  detail::CellGrid grid(mu, nu);
  std::size_t m = grid.rows.size(), n = grid.cols.size();
  if (costs.size() != m * n) throw domain_error("transportation_lp: cost size mismatch");

  // row and column marginal equations; the last column equation is redundant
  std::size_t rows = m + n - 1;
  std::vector<std::vector<Rat>> A(rows, std::vector<Rat>(m * n, Rat(0)));
  std::vector<Rat> b(rows);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      A[i][i * n + j] = 1;
      if (j + 1 < n) A[m + j][i * n + j] = 1;
    }
  std::size_t idx = 0;
  for (auto& [_, w] : mu.weights()) b[idx++] = w;
  for (auto& [_, w] : nu.weights()) {
    if (idx == rows) break;
    b[idx++] = w;
  }

  auto sol = Simplex::minimize(A, b, costs);
  if (!sol) throw std::logic_error("transportation polytope reported infeasible");
  std::map<Coupling::Cell, Rat> mass;
  for (std::size_t i = 0; i < m * n; ++i)
    if (sol->x[i] > 0) mass[grid.cells[i]] = sol->x[i];
  return Coupling(std::move(mass), mu, nu);
}

// ------------------------------------------------------------------- lifting

namespace detail {

// Feasibility of a coupling supported on cells with d <= theta, decided by
// integer max flow on marginals scaled by the lcm of their denominators.
inline std::optional<Coupling> bottleneck_feasible(const FuzzyRelation& d, const Distribution& mu,
                                                   const Distribution& nu, const Rat& theta) {
  CellGrid grid(mu, nu);
  std::size_t m = grid.rows.size(), n = grid.cols.size();
  Int scale = 1;
  for (auto& [_, w] : mu.weights()) scale = int_lcm(scale, rat_den(w));
  for (auto& [_, w] : nu.weights()) scale = int_lcm(scale, rat_den(w));

  // nodes: 0 = source, 1..m rows, m+1..m+n cols, m+n+1 = sink
  MaxFlow flow(m + n + 2);
  std::size_t sink = m + n + 1;
  Int total = 0;
  std::vector<Int> row_cap(m), col_cap(n);
  for (std::size_t i = 0; i < m; ++i) {
    Rat w = mu.at(grid.rows[i]);
    row_cap[i] = rat_num(w) * (scale / rat_den(w));
    flow.add_edge(0, 1 + i, row_cap[i]);
    total += row_cap[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    Rat w = nu.at(grid.cols[j]);
    col_cap[j] = rat_num(w) * (scale / rat_den(w));
    flow.add_edge(m + 1 + j, sink, col_cap[j]);
  }
  std::vector<std::vector<bool>> open(m, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (d.at(grid.rows[i], grid.cols[j]) <= theta) {
        open[i][j] = true;
        flow.add_edge(1 + i, m + 1 + j, total);
      }
  if (flow.run(0, sink) != total) return std::nullopt;
  std::map<Coupling::Cell, Rat> mass;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (open[i][j]) {
        Int f = flow.flow_on(1 + i, m + 1 + j, total);
        if (f > 0) mass[grid.cells[i * n + j]] = Rat(f, scale);
      }
  return Coupling(std::move(mass), mu, nu);
}

}  // namespace detail

struct LiftResult {
  LiftValue value;
  Coupling witness;
  PreRoot value_preroot;  // exact pre-root form of the optimum
};

// K^op(d)(mu, nu): minimum of the evaluation over the transportation polytope,
// with an optimal coupling witness.
//   standard / power mean k: transportation LP on costs d resp. d^k
//   max: smallest threshold among distinct d-values admitting a feasible
//        coupling on cells with d <= theta (exact max-flow feasibility)
//   geometric: 0 via any coupling charging a d=0 cell if one exists; else an
//              exact ranking of vertices when the enumeration guard allows,
//              falling back to an LP on dyadic approximations of ln d whose
//              answer is certified by exact re-evaluation
inline LiftResult lift(const LiftOperator& op, const FuzzyRelation& d, const Distribution& mu,
                       const Distribution& nu, const Rat& precision = default_precision()) {
  for (auto& [a, _] : mu.weights())
    if (!d.contains(a)) throw domain_error("supp(mu) outside carrier: " + a);
  for (auto& [b, _] : nu.weights())
    if (!d.contains(b)) throw domain_error("supp(nu) outside carrier: " + b);

  detail::CellGrid grid(mu, nu);
  std::size_t ncells = grid.cells.size();

  auto finish = [&](Coupling witness) {
    PreRoot v = evaluate_preroot(op, d, witness);
    return LiftResult{preroot_to_value(v, precision), std::move(witness), v};
  };

  switch (op.tag) {
    case LiftOperator::Tag::Standard:
    case LiftOperator::Tag::PowerMean: {
      std::vector<Rat> costs;
      costs.reserve(ncells);
      for (auto& cell : grid.cells) costs.push_back(rat_pow(d.at(cell.first, cell.second), op.k));
      return finish(transportation_lp(costs, mu, nu));
    }
    case LiftOperator::Tag::Max: {
      std::set<Rat> thresholds;
      for (auto& cell : grid.cells) thresholds.insert(d.at(cell.first, cell.second));
      for (auto& theta : thresholds) {
        auto g = detail::bottleneck_feasible(d, mu, nu, theta);
        if (g) return finish(std::move(*g));
      }
      throw std::logic_error("bottleneck: no feasible threshold");  // unreachable
    }
    case LiftOperator::Tag::Geometric: {
      for (auto& cell : grid.cells)
        if (d.at(cell.first, cell.second) == 0)
          return finish(product_coupling(mu, nu));  // product charges the zero cell
      if (ncells <= 20) {
        // exact route: rank all vertices by cross-powered product comparison
        auto vertices = enumerate_vertices(mu, nu);
        std::size_t best = 0;
        PreRoot best_val = evaluate_preroot(op, d, vertices[0]);
        for (std::size_t i = 1; i < vertices.size(); ++i) {
          PreRoot v = evaluate_preroot(op, d, vertices[i]);
          if (preroot_cmp(v, best_val) < 0) {
            best = i;
            best_val = v;
          }
        }
        return finish(std::move(vertices[best]));
      }
      // large instances: LP over dyadic approximations of ln d. The returned
      // vertex is a valid coupling and its exact evaluation is a certified
      // upper bound; optimality holds up to the dyadic cost error.
      const int bits = 96;
      Int scale = Int(1) << bits;
      std::vector<Rat> costs;
      costs.reserve(ncells);
      for (auto& cell : grid.cells) {
        const Rat& dist = d.at(cell.first, cell.second);
        BigFloat l = boost::multiprecision::log(BigFloat(rat_num(dist))) -
                     boost::multiprecision::log(BigFloat(rat_den(dist)));
        costs.push_back(Rat((l * BigFloat(scale)).convert_to<Int>(), scale));
      }
      return finish(transportation_lp(costs, mu, nu));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace liftcert
