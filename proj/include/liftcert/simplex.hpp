#pragma once

#include <optional>
#include <vector>

#include "liftcert/rational.hpp"

namespace liftcert {

// Two-phase dense tableau simplex over exact rationals with Bland's rule
// (smallest-index entering and leaving variable), which excludes cycling.
//
// Solves: min c.x  s.t.  A x = b, x >= 0, with b >= 0 required.
struct SimplexSolution {
  Rat value;
  std::vector<Rat> x;
};

class Simplex {
 public:
  // Returns nullopt when infeasible (never happens for transportation data).
  static std::optional<SimplexSolution> minimize(const std::vector<std::vector<Rat>>& A,
                                                 const std::vector<Rat>& b,
                                                 const std::vector<Rat>& c) {
    std::size_t m = A.size(), n = c.size();
    for (auto& bi : b)
      if (bi < 0) throw std::invalid_argument("simplex: negative rhs");

    // tableau: m rows of n structural + m artificial columns, plus rhs
    std::size_t total = n + m;
    std::vector<std::vector<Rat>> T(m, std::vector<Rat>(total + 1, Rat(0)));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
      T[i][n + i] = 1;
      T[i][total] = b[i];
      basis[i] = n + i;
    }

    // phase 1: minimize the sum of artificials
    std::vector<Rat> cost1(total, Rat(0));
    for (std::size_t j = n; j < total; ++j) cost1[j] = 1;
    Rat phase1 = run(T, basis, cost1, total);
    if (phase1 != 0) return std::nullopt;

    // pivot remaining artificials out of the basis (degenerate rows)
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < n) continue;
      std::size_t j = 0;
      for (; j < n; ++j)
        if (T[i][j] != 0) break;
      if (j < n) pivot(T, basis, i, j, total);
      // an all-zero structural row is redundant; its artificial stays basic
      // at value zero and never re-enters because phase 2 freezes it
    }

    // phase 2 on the structural cost, artificials barred from entering
    std::vector<Rat> cost2(total, Rat(0));
    for (std::size_t j = 0; j < n; ++j) cost2[j] = c[j];
    Rat value = run(T, basis, cost2, n);

    std::vector<Rat> x(n, Rat(0));
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] < n) x[basis[i]] = T[i].back();
    return SimplexSolution{value, std::move(x)};
  }

 private:
  static void pivot(std::vector<std::vector<Rat>>& T, std::vector<std::size_t>& basis,
                    std::size_t row, std::size_t col, std::size_t total) {
    Rat piv = T[row][col];
    for (auto& v : T[row]) v /= piv;
    for (std::size_t i = 0; i < T.size(); ++i) {
      if (i == row || T[i][col] == 0) continue;
      Rat f = T[i][col];
      for (std::size_t j = 0; j <= total; ++j) T[i][j] -= f * T[row][j];
    }
    basis[row] = col;
  }

  // Bland pivoting until optimal; columns >= enter_limit may not enter.
  static Rat run(std::vector<std::vector<Rat>>& T, std::vector<std::size_t>& basis,
                 const std::vector<Rat>& cost, std::size_t enter_limit) {
    std::size_t m = T.size();
    std::size_t total = cost.size();
    while (true) {
      // reduced costs from the basis rows
      std::size_t enter = total;
      for (std::size_t j = 0; j < enter_limit; ++j) {
        Rat red = cost[j];
        for (std::size_t i = 0; i < m; ++i)
          if (T[i][j] != 0) red -= cost[basis[i]] * T[i][j];
        if (red < 0) {
          enter = j;
          break;
        }
      }
      if (enter == total) break;
      // min-ratio leave, ties by smallest basic variable index
      std::size_t leave = m;
      Rat best;
      for (std::size_t i = 0; i < m; ++i) {
        if (T[i][enter] <= 0) continue;
        Rat ratio = T[i][total] / T[i][enter];
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) throw std::logic_error("simplex: unbounded");
      pivot(T, basis, leave, enter, total);
    }
    Rat obj = 0;
    for (std::size_t i = 0; i < m; ++i) obj += cost[basis[i]] * T[i][total];
    return obj;
  }
};

// Edmonds-Karp max flow on a small dense graph with big-integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t n) : n_(n), cap_(n, std::vector<Int>(n, 0)) {}

  void add_edge(std::size_t u, std::size_t v, const Int& c) { cap_[u][v] += c; }

  Int run(std::size_t s, std::size_t t) {
    Int flow = 0;
    while (true) {
      std::vector<std::size_t> parent(n_, n_);
      parent[s] = s;
      std::vector<std::size_t> queue{s};
      for (std::size_t qi = 0; qi < queue.size() && parent[t] == n_; ++qi) {
        std::size_t u = queue[qi];
        for (std::size_t v = 0; v < n_; ++v)
          if (parent[v] == n_ && cap_[u][v] > 0) {
            parent[v] = u;
            queue.push_back(v);
          }
      }
      if (parent[t] == n_) break;
      Int aug = -1;
      for (std::size_t v = t; v != s; v = parent[v]) {
        const Int& c = cap_[parent[v]][v];
        if (aug < 0 || c < aug) aug = c;
      }
      for (std::size_t v = t; v != s; v = parent[v]) {
        cap_[parent[v]][v] -= aug;
        cap_[v][parent[v]] += aug;
      }
      flow += aug;
    }
    return flow;
  }

  // Net flow pushed along the directed edge (u,v), given the original capacity.
  Int flow_on(std::size_t u, std::size_t v, const Int& original_cap) const {
    return original_cap - cap_[u][v];
  }

 private:
  std::size_t n_;
  std::vector<std::vector<Int>> cap_;
};

}  // namespace liftcert
