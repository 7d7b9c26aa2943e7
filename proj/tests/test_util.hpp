#pragma once

// Deterministic random generators shared by the test suites. Fixed seeds and
// std::mt19937 keep every run byte-identical.

#include <random>
#include <string>
#include <vector>

#include "liftcert/fuzzy.hpp"
#include "liftcert/terms.hpp"

namespace testutil {

using namespace liftcert;

inline std::vector<std::string> letters(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, char('a' + i)));
  return out;
}

// rational in [0,1] with denominator <= max_den
inline Rat rand_unit(std::mt19937& rng, int max_den = 10) {
  std::uniform_int_distribution<int> den_pick(1, max_den);
  int den = den_pick(rng);
  std::uniform_int_distribution<int> num_pick(0, den);
  return Rat(num_pick(rng), den);
}

inline FuzzyRelation rand_relation(std::mt19937& rng, std::size_t n, int max_den = 10) {
  std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n));
  for (auto& row : m)
    for (auto& v : row) v = rand_unit(rng, max_den);
  return FuzzyRelation(letters(n), m);
}

// symmetric zero-diagonal matrix closed under shortest paths: a pseudometric
inline FuzzyRelation rand_pseudometric(std::mt19937& rng, std::size_t n, int max_den = 10) {
  std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n, Rat(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m[i][j] = m[j][i] = rand_unit(rng, max_den);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (m[i][k] + m[k][j] < m[i][j]) m[i][j] = m[i][k] + m[k][j];
  return FuzzyRelation(letters(n), m);
}

// distribution over a random subset of the carrier, 1 <= |supp| <= max_supp
inline Distribution rand_dist(std::mt19937& rng, const std::vector<std::string>& carrier,
                              std::size_t max_supp) {
  std::vector<std::size_t> idx(carrier.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);
  std::uniform_int_distribution<std::size_t> size_pick(1, std::min(max_supp, carrier.size()));
  std::size_t k = size_pick(rng);
  std::uniform_int_distribution<int> w_pick(1, 6);
  std::map<VarName, Rat> w;
  Rat total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    Rat v(w_pick(rng));
    w[carrier[idx[i]]] += v;
    total += v;
  }
  for (auto& [_, v] : w) v /= total;
  return Distribution(w);
}

// probability strictly inside (0,1), denominator <= max_den
inline Rat rand_prob(std::mt19937& rng, int max_den = 10) {
  std::uniform_int_distribution<int> den_pick(2, max_den);
  int den = den_pick(rng);
  std::uniform_int_distribution<int> num_pick(1, den - 1);
  return Rat(num_pick(rng), den);
}

}  // namespace testutil
