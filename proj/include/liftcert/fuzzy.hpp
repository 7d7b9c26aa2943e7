#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "liftcert/rational.hpp"
#include "liftcert/terms.hpp"

namespace liftcert {

// Finite fuzzy relation (A, d): an ordered carrier and a total distance
// matrix into [0,1]. No metric axioms are imposed.
class FuzzyRelation {
 public:
  FuzzyRelation() = default;
  FuzzyRelation(std::vector<std::string> carrier, std::vector<std::vector<Rat>> dist)
      : carrier_(std::move(carrier)), dist_(std::move(dist)) {
    if (carrier_.empty()) throw domain_error("empty carrier");
    if (dist_.size() != carrier_.size()) throw domain_error("distance matrix row count mismatch");
    for (auto& row : dist_) {
      if (row.size() != carrier_.size()) throw domain_error("distance matrix column count mismatch");
      for (auto& v : row)
        if (v < 0 || v > 1) throw domain_error("distance entry outside [0,1]");
    }
    for (std::size_t i = 0; i < carrier_.size(); ++i)
      for (std::size_t j = i + 1; j < carrier_.size(); ++j)
        if (carrier_[i] == carrier_[j]) throw domain_error("duplicate carrier name " + carrier_[i]);
  }

  const std::vector<std::string>& carrier() const { return carrier_; }
  std::size_t size() const { return carrier_.size(); }

  std::size_t index_of(const std::string& name) const {
    auto it = std::find(carrier_.begin(), carrier_.end(), name);
    if (it == carrier_.end()) throw domain_error("name not in carrier: " + name);
    return std::size_t(it - carrier_.begin());
  }
  bool contains(const std::string& name) const {
    return std::find(carrier_.begin(), carrier_.end(), name) != carrier_.end();
  }

  const Rat& at(std::size_t i, std::size_t j) const { return dist_[i][j]; }
  const Rat& at(const std::string& a, const std::string& b) const {
    return dist_[index_of(a)][index_of(b)];
  }

  bool operator==(const FuzzyRelation& o) const {
    return carrier_ == o.carrier_ && dist_ == o.dist_;
  }
  bool operator!=(const FuzzyRelation& o) const { return !(*this == o); }

 private:
  std::vector<std::string> carrier_;
  std::vector<std::vector<Rat>> dist_;
};

// d_1: every distance equals 1, so every map out of it is 1-Lipschitz.
inline FuzzyRelation discrete(std::vector<std::string> carrier) {
  if (carrier.empty()) throw domain_error("empty carrier");
  std::vector<std::vector<Rat>> dist(carrier.size(), std::vector<Rat>(carrier.size(), Rat(1)));
  return FuzzyRelation(std::move(carrier), std::move(dist));
}

// Symmetry, zero self-distance, and d(a,c) <= min(1, d(a,b)+d(b,c)).
inline bool is_pseudometric(const FuzzyRelation& d) {
  std::size_t n = d.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (d.at(i, i) != 0) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (d.at(i, j) != d.at(j, i)) return false;
      for (std::size_t k = 0; k < n; ++k)
        if (d.at(i, k) > rat_min(Rat(1), d.at(i, j) + d.at(j, k))) return false;
    }
  }
  return true;
}

// f encoded as f[i] = index in dst of the image of src.carrier()[i].
using CarrierMap = std::vector<std::size_t>;

inline bool is_lipschitz(const FuzzyRelation& src, const FuzzyRelation& dst, const CarrierMap& f) {
  for (std::size_t i = 0; i < src.size(); ++i)
    for (std::size_t j = 0; j < src.size(); ++j)
      if (dst.at(f[i], f[j]) > src.at(i, j)) return false;
  return true;
}

// Exhaustive enumeration of all 1-Lipschitz maps src -> dst. This is an
// oracle for desk-scale carriers only, guarded at |dst|^|src| <= 10^7.
inline std::vector<CarrierMap> lipschitz_maps(const FuzzyRelation& src, const FuzzyRelation& dst) {
  double count = 1;
  for (std::size_t i = 0; i < src.size(); ++i) {
    count *= double(dst.size());
    if (count > 1e7) throw domain_error("lipschitz_maps: enumeration guard exceeded");
  }
  std::vector<CarrierMap> out;
  CarrierMap f(src.size(), 0);
  while (true) {
    if (is_lipschitz(src, dst, f)) out.push_back(f);
    std::size_t i = 0;
    while (i < f.size()) {
      if (++f[i] < dst.size()) break;
      f[i] = 0;
      ++i;
    }
    if (i == f.size()) break;
  }
  return out;
}

}  // namespace liftcert
