#include <doctest.h>

#include "liftcert/fuzzy.hpp"

using namespace liftcert;

namespace {

// a symmetric three-point pseudometric: d(a,b)=1/5, d(a,c)=2/5, d(b,c)=3/10
FuzzyRelation metric_space() {
  return FuzzyRelation({"a", "b", "c"},
                       {{Rat(0), Rat(1, 5), Rat(2, 5)},
                        {Rat(1, 5), Rat(0), Rat(3, 10)},
                        {Rat(2, 5), Rat(3, 10), Rat(0)}});
}

}  // namespace

TEST_CASE("fuzzy relations validate their matrix") {
  FuzzyRelation d = metric_space();
  CHECK(d.size() == 3);
  CHECK(d.at("a", "b") == Rat(1, 5));
  CHECK(d.index_of("c") == 2);
  CHECK(d.contains("b"));
  CHECK_FALSE(d.contains("z"));
  CHECK_THROWS_AS(FuzzyRelation({"a"}, {{Rat(2)}}), domain_error);
  CHECK_THROWS_AS(FuzzyRelation({"a", "a"}, {{Rat(0), Rat(0)}, {Rat(0), Rat(0)}}), domain_error);
  CHECK_THROWS_AS(FuzzyRelation({"a", "b"}, {{Rat(0)}}), domain_error);
}

TEST_CASE("pseudometric recognition") {
  CHECK(is_pseudometric(metric_space()));
  CHECK(is_pseudometric(discrete({"x", "y"})) == false);  // self-distance 1

  // asymmetric relation is not a pseudometric
  FuzzyRelation asym({"a", "b"}, {{Rat(0), Rat(1, 5)}, {Rat(1), Rat(0)}});
  CHECK_FALSE(is_pseudometric(asym));

  // triangle violation: d(a,c) = 1 > 1/5 + 3/10
  FuzzyRelation tri({"a", "b", "c"},
                    {{Rat(0), Rat(1, 5), Rat(1)},
                     {Rat(1, 5), Rat(0), Rat(3, 10)},
                     {Rat(1), Rat(3, 10), Rat(0)}});
  CHECK_FALSE(is_pseudometric(tri));

  // clamped triangle: sums above 1 never violate
  FuzzyRelation clamp({"a", "b", "c"},
                      {{Rat(0), Rat(3, 4), Rat(1)},
                       {Rat(3, 4), Rat(0), Rat(3, 4)},
                       {Rat(1), Rat(3, 4), Rat(0)}});
  CHECK(is_pseudometric(clamp));
}

TEST_CASE("1-Lipschitz map enumeration") {
  // maps out of the discrete context are unconstrained
  FuzzyRelation d1 = discrete({"b1", "b2"});
  FuzzyRelation target = metric_space();
  CHECK(lipschitz_maps(d1, target).size() == 9);

  // the symmetry-example context d(b1,b2) = 3/10 over an asymmetric target:
  // besides maps through pairs at distance <= 3/10, constant maps qualify
  FuzzyRelation ctx({"b1", "b2"}, {{Rat(1), Rat(3, 10)}, {Rat(1), Rat(1)}});
  FuzzyRelation tgt({"a1", "a2"}, {{Rat(0), Rat(1)}, {Rat(3, 10), Rat(0)}});
  auto maps = lipschitz_maps(ctx, tgt);
  // candidates: (a1,a1), (a2,a2), (a2,a1) qualify; (a1,a2) has d(a1,a2)=1 > 3/10
  CHECK(maps.size() == 3);
  for (auto& f : maps) CHECK(is_lipschitz(ctx, tgt, f));
  bool found_cross = false;
  for (auto& f : maps)
    if (f[0] == 1 && f[1] == 0) found_cross = true;
  CHECK(found_cross);
}
