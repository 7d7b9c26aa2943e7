#include <doctest.h>

#include "liftcert/theories.hpp"
#include "test_util.hpp"

using namespace liftcert;

namespace {

// the symmetry equation family phi_eps: forall ({b1,b2}, d(b1,b2)=eps,
// others 1). b2 =_eps b1
QuantEquation phi(const Rat& eps) {
  FuzzyRelation ctx({"b1", "b2"}, {{Rat(1), eps}, {Rat(1), Rat(1)}});
  return QuantEquation::eq_eps(ctx, ConvexTerm::leaf("b2"), ConvexTerm::leaf("b1"), eps);
}

}  // namespace

TEST_CASE("ica_axiom instantiates the interpolative scheme") {
  QuantEquation ax = ica_axiom(LiftOperator::standard(), Rat(1, 2), Rat(1, 5), Rat(2, 5));
  CHECK(ax.is_eps);
  CHECK(ax.eps == Rat(3, 10));
  CHECK(ax.context.at("x", "w") == Rat(1, 5));
  CHECK(ax.context.at("y", "z") == Rat(2, 5));
  CHECK(ax.context.at("x", "y") == 1);
  CHECK(term_to_string(ax.lhs) == "(x +_{1/2} y)");

  // max with equal distances keeps the common value
  CHECK(ica_axiom(LiftOperator::max(), Rat(1, 3), Rat(2, 5), Rat(2, 5)).eps == Rat(2, 5));
  // 1 oplus_p 1 = 1 in every family
  for (auto op : {LiftOperator::standard(), LiftOperator::max(), LiftOperator::power_mean(2),
                  LiftOperator::geometric()})
    CHECK(ica_axiom(op, Rat(1, 2), Rat(1), Rat(1)).eps == 1);
  CHECK_THROWS_AS(ica_axiom(LiftOperator::standard(), Rat(1, 2), Rat(2), Rat(0)), domain_error);
}

TEST_CASE("finite-model satisfaction") {
  // a context demanding self-distance 0 has no 1-Lipschitz map into a model
  // whose only point has self-distance 1, so any equation holds trivially
  FuzzyRelation zero_ctx({"b1", "b2"}, {{Rat(0), Rat(0)}, {Rat(0), Rat(0)}});
  Model spiky{FuzzyRelation({"u"}, {{Rat(1)}}), {}};
  CHECK(satisfies(spiky, QuantEquation::eq(zero_ctx, ConvexTerm::leaf("b1"),
                                           ConvexTerm::leaf("b2"))));

  // the asymmetric two-point example: phi_{3/10} fails via iota = (a2, a1)
  Model asym{FuzzyRelation({"a1", "a2"}, {{Rat(0), Rat(1)}, {Rat(3, 10), Rat(0)}}), {}};
  CHECK_FALSE(satisfies(asym, phi(Rat(3, 10))));
  // ... and holds at bounds below every asymmetry witness
  CHECK(satisfies(asym, phi(Rat(1, 5))));

  // phi_eps holds for every eps exactly on symmetric distance matrices
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    FuzzyRelation d = testutil::rand_relation(rng, 3);
    bool symmetric = true;
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < d.size(); ++j)
        if (d.at(i, j) != d.at(j, i)) symmetric = false;
    Model m{d, {}};
    bool all = true;
    // entry denominators are <= 10, so this eps sweep hits every matrix
    // entry and therefore detects any asymmetric pair
    for (int den = 1; den <= 10; ++den)
      for (int num = 0; num <= den; ++num)
        if (!satisfies(m, phi(Rat(num, den)))) all = false;
    CHECK(all == symmetric);
  }
}

TEST_CASE("models evaluate operation tables") {
  // two-point model with a "left projection" 1/2-operation
  FuzzyRelation sp({"u", "v"}, {{Rat(0), Rat(1, 2)}, {Rat(1, 2), Rat(0)}});
  Model m{sp, {{Rat(1, 2), {{0, 0}, {1, 1}}}}};
  FuzzyRelation ctx = discrete({"b1", "b2"});
  ConvexTerm mix = ConvexTerm::combine(Rat(1, 2), ConvexTerm::leaf("b1"), ConvexTerm::leaf("b2"));
  // b1 +_1/2 b2 = b1 under left projection, for every interpretation
  CHECK(satisfies(m, QuantEquation::eq(ctx, mix, ConvexTerm::leaf("b1"))));
  CHECK_FALSE(satisfies(m, QuantEquation::eq(ctx, mix, ConvexTerm::leaf("b2"))));
  // missing table
  ConvexTerm other = ConvexTerm::combine(Rat(1, 3), ConvexTerm::leaf("b1"), ConvexTerm::leaf("b2"));
  CHECK_THROWS_AS(satisfies(m, QuantEquation::eq(ctx, other, ConvexTerm::leaf("b1"))),
                  domain_error);
}

TEST_CASE("lifted algebras model the interpolative axioms") {
  std::mt19937 rng(17);
  FuzzyRelation d({"a", "b"}, {{Rat(0), Rat(2, 5)}, {Rat(2, 5), Rat(0)}});
  // candidate distributions over {a, b}
  std::vector<Distribution> cands = {
      Distribution::dirac("a"), Distribution::dirac("b"),
      Distribution({{"a", Rat(1, 2)}, {"b", Rat(1, 2)}}),
      Distribution({{"a", Rat(1, 4)}, {"b", Rat(3, 4)}})};
  for (auto op : {LiftOperator::standard(), LiftOperator::max()}) {
    for (int trial = 0; trial < 3; ++trial) {
      Rat p = testutil::rand_prob(rng, 6);
      Rat eps = testutil::rand_unit(rng, 6), delta = testutil::rand_unit(rng, 6);
      QuantEquation ax = ica_axiom(op, p, eps, delta);
      CHECK(lifted_satisfies(op, d, ax, cands));
    }
  }
}

TEST_CASE("two-zeros model realizes the displayed relations") {
  std::vector<Rat> grid;
  for (int i = 1; i <= 4; ++i) grid.emplace_back(1, Int(1) << i);
  RelationalModel m = two_zeros_model(grid);
  CHECK(m.carrier.size() == 6);
  std::size_t z0 = m.index_of("0"), z1 = m.index_of("0'");

  for (std::size_t a = 1; a < m.levels.size(); ++a) CHECK(m.related(m.levels[a], z0, z1));
  CHECK_FALSE(m.related(Rat(0), z0, z1));
  // |1/4 - 1/2| = 1/4 <= 1/4
  CHECK(m.related(Rat(1, 4), m.index_of("1/4"), m.index_of("1/2")));
  CHECK_FALSE(m.related(Rat(1, 8), m.index_of("1/4"), m.index_of("1/2")));
  // (0, delta) for delta <= eps
  CHECK(m.related(Rat(1, 4), z0, m.index_of("1/8")));
  CHECK_FALSE(m.related(Rat(1, 16), z0, m.index_of("1/8")));

  CHECK_THROWS_AS(two_zeros_model({Rat(3, 2)}), domain_error);
}

TEST_CASE("the finitary rules hold while the limit instance fails") {
  std::vector<Rat> grid;
  for (int i = 1; i <= 10; ++i) grid.emplace_back(1, Int(1) << i);
  RelationalModel m = two_zeros_model(grid);
  TheoryReport rep = model_respects_finitary_rules(m);
  CHECK(rep.weakening_ok);
  CHECK(rep.self_distance_ok);
  CHECK(rep.symmetry_ok);
  CHECK(rep.triangle_ok);
  CHECK(rep.triangle_instances > 0);
  CHECK(rep.noncompact_witness);
  CHECK(rep.violations.empty());
}

TEST_CASE("equations and models round-trip through JSON") {
  QuantEquation eq = phi(Rat(3, 10));
  Json j = equation_to_json(eq);
  QuantEquation back = equation_from_json(j);
  CHECK(back.context == eq.context);
  CHECK(back.lhs == eq.lhs);
  CHECK(back.eps == eq.eps);

  FuzzyRelation sp({"u", "v"}, {{Rat(0), Rat(1, 2)}, {Rat(1, 2), Rat(0)}});
  Model m{sp, {{Rat(1, 2), {{0, 1}, {1, 0}}}}};
  Model back_m = model_from_json(model_to_json(m));
  CHECK(back_m.space == m.space);
  CHECK(back_m.ops == m.ops);
}
