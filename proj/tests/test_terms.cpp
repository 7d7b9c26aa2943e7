#include <doctest.h>

#include "liftcert/terms.hpp"

using namespace liftcert;

TEST_CASE("rationals parse and render canonically") {
  CHECK(parse_rational("3/4") == Rat(3, 4));
  CHECK(parse_rational("6/8") == Rat(3, 4));
  CHECK(parse_rational("0.25") == Rat(1, 4));
  CHECK(parse_rational("1e-12") == Rat(1, Int(1000000000000)));
  CHECK(parse_rational("2.5e-3") == Rat(1, 400));
  CHECK(rat_to_string(Rat(6, 8)) == "3/4");
  CHECK(rat_to_string(Rat(5)) == "5");
  CHECK(rat_to_decimal(Rat(1, 4)) == "0.25");
  CHECK(rat_display(Rat(1, 4)) == "1/4 (= 0.25)");
  CHECK_THROWS_AS(parse_rational("1/0"), parse_error);
  CHECK_THROWS_AS(parse_rational("abc"), parse_error);
}

TEST_CASE("kth_root detects perfect powers and encloses the rest") {
  RootResult r = kth_root(Rat(1, 4), 2, Rat(1, 1000000));
  CHECK(r.exact);
  CHECK(r.lo == Rat(1, 2));
  r = kth_root(Rat(8, 27), 3, Rat(1, 1000000));
  CHECK(r.exact);
  CHECK(r.lo == Rat(2, 3));
  r = kth_root(Rat(1, 2), 2, Rat(1, 1000000));
  CHECK_FALSE(r.exact);
  CHECK(rat_pow(r.lo, 2) <= Rat(1, 2));
  CHECK(rat_pow(r.hi, 2) >= Rat(1, 2));
  CHECK(r.hi - r.lo < Rat(1, Int(1) << 60));
}

TEST_CASE("pre-root comparison is exact across indices") {
  // sqrt(1/2) vs cbrt(1/3): (1/2)^3 = 1/8 vs (1/3)^2 = 1/9, so sqrt(1/2) wins
  CHECK(preroot_cmp(PreRoot{Rat(1, 2), 2}, PreRoot{Rat(1, 3), 3}) > 0);
  CHECK(preroot_eq(PreRoot{Rat(1, 4), 2}, PreRoot{Rat(1, 2), 1}));
  CHECK(preroot_leq(PreRoot{Rat(1, 2), 1}, PreRoot{Rat(1, 2), 2}));
}

TEST_CASE("distributions validate and normalize") {
  Distribution mu({{"a", Rat(1, 2)}, {"b", Rat(1, 2)}, {"c", Rat(0)}});
  CHECK(mu.weights().size() == 2);
  CHECK(mu.at("a") == Rat(1, 2));
  CHECK(mu.at("c") == 0);
  CHECK(Distribution::dirac("x").at("x") == 1);
  CHECK_THROWS_AS(Distribution({{"a", Rat(1, 2)}}), domain_error);
  CHECK_THROWS_AS(Distribution({{"a", Rat(3, 2)}, {"b", Rat(-1, 2)}}), domain_error);
}

TEST_CASE("terms build, print, parse and denote") {
  ConvexTerm t = ConvexTerm::combine(Rat(1, 3), ConvexTerm::leaf("a"), ConvexTerm::leaf("b"));
  CHECK(term_to_string(t) == "(a +_{1/3} b)");
  CHECK(parse_term("(a +_{1/3} b)") == t);
  CHECK(parse_term(" ( a +_{1/3}  b ) ") == t);
  CHECK_THROWS_AS(parse_term("(a +_{1} b)"), domain_error);
  CHECK_THROWS_AS(parse_term("(a +_{1/3} b) junk"), parse_error);

  Distribution d = denote(t);
  CHECK(d.at("a") == Rat(1, 3));
  CHECK(d.at("b") == Rat(2, 3));

  // idempotent mass accumulation: (a +_1/2 a) denotes dirac a
  ConvexTerm idem = ConvexTerm::combine(Rat(1, 2), ConvexTerm::leaf("a"), ConvexTerm::leaf("a"));
  CHECK(denote(idem) == Distribution::dirac("a"));
}

TEST_CASE("n-ary combinations rewrite to binary terms") {
  // weights 1/2, 1/4, 1/4 -> x +_1/2 (y +_1/2 z) after tail renormalization
  NAryCombination e{{{Rat(1, 2), "x"}, {Rat(1, 4), "y"}, {Rat(1, 4), "z"}}};
  ConvexTerm t = nary_to_binary(e);
  ConvexTerm want = ConvexTerm::combine(
      Rat(1, 2), ConvexTerm::leaf("x"),
      ConvexTerm::combine(Rat(1, 2), ConvexTerm::leaf("y"), ConvexTerm::leaf("z")));
  CHECK(t == want);

  // head weight 1 keeps the head; head weight 0 drops it
  CHECK(nary_to_binary({{{Rat(1), "x"}, {Rat(0), "y"}}}) == ConvexTerm::leaf("x"));
  CHECK(nary_to_binary({{{Rat(0), "x"}, {Rat(1), "y"}}}) == ConvexTerm::leaf("y"));

  // bracket syntax parses through the same rewrite
  CHECK(parse_term("[1/2 x, 1/4 y, 1/4 z]") == want);

  // denotation agrees with the weights
  Distribution d = denote(t);
  CHECK(d.at("x") == Rat(1, 2));
  CHECK(d.at("y") == Rat(1, 4));
  CHECK(d.at("z") == Rat(1, 4));

  CHECK_THROWS_AS(nary_to_binary({{{Rat(1, 2), "x"}}}), domain_error);
}

TEST_CASE("substitution and round-trip through to_nary") {
  ConvexTerm t = parse_term("(a +_{2/5} b)");
  std::map<VarName, ConvexTerm> sigma{{"a", parse_term("(c +_{1/2} d)")},
                                      {"b", ConvexTerm::leaf("c")}};
  ConvexTerm s = substitute(t, sigma);
  CHECK(term_to_string(s) == "((c +_{1/2} d) +_{2/5} c)");
  Distribution ds = denote(s);
  CHECK(ds.at("c") == Rat(1, 5) + Rat(3, 5));
  CHECK(ds.at("d") == Rat(1, 5));

  Distribution mu({{"p", Rat(2, 7)}, {"q", Rat(5, 7)}});
  CHECK(denote(nary_to_binary(to_nary(mu))) == mu);
}
