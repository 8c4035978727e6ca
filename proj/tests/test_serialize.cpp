#include <random>

#include "bgjt/error.hpp"
#include "bgjt/serialize.hpp"
#include "doctest.h"

using namespace bgjt;

TEST_CASE("polynomial text and JSON round trips") {
  for (auto [p, n] : std::vector<std::pair<unsigned, unsigned>>{{3, 1}, {2, 2}, {7, 1}, {3, 2}}) {
    const FieldTower F = FieldTower::build(p, n, 1, 0);
    PolyRing R(F);
    std::mt19937_64 rng(p * 10 + n);
    for (int t = 0; t < 100; ++t) {
      std::vector<Fq2Elt> c(1 + rng() % 6);
      for (auto& x : c) x = F.element(static_cast<unsigned>(rng() % F.field_size()));
      const Poly a{c};
      CHECK(poly_from_json(F, poly_json(F, a)) == a);
      CHECK(parse_poly(F, R.to_string(a)) == a);
    }
    for (unsigned i = 0; i < F.field_size(); ++i) {
      CHECK(elt_from_json(F, elt_json(F, F.element(i))) == F.element(i));
    }
  }
  const FieldTower F = FieldTower::build(5, 1, 3, 0);
  PolyRing R(F);
  CHECK(parse_poly(F, "x^2+2x+1") == R.pow(Poly::linear(F.element(1)), 2));
  CHECK(parse_poly(F, "x - 1") == Poly::linear(F.element(4)));
  CHECK(parse_poly(F, "(1+2*g)x + g") == Poly({F.make(0, 1), F.make(1, 2)}));
  CHECK(elt_json(F, F.make(3, 4)) == Json::array({3, 4}));
  CHECK_THROWS_AS(parse_poly(F, "x^"), Error);
  CHECK_THROWS_AS(parse_poly(F, "7x"), Error);
  CHECK_THROWS_AS(parse_poly(F, "y+1"), Error);
}

TEST_CASE("artifact round trips and hashes") {
  const FieldTower F = FieldTower::build(2, 2, 3, 1);
  const SetupInstance s = search_setup(F, SetupConstraints{}, default_budget(F));
  const Json sj = setup_json(F, s);
  CHECK(sj.at("setup_hash").get<std::string>().size() == 16);
  CHECK(setup_json(F, s).dump() == sj.dump());
  SetupInstance back = setup_from_json(F, sj);
  CHECK(back.h0 == s.h0);
  CHECK(back.h1 == s.h1);
  CHECK(back.f == s.f);
  CHECK(back.cofactors == s.cofactors);

  const CosetSet cs = enumerate_cosets(F);
  CHECK(cosets_from_json(F, cosets_json(F, cs)).reps == cs.reps);

  RelgenOptions opt;
  opt.frobenius_topup = true;
  const RelationSet rs = collect_relations(F, s, cs, opt);
  const std::string sh = sj.at("setup_hash").get<std::string>();
  const RelationSet rback = relations_from_json(F, relations_json(F, rs, sh));
  CHECK(rback.lattice() == rs.lattice());
  CHECK(rback.coset_rows == rs.coset_rows);
  CHECK(rback.frobenius_rows == rs.frobenius_rows);

  const DlogTable t = solve_factor_base(F, s, rs);
  const DlogTable tback = dlogs_from_json(F, dlogs_json(F, t, true));
  CHECK(tback.logs == t.logs);
  CHECK(tback.log_lambda == t.log_lambda);
  CHECK(tback.base_slot == t.base_slot);

  CHECK(content_hash(Json{{"a", 1}}) == content_hash(Json{{"a", 1}}));
  CHECK(content_hash(Json{{"a", 1}}) != content_hash(Json{{"a", 2}}));
}

TEST_CASE("tampered setups are refused") {
  const FieldTower F = FieldTower::build(2, 2, 3, 1);
  const SetupInstance s = search_setup(F, SetupConstraints{}, default_budget(F));
  Json j = setup_json(F, s);
  j["f"] = poly_json(F, Poly::linear(F.element(1)));
  try {
    setup_from_json(F, j);
    FAIL("expected StaleCache");
  } catch (const Error& e) {
    CHECK((e.kind() == ErrorKind::StaleCache));
  }
  const FieldTower G = FieldTower::build(5, 1, 3, 1);
  CHECK_THROWS_AS(setup_from_json(G, setup_json(F, s)), Error);
}
