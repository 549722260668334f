#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "speclab/models.hpp"

using namespace speclab;

TEST_CASE("permutation basics") {
  CHECK_THROWS(Permutation({0, 0, 1}));  // not a bijection
  CHECK_THROWS(Permutation({0, 3, 1}));  // out of range
  Permutation swap01({1, 0, 2});
  CHECK(swap01.inverse() == swap01);
  CHECK(compose(swap01, swap01).is_identity());
  Permutation c6({1, 2, 3, 4, 5, 0});
  CHECK(c6.order() == 6);
  CHECK(perm_power(c6, 600).is_identity());
}

TEST_CASE("permutation powers reduce huge exponents per cycle") {
  Permutation c6({1, 2, 3, 4, 5, 0});
  Int huge("18446744073709551617");  // 2^64 + 1
  Permutation direct = perm_power(c6, mod_floor(huge, 6));
  CHECK(perm_power(c6, huge) == direct);
}

TEST_CASE("group indexing is lexicographic") {
  FiniteAbelianGroup g({2, 3, 5});
  CHECK(g.order() == 30);
  CHECK(g.index_of({0, 0, 0}) == 0);
  CHECK(g.index_of({0, 0, 1}) == 1);
  CHECK(g.index_of({0, 1, 0}) == 5);
  CHECK(g.index_of({1, 0, 0}) == 15);
  for (uint64_t i = 0; i < g.order(); ++i) CHECK(g.index_of(g.tuple_of(i)) == i);
  CHECK_THROWS(FiniteAbelianGroup({1009, 1009}));  // above the cap
  CHECK_THROWS(FiniteAbelianGroup({1, 3}));
}

TEST_CASE("product model truncations") {
  ProductModel m235(PrimeSpec::with_unit_exponents({2, 3, 5}), 3);
  auto [g2, r2] = m235.truncate(2);
  CHECK(g2.moduli() == std::vector<uint64_t>{2, 3});
  CHECK(g2.order() == 6);
  CHECK(r2.step() == std::vector<uint64_t>{1, 1});
  CHECK(m235.truncate(3).first.order() == 30);
  CHECK_THROWS(m235.truncate(0));
  CHECK_THROWS(m235.truncate(4));

  ProductModel big(PrimeSpec({2, 3}, {10, 10}), 2);
  CHECK(big.truncation_order(2) == Int(1024) * 59049);
  CHECK(big.truncate(1).first.order() == 1024);
}

TEST_CASE("rotation powers") {
  FiniteAbelianGroup z5({5});
  GroupRotation r(z5, {1});
  CHECK(power(r, 2).step() == std::vector<uint64_t>{2});

  FiniteAbelianGroup z23({2, 3});
  GroupRotation r23(z23);
  CHECK(power(r23, 6).is_identity());
  CHECK(power(r23, 7).step() == std::vector<uint64_t>{1, 1});
  CHECK_THROWS_AS(power(r23, 0), std::invalid_argument);
  CHECK(r23.rotation_order() == 6);
}

TEST_CASE("power is identity exactly on multiples of the truncation order") {
  ProductModel m(PrimeSpec::with_unit_exponents({2, 3, 5}), 3);
  for (std::size_t level = 1; level <= 3; ++level) {
    auto [group, rotation] = m.truncate(level);
    Int order = m.truncation_order(level);
    for (Int n = 1; n <= 60; ++n) {
      bool is_id = power(rotation, n).as_permutation().is_identity();
      REQUIRE(is_id == (n % order == 0));
    }
  }
}

TEST_CASE("multiplier automorphism conjugates R to R^q") {
  ProductModel z5(PrimeSpec::with_unit_exponents({5}), 1);
  MultiplierAutomorphism psi = multiplier_for(z5, 2, 1);
  CHECK(psi.coefficients() == std::vector<uint64_t>{3});
  // enumerate all 5 points: x -> 3x conjugates x+1 into x+2
  Permutation p = psi.as_permutation();
  Permutation r = z5.truncate(1).second.as_permutation();
  CHECK(compose(p.inverse(), compose(r, p)) == perm_power(r, 2));

  ProductModel z5z11(PrimeSpec::with_unit_exponents({5, 11}), 2);
  MultiplierAutomorphism psi3 = multiplier_for(z5z11, 3, 2);
  CHECK(psi3.coefficients() == std::vector<uint64_t>{2, 4});
  Permutation p3 = psi3.as_permutation();
  Permutation r55 = z5z11.truncate(2).second.as_permutation();
  CHECK(compose(p3.inverse(), compose(r55, p3)) == perm_power(r55, 3));

  MultiplierAutomorphism id = multiplier_for(z5z11, 1, 2);
  CHECK(id.as_permutation().is_identity());

  CHECK_THROWS_AS(multiplier_for(z5, 5, 1), std::domain_error);
  CHECK_THROWS_AS(multiplier_for(z5z11, 22, 2), std::domain_error);
}

TEST_CASE("multiplier is an additive automorphism") {
  ProductModel m(PrimeSpec::with_unit_exponents({5, 11}), 2);
  MultiplierAutomorphism psi = multiplier_for(m, 7, 2);
  const FiniteAbelianGroup& g = psi.group();
  Permutation p = psi.as_permutation();
  for (uint64_t x = 0; x < g.order(); ++x)
    for (uint64_t y = 0; y < g.order(); ++y) {
      auto tx = g.tuple_of(x), ty = g.tuple_of(y);
      std::vector<uint64_t> sum(tx.size());
      for (std::size_t j = 0; j < tx.size(); ++j) sum[j] = (tx[j] + ty[j]) % g.moduli()[j];
      auto px = g.tuple_of(p(x)), py = g.tuple_of(p(y));
      std::vector<uint64_t> psum(px.size());
      for (std::size_t j = 0; j < px.size(); ++j) psum[j] = (px[j] + py[j]) % g.moduli()[j];
      REQUIRE(p(g.index_of(sum)) == g.index_of(psum));
    }
}

TEST_CASE("gp_reduce normal forms") {
  using L = GpLetter;
  CHECK(gp_reduce(2, {L::Phi, L::Phi}).is_identity());

  GpNormalForm f = gp_reduce(2, {L::Phi, L::S, L::PhiInv, L::S});
  CHECK(f.twist == 0);
  CHECK(f.exps == std::vector<std::int64_t>{1, 1});

  // t_1 t_2 t_1^-1 t_2^-1 with t_i = phi^i s phi^-i, p = 3
  std::vector<L> word;
  auto push_t = [&](int i, bool inverse) {
    for (int k = 0; k < i; ++k) word.push_back(L::Phi);
    word.push_back(inverse ? L::SInv : L::S);
    for (int k = 0; k < i; ++k) word.push_back(L::PhiInv);
  };
  push_t(1, false);
  push_t(2, false);
  push_t(1, true);
  push_t(2, true);
  CHECK(gp_reduce(3, word).is_identity());

  for (uint32_t p : {2u, 3u, 5u})
    CHECK(gp_reduce(p, std::vector<L>(p, L::Phi)).is_identity());

  CHECK_THROWS(gp_reduce(1, {L::S}));
}

TEST_CASE("gp word parsing") {
  auto word = parse_gp_word("phi s phi^-1 s");
  REQUIRE(word.size() == 4);
  CHECK(word[0] == GpLetter::Phi);
  CHECK(word[1] == GpLetter::S);
  CHECK(word[2] == GpLetter::PhiInv);
  CHECK(word[3] == GpLetter::S);
  CHECK(parse_gp_word("s' phi'").size() == 2);
  CHECK(parse_gp_word("").empty());
  CHECK_THROWS(parse_gp_word("phi x"));
}

TEST_CASE("gp_reduce is a homomorphism on random words") {
  std::mt19937_64 rng(7);
  for (uint32_t p : {2u, 3u, 5u}) {
    for (int t = 0; t < 300; ++t) {
      auto random_word = [&] {
        std::vector<GpLetter> w(1 + rng() % 20);
        for (auto& l : w) l = static_cast<GpLetter>(rng() % 4);
        return w;
      };
      auto w1 = random_word(), w2 = random_word();
      auto concat = w1;
      concat.insert(concat.end(), w2.begin(), w2.end());
      REQUIRE(gp_reduce(p, concat) == gp_reduce(p, w1) * gp_reduce(p, w2));
    }
  }
}

TEST_CASE("normal forms act correctly on the finite quotient") {
  std::mt19937_64 rng(11);
  for (auto [p, m] : std::vector<std::pair<uint32_t, uint64_t>>{{2, 3}, {3, 2}}) {
    GpQuotientSpace space(p, m);
    Permutation s_perm = space.left_translation(space.s_element());
    Permutation phi_perm = space.phi_translation();
    for (int t = 0; t < 50; ++t) {
      std::vector<GpLetter> word(1 + rng() % 12);
      for (auto& l : word) l = static_cast<GpLetter>(rng() % 4);
      Permutation composed = Permutation::identity(space.size());
      for (GpLetter l : word) {
        const Permutation& step = (l == GpLetter::S)      ? s_perm
                                  : (l == GpLetter::SInv) ? s_perm.inverse()
                                  : (l == GpLetter::Phi)  ? phi_perm
                                                          : phi_perm.inverse();
        composed = compose(composed, step);
      }
      GpNormalForm form = gp_reduce(p, word);
      std::vector<uint64_t> b(p);
      for (uint32_t k = 0; k < p; ++k) {
        std::int64_t e = form.exps[k] % static_cast<std::int64_t>(m);
        b[k] = static_cast<uint64_t>(e < 0 ? e + static_cast<std::int64_t>(m) : e);
      }
      REQUIRE(composed == space.left_translation(space.index_of(form.twist, b)));
    }
  }
}

TEST_CASE("model 2 on Z_3 with unit translations") {
  FiniteAbelianGroup z3({3});
  GroupRotation u(z3, {1});
  Model2System sys = build_model2(2, {u, u});
  // R(x, y) = (y + 1, x + 1) on indices 3x + y
  for (uint64_t x = 0; x < 3; ++x)
    for (uint64_t y = 0; y < 3; ++y)
      CHECK(sys.r(3 * x + y) == 3 * ((y + 1) % 3) + (x + 1) % 3);
  CHECK(sys.r.cycle_lengths() == std::vector<uint64_t>{3, 6});

  GroupRotation id(z3, {0});
  Model2System swap_sys = build_model2(2, {id, id});
  CHECK(swap_sys.r.cycle_lengths() == std::vector<uint64_t>{1, 1, 1, 2, 2, 2});

  FiniteAbelianGroup z2({2});
  GroupRotation v(z2, {1});
  Model2System sys3 = build_model2(3, {v, v, v});
  CHECK(sys3.r.size() == 8);
  CHECK(perm_power(sys3.shift, 3).is_identity());

  FiniteAbelianGroup z5({5});
  CHECK_THROWS(build_model2(2, {u, GroupRotation(z5, {1})}));
  CHECK_THROWS(build_model2(3, {u, u}));
}

TEST_CASE("sigma family commutes and multiplies to R^p") {
  FiniteAbelianGroup z3({3});
  GroupRotation u(z3, {1});
  Model2System sys = build_model2(2, {u, u});
  auto sigmas = sigma_family(sys);
  REQUIRE(sigmas.size() == 2);
  Permutation uu = tensor(u.as_permutation(), u.as_permutation());
  CHECK(sigmas[0] == uu);
  CHECK(sigmas[1] == uu);
  CHECK(compose(sigmas[0], sigmas[1]) == perm_power(sys.r, 2));

  FiniteAbelianGroup z5({5});
  GroupRotation u1(z5, {1}), u2(z5, {2});
  Model2System sys2 = build_model2(2, {u1, u2});
  auto s2 = sigma_family(sys2);
  CHECK(s2[0] == tensor(u1.as_permutation(), u2.as_permutation()));
  CHECK(s2[1] == tensor(u2.as_permutation(), u1.as_permutation()));
  CHECK(commute(s2[0], s2[1]));
  CHECK(compose(s2[0], s2[1]) == perm_power(sys2.r, 2));

  GroupRotation id5(z5, {0});
  Model2System sys_id = build_model2(3, {id5, id5, id5});
  auto s3 = sigma_family(sys_id);
  Permutation prod = compose(compose(s3[0], s3[1]), s3[2]);
  CHECK(prod == perm_power(sys_id.r, 3));
  CHECK(prod.is_identity());  // R = F here and F^3 = id
}

TEST_CASE("two-fold model squares to the tensor of both composites") {
  // R(x,y) = (y, Tx) with U_1 = T, U_2 = id; then R^2 = T (x) T.
  FiniteAbelianGroup z5({5});
  GroupRotation t(z5, {2}), id(z5, {0});
  Model2System sys = build_model2(2, {t, id});
  Permutation tp = t.as_permutation();
  for (uint64_t x = 0; x < 5; ++x)
    for (uint64_t y = 0; y < 5; ++y)
      CHECK(sys.r(5 * x + y) == 5 * y + tp(x));
  CHECK(perm_power(sys.r, 2) == tensor(tp, tp));

  // general translations: R^2 = (U_2 U_1) (x) (U_1 U_2)
  GroupRotation u1(z5, {1}), u2(z5, {3});
  Model2System sys2 = build_model2(2, {u1, u2});
  Permutation p1 = u1.as_permutation(), p2 = u2.as_permutation();
  CHECK(perm_power(sys2.r, 2) == tensor(compose(p2, p1), compose(p1, p2)));
  CHECK(perm_power(sys2.r, 2) == tensor(compose(p1, p2), compose(p2, p1)));
}

TEST_CASE("gp quotient space structure") {
  GpQuotientSpace space(3, 2);
  CHECK(space.size() == 24);
  Permutation phi = space.phi_translation();
  CHECK(perm_power(phi, 3).is_identity());
  Permutation r = space.r_translation();
  CHECK_FALSE(commute(r, phi));  // genuinely non-abelian
  // T = R^3 is central: commutes with both generators
  Permutation t = perm_power(r, 3);
  CHECK(commute(t, phi));
  CHECK(commute(t, r));
  CHECK(commute(t, space.left_translation(space.s_element())));
}
