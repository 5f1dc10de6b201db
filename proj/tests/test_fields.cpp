// Exact arithmetic in the Kummer tower F = GF(p) <= F_i <= E = F[v]/(v^d - c)
// and its base extensions K = GF(p^m).
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spforge/fields.hpp"

using namespace spf;

namespace {

ExtElem random_ext(std::mt19937_64& rng, const FieldTower& t) {
  ExtElem x = t.e_zero();
  for (int j = 0; j < t.d; ++j)
    for (int i = 0; i < t.base_m; ++i) x[j][i] = rng() % t.p;
  return x;
}

KElem random_k(std::mt19937_64& rng, const FieldTower& t) {
  KElem x = t.k_zero();
  for (int i = 0; i < t.base_m; ++i) x[i] = rng() % t.p;
  return x;
}

}  // namespace

TEST_CASE("prime and modular arithmetic helpers") {
  CHECK(detail::is_prime_u64(7));
  CHECK(detail::is_prime_u64(31));
  CHECK_FALSE(detail::is_prime_u64(1));
  CHECK_FALSE(detail::is_prime_u64(91));  // 7 * 13
  CHECK(detail::pow_mod(3, 6, 7) == 1);   // Fermat
  for (u64 a = 1; a < 31; ++a) CHECK(a * detail::inv_mod(a, 31) % 31 == 1);
  CHECK(detail::prime_divisors(60) == std::vector<u64>({2, 3, 5}));
}

TEST_CASE("tower construction validates its parameters") {
  CHECK_THROWS_AS(make_tower(6, 6, 3), error);   // p not prime
  CHECK_THROWS_AS(make_tower(11, 6, 3), error);  // p != 1 mod d
  CHECK_THROWS_AS(make_tower(7, 6, 1), error);   // 1 is a square mod 7
  CHECK_THROWS_AS(make_tower(7, 6, 2), error);   // 2 = 3^2 is a square mod 7
  CHECK_NOTHROW(make_tower(7, 6, 3));
  // auto-selected c agrees with the smallest valid choice
  CHECK(make_tower_auto_c(7, 6).c == 3);
  CHECK(make_tower_auto_c(11, 10).c == 2);
  CHECK(make_tower_auto_c(31, 15).c == 3);
}

TEST_CASE("eigenbasis multiplication wraps through c") {
  FieldTower t = make_tower(7, 6, 3);
  for (int j1 = 0; j1 < 6; ++j1)
    for (int j2 = 0; j2 < 6; ++j2) {
      EigProduct r = t.eig_mul(j1, j2);
      CHECK(r.m == (j1 + j2) % 6);
      // v^j1 v^j2 = c^wrap v^((j1+j2) mod d)
      u64 expect = (j1 + j2 >= 6) ? 3 : 1;
      CHECK(r.f == t.k_from(expect));
    }
  for (int j = 0; j < 6; ++j) {
    EigProduct inv = t.eig_inv(j);
    // v^j * eig_inv(v^j) must equal 1
    EigProduct prod = t.eig_mul(j, inv.m);
    CHECK(prod.m == 0);
    CHECK(t.k_mul(prod.f, inv.f) == t.k_one());
  }
}

TEST_CASE("subfield eigenbases pick the exponents divisible by d/d_i") {
  FieldTower t = make_tower(7, 6, 3);
  CHECK(t.subfield_basis(1) == std::vector<int>({0}));
  CHECK(t.subfield_basis(2) == std::vector<int>({0, 3}));
  CHECK(t.subfield_basis(3) == std::vector<int>({0, 2, 4}));
  CHECK(t.subfield_basis(6) == std::vector<int>({0, 1, 2, 3, 4, 5}));
  CHECK(t.in_subfield_basis(3, 2));
  CHECK_FALSE(t.in_subfield_basis(2, 2));
  // closure: products of B_i elements stay supported on B_i
  ExtElem x = t.e_mul(t.e_basis(2, t.k_one()), t.e_basis(4, t.k_from(5)));
  CHECK(t.e_supported_on(x, 2));  // exponent step d/d_i = 2 for d_i = 3
}

TEST_CASE("E is a field: sampled axioms and inverses") {
  FieldTower t = make_tower(7, 6, 3);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    ExtElem a = random_ext(rng, t), b = random_ext(rng, t), c = random_ext(rng, t);
    CHECK(t.e_eq(t.e_mul(a, b), t.e_mul(b, a)));
    CHECK(t.e_eq(t.e_mul(t.e_mul(a, b), c), t.e_mul(a, t.e_mul(b, c))));
    CHECK(t.e_eq(t.e_mul(a, t.e_add(b, c)), t.e_add(t.e_mul(a, b), t.e_mul(a, c))));
    if (!t.e_is_zero(a)) CHECK(t.e_eq(t.e_mul(a, t.e_inv(a)), t.e_one()));
  }
  CHECK_THROWS_AS(t.e_inv(t.e_zero()), error);
}

TEST_CASE("base extension keeps a field and embeds the old scalars") {
  FieldTower t = make_tower(7, 6, 3);
  CHECK_THROWS_AS(extend_base(t, 2), error);  // gcd(2, 6) != 1
  CHECK_THROWS_AS(extend_base(t, 3), error);
  FieldTower big = extend_base(t, 5);
  CHECK(big.base_m == 5);
  CHECK(big.base_poly.size() == 6);
  CHECK(big.base_poly.back() == 1);  // monic
  CHECK(detail::poly_irreducible(big.base_poly, 7));
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    KElem a = random_k(rng, big), b = random_k(rng, big);
    CHECK(big.k_mul(a, b) == big.k_mul(b, a));
    if (!big.k_is_zero(a)) CHECK(big.k_mul(a, big.k_inv(a)) == big.k_one());
    // embedding GF(7) -> GF(7^5) is a ring map
    u64 x = rng() % 7, y = rng() % 7;
    CHECK(big.k_mul(big.k_from(x), big.k_from(y)) == big.k_from(x * y % 7));
  }
  // multiplicative order of a nonzero element divides p^m - 1 = 16806
  KElem g = big.k_from(0);
  g[1] = 1;  // the residue of y
  KElem acc = big.k_one();
  for (int i = 0; i < 16806; ++i) acc = big.k_mul(acc, g);
  CHECK(acc == big.k_one());
}

TEST_CASE("the remaining suite towers construct cleanly") {
  for (auto [p, d] : std::vector<std::pair<u64, int>>{{7, 6}, {11, 10}, {31, 15}}) {
    FieldTower t = make_tower_auto_c(p, d);
    CHECK((p - 1) % u64(d) == 0);
    // v has multiplicative order d * ord(c): v generates a field, so v^(p^d-1)=1;
    // cheap spot check: v^d = c as elements
    ExtElem v = t.e_basis(1, t.k_one());
    ExtElem acc = t.e_one();
    for (int i = 0; i < d; ++i) acc = t.e_mul(acc, v);
    CHECK(t.e_eq(acc, t.e_from_k(t.k_from(t.c))));
  }
}
