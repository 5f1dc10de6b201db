// Unfoldings: the defining conditions, the divisible constant-block
// construction, composite mutations, and the obstruction witness for the
// non-unfoldable family.
#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "spforge/unfold.hpp"

using namespace spf;

namespace {

ExchangeMatrix small_b() {
  ExchangeMatrix m;
  m.B = {{0, -2}, {1, 0}};
  m.D = {1, 2};
  return m;
}

// fiber map over {0..N-1} with constant fiber size, blocks in input order
std::vector<int> block_map(int N, int fiber) {
  std::vector<int> m(N);
  for (int i = 0; i < N; ++i) m[i] = i / fiber;
  return m;
}

}  // namespace

TEST_CASE("divisible construction reproduces the displayed 3x3 unfolding") {
  Unfolding u = construct_divisible(small_b(), {2, 1});
  CHECK(u.total() == 3);
  // C_12 block is the column (-1, -1)^T, C_21 block the row (1, 1)
  std::vector<std::vector<long long>> want = {{0, 0, -1}, {0, 0, -1}, {1, 1, 0}};
  CHECK(u.C == want);
  CHECK(check_unfolding(u).empty());
}

TEST_CASE("unit block sizes give back the matrix itself") {
  ExchangeMatrix m;
  m.B = {{0, 1, -1}, {-1, 0, 1}, {1, -1, 0}};
  m.D = {1, 1, 1};
  Unfolding u = construct_divisible(m, {1, 1, 1});
  CHECK(u.C == m.B);
  CHECK(check_unfolding(u).empty());
  // singleton blocks: composite mutation is ordinary matrix mutation
  for (int k = 1; k <= 3; ++k) {
    Unfolding mu = composite_mutate(u, k);
    CHECK(mu.C == mu.base.B);
    CHECK(mu.base.B == mutate_matrix(m, k).B);
  }
}

TEST_CASE("non-divisible block sizes are rejected") {
  ExchangeMatrix m = small_b();
  // e = (1, 2) skew-symmetrizes B the wrong way round
  CHECK_THROWS_AS(construct_divisible(m, {1, 2}), error);
  ExchangeMatrix odd;
  odd.B = {{0, -3}, {1, 0}};
  odd.D = {1, 3};
  // e = (2, ...) cannot skew-symmetrize, and 2 does not divide 3 either
  CHECK_THROWS_AS(construct_divisible(odd, {2, 1}), error);
}

TEST_CASE("check_unfolding reports a flipped sign") {
  Unfolding u = construct_divisible(small_b(), {2, 1});
  u.C[0][2] = 1;
  u.C[2][0] = -1;
  CHECK_FALSE(check_unfolding(u).empty());
}

TEST_CASE("the divisible construction survives random composite mutations") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    Unfolding u = construct_divisible(small_b(), {2, 1});
    int len = 1 + int(rng() % 8);
    for (int s = 0; s < len; ++s) {
      u = composite_mutate(u, 1 + int(rng() % 2));
      CHECK(check_unfolding(u).empty());
      // the mutated candidate is exactly the divisible construction of the
      // mutated base
      CHECK(u.C == construct_divisible(u.base, u.e).C);
    }
  }
}

TEST_CASE("the (a, b) family matrix and its parameter checks") {
  ExchangeMatrix m = nonunfoldable_family(2, 3);
  std::vector<std::vector<long long>> want = {
      {0, -2, 0, 3}, {1, 0, -1, 0}, {0, 2, 0, -3}, {-1, 0, 1, 0}};
  CHECK(m.B == want);
  CHECK(m.D == std::vector<int>{1, 2, 1, 3});
  CHECK_THROWS_AS(nonunfoldable_family(3, 2), error);
  CHECK_THROWS_AS(nonunfoldable_family(0, 2), error);
}

TEST_CASE("structured candidates are valid unfolding candidates") {
  int N = 6;
  Unfolding u = structured_candidate(2, 3, N, block_map(N, 2), block_map(N, 2),
                                     block_map(N, 3), block_map(N, 3));
  CHECK(u.total() == 6 + 3 + 6 + 2);
  CHECK(check_unfolding(u).empty());
  // a fiber of the wrong size is rejected
  std::vector<int> bad = block_map(N, 2);
  bad[0] = 1;
  CHECK_THROWS_AS(structured_candidate(2, 3, N, bad, block_map(N, 2), block_map(N, 3),
                                       block_map(N, 3)),
                  error);
}

TEST_CASE("obstruction witness finds mixed signs for (2, 3)") {
  int N = 6;
  Unfolding u = structured_candidate(2, 3, N, block_map(N, 2), block_map(N, 2),
                                     block_map(N, 3), block_map(N, 3));
  ObstructionWitness w = obstruction_witness(2, 3, N, u.C);
  CHECK(w.positive_value == 1);
  CHECK(w.negative_value == -1);
  // the certified entries really sit in the mutated E_1 x E_3 block
  Unfolding m = composite_mutate(composite_mutate(u, 4), 2);
  int r1 = m.block_start(1), r3 = m.block_start(3);
  CHECK(m.C[r1 + w.positive.first][r3 + w.positive.second] == w.positive_value);
  CHECK(m.C[r1 + w.negative.first][r3 + w.negative.second] == w.negative_value);
}

TEST_CASE("obstruction witness precondition checks") {
  int N = 6;
  Unfolding u = structured_candidate(2, 3, N, block_map(N, 2), block_map(N, 2),
                                     block_map(N, 3), block_map(N, 3));
  // a divides b
  CHECK_THROWS_AS(obstruction_witness(2, 4, 4, u.C), error);
  // candidate that is not an unfolding
  std::vector<std::vector<long long>> broken = u.C;
  int r2 = u.block_start(2);
  broken[0][r2] = -broken[0][r2];  // flips a -1 in the E_1 x E_2 block
  broken[r2][0] = -broken[r2][0];
  CHECK_THROWS_AS(obstruction_witness(2, 3, N, broken), error);
}

TEST_CASE("random structured candidates always yield an obstruction") {
  std::mt19937_64 rng(31);
  int N = 6;
  auto shuffled = [&](int fiber) {
    std::vector<int> m = block_map(N, fiber);
    std::shuffle(m.begin(), m.end(), rng);
    return m;
  };
  for (int trial = 0; trial < 25; ++trial) {
    Unfolding u = structured_candidate(2, 3, N, shuffled(2), shuffled(2), shuffled(3),
                                       shuffled(3));
    REQUIRE(check_unfolding(u).empty());
    CHECK_NOTHROW(obstruction_witness(2, 3, N, u.C));
  }
}
