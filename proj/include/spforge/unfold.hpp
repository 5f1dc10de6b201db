// Unfoldings of skew-symmetrizable matrices: the defining conditions,
// composite mutations, the divisible constant-block construction, and the
// obstruction witness for the non-unfoldable two-parameter family.
#pragma once

#include <cstdlib>
#include <string>
#include <vector>

#include "spforge/quivers.hpp"

namespace spf {

struct Unfolding {
  ExchangeMatrix base;                       // n x n skew-symmetrizable B
  std::vector<int> e;                        // block sizes, b_ij e_j = -b_ji e_i
  std::vector<std::vector<long long>> C;     // skew-symmetric, size sum(e)

  int n() const { return int(e.size()); }
  int total() const {
    int t = 0;
    for (int x : e) t += x;
    return t;
  }
  // E_i = [block_start(i), block_start(i) + e[i-1])  (consecutive ranges)
  int block_start(int i) const {
    int t = 0;
    for (int j = 0; j < i - 1; ++j) t += e[j];
    return t;
  }
};

// Verifies skew-symmetry, column sums (condition 1) and the sign condition
// (condition 2, plus zero diagonal blocks); returns the violation list.
inline std::vector<std::string> check_unfolding(const Unfolding& u) {
  std::vector<std::string> out;
  int n = u.n(), T = u.total();
  if (int(u.base.B.size()) != n || int(u.C.size()) != T) {
    out.push_back("shape mismatch");
    return out;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (u.base.B[i][j] * (long long)u.e[j] != -u.base.B[j][i] * (long long)u.e[i]) {
        out.push_back("block sizes do not skew-symmetrize B at (" +
                      std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        return out;
      }
  for (int r = 0; r < T; ++r)
    for (int c = 0; c < T; ++c)
      if (u.C[r][c] != -u.C[c][r]) {
        out.push_back("C not skew-symmetric at (" + std::to_string(r + 1) + "," +
                      std::to_string(c + 1) + ")");
        return out;
      }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      int ri = u.block_start(i), rj = u.block_start(j);
      for (int c = 0; c < u.e[j - 1]; ++c) {
        long long sum = 0;
        bool signs_ok = true;
        for (int r = 0; r < u.e[i - 1]; ++r) {
          long long v = u.C[ri + r][rj + c];
          sum += v;
          if (i == j && v != 0) signs_ok = false;
          if (i != j && u.base.B[i - 1][j - 1] >= 0 && v < 0) signs_ok = false;
        }
        if (sum != u.base.B[i - 1][j - 1])
          out.push_back("column sum of block (" + std::to_string(i) + "," +
                        std::to_string(j) + ") column " + std::to_string(c + 1) +
                        " is " + std::to_string(sum) + ", expected " +
                        std::to_string(u.base.B[i - 1][j - 1]));
        if (!signs_ok)
          out.push_back("sign condition fails in block (" + std::to_string(i) + "," +
                        std::to_string(j) + ") column " + std::to_string(c + 1));
      }
    }
  return out;
}

// Constant-block unfolding c_{i-bar,j-bar} = b_ij / e_i.
inline Unfolding construct_divisible(const ExchangeMatrix& B, const std::vector<int>& e) {
  int n = int(B.B.size());
  require(int(e.size()) == n, errc::invalid_argument, "block size tuple has wrong length");
  for (int i = 0; i < n; ++i) {
    require(e[i] >= 1, errc::not_divisible, "block sizes must be positive");
    for (int j = 0; j < n; ++j) {
      require(B.B[i][j] * (long long)e[j] == -B.B[j][i] * (long long)e[i],
              errc::not_divisible, "block sizes do not skew-symmetrize B");
      require(B.B[i][j] % e[i] == 0, errc::not_divisible,
              "entry b_ij not divisible by e_i");
    }
  }
  Unfolding u;
  u.base = B;
  u.e = e;
  int T = u.total();
  u.C.assign(T, std::vector<long long>(T, 0));
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      if (i == j) continue;
      long long v = B.B[i - 1][j - 1] / e[i - 1];
      int ri = u.block_start(i), rj = u.block_start(j);
      for (int r = 0; r < e[i - 1]; ++r)
        for (int c = 0; c < e[j - 1]; ++c) u.C[ri + r][rj + c] = v;
    }
  return u;
}

// mu_k on B and the product of elementary mutations over E_k on C.  The zero
// diagonal block makes the product order-independent; the output is a
// candidate only -- conditions (1)/(2) are not implied.
inline Unfolding composite_mutate(const Unfolding& u, int k) {
  require(k >= 1 && k <= u.n(), errc::invalid_argument, "vertex out of range");
  int rk = u.block_start(k);
  for (int r = 0; r < u.e[k - 1]; ++r)
    for (int c = 0; c < u.e[k - 1]; ++c)
      require(u.C[rk + r][rk + c] == 0, errc::diagonal_block_nonzero,
              "diagonal block at k is not zero");
  Unfolding out = u;
  out.base = mutate_matrix(u.base, k);
  int T = u.total();
  for (int m = 0; m < u.e[k - 1]; ++m) {
    int kk = rk + m;
    std::vector<std::vector<long long>> next = out.C;
    for (int i = 0; i < T; ++i)
      for (int j = 0; j < T; ++j) {
        if (i == kk || j == kk) {
          next[i][j] = -out.C[i][j];
        } else {
          long long ik = out.C[i][kk], kj = out.C[kk][j];
          next[i][j] = out.C[i][j] + (ik * std::llabs(kj) + std::llabs(ik) * kj) / 2;
        }
      }
    out.C = std::move(next);
  }
  return out;
}

// The skew-symmetrizable 4x4 family with skew-symmetrizer (1, a, 1, b).
inline ExchangeMatrix nonunfoldable_family(int a, int b) {
  require(0 < a && a < b, errc::bad_params, "need 0 < a < b");
  ExchangeMatrix m;
  m.B = {{0, -a, 0, b}, {1, 0, -1, 0}, {0, a, 0, -b}, {-1, 0, 1, 0}};
  m.D = {1, a, 1, b};
  m.validate();
  return m;
}

// The structured candidate from the non-unfoldability proof, for block sizes
// e = (N, N/a, N, N/b).  Four fiber maps with constant fiber sizes determine
// every nonzero block:
//   C_{12}[i][j] = -[m12(i) = j]   (m12: E_1 -> E_2, fibers of size a)
//   C_{23}[i][j] = -[m23(j) = i]   (m23: E_3 -> E_2, fibers of size a)
//   C_{14}[i][j] =  [m41(i) = j]   (m41: E_1 -> E_4, fibers of size b)
//   C_{34}[i][j] = -[m43(i) = j]   (m43: E_3 -> E_4, fibers of size b)
// with the remaining blocks fixed by skew-symmetry and zero elsewhere.
inline Unfolding structured_candidate(int a, int b, int N, const std::vector<int>& m12,
                                      const std::vector<int>& m23,
                                      const std::vector<int>& m41,
                                      const std::vector<int>& m43) {
  require(0 < a && a < b, errc::bad_params, "need 0 < a < b");
  require(N % a == 0 && N % b == 0, errc::bad_params, "N must be divisible by a and b");
  Unfolding u;
  u.base = nonunfoldable_family(a, b);
  u.e = {N, N / a, N, N / b};
  auto check_fibers = [&](const std::vector<int>& m, int codomain, int fiber) {
    require(int(m.size()) == N, errc::bad_params, "fiber map has wrong domain size");
    std::vector<int> count(codomain, 0);
    for (int x : m) {
      require(0 <= x && x < codomain, errc::bad_params, "fiber map value out of range");
      ++count[x];
    }
    for (int c : count)
      require(c == fiber, errc::bad_params, "fiber map has a fiber of the wrong size");
  };
  check_fibers(m12, N / a, a);
  check_fibers(m23, N / a, a);
  check_fibers(m41, N / b, b);
  check_fibers(m43, N / b, b);
  int T = u.total();
  u.C.assign(T, std::vector<long long>(T, 0));
  int r1 = u.block_start(1), r2 = u.block_start(2), r3 = u.block_start(3),
      r4 = u.block_start(4);
  auto put = [&](int i, int j, long long v) {
    u.C[i][j] = v;
    u.C[j][i] = -v;
  };
  for (int i = 0; i < N; ++i) {
    put(r1 + i, r2 + m12[i], -1);
    put(r1 + i, r4 + m41[i], 1);
    put(r2 + m23[i], r3 + i, -1);
    put(r3 + i, r4 + m43[i], -1);
  }
  return u;
}

struct ObstructionWitness {
  std::pair<int, int> positive;  // 0-based indices into the E_1 x E_3 block
  std::pair<int, int> negative;
  long long positive_value = 0, negative_value = 0;
};

// For a < b with a not dividing b: any valid candidate unfolding C of the
// family matrix with block sizes (N, N/a, N, N/b) breaks the sign condition
// in the E_1 x E_3 block after mu_2 mu_4; returns one positive and one
// negative entry of that block as the certificate.
inline ObstructionWitness obstruction_witness(int a, int b, int N,
                                              const std::vector<std::vector<long long>>& C) {
  require(0 < a && a < b && b % a != 0, errc::bad_params,
          "need 0 < a < b with a not dividing b");
  require(N % a == 0 && N % b == 0, errc::bad_params, "N must be divisible by a and b");
  Unfolding u;
  u.base = nonunfoldable_family(a, b);
  u.e = {N, N / a, N, N / b};
  u.C = C;
  require(int(C.size()) == u.total(), errc::bad_params, "candidate has wrong size");
  for (const auto& row : C)
    for (long long v : row)
      require(v >= -1 && v <= 1, errc::not_an_unfolding,
              "candidate entries must lie in {-1,0,1}");
  require(check_unfolding(u).empty(), errc::not_an_unfolding,
          "candidate fails the unfolding conditions");
  Unfolding m = composite_mutate(composite_mutate(u, 4), 2);
  int r1 = m.block_start(1), r3 = m.block_start(3);
  ObstructionWitness w;
  bool pos = false, neg = false;
  for (int i = 0; i < m.e[0]; ++i)
    for (int j = 0; j < m.e[2]; ++j) {
      long long v = m.C[r1 + i][r3 + j];
      if (v > 0 && !pos) {
        pos = true;
        w.positive = {i, j};
        w.positive_value = v;
      }
      if (v < 0 && !neg) {
        neg = true;
        w.negative = {i, j};
        w.negative_value = v;
      }
    }
  require(pos && neg, errc::unexpectedly_clean,
          "no sign obstruction found in the E_1 x E_3 block");
  return w;
}

}  // namespace spf
