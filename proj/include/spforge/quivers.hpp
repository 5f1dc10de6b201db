// Weighted quivers, skew-symmetrizable exchange matrices, the bijection
// between them, and both combinatorial mutation rules.
//
// Vertices are 1-based externally (matching the usual matrix indexing) and
// stored 0-based internally; all public APIs below take 1-based vertices.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "spforge/errors.hpp"

namespace spf {

struct Arrow {
  std::string name;
  int tail = 0;  // 1-based vertex t(a)
  int head = 0;  // 1-based vertex h(a)
};

struct WeightedQuiver {
  std::vector<int> weights;  // d_1..d_n
  std::vector<Arrow> arrows;

  int n() const { return int(weights.size()); }

  int arrow_index(const std::string& name) const {
    for (size_t i = 0; i < arrows.size(); ++i)
      if (arrows[i].name == name) return int(i);
    return -1;
  }

  void validate() const {
    std::set<std::string> seen;
    for (const Arrow& a : arrows) {
      require(a.tail >= 1 && a.tail <= n() && a.head >= 1 && a.head <= n(),
              errc::validation_error, "arrow " + a.name + " has an out-of-range endpoint");
      require(a.tail != a.head, errc::validation_error, "arrow " + a.name + " is a loop");
      require(seen.insert(a.name).second, errc::validation_error,
              "duplicate arrow name " + a.name);
    }
    for (int w : weights)
      require(w >= 1, errc::validation_error, "vertex weights must be positive");
  }

  bool strongly_primitive() const {
    for (int i = 0; i < n(); ++i)
      for (int j = i + 1; j < n(); ++j)
        if (std::gcd(weights[i], weights[j]) != 1) return false;
    return true;
  }

  // count of arrows j -> i (1-based)
  int arrow_count(int j, int i) const {
    int c = 0;
    for (const Arrow& a : arrows)
      if (a.tail == j && a.head == i) ++c;
    return c;
  }

  bool has_2_cycle() const {
    for (int i = 1; i <= n(); ++i)
      for (int j = i + 1; j <= n(); ++j)
        if (arrow_count(i, j) > 0 && arrow_count(j, i) > 0) return true;
    return false;
  }

  bool has_2_cycle_at(int k) const {
    for (int j = 1; j <= n(); ++j)
      if (j != k && arrow_count(k, j) > 0 && arrow_count(j, k) > 0) return true;
    return false;
  }

  // Canonical isomorphism invariant: weights plus the multiset of
  // (tail, head) pairs, ignoring arrow names.
  std::multiset<std::pair<int, int>> shape() const {
    std::multiset<std::pair<int, int>> s;
    for (const Arrow& a : arrows) s.insert({a.tail, a.head});
    return s;
  }
};

struct ExchangeMatrix {
  std::vector<std::vector<long long>> B;  // n x n
  std::vector<int> D;                     // skew-symmetrizer diagonal

  int n() const { return int(D.size()); }

  void validate() const {
    require(B.size() == D.size(), errc::validation_error, "B and D sizes differ");
    for (const auto& row : B)
      require(row.size() == D.size(), errc::validation_error, "B is not square");
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j)
        require(D[i] * B[i][j] == -(long long)D[j] * B[j][i], errc::not_skew_symmetrizable,
                "DB is not skew-symmetric at (" + std::to_string(i + 1) + "," +
                    std::to_string(j + 1) + ")");
  }
};

// gcd(d_i, d_j) * d_k / (gcd(d_i, d_k) * gcd(d_k, d_j)) composite arrows per
// (j -> k, k -> i) pair during mutation at k; always an integer.
inline int composite_arrow_count(int d_i, int d_k, int d_j) {
  long long num = (long long)std::gcd(d_i, d_j) * d_k;
  long long den = (long long)std::gcd(d_i, d_k) * std::gcd(d_k, d_j);
  require(num % den == 0, errc::internal_error, "composite arrow count not integral");
  return int(num / den);
}

// Matrix mutation at vertex k (1-based): b'_ij = -b_ij if i = k or j = k,
// else b_ij + (b_ik |b_kj| + |b_ik| b_kj) / 2.
inline ExchangeMatrix mutate_matrix(const ExchangeMatrix& m, int k) {
  require(k >= 1 && k <= m.n(), errc::invalid_argument, "vertex out of range");
  int kk = k - 1;
  ExchangeMatrix r = m;
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) {
      if (i == kk || j == kk) {
        r.B[i][j] = -m.B[i][j];
      } else {
        long long bik = m.B[i][kk], bkj = m.B[kk][j];
        r.B[i][j] = m.B[i][j] + (bik * std::abs(bkj) + std::abs(bik) * bkj) / 2;
      }
    }
  }
  return r;
}

// B -> weighted quiver: c_ij = gcd(d_i, d_j) b_ij / d_j arrows j -> i when
// c_ij > 0. Arrow names are generated deterministically.
inline WeightedQuiver matrix_to_wq(const ExchangeMatrix& m) {
  m.validate();
  WeightedQuiver q;
  q.weights = std::vector<int>(m.D.begin(), m.D.end());
  for (int i = 0; i < m.n(); ++i) {
    for (int j = 0; j < m.n(); ++j) {
      long long num = (long long)std::gcd(m.D[i], m.D[j]) * m.B[i][j];
      require(num % m.D[j] == 0, errc::not_skew_symmetrizable,
              "gcd(d_i,d_j) b_ij / d_j is not integral");
      long long cij = num / m.D[j];
      for (long long t = 0; t < cij; ++t) {
        std::string name = "a" + std::to_string(j + 1) + "_" + std::to_string(i + 1);
        if (cij > 1) name += "_" + std::to_string(t + 1);
        q.arrows.push_back({name, j + 1, i + 1});
      }
    }
  }
  return q;
}

// weighted quiver -> B (requires 2-acyclicity): b_ij = c_ij d_j / gcd(d_i, d_j)
// where c_ij = #(arrows j -> i) - #(arrows i -> j) is signed arrow count.
inline ExchangeMatrix wq_to_matrix(const WeightedQuiver& q) {
  require(!q.has_2_cycle(), errc::has_2_cycle, "quiver has a 2-cycle");
  ExchangeMatrix m;
  m.D = q.weights;
  m.B.assign(q.n(), std::vector<long long>(q.n(), 0));
  for (int i = 1; i <= q.n(); ++i) {
    for (int j = 1; j <= q.n(); ++j) {
      if (i == j) continue;
      long long cij = q.arrow_count(j, i) - q.arrow_count(i, j);
      m.B[i - 1][j - 1] = cij * q.weights[j - 1] / std::gcd(q.weights[i - 1], q.weights[j - 1]);
    }
  }
  m.validate();
  return m;
}

// Three-step weighted-quiver mutation at k: add composite arrows for each
// path j -> k -> i, reverse all arrows at k (name gains/loses a "*"), then
// cancel a maximal disjoint collection of 2-cycles, pairing lexicographically
// by (min vertex, max vertex, creation order).
inline WeightedQuiver mutate_wq(const WeightedQuiver& q, int k) {
  require(k >= 1 && k <= q.n(), errc::invalid_argument, "vertex out of range");
  require(!q.has_2_cycle(), errc::has_2_cycle, "quiver has a 2-cycle");
  WeightedQuiver r;
  r.weights = q.weights;
  auto star_name = [](const std::string& s) {
    if (s.size() >= 1 && s.back() == '*') return s.substr(0, s.size() - 1);
    return s + "*";
  };
  // composite arrows
  for (const Arrow& a : q.arrows) {
    if (a.head != k) continue;  // a: j -> k
    for (const Arrow& b : q.arrows) {
      if (b.tail != k) continue;  // b: k -> i
      int cnt = composite_arrow_count(q.weights[b.head - 1], q.weights[k - 1],
                                      q.weights[a.tail - 1]);
      for (int w = 0; w < cnt; ++w) {
        r.arrows.push_back({"[" + b.name + "." + std::to_string(w) + "." + a.name + "]",
                            a.tail, b.head});
      }
    }
  }
  // keep / reverse
  for (const Arrow& a : q.arrows) {
    if (a.head == k || a.tail == k)
      r.arrows.push_back({star_name(a.name), a.head, a.tail});
    else
      r.arrows.push_back(a);
  }
  // cancel 2-cycles
  for (int i = 1; i <= r.n(); ++i) {
    for (int j = i + 1; j <= r.n(); ++j) {
      while (true) {
        int fwd = -1, bwd = -1;
        for (size_t t = 0; t < r.arrows.size(); ++t) {
          if (fwd < 0 && r.arrows[t].tail == i && r.arrows[t].head == j) fwd = int(t);
          if (bwd < 0 && r.arrows[t].tail == j && r.arrows[t].head == i) bwd = int(t);
        }
        if (fwd < 0 || bwd < 0) break;
        r.arrows.erase(r.arrows.begin() + std::max(fwd, bwd));
        r.arrows.erase(r.arrows.begin() + std::min(fwd, bwd));
      }
    }
  }
  return r;
}

}  // namespace spf
