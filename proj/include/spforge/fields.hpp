// Exact arithmetic in the Kummer tower  F = GF(p)  <=  F_i  <=  E = F[v]/(v^d - c).
//
// The base field may itself be extended to K = GF(p)[y]/(g(y)) = GF(p^m) with
// gcd(m, d) = 1, in which case every scalar below is a length-m coefficient
// vector over GF(p); the plain case m = 1 is a length-1 vector.
//
// E carries the eigenbasis {1, v, ..., v^{d-1}}: products of basis elements
// are scalar multiples of basis elements because v^d = c, which is what makes
// all path-algebra bookkeeping exact and finitary.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "spforge/errors.hpp"

namespace spf {

using u64 = std::uint64_t;

// Scalar of the base field K = GF(p)[y]/(g(y)); fixed length m, entries mod p.
using KElem = std::vector<u64>;

// Element of E over K in the eigenbasis: position j holds the coefficient of v^j.
using ExtElem = std::vector<KElem>;

namespace detail {

inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q = 2; q * q <= n; ++q)
    if (n % q == 0) return false;
  return true;
}

inline std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> out;
  for (u64 q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline u64 pow_mod(u64 base, u64 exp, u64 mod) {
  u64 r = 1 % mod;
  base %= mod;
  while (exp) {
    if (exp & 1) r = r * base % mod;
    base = base * base % mod;
    exp >>= 1;
  }
  return r;
}

inline u64 inv_mod(u64 a, u64 p) {
  require(a % p != 0, errc::division_by_zero, "inverse of zero mod p");
  return pow_mod(a, p - 2, p);  // p prime
}

// --- dense polynomials over GF(p), little-endian coefficients -------------

inline void poly_trim(std::vector<u64>& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline std::vector<u64> poly_mul(const std::vector<u64>& a, const std::vector<u64>& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  std::vector<u64> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  poly_trim(r);
  return r;
}

// Remainder of f modulo monic g.
inline std::vector<u64> poly_mod(std::vector<u64> f, const std::vector<u64>& g, u64 p) {
  poly_trim(f);
  const size_t dg = g.size() - 1;
  while (f.size() > dg) {
    u64 lead = f.back();
    size_t shift = f.size() - 1 - dg;
    for (size_t i = 0; i < g.size(); ++i) {
      f[shift + i] = (f[shift + i] + p * p - lead * g[i] % p) % p;
    }
    poly_trim(f);
  }
  return f;
}

inline std::vector<u64> poly_pow_mod(std::vector<u64> base, u64 exp, const std::vector<u64>& g,
                                     u64 p) {
  std::vector<u64> r{1};
  base = poly_mod(std::move(base), g, p);
  while (exp) {
    if (exp & 1) r = poly_mod(poly_mul(r, base, p), g, p);
    base = poly_mod(poly_mul(base, base, p), g, p);
    exp >>= 1;
  }
  return r;
}

inline std::vector<u64> poly_gcd(std::vector<u64> a, std::vector<u64> b, u64 p) {
  poly_trim(a);
  poly_trim(b);
  while (!b.empty()) {
    // make b monic for poly_mod
    u64 inv = inv_mod(b.back(), p);
    std::vector<u64> bm = b;
    for (auto& x : bm) x = x * inv % p;
    a = poly_mod(std::move(a), bm, p);
    std::swap(a, b);
  }
  return a;
}

// Irreducibility of monic g of degree m over GF(p): x^{p^m} = x (mod g) and
// gcd(x^{p^{m/q}} - x, g) = 1 for every prime q | m.
inline bool poly_irreducible(const std::vector<u64>& g, u64 p) {
  const size_t m = g.size() - 1;
  if (m == 0) return false;
  if (m == 1) return true;
  // x^{p^k} mod g, computed by k successive p-th powers
  auto frob_iter = [&](size_t k) {
    std::vector<u64> t{0, 1};  // x
    for (size_t i = 0; i < k; ++i) t = poly_pow_mod(t, p, g, p);
    return t;
  };
  std::vector<u64> xm = frob_iter(m);
  std::vector<u64> x{0, 1};
  // xm - x must be 0 mod g
  std::vector<u64> diff = xm;
  diff.resize(std::max<size_t>(diff.size(), 2), 0);
  diff[1] = (diff[1] + p - 1) % p;
  poly_trim(diff);
  if (!diff.empty()) return false;
  for (u64 q : prime_divisors(m)) {
    std::vector<u64> xk = frob_iter(m / q);
    std::vector<u64> dk = xk;
    dk.resize(std::max<size_t>(dk.size(), 2), 0);
    dk[1] = (dk[1] + p - 1) % p;
    poly_trim(dk);
    std::vector<u64> gc = poly_gcd(g, dk, p);
    if (gc.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

// The scalar pair (f, m) with  v^{j1} v^{j2} = f * v^m  or  (v^j)^{-1} = f * v^m.
struct EigProduct {
  KElem f;
  int m = 0;
};

class FieldTower {
 public:
  u64 p = 0;  // prime modulus of F = GF(p)
  int d = 1;  // degree of E over the base
  u64 c = 0;  // v^d = c, as an element of GF(p)
  int base_m = 1;                // [K : GF(p)]
  std::vector<u64> base_poly;    // monic irreducible g(y), size base_m + 1 (empty iff m == 1)

  // ----- scalars of the base field K --------------------------------------

  KElem k_zero() const { return KElem(base_m, 0); }
  KElem k_one() const { return k_from(1); }
  KElem k_from(u64 x) const {
    KElem r(base_m, 0);
    r[0] = x % p;
    return r;
  }
  bool k_is_zero(const KElem& a) const {
    return std::all_of(a.begin(), a.end(), [](u64 x) { return x == 0; });
  }
  KElem k_add(const KElem& a, const KElem& b) const {
    KElem r(base_m);
    for (int i = 0; i < base_m; ++i) r[i] = (a[i] + b[i]) % p;
    return r;
  }
  KElem k_sub(const KElem& a, const KElem& b) const {
    KElem r(base_m);
    for (int i = 0; i < base_m; ++i) r[i] = (a[i] + p - b[i]) % p;
    return r;
  }
  KElem k_neg(const KElem& a) const { return k_sub(k_zero(), a); }
  KElem k_mul(const KElem& a, const KElem& b) const {
    if (base_m == 1) return KElem{a[0] * b[0] % p};
    std::vector<u64> prod = detail::poly_mul(a, b, p);
    prod = detail::poly_mod(std::move(prod), base_poly, p);
    prod.resize(base_m, 0);
    return prod;
  }
  KElem k_inv(const KElem& a) const {
    require(!k_is_zero(a), errc::division_by_zero, "inverse of zero in base field");
    if (base_m == 1) return KElem{detail::inv_mod(a[0], p)};
    // extended Euclid of a against g(y); avoids overflow of p^m - 2 exponents
    std::vector<u64> r0 = base_poly, r1 = a, s0{}, s1{1};
    detail::poly_trim(r1);
    auto sub_shift = [&](std::vector<u64> f, const std::vector<u64>& g, size_t sh, u64 q) {
      if (g.size() + sh > f.size()) f.resize(g.size() + sh, 0);
      for (size_t i = 0; i < g.size(); ++i) f[i + sh] = (f[i + sh] + p * p - q * g[i] % p) % p;
      detail::poly_trim(f);
      return f;
    };
    while (true) {
      std::vector<u64> rem = r0, srem = s0;
      while (rem.size() >= r1.size() && !rem.empty()) {
        u64 q = rem.back() * detail::inv_mod(r1.back(), p) % p;
        size_t sh = rem.size() - r1.size();
        rem = sub_shift(std::move(rem), r1, sh, q);
        srem = sub_shift(std::move(srem), s1, sh, q);
      }
      if (rem.empty()) {
        require(r1.size() == 1, errc::internal_error, "gcd with irreducible g not constant");
        u64 inv_lead = detail::inv_mod(r1[0], p);
        KElem out(base_m, 0);
        for (size_t i = 0; i < s1.size() && i < size_t(base_m); ++i) out[i] = s1[i] * inv_lead % p;
        return out;
      }
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(srem);
    }
  }
  KElem k_scale(const KElem& a, u64 s) const {
    KElem r(base_m);
    for (int i = 0; i < base_m; ++i) r[i] = a[i] * (s % p) % p;
    return r;
  }

  // ----- eigenbasis bookkeeping -------------------------------------------

  // v^{j1} * v^{j2} = f * v^m
  EigProduct eig_mul(int j1, int j2) const {
    EigProduct r;
    int s = j1 + j2;
    r.m = s % d;
    r.f = (s >= d) ? k_from(c) : k_one();
    return r;
  }

  // (v^j)^{-1} = f * v^m
  EigProduct eig_inv(int j) const {
    EigProduct r;
    if (j % d == 0) {
      r.m = 0;
      r.f = k_one();
    } else {
      r.m = d - (j % d);
      r.f = k_from(detail::inv_mod(c, p));
    }
    return r;
  }

  // Exponents of the eigenbasis B_i of the subfield F_i of degree d_i.
  std::vector<int> subfield_basis(int d_i) const {
    require(d_i > 0 && d % d_i == 0, errc::not_divisor,
            "subfield degree " + std::to_string(d_i) + " does not divide d = " + std::to_string(d));
    std::vector<int> out;
    int step = d / d_i;
    for (int e = 0; e < d; e += step) out.push_back(e);
    return out;
  }

  bool in_subfield_basis(int j, int d_i) const { return j % (d / d_i) == 0; }

  // ----- elements of E -----------------------------------------------------

  ExtElem e_zero() const { return ExtElem(d, k_zero()); }
  ExtElem e_one() const {
    ExtElem r = e_zero();
    r[0] = k_one();
    return r;
  }
  ExtElem e_basis(int j, KElem coeff) const {
    ExtElem r = e_zero();
    r[j % d] = std::move(coeff);
    return r;
  }
  bool e_is_zero(const ExtElem& a) const {
    return std::all_of(a.begin(), a.end(), [&](const KElem& x) { return k_is_zero(x); });
  }
  ExtElem e_add(const ExtElem& a, const ExtElem& b) const {
    ExtElem r(d);
    for (int i = 0; i < d; ++i) r[i] = k_add(a[i], b[i]);
    return r;
  }
  ExtElem e_sub(const ExtElem& a, const ExtElem& b) const {
    ExtElem r(d);
    for (int i = 0; i < d; ++i) r[i] = k_sub(a[i], b[i]);
    return r;
  }
  ExtElem e_neg(const ExtElem& a) const { return e_sub(e_zero(), a); }
  ExtElem e_mul(const ExtElem& a, const ExtElem& b) const {
    ExtElem r = e_zero();
    KElem cc = k_from(c);
    for (int i = 0; i < d; ++i) {
      if (k_is_zero(a[i])) continue;
      for (int j = 0; j < d; ++j) {
        if (k_is_zero(b[j])) continue;
        KElem prod = k_mul(a[i], b[j]);
        int e = i + j;
        if (e >= d) {
          e -= d;
          prod = k_mul(prod, cc);
        }
        r[e] = k_add(r[e], prod);
      }
    }
    return r;
  }
  ExtElem e_scale(const ExtElem& a, const KElem& s) const {
    ExtElem r(d);
    for (int i = 0; i < d; ++i) r[i] = k_mul(a[i], s);
    return r;
  }
  // Inverse in E: a^(|E|-2) would overflow for large towers, so use the
  // extended Euclid of a against v^d - c over K[x].
  ExtElem e_inv(const ExtElem& a) const {
    require(!e_is_zero(a), errc::division_by_zero, "inverse of zero in E");
    // Extended Euclid over K[x] with KElem coefficients.
    using KPoly = std::vector<KElem>;
    auto trim = [&](KPoly& f) {
      while (!f.empty() && k_is_zero(f.back())) f.pop_back();
    };
    auto sub = [&](KPoly f, const KPoly& g) {
      if (g.size() > f.size()) f.resize(g.size(), k_zero());
      for (size_t i = 0; i < g.size(); ++i) f[i] = k_sub(f[i], g[i]);
      trim(f);
      return f;
    };
    auto shift_scale = [&](const KPoly& f, size_t sh, const KElem& s) {
      KPoly r(f.size() + sh, k_zero());
      for (size_t i = 0; i < f.size(); ++i) r[i + sh] = k_mul(f[i], s);
      return r;
    };
    // modulus x^d - c
    KPoly r0(d + 1, k_zero());
    r0[0] = k_neg(k_from(c));
    r0[d] = k_one();
    KPoly r1(a.begin(), a.end());
    trim(r1);
    KPoly s0{}, s1{k_one()};  // s tracks the Bezout coefficient of a
    while (true) {
      // divide r0 by r1
      KPoly rem = r0, quot_acc_s = s0;
      while (rem.size() >= r1.size() && !rem.empty()) {
        KElem q = k_mul(rem.back(), k_inv(r1.back()));
        size_t sh = rem.size() - r1.size();
        rem = sub(std::move(rem), shift_scale(r1, sh, q));
        quot_acc_s = sub(std::move(quot_acc_s), shift_scale(s1, sh, q));
      }
      if (rem.empty()) {
        // r1 is the gcd; it must be a nonzero constant since x^d - c is irreducible
        require(r1.size() == 1, errc::internal_error, "gcd with irreducible modulus not constant");
        KElem inv_lead = k_inv(r1[0]);
        ExtElem out = e_zero();
        for (size_t i = 0; i < s1.size() && i < size_t(d); ++i) out[i] = k_mul(s1[i], inv_lead);
        return out;
      }
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(quot_acc_s);
    }
  }

  bool e_eq(const ExtElem& a, const ExtElem& b) const { return a == b; }

  // The (possibly extended) element of E that is the plain scalar x.
  ExtElem e_from_k(const KElem& x) const {
    ExtElem r = e_zero();
    r[0] = x;
    return r;
  }

  // Support of a restricted to exponents divisible by step, i.e. membership
  // test for the compositum subfield spanned by those eigenvectors.
  bool e_supported_on(const ExtElem& a, int step) const {
    for (int j = 0; j < d; ++j)
      if (j % step != 0 && !k_is_zero(a[j])) return false;
    return true;
  }

  bool same_tower(const FieldTower& o) const {
    return p == o.p && d == o.d && c == o.c && base_m == o.base_m && base_poly == o.base_poly;
  }
};

// Validated construction of the tower F = GF(p) <= E = F[v]/(v^d - c).
inline FieldTower make_tower(u64 p, int d, u64 c) {
  require(detail::is_prime_u64(p), errc::not_prime, std::to_string(p) + " is not prime");
  require(d >= 1, errc::invalid_argument, "d must be positive");
  require((p - 1) % u64(d) == 0, errc::root_of_unity_missing,
          "p = " + std::to_string(p) + " is not 1 mod d = " + std::to_string(d));
  c %= p;
  if (d > 1) {
    require(c != 0, errc::reducible, "c = 0 makes X^d - c reducible");
    // X^d - c irreducible over GF(p) iff c is not a q-th power for each prime
    // q | d, and (when 4 | d) c is not in -4 * (GF(p)^x)^4.
    for (u64 q : detail::prime_divisors(u64(d))) {
      if (detail::pow_mod(c, (p - 1) / q, p) == 1)
        fail(errc::reducible, "c = " + std::to_string(c) + " is a " + std::to_string(q) +
                                  "-th power mod " + std::to_string(p));
    }
    if (d % 4 == 0) {
      for (u64 x = 1; x < p; ++x) {
        u64 x4 = detail::pow_mod(x, 4, p);
        if (c == (p - 4 % p) % p * x4 % p)
          fail(errc::reducible, "c lies in -4*(F^x)^4, so X^d - c is reducible");
      }
    }
  }
  FieldTower t;
  t.p = p;
  t.d = d;
  t.c = c;
  t.base_m = 1;
  return t;
}

// Smallest c >= 2 making X^d - c irreducible; deterministic across runs.
inline FieldTower make_tower_auto_c(u64 p, int d) {
  for (u64 c = 2; c < p; ++c) {
    try {
      return make_tower(p, d, c);
    } catch (const error& e) {
      if (e.code() != errc::reducible) throw;
    }
  }
  fail(errc::reducible, "no c in [2, p) makes X^d - c irreducible");
}

// Extend the base field to K = GF(p^m); requires gcd(m, d) = 1 so that K is
// linearly disjoint from E over GF(p). Elements of the old tower embed
// coefficientwise (constant polynomials in y).
inline FieldTower extend_base(const FieldTower& t, int m) {
  require(m >= 1, errc::invalid_argument, "extension degree must be positive");
  require(std::gcd(m, t.d) == 1, errc::not_coprime,
          "gcd(m, d) = " + std::to_string(std::gcd(m, t.d)) + " != 1");
  if (m == 1) {
    FieldTower r = t;
    r.base_m = 1;
    r.base_poly.clear();
    return r;
  }
  // Smallest monic irreducible g(y) of degree m, ordering candidates by the
  // integer whose base-p digits are the coefficients (constant term least
  // significant).
  u64 total = 1;
  for (int i = 0; i < m; ++i) total *= t.p;
  for (u64 n = 0; n < total; ++n) {
    std::vector<u64> g(m + 1, 0);
    u64 v = n;
    for (int i = 0; i < m; ++i) {
      g[i] = v % t.p;
      v /= t.p;
    }
    g[m] = 1;
    if (detail::poly_irreducible(g, t.p)) {
      FieldTower r;
      r.p = t.p;
      r.d = t.d;
      r.c = t.c;
      r.base_m = m;
      r.base_poly = std::move(g);
      return r;
    }
  }
  fail(errc::internal_error, "no irreducible polynomial of requested degree found");
}

// Coefficientwise embedding of a scalar/element of the unextended tower.
inline KElem embed_k(const FieldTower& big, const KElem& small) {
  KElem r = big.k_zero();
  r[0] = small[0];
  return r;
}
inline ExtElem embed_e(const FieldTower& big, const ExtElem& small) {
  ExtElem r = big.e_zero();
  for (size_t j = 0; j < small.size(); ++j) r[j] = embed_k(big, small[j]);
  return r;
}

}  // namespace spf
