// Potentials in cyclic normal form, cyclic equivalence, cyclic derivatives,
// second-order derivatives, the Delta/box calculus, and the truncated
// Jacobian ideal/algebra dimension probe.
//
// Normal form: every stored cycle ends right after its last arrow (trailing
// eigen slot 1) and is the minimal rotation under the canonical path
// ordering; the trailing-slot absorption contributes the scalar f(w_L, w_0).
#pragma once

#include <map>
#include <utility>
#include <vector>

#include "spforge/pathalg.hpp"

namespace spf {

inline bool path_is_cyclic(const WeightedQuiver& q, const Path& p) {
  return p.length() >= 1 && path_head(q, p) == path_tail(q, p);
}

namespace detail {

// All rotations of a normalized cycle (trailing slot 0), as paths. Rotation r
// starts the cycle at pair (slots[r], arrows[r]).
inline Path rotate_cycle(const Path& p, int r) {
  int l = p.length();
  Path out;
  out.arrows.reserve(l);
  out.slots.reserve(l + 1);
  for (int t = 0; t < l; ++t) {
    out.slots.push_back(p.slots[(r + t) % l]);
    out.arrows.push_back(p.arrows[(r + t) % l]);
  }
  out.slots.push_back(0);
  return out;
}

}  // namespace detail

// Rotate each cyclic term to trailing slot 1 and select the canonical
// (minimal) rotation; cyclically equivalent input gives identical output.
inline AlgebraElement normalize_cyclic(const AlgebraElement& x) {
  const WeightedQuiver& q = *x.q;
  const FieldTower& tw = *x.tw;
  AlgebraElement r(x.q, x.tw, x.trunc);
  PathLess lt{&q};
  for (const auto& [p, cf] : x.terms) {
    require(path_is_cyclic(q, p), errc::not_cyclic, "potential term is not a cyclic path");
    // absorb the trailing slot into the leading one
    Path base = p;
    KElem coeff = cf;
    if (base.slots.back() != 0) {
      EigProduct m = tw.eig_mul(base.slots.back(), base.slots.front());
      coeff = tw.k_mul(coeff, m.f);
      base.slots.front() = m.m;
      base.slots.back() = 0;
    }
    Path best = base;
    for (int rot = 1; rot < base.length(); ++rot) {
      Path cand = detail::rotate_cycle(base, rot);
      if (lt(cand, best)) best = cand;
    }
    r.add_term(best, coeff);
  }
  return r;
}

inline bool is_normal_potential(const AlgebraElement& x) {
  for (const auto& [p, cf] : x.terms) {
    if (!path_is_cyclic(*x.q, p) || p.slots.back() != 0) return false;
    (void)cf;
  }
  return elem_eq(x, normalize_cyclic(x));
}

// Cyclic derivative d/da: sum over occurrences a_k = a of the rotated
// remainder  w_k a_{k+1} ... a_L w_L w_0 a_1 ... a_{k-1} w_{k-1}.
inline AlgebraElement cyc_deriv(const AlgebraElement& S, int arrow) {
  const WeightedQuiver& q = *S.q;
  const FieldTower& tw = *S.tw;
  require(arrow >= 0 && arrow < int(q.arrows.size()), errc::unknown_arrow,
          "arrow index out of range");
  AlgebraElement r(S.q, S.tw, S.trunc);
  for (const auto& [p, cf] : S.terms) {
    require(path_is_cyclic(q, p), errc::not_cyclic, "cyclic derivative of a non-cycle");
    int l = p.length();
    for (int k = 0; k < l; ++k) {  // occurrence at arrows[k]
      if (p.arrows[k] != arrow) continue;
      EigProduct m = tw.eig_mul(p.slots[l], p.slots[0]);
      Path out;
      for (int t = k + 1; t < l; ++t) {
        out.slots.push_back(p.slots[t]);
        out.arrows.push_back(p.arrows[t]);
      }
      out.slots.push_back(m.m);
      for (int t = 0; t < k; ++t) {
        out.arrows.push_back(p.arrows[t]);
        out.slots.push_back(p.slots[t + 1]);
      }
      // the slot list above interleaves as w_k..w_{L-1}, merged, w_1..w_{k-1}
      if (out.arrows.empty()) out.vertex = q.arrows[arrow].tail;
      r.add_term(out, tw.k_mul(cf, m.f));
    }
  }
  return r;
}

// Second derivative d/d(b w a) on cycles through k = h(a) = t(b): delete the
// subword "b w a" and read the remaining word cyclically starting after a.
inline AlgebraElement second_deriv(const AlgebraElement& S, int b, int w, int a) {
  const WeightedQuiver& q = *S.q;
  require(q.arrows[a].head == q.arrows[b].tail, errc::not_through_k,
          "h(a) != t(b): the pair does not pass through one vertex");
  AlgebraElement Sn = normalize_cyclic(S);
  AlgebraElement r(S.q, S.tw, S.trunc);
  for (const auto& [p, cf] : Sn.terms) {
    int l = p.length();
    for (int t = 0; t < l; ++t) {
      // pattern: arrows[t] = b, then (cyclically) arrows[t+1] = a, separated
      // by the slot to the left of a
      int tn = (t + 1) % l;
      if (p.arrows[t] != b || p.arrows[tn] != a || p.slots[tn] != w) continue;
      Path out;
      for (int s = 2; s < l; ++s) {
        int idx = (t + s) % l;
        out.slots.push_back(p.slots[idx]);
        out.arrows.push_back(p.arrows[idx]);
      }
      out.slots.push_back(p.slots[t]);
      if (out.arrows.empty()) out.vertex = q.arrows[a].tail;
      r.add_term(out, cf);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Delta/box calculus.  Delta_a splits each path at occurrences of a into a
// formal bitensor sum of (left, right) parts; (u (x) v) box g = v g u.
// ---------------------------------------------------------------------------

struct BiTensor {
  std::shared_ptr<const WeightedQuiver> q;
  std::shared_ptr<const FieldTower> tw;
  int trunc = kDefaultTrunc;
  std::vector<std::tuple<Path, Path, KElem>> terms;  // (u, v, coeff)
};

inline BiTensor delta(const AlgebraElement& x, int arrow) {
  const WeightedQuiver& q = *x.q;
  BiTensor bt{x.q, x.tw, x.trunc, {}};
  for (const auto& [p, cf] : x.terms) {
    int l = p.length();
    for (int k = 0; k < l; ++k) {
      if (p.arrows[k] != arrow) continue;
      Path u, v;
      for (int t = 0; t < k; ++t) {
        u.slots.push_back(p.slots[t]);
        u.arrows.push_back(p.arrows[t]);
      }
      u.slots.push_back(p.slots[k]);
      if (u.arrows.empty()) u.vertex = path_head(q, p);
      for (int t = k + 1; t < l; ++t) {
        v.slots.push_back(p.slots[t]);
        v.arrows.push_back(p.arrows[t]);
      }
      v.slots.push_back(p.slots[l]);
      if (v.arrows.empty()) v.vertex = path_tail(q, p);
      bt.terms.push_back({std::move(u), std::move(v), cf});
    }
  }
  return bt;
}

inline AlgebraElement box(const BiTensor& bt, const AlgebraElement& g) {
  AlgebraElement r(bt.q, bt.tw, bt.trunc);
  for (const auto& [u, v, cf] : bt.terms) {
    AlgebraElement ue(bt.q, bt.tw, bt.trunc), ve(bt.q, bt.tw, bt.trunc);
    ue.add_term(u, bt.tw->k_one());
    ve.add_term(v, cf);
    r = elem_add(r, elem_mul(elem_mul(ve, g), ue));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Jacobian ideal dimension probe: row-reduce the spanning set
// { u * dS/da * w } degree by degree; the quotient layer at degree L is empty
// when every degree-L path is a pivot.  Two consecutive empty layers stop the
// scan (nilpotent quotient), otherwise the result is a lower bound at N.
// ---------------------------------------------------------------------------

struct JacobianReport {
  long long dim = 0;
  bool stabilized = false;
  // per (head, tail) vertex pair: quotient dimension contribution
  std::map<std::pair<int, int>, long long> block_dims;
};

namespace detail {

// all canonical paths of the given length, grouped generation
inline std::vector<Path> paths_of_length(const WeightedQuiver& q, const FieldTower& tw, int l,
                                         const std::vector<Path>& shorter) {
  std::vector<Path> out;
  if (l == 0) {
    for (int v = 1; v <= q.n(); ++v)
      for (int w : tw.subfield_basis(q.weights[v - 1])) {
        Path p;
        p.vertex = v;
        p.slots = {w};
        out.push_back(p);
      }
    return out;
  }
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    for (const Path& p : shorter) {
      if (path_head(q, p) != q.arrows[a].tail) continue;
      for (int w0 : tw.subfield_basis(q.weights[q.arrows[a].head - 1])) {
        Path np;
        np.arrows.reserve(l);
        np.arrows.push_back(int(a));
        np.arrows.insert(np.arrows.end(), p.arrows.begin(), p.arrows.end());
        np.slots.reserve(l + 1);
        np.slots.push_back(w0);
        np.slots.insert(np.slots.end(), p.slots.begin(), p.slots.end());
        out.push_back(std::move(np));
      }
    }
  }
  return out;
}

}  // namespace spf::detail

inline JacobianReport jacobian_dim(const AlgebraElement& S, int N) {
  const WeightedQuiver& q = *S.q;
  const FieldTower& tw = *S.tw;
  PathLess lt{&q};
  // derivative generators
  std::vector<AlgebraElement> gens;
  for (size_t a = 0; a < q.arrows.size(); ++a) gens.push_back(cyc_deriv(S, int(a)));

  // reduced rows keyed by pivot path
  std::map<Path, AlgebraElement, PathLess> rows{lt};
  auto reduce_insert = [&](AlgebraElement x) {
    while (!x.is_zero()) {
      Path piv = x.terms.begin()->first;
      KElem lead = x.terms.begin()->second;
      auto it = rows.find(piv);
      if (it == rows.end()) {
        x = elem_scale(x, tw.k_inv(lead));
        rows.emplace(piv, std::move(x));
        return;
      }
      x = elem_sub(x, elem_scale(it->second, lead));
    }
  };

  std::vector<std::vector<Path>> paths(1);
  paths[0] = detail::paths_of_length(q, tw, 0, {});
  std::map<int, long long> pivots_at;     // pivot count per degree
  std::map<int, long long> paths_at;      // path count per degree
  paths_at[0] = (long long)paths[0].size();

  JacobianReport rep;
  int consecutive_empty = 0;
  int top = 0;
  for (int L = 0; L <= N; ++L) {
    top = L;
    if (L > 0) {
      paths.push_back(detail::paths_of_length(q, tw, L, paths[L - 1]));
      paths_at[L] = (long long)paths[L].size();
    }
    // generators whose formal leading degree is L
    for (size_t a = 0; a < gens.size(); ++a) {
      const AlgebraElement& Da = gens[a];
      if (Da.is_zero()) continue;
      int d0 = min_degree(Da);
      if (d0 > L) continue;
      int rest = L - d0;
      int hd = q.arrows[a].tail, tl = q.arrows[a].head;  // head/tail of dS/da
      for (int lu = 0; lu <= rest; ++lu) {
        int lw = rest - lu;
        for (const Path& u : paths[lu]) {
          if (path_tail(q, u) != hd) continue;
          AlgebraElement ue(S.q, S.tw, S.trunc);
          ue.add_term(u, tw.k_one());
          AlgebraElement uD = elem_mul(ue, Da);
          if (uD.is_zero()) continue;
          for (const Path& w : paths[lw]) {
            if (path_head(q, w) != tl) continue;
            AlgebraElement we(S.q, S.tw, S.trunc);
            we.add_term(w, tw.k_one());
            reduce_insert(elem_mul(uD, we));
          }
        }
      }
    }
    // pivot census (pivot degrees <= L are final once step L completes)
    pivots_at.clear();
    for (const auto& [piv, row] : rows) pivots_at[piv.length()]++;
    bool empty_layer = (paths_at[L] == pivots_at[L]);
    consecutive_empty = empty_layer ? consecutive_empty + 1 : 0;
    if (consecutive_empty >= 2) {
      rep.stabilized = true;
      break;
    }
  }
  // quotient dimension: non-pivot paths per processed degree, per block
  std::map<Path, bool, PathLess> is_pivot{lt};
  for (const auto& [piv, row] : rows) is_pivot[piv] = true;
  for (int L = 0; L <= top; ++L) {
    for (const Path& p : paths[L]) {
      if (is_pivot.count(p)) continue;
      rep.dim++;
      rep.block_dims[{path_head(q, p), path_tail(q, p)}]++;
    }
  }
  return rep;
}

// Dimension of the corner e P e with e the sum of idempotents away from k.
inline long long restricted_dim(const JacobianReport& rep, int k) {
  long long out = 0;
  for (const auto& [ht, dim] : rep.block_dims)
    if (ht.first != k && ht.second != k) out += dim;
  return out;
}

}  // namespace spf
