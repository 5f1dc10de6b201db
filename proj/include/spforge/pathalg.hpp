// Truncated complete path algebra R<<A>> of a weighted quiver over the tower.
//
// Canonical paths  w0 a1 w1 a2 ... aL wL  (arrows leftmost-first, so the
// rightmost arrow acts first; slot w_r lives at the vertex t(a_r) = h(a_{r+1})
// and must lie in the eigenbasis B of that vertex's subfield) form a scalar
// basis of each degree layer.  Elements are finite scalar combinations of
// paths of length <= N; every operation is exact modulo m^{N+1}.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "spforge/errors.hpp"
#include "spforge/fields.hpp"
#include "spforge/linalg.hpp"
#include "spforge/quivers.hpp"

namespace spf {

constexpr int kDefaultTrunc = 24;
constexpr int kInfDegree = 1 << 30;

struct Path {
  int vertex = 0;           // home vertex for length-0 paths (1-based)
  std::vector<int> arrows;  // arrow indices, a_1 (leftmost, acts last) first
  std::vector<int> slots;   // eigen exponents w_0..w_L, size arrows.size() + 1

  int length() const { return int(arrows.size()); }
};

inline int path_head(const WeightedQuiver& q, const Path& p) {
  return p.arrows.empty() ? p.vertex : q.arrows[p.arrows.front()].head;
}
inline int path_tail(const WeightedQuiver& q, const Path& p) {
  return p.arrows.empty() ? p.vertex : q.arrows[p.arrows.back()].tail;
}
// vertex at which slot r sits
inline int slot_vertex(const WeightedQuiver& q, const Path& p, int r) {
  if (p.arrows.empty()) return p.vertex;
  return r == 0 ? q.arrows[p.arrows.front()].head : q.arrows[p.arrows[r - 1]].tail;
}

inline void check_path(const WeightedQuiver& q, const FieldTower& tw, const Path& p) {
  require(p.slots.size() == p.arrows.size() + 1, errc::validation_error, "slot count mismatch");
  for (size_t r = 0; r + 1 < p.arrows.size(); ++r)
    require(q.arrows[p.arrows[r]].tail == q.arrows[p.arrows[r + 1]].head,
            errc::validation_error, "arrows not concatenable");
  for (size_t r = 0; r < p.slots.size(); ++r) {
    int v = slot_vertex(q, p, int(r));
    require(tw.in_subfield_basis(p.slots[r], q.weights[v - 1]), errc::validation_error,
            "slot exponent not in the eigenbasis of its vertex");
  }
}

// Canonical path ordering: (length, tail vertex, lexicographic arrow names,
// eigenbasis exponents).
struct PathLess {
  const WeightedQuiver* q = nullptr;
  bool operator()(const Path& a, const Path& b) const {
    if (a.length() != b.length()) return a.length() < b.length();
    int ta = path_tail(*q, a), tb = path_tail(*q, b);
    if (ta != tb) return ta < tb;
    for (int r = 0; r < a.length(); ++r) {
      const std::string& na = q->arrows[a.arrows[r]].name;
      const std::string& nb = q->arrows[b.arrows[r]].name;
      if (na != nb) return na < nb;
    }
    if (a.slots != b.slots) return a.slots < b.slots;
    // equal-length, equal names/slots: for length 0 distinguish by vertex
    return a.vertex < b.vertex && a.length() == 0;
  }
};

inline bool path_eq(const WeightedQuiver& q, const Path& a, const Path& b) {
  PathLess lt{&q};
  return !lt(a, b) && !lt(b, a);
}

class AlgebraElement {
 public:
  std::shared_ptr<const WeightedQuiver> q;
  std::shared_ptr<const FieldTower> tw;
  int trunc = kDefaultTrunc;
  std::map<Path, KElem, PathLess> terms;

  AlgebraElement() : terms(PathLess{nullptr}) {}
  AlgebraElement(std::shared_ptr<const WeightedQuiver> q_, std::shared_ptr<const FieldTower> tw_,
                 int trunc_)
      : q(std::move(q_)), tw(std::move(tw_)), trunc(trunc_), terms(PathLess{q.get()}) {}

  bool is_zero() const { return terms.empty(); }

  void add_term(const Path& p, const KElem& coeff) {
    if (tw->k_is_zero(coeff) || p.length() > trunc) return;
    auto it = terms.find(p);
    if (it == terms.end()) {
      terms.emplace(p, coeff);
    } else {
      it->second = tw->k_add(it->second, coeff);
      if (tw->k_is_zero(it->second)) terms.erase(it);
    }
  }
};

inline void check_compatible(const AlgebraElement& x, const AlgebraElement& y) {
  require(x.tw && y.tw && x.tw->same_tower(*y.tw), errc::tower_mismatch, "towers differ");
  require(x.trunc == y.trunc, errc::trunc_mismatch, "truncation bounds differ");
  require(x.q.get() == y.q.get() || x.q->shape() == y.q->shape(), errc::tower_mismatch,
          "elements live over different quivers");
}

inline AlgebraElement make_elem(std::shared_ptr<const WeightedQuiver> q,
                                std::shared_ptr<const FieldTower> tw, int trunc) {
  return AlgebraElement(std::move(q), std::move(tw), trunc);
}

// w * e_v as a length-0 path element
inline AlgebraElement slot_elem(const AlgebraElement& like, int vertex, int exponent,
                                KElem coeff) {
  AlgebraElement r(like.q, like.tw, like.trunc);
  Path p;
  p.vertex = vertex;
  p.slots = {exponent};
  r.add_term(p, std::move(coeff));
  return r;
}

inline AlgebraElement arrow_elem(const AlgebraElement& like, int arrow_idx) {
  AlgebraElement r(like.q, like.tw, like.trunc);
  Path p;
  p.arrows = {arrow_idx};
  p.slots = {0, 0};
  r.add_term(p, like.tw->k_one());
  return r;
}

inline AlgebraElement unit_elem(const AlgebraElement& like) {
  AlgebraElement r(like.q, like.tw, like.trunc);
  for (int v = 1; v <= like.q->n(); ++v) {
    Path p;
    p.vertex = v;
    p.slots = {0};
    r.add_term(p, like.tw->k_one());
  }
  return r;
}

inline AlgebraElement elem_add(const AlgebraElement& x, const AlgebraElement& y) {
  check_compatible(x, y);
  AlgebraElement r = x;
  for (const auto& [p, cf] : y.terms) r.add_term(p, cf);
  return r;
}

inline AlgebraElement elem_scale(const AlgebraElement& x, const KElem& s) {
  AlgebraElement r(x.q, x.tw, x.trunc);
  for (const auto& [p, cf] : x.terms) r.add_term(p, x.tw->k_mul(cf, s));
  return r;
}

inline AlgebraElement elem_neg(const AlgebraElement& x) {
  return elem_scale(x, x.tw->k_neg(x.tw->k_one()));
}

inline AlgebraElement elem_sub(const AlgebraElement& x, const AlgebraElement& y) {
  return elem_add(x, elem_neg(y));
}

// Product of two canonical paths: zero when endpoints mismatch, otherwise
// the concatenation with the joint slot merged through eig_mul.
inline std::optional<std::pair<KElem, Path>> path_mul(const WeightedQuiver& q,
                                                      const FieldTower& tw, const Path& x,
                                                      const Path& y) {
  if (path_tail(q, x) != path_head(q, y)) return std::nullopt;
  EigProduct m = tw.eig_mul(x.slots.back(), y.slots.front());
  Path r;
  r.arrows = x.arrows;
  r.arrows.insert(r.arrows.end(), y.arrows.begin(), y.arrows.end());
  r.slots.assign(x.slots.begin(), x.slots.end() - 1);
  r.slots.push_back(m.m);
  r.slots.insert(r.slots.end(), y.slots.begin() + 1, y.slots.end());
  if (r.arrows.empty()) r.vertex = x.vertex;
  return std::make_pair(m.f, r);
}

inline AlgebraElement elem_mul(const AlgebraElement& x, const AlgebraElement& y) {
  check_compatible(x, y);
  AlgebraElement r(x.q, x.tw, x.trunc);
  for (const auto& [px, cx] : x.terms) {
    for (const auto& [py, cy] : y.terms) {
      if (px.length() + py.length() > x.trunc) continue;
      auto prod = path_mul(*x.q, *x.tw, px, py);
      if (!prod) continue;
      KElem coeff = x.tw->k_mul(x.tw->k_mul(cx, cy), prod->first);
      r.add_term(prod->second, coeff);
    }
  }
  return r;
}

inline int min_degree(const AlgebraElement& x) {
  if (x.terms.empty()) return kInfDegree;
  return x.terms.begin()->first.length();  // ordering puts shortest first
}

inline bool elem_eq(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.terms.size() != y.terms.size()) return false;
  auto it = x.terms.begin(), jt = y.terms.begin();
  for (; it != x.terms.end(); ++it, ++jt) {
    if (!path_eq(*x.q, it->first, jt->first) || it->second != jt->second) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Morphisms of the complete path algebra fixing R pointwise: determined by
// arrow images phi(a) in e_{h(a)} m' e_{t(a)}; extension to all paths keeps
// the slot scalars.
// ---------------------------------------------------------------------------

struct Morphism {
  std::shared_ptr<const WeightedQuiver> src, dst;
  std::shared_ptr<const FieldTower> tw;
  int trunc = kDefaultTrunc;
  std::vector<AlgebraElement> images;  // indexed by src arrow index
};

inline Morphism identity_morphism(std::shared_ptr<const WeightedQuiver> q,
                                  std::shared_ptr<const FieldTower> tw, int trunc) {
  Morphism m{q, q, tw, trunc, {}};
  AlgebraElement like(q, tw, trunc);
  for (size_t a = 0; a < q->arrows.size(); ++a) m.images.push_back(arrow_elem(like, int(a)));
  return m;
}

inline AlgebraElement apply_morphism(const Morphism& phi, const AlgebraElement& x) {
  AlgebraElement like(phi.dst, phi.tw, phi.trunc);
  AlgebraElement r(phi.dst, phi.tw, phi.trunc);
  for (const auto& [p, cf] : x.terms) {
    if (p.arrows.empty()) {
      AlgebraElement t = slot_elem(like, p.vertex, p.slots[0], cf);
      r = elem_add(r, t);
      continue;
    }
    AlgebraElement acc = slot_elem(like, path_head(*x.q, p), p.slots[0], cf);
    for (int rr = 0; rr < p.length(); ++rr) {
      int a = p.arrows[rr];
      require(a >= 0 && a < int(phi.images.size()), errc::arrow_unmapped,
              "morphism has no image for arrow index " + std::to_string(a));
      acc = elem_mul(acc, phi.images[a]);
      if (p.slots[rr + 1] != 0)
        acc = elem_mul(acc, slot_elem(like, x.q->arrows[a].tail, p.slots[rr + 1],
                                      phi.tw->k_one()));
      if (acc.is_zero()) break;
    }
    r = elem_add(r, acc);
  }
  return r;
}

// (f o g)(a) = f(g(a))
inline Morphism compose(const Morphism& f, const Morphism& g) {
  Morphism m{g.src, f.dst, f.tw, f.trunc, {}};
  for (const AlgebraElement& img : g.images) m.images.push_back(apply_morphism(f, img));
  return m;
}

namespace detail {

// Degree-1 basis (w, arrow, z) of the (head i, tail j) block of the arrow
// span, with w in B_i and z in B_j, enumerated deterministically.
struct Deg1Basis {
  std::vector<std::tuple<int, int, int>> items;  // (w_exp, arrow_idx, z_exp)
  std::map<std::tuple<int, int, int>, int> index;
};

inline Deg1Basis deg1_basis(const WeightedQuiver& q, const FieldTower& tw, int head, int tail) {
  Deg1Basis b;
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    if (q.arrows[a].head != head || q.arrows[a].tail != tail) continue;
    for (int w : tw.subfield_basis(q.weights[head - 1]))
      for (int z : tw.subfield_basis(q.weights[tail - 1])) {
        b.index[{w, int(a), z}] = int(b.items.size());
        b.items.push_back({w, int(a), z});
      }
  }
  return b;
}

inline AlgebraElement deg1_part(const AlgebraElement& x) {
  AlgebraElement r(x.q, x.tw, x.trunc);
  for (const auto& [p, cf] : x.terms)
    if (p.length() == 1) r.add_term(p, cf);
  return r;
}

}  // namespace detail

// Inverse of phi modulo m^{N+1}: invert the linear part blockwise as a
// bimodule map, then fixed-point iteration on the unitriangular remainder
// (each round gains m-adic depth >= 1, so trunc rounds suffice).
inline Morphism invert_morphism(const Morphism& phi) {
  require(phi.src->n() == phi.dst->n(), errc::not_invertible, "vertex sets differ");
  const WeightedQuiver& qs = *phi.src;
  const WeightedQuiver& qd = *phi.dst;
  const FieldTower& tw = *phi.tw;
  KF kf{&tw};
  AlgebraElement like_src(phi.src, phi.tw, phi.trunc);
  AlgebraElement like_dst(phi.dst, phi.tw, phi.trunc);

  // psi1: dst -> src inverting the linear part
  Morphism psi1{phi.dst, phi.src, phi.tw, phi.trunc, {}};
  psi1.images.assign(qd.arrows.size(), AlgebraElement(phi.src, phi.tw, phi.trunc));
  for (int i = 1; i <= qs.n(); ++i) {
    for (int j = 1; j <= qs.n(); ++j) {
      if (i == j) continue;
      detail::Deg1Basis bs = detail::deg1_basis(qs, tw, i, j);
      detail::Deg1Basis bd = detail::deg1_basis(qd, tw, i, j);
      if (bs.items.empty() && bd.items.empty()) continue;
      require(bs.items.size() == bd.items.size(), errc::not_invertible,
              "arrow-span blocks have different dimensions");
      int nb = int(bs.items.size());
      Mat<KF> M = mat_zero(kf, nb, nb);
      for (int col = 0; col < nb; ++col) {
        auto [w, a, z] = bs.items[col];
        AlgebraElement img = detail::deg1_part(phi.images[a]);
        AlgebraElement full =
            elem_mul(elem_mul(slot_elem(like_dst, i, w, tw.k_one()), img),
                     slot_elem(like_dst, j, z, tw.k_one()));
        for (const auto& [p, cf] : full.terms) {
          if (p.length() != 1) continue;
          auto it = bd.index.find({p.slots[0], p.arrows[0], p.slots[1]});
          require(it != bd.index.end(), errc::internal_error, "degree-1 term outside block");
          M[it->second][col] = kf.add(M[it->second][col], cf);
        }
      }
      Mat<KF> Minv = mat_inverse(kf, M);  // throws NotInvertible when singular
      for (int bidx = 0; bidx < nb; ++bidx) {
        auto [w, barrow, z] = bd.items[bidx];
        if (w != 0 || z != 0) continue;  // only need images of plain arrows
        AlgebraElement img(phi.src, phi.tw, phi.trunc);
        for (int row = 0; row < nb; ++row) {
          if (kf.is_zero(Minv[row][bidx])) continue;
          auto [ws, as, zs] = bs.items[row];
          Path p;
          p.arrows = {as};
          p.slots = {ws, zs};
          img.add_term(p, Minv[row][bidx]);
        }
        psi1.images[barrow] = std::move(img);
      }
    }
  }

  // sigma = psi1 o phi is unitriangular: sigma(a) = a + eta(a), eta deepens.
  Morphism sigma = compose(psi1, phi);
  Morphism tau{phi.src, phi.src, phi.tw, phi.trunc, {}};
  for (size_t a = 0; a < qs.arrows.size(); ++a) tau.images.push_back(arrow_elem(like_src, int(a)));
  for (int round = 0; round < phi.trunc; ++round) {
    bool changed = false;
    Morphism next = tau;
    for (size_t a = 0; a < qs.arrows.size(); ++a) {
      AlgebraElement sx = apply_morphism(sigma, tau.images[a]);
      AlgebraElement corr = elem_sub(sx, tau.images[a]);  // eta through tau
      AlgebraElement nx = elem_sub(arrow_elem(like_src, int(a)), corr);
      if (!elem_eq(nx, tau.images[a])) changed = true;
      next.images[a] = std::move(nx);
    }
    tau = std::move(next);
    if (!changed) break;
  }
  return compose(tau, psi1);
}

}  // namespace spf
