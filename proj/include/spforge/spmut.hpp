// Species with potentials: the splitting (reduction) algorithm with its
// determinantal 2-acyclicity certificate, premutation, mutation, the
// constructive involutivity witness, and restriction to vertex subsets.
#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <set>
#include <vector>

#include "spforge/linalg.hpp"
#include "spforge/pathalg.hpp"
#include "spforge/potentials.hpp"

namespace spf {

struct SpeciesWithPotential {
  std::shared_ptr<const WeightedQuiver> q;
  std::shared_ptr<const FieldTower> tw;
  int trunc = kDefaultTrunc;
  AlgebraElement S;  // cyclic normal form

  static SpeciesWithPotential make(std::shared_ptr<const WeightedQuiver> q,
                                   std::shared_ptr<const FieldTower> tw, int trunc,
                                   const AlgebraElement& S) {
    SpeciesWithPotential sp;
    sp.q = std::move(q);
    sp.tw = std::move(tw);
    sp.trunc = trunc;
    sp.S = normalize_cyclic(S);
    return sp;
  }

  AlgebraElement zero_elem() const { return AlgebraElement(q, tw, trunc); }
};

// ---------------------------------------------------------------------------
// F_iF_j bookkeeping: for coprime weights the products w * z with w in B_i,
// z in B_j biject onto the eigenbasis of the compositum, so degree-2
// coefficients can be collected in that commutative subfield of E.
// ---------------------------------------------------------------------------

namespace detail {

// decompose v^e = factor * w * z with w in B_i, z in B_j (exponents)
struct FijSplit {
  int w = 0, z = 0;
  KElem factor;
};

inline FijSplit fij_decompose(const FieldTower& tw, int e, int d_i, int d_j) {
  for (int w : tw.subfield_basis(d_i)) {
    int z = (e - w % tw.d + tw.d) % tw.d;
    if (!tw.in_subfield_basis(z, d_j)) continue;
    FijSplit s;
    s.w = w;
    s.z = z;
    // v^w v^z = c^{wrap} v^e  =>  v^e = c^{-wrap} (v^w v^z)
    s.factor = (w + z >= tw.d) ? tw.k_from(spf::detail::inv_mod(tw.c, tw.p)) : tw.k_one();
    return s;
  }
  fail(errc::internal_error, "exponent not representable in F_iF_j");
}

// x * arrow as a degree-1 element, x in F_iF_j (i = head, j = tail subfield)
inline AlgebraElement fij_times_arrow(const AlgebraElement& like, const ExtElem& x, int arrow) {
  const FieldTower& tw = *like.tw;
  const WeightedQuiver& q = *like.q;
  int i = q.arrows[arrow].head, j = q.arrows[arrow].tail;
  AlgebraElement r(like.q, like.tw, like.trunc);
  for (int e = 0; e < tw.d; ++e) {
    if (tw.k_is_zero(x[e])) continue;
    FijSplit s = fij_decompose(tw, e, q.weights[i - 1], q.weights[j - 1]);
    Path p;
    p.arrows = {arrow};
    p.slots = {s.w, s.z};
    r.add_term(p, tw.k_mul(x[e], s.factor));
  }
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Splitting
// ---------------------------------------------------------------------------

struct SplitResult {
  SpeciesWithPotential reduced;
  SpeciesWithPotential trivial;
  Morphism witness;  // maps S_red + S_triv back to (a cyclic equivalent of) S
  std::vector<std::pair<int, int>> trivial_pairs;  // (a, b) arrow indices in the input quiver
};

// Determinants of the Delta submatrices of Lambda_{i,j}(S) for a chosen
// pairing of 2-cycle arrows; all nonzero certifies 2-acyclicity of the
// reduced part.
inline std::vector<ExtElem> two_acyclicity_certificate(
    const SpeciesWithPotential& sp, const std::vector<std::pair<int, int>>& pairing) {
  const WeightedQuiver& q = *sp.q;
  const FieldTower& tw = *sp.tw;
  EF ef{&tw};
  // validate pairing: distinct arrows forming 2-cycles
  std::set<int> used;
  for (auto [a, b] : pairing) {
    require(a >= 0 && a < int(q.arrows.size()) && b >= 0 && b < int(q.arrows.size()) &&
                a != b && used.insert(a).second && used.insert(b).second,
            errc::bad_pairing, "pairing arrows must be distinct");
    require(q.arrows[a].head == q.arrows[b].tail && q.arrows[a].tail == q.arrows[b].head,
            errc::bad_pairing, "paired arrows must form a 2-cycle");
  }
  // group pairs by unordered vertex pair
  std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> groups;
  for (auto [a, b] : pairing) {
    int i = q.arrows[a].head, j = q.arrows[a].tail;
    groups[{std::min(i, j), std::max(i, j)}].push_back({a, b});
  }
  // degree-2 entry map: (row arrow, col arrow) -> F_iF_j element
  std::map<std::pair<int, int>, ExtElem> entries;
  AlgebraElement Sn = normalize_cyclic(sp.S);
  for (const auto& [p, cf] : Sn.terms) {
    if (p.length() != 2) continue;
    int x = p.arrows[0], y = p.arrows[1];
    ExtElem val = tw.e_basis((p.slots[0] + p.slots[1]) % tw.d, cf);
    if (p.slots[0] + p.slots[1] >= tw.d) val = tw.e_scale(val, tw.k_from(tw.c));
    auto acc = [&](std::pair<int, int> key, const ExtElem& v) {
      auto it = entries.find(key);
      if (it == entries.end())
        entries.emplace(key, v);
      else
        it->second = tw.e_add(it->second, v);
    };
    acc({x, y}, val);
  }
  // entry lookup must be orientation-free: cycle (x, y) also stores (y, x)
  auto entry = [&](int r, int c) -> ExtElem {
    ExtElem v = tw.e_zero();
    auto it = entries.find({r, c});
    if (it != entries.end()) v = tw.e_add(v, it->second);
    it = entries.find({c, r});
    if (it != entries.end()) v = tw.e_add(v, it->second);
    return v;
  };
  std::vector<ExtElem> dets;
  for (const auto& [vtx, prs] : groups) {
    int n = int(prs.size());
    Mat<EF> m = mat_zero(ef, n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m[r][c] = entry(prs[r].first, prs[c].second);
    dets.push_back(mat_det(ef, m));
  }
  return dets;
}

namespace detail {

// next r-subset of {0..n-1} in lexicographic order; false when exhausted
inline bool next_subset(std::vector<int>& s, int n) {
  int r = int(s.size());
  for (int i = r - 1; i >= 0; --i) {
    if (s[i] < n - (r - i)) {
      ++s[i];
      for (int j = i + 1; j < r; ++j) s[j] = s[j - 1] + 1;
      return true;
    }
  }
  return false;
}

// Complement of the occurrence at position pos in a normalized cyclic term
// (trailing slot 0): the cycle reads  arrows[pos] . complement.
inline Path cycle_complement(const Path& p, int pos) {
  int l = p.length();
  Path comp;
  for (int t = pos + 1; t < l; ++t) {
    comp.slots.push_back(p.slots[t]);
    comp.arrows.push_back(p.arrows[t]);
  }
  comp.slots.push_back(p.slots[0]);
  for (int t = 0; t < pos; ++t) {
    comp.arrows.push_back(p.arrows[t]);
    comp.slots.push_back(p.slots[t + 1]);
  }
  return comp;
}

}  // namespace detail

inline SplitResult split(const SpeciesWithPotential& sp) {
  const WeightedQuiver& q = *sp.q;
  const FieldTower& tw = *sp.tw;
  EF ef{&tw};
  AlgebraElement S = normalize_cyclic(sp.S);
  AlgebraElement like = sp.zero_elem();

  // ---- collect the degree-2 data per unordered vertex pair ----------------
  struct Block {
    int i = 0, j = 0;                 // head/tail convention: rows head i, cols head j
    std::vector<int> rows, cols;      // arrow indices: rows j->i, cols i->j
    Mat<EF> lambda;
  };
  std::map<std::pair<int, int>, ExtElem> entries;  // (first arrow, second arrow) of cycles
  for (const auto& [p, cf] : S.terms) {
    if (p.length() != 2) continue;
    ExtElem val = tw.e_basis((p.slots[0] + p.slots[1]) % tw.d, cf);
    if (p.slots[0] + p.slots[1] >= tw.d) val = tw.e_scale(val, tw.k_from(tw.c));
    auto key = std::make_pair(p.arrows[0], p.arrows[1]);
    auto it = entries.find(key);
    if (it == entries.end())
      entries.emplace(key, val);
    else
      it->second = tw.e_add(it->second, val);
  }
  std::vector<Block> blocks;
  {
    std::set<std::pair<int, int>> vtx_pairs;
    for (const auto& [key, val] : entries) {
      int i = q.arrows[key.first].head, j = q.arrows[key.first].tail;
      vtx_pairs.insert({std::min(i, j), std::max(i, j)});
    }
    for (auto [vi, vj] : vtx_pairs) {
      Block b;
      b.i = vi;
      b.j = vj;
      for (size_t a = 0; a < q.arrows.size(); ++a) {
        if (q.arrows[a].head == vi && q.arrows[a].tail == vj) b.rows.push_back(int(a));
        if (q.arrows[a].head == vj && q.arrows[a].tail == vi) b.cols.push_back(int(a));
      }
      b.lambda = mat_zero(ef, int(b.rows.size()), int(b.cols.size()));
      for (size_t r = 0; r < b.rows.size(); ++r)
        for (size_t c = 0; c < b.cols.size(); ++c) {
          ExtElem v = tw.e_zero();
          auto it = entries.find({b.rows[r], b.cols[c]});
          if (it != entries.end()) v = tw.e_add(v, it->second);
          it = entries.find({b.cols[c], b.rows[r]});
          if (it != entries.end()) v = tw.e_add(v, it->second);
          b.lambda[r][c] = v;
        }
      blocks.push_back(std::move(b));
    }
  }

  // trivial case: no degree-2 part
  bool has_deg2 = !entries.empty();
  if (!has_deg2) {
    SplitResult r;
    r.reduced = sp;
    r.reduced.S = S;
    WeightedQuiver tq;
    tq.weights = q.weights;
    r.trivial.q = std::make_shared<const WeightedQuiver>(tq);
    r.trivial.tw = sp.tw;
    r.trivial.trunc = sp.trunc;
    r.trivial.S = AlgebraElement(r.trivial.q, sp.tw, sp.trunc);
    r.witness = identity_morphism(sp.q, sp.tw, sp.trunc);
    return r;
  }

  // ---- choose pairings: lexicographically first nonsingular r x r minor ---
  Morphism phi_total = identity_morphism(sp.q, sp.tw, sp.trunc);
  std::vector<std::pair<int, int>> trivial_pairs;
  Morphism change = identity_morphism(sp.q, sp.tw, sp.trunc);
  for (Block& blk : blocks) {
    int m = int(blk.rows.size()), n = int(blk.cols.size());
    int rank = mat_rank(ef, blk.lambda);
    if (rank == 0) continue;
    std::vector<int> rs(rank), cs(rank);
    std::iota(rs.begin(), rs.end(), 0);
    bool found = false;
    do {
      std::iota(cs.begin(), cs.end(), 0);
      do {
        Mat<EF> sub = mat_zero(ef, rank, rank);
        for (int r = 0; r < rank; ++r)
          for (int c = 0; c < rank; ++c) sub[r][c] = blk.lambda[rs[r]][cs[c]];
        if (!ef.is_zero(mat_det(ef, sub))) {
          found = true;
          break;
        }
      } while (detail::next_subset(cs, n));
      if (found) break;
    } while (detail::next_subset(rs, m));
    require(found, errc::no_valid_pairing, "no nonsingular minor of the certified rank");
    // reorder: selected rows/cols first
    std::vector<int> rperm = rs, cperm = cs;
    for (int t = 0; t < m; ++t)
      if (std::find(rs.begin(), rs.end(), t) == rs.end()) rperm.push_back(t);
    for (int t = 0; t < n; ++t)
      if (std::find(cs.begin(), cs.end(), t) == cs.end()) cperm.push_back(t);
    // Lambda (reordered) = [[Delta, U], [X, Y]] with Delta invertible;
    // R = [[Delta^{-1}, 0], [-X Delta^{-1}, I]], Ccol = [[I, -Delta^{-1} U], [0, I]]
    // give R Lambda Ccol = [[I, 0], [0, 0]] (rank forces Y = X Delta^{-1} U).
    auto L = [&](int r, int c) { return blk.lambda[rperm[r]][cperm[c]]; };
    Mat<EF> Delta = mat_zero(ef, rank, rank);
    for (int r = 0; r < rank; ++r)
      for (int c = 0; c < rank; ++c) Delta[r][c] = L(r, c);
    Mat<EF> Dinv = mat_inverse(ef, Delta);
    Mat<EF> R = mat_identity(ef, m);
    for (int r = 0; r < rank; ++r)
      for (int c = 0; c < rank; ++c) R[r][c] = Dinv[r][c];
    for (int r = rank; r < m; ++r)
      for (int c = 0; c < rank; ++c) {
        ExtElem acc = tw.e_zero();
        for (int t = 0; t < rank; ++t) acc = tw.e_add(acc, tw.e_mul(L(r, t), Dinv[t][c]));
        R[r][c] = tw.e_neg(acc);
      }
    Mat<EF> Ccol = mat_identity(ef, n);
    for (int r = 0; r < rank; ++r)
      for (int c = rank; c < n; ++c) {
        ExtElem acc = tw.e_zero();
        for (int t = 0; t < rank; ++t) acc = tw.e_add(acc, tw.e_mul(Dinv[r][t], L(t, c)));
        Ccol[r][c] = tw.e_neg(acc);
      }
    // substitutions phi(a_t) = sum_s P_{ts} a_s with P = R^T; phi(b_l) = sum_r Ccol_{lr} b_r
    for (int t = 0; t < m; ++t) {
      AlgebraElement img(sp.q, sp.tw, sp.trunc);
      for (int s = 0; s < m; ++s) {
        const ExtElem& coeff = R[s][t];
        if (ef.is_zero(coeff)) continue;
        img = elem_add(img, detail::fij_times_arrow(like, coeff, blk.rows[rperm[s]]));
      }
      change.images[blk.rows[rperm[t]]] = std::move(img);
    }
    for (int l = 0; l < n; ++l) {
      AlgebraElement img(sp.q, sp.tw, sp.trunc);
      for (int r = 0; r < n; ++r) {
        const ExtElem& coeff = Ccol[l][r];
        if (ef.is_zero(coeff)) continue;
        img = elem_add(img, detail::fij_times_arrow(like, coeff, blk.cols[cperm[r]]));
      }
      change.images[blk.cols[cperm[l]]] = std::move(img);
    }
    for (int t = 0; t < rank; ++t)
      trivial_pairs.push_back({blk.rows[rperm[t]], blk.cols[cperm[t]]});
  }
  S = normalize_cyclic(apply_morphism(change, S));
  phi_total = change;

  // expected quadratic part: sum of a_k b_k cycles with unit slots
  AlgebraElement quad(sp.q, sp.tw, sp.trunc);
  for (auto [a, b] : trivial_pairs) {
    Path p;
    p.arrows = {a, b};
    p.slots = {0, 0, 0};
    quad = elem_add(quad, normalize_cyclic([&] {
      AlgebraElement t0(sp.q, sp.tw, sp.trunc);
      t0.add_term(p, tw.k_one());
      return t0;
    }()));
  }
  {
    // sanity: after the change of arrows the quadratic layer is exactly quad
    AlgebraElement deg2(sp.q, sp.tw, sp.trunc);
    for (const auto& [p, cf] : S.terms)
      if (p.length() == 2) deg2.add_term(p, cf);
    require(elem_eq(deg2, quad), errc::no_valid_pairing,
            "degenerate quadratic part: change of arrows failed to normalize it");
  }

  // ---- eliminate cross terms; each round gains depth ----------------------
  std::set<int> trivial_arrows;
  for (auto [a, b] : trivial_pairs) {
    trivial_arrows.insert(a);
    trivial_arrows.insert(b);
  }
  auto has_trivial_arrow = [&](const AlgebraElement& x) {
    for (const auto& [p, cf] : x.terms)
      for (int a : p.arrows)
        if (trivial_arrows.count(a)) return true;
    return false;
  };
  std::map<int, int> partner;  // trivial arrow -> the other arrow of its pair
  for (auto [a, b] : trivial_pairs) {
    partner[a] = b;
    partner[b] = a;
  }
  for (int round = 0; round < sp.trunc; ++round) {
    // for every residual term still containing a trivial arrow, rotate ONE
    // occurrence to the front and fold the complement into the image of the
    // partner arrow; one occurrence per term avoids over-counting terms that
    // contain a trivial arrow several times
    AlgebraElement R = normalize_cyclic(elem_sub(S, quad));
    std::map<int, AlgebraElement> corr;  // arrow -> accumulated correction
    for (const auto& [p, cf] : R.terms) {
      int l = p.length();
      int pos = -1;
      for (int t = 0; t < l && pos < 0; ++t)
        if (trivial_arrows.count(p.arrows[t])) pos = t;
      if (pos < 0) continue;
      int tgt = partner.at(p.arrows[pos]);
      AlgebraElement piece(sp.q, sp.tw, sp.trunc);
      piece.add_term(detail::cycle_complement(p, pos), cf);
      auto it = corr.find(tgt);
      if (it == corr.end())
        corr.emplace(tgt, piece);
      else
        it->second = elem_add(it->second, piece);
    }
    if (corr.empty()) break;
    Morphism step = identity_morphism(sp.q, sp.tw, sp.trunc);
    for (const auto& [tgt, g] : corr)
      step.images[tgt] = elem_sub(arrow_elem(like, tgt), g);
#ifdef SPFORGE_TRACE_SPLIT
    std::cerr << "split round " << round << ": S terms " << S.terms.size()
              << " residual " << R.terms.size() << " mindeg "
              << min_degree(R) << "\n";
#endif
    S = normalize_cyclic(apply_morphism(step, S));
    phi_total = compose(step, phi_total);
  }
  AlgebraElement rest = elem_sub(S, quad);
  require(!has_trivial_arrow(rest), errc::no_valid_pairing,
          "elimination left mixed terms past the truncation bound");

  // ---- assemble result ----------------------------------------------------
  SplitResult res;
  res.trivial_pairs = trivial_pairs;
  // reduced quiver: non-trivial arrows, original names
  auto red_q = std::make_shared<WeightedQuiver>();
  red_q->weights = q.weights;
  std::map<int, int> red_map;  // old arrow index -> reduced arrow index
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    if (trivial_arrows.count(int(a))) continue;
    red_map[int(a)] = int(red_q->arrows.size());
    red_q->arrows.push_back(q.arrows[a]);
  }
  auto triv_q = std::make_shared<WeightedQuiver>();
  triv_q->weights = q.weights;
  std::map<int, int> triv_map;
  for (int a : trivial_arrows) {
    triv_map[a] = int(triv_q->arrows.size());
    triv_q->arrows.push_back(q.arrows[a]);
  }
  auto remap = [&](const AlgebraElement& x, std::shared_ptr<const WeightedQuiver> nq,
                   const std::map<int, int>& mp) {
    AlgebraElement out(nq, sp.tw, sp.trunc);
    for (const auto& [p, cf] : x.terms) {
      Path np = p;
      for (int& a : np.arrows) a = mp.at(a);
      out.add_term(np, cf);
    }
    return out;
  };
  res.reduced.q = red_q;
  res.reduced.tw = sp.tw;
  res.reduced.trunc = sp.trunc;
  res.reduced.S = normalize_cyclic(remap(rest, red_q, red_map));
  res.trivial.q = triv_q;
  res.trivial.tw = sp.tw;
  res.trivial.trunc = sp.trunc;
  res.trivial.S = normalize_cyclic(remap(quad, triv_q, triv_map));
  res.witness = invert_morphism(phi_total);
  return res;
}

// ---------------------------------------------------------------------------
// Premutation and mutation
// ---------------------------------------------------------------------------

namespace detail {

inline std::string star_name(const std::string& s) {
  if (!s.empty() && s.back() == '*') return s.substr(0, s.size() - 1);
  return s + "*";
}

// rotate a normalized cyclic path so that it does not start/end at k
inline Path rotate_off_vertex(const WeightedQuiver& q, const Path& p, int k) {
  if (path_tail(q, p) != k) return p;
  PathLess lt{&q};
  std::optional<Path> best;
  for (int r = 1; r < p.length(); ++r) {
    Path cand = rotate_cycle(p, r);
    if (path_tail(q, cand) == k) continue;
    if (!best || lt(cand, *best)) best = cand;
  }
  require(best.has_value(), errc::internal_error, "cycle confined to one vertex");
  return *best;
}

}  // namespace detail

// mu~_k: new quiver with composite and starred arrows, potential [S] + tri_k(A).
inline SpeciesWithPotential premutate(const SpeciesWithPotential& sp, int k) {
  const WeightedQuiver& q = *sp.q;
  const FieldTower& tw = *sp.tw;
  require(k >= 1 && k <= q.n(), errc::invalid_argument, "vertex out of range");
  require(!q.has_2_cycle_at(k), errc::two_cycle_at_k,
          "an oriented 2-cycle is incident to k = " + std::to_string(k));

  std::vector<int> into_k, out_of_k;  // a: j->k and b: k->i
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    if (q.arrows[a].head == k) into_k.push_back(int(a));
    if (q.arrows[a].tail == k) out_of_k.push_back(int(a));
  }
  std::vector<int> bk = tw.subfield_basis(q.weights[k - 1]);

  // new quiver: untouched arrows, composites [b.w.a], stars
  auto nq = std::make_shared<WeightedQuiver>();
  nq->weights = q.weights;
  std::map<int, int> keep_map, star_map;              // old idx -> new idx
  std::map<std::tuple<int, int, int>, int> comp_map;  // (b, w, a) -> new idx
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    if (q.arrows[a].head == k || q.arrows[a].tail == k) continue;
    keep_map[int(a)] = int(nq->arrows.size());
    nq->arrows.push_back(q.arrows[a]);
  }
  for (int b : out_of_k)
    for (int a : into_k)
      for (int w : bk) {
        comp_map[{b, w, a}] = int(nq->arrows.size());
        nq->arrows.push_back({"[" + q.arrows[b].name + "." + std::to_string(w) + "." +
                                  q.arrows[a].name + "]",
                              q.arrows[a].tail, q.arrows[b].head});
      }
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    if (q.arrows[a].head != k && q.arrows[a].tail != k) continue;
    star_map[int(a)] = int(nq->arrows.size());
    nq->arrows.push_back({detail::star_name(q.arrows[a].name), q.arrows[a].head,
                          q.arrows[a].tail});
  }

  AlgebraElement nS(nq, sp.tw, sp.trunc);
  // [S]: substitute composites for passages through k
  AlgebraElement Sn = normalize_cyclic(sp.S);
  for (const auto& [p0, cf] : Sn.terms) {
    Path p = detail::rotate_off_vertex(q, p0, k);
    Path np;
    int l = p.length();
    int t = 0;
    np.slots.push_back(p.slots[0]);
    while (t < l) {
      int cur = p.arrows[t];
      if (t + 1 < l && q.arrows[cur].tail == k) {
        // passage cur w p.arrows[t+1] through k
        auto it = comp_map.find({cur, p.slots[t + 1], p.arrows[t + 1]});
        require(it != comp_map.end(), errc::internal_error, "missing composite arrow");
        np.arrows.push_back(it->second);
        np.slots.push_back(p.slots[t + 2]);
        t += 2;
      } else {
        require(q.arrows[cur].tail != k && q.arrows[cur].head != k, errc::internal_error,
                "unsubstituted passage through k");
        np.arrows.push_back(keep_map.at(cur));
        np.slots.push_back(p.slots[t + 1]);
        t += 1;
      }
    }
    nS.add_term(np, cf);
  }
  // tri_k(A) = sum_{a, b} sum_{w in B_k} w^{-1} b* [b w a] a*
  for (int b : out_of_k)
    for (int a : into_k)
      for (int w : bk) {
        EigProduct inv = tw.eig_inv(w);
        Path p;
        p.arrows = {star_map.at(b), comp_map.at({b, w, a}), star_map.at(a)};
        p.slots = {inv.m, 0, 0, 0};
        nS.add_term(p, inv.f);
      }
  return SpeciesWithPotential::make(nq, sp.tw, sp.trunc, nS);
}

// mu_k: reduced part of the premutation.
inline SpeciesWithPotential mutate(const SpeciesWithPotential& sp, int k) {
  return split(premutate(sp, k)).reduced;
}

// ---------------------------------------------------------------------------
// Involutivity witness: the three automorphisms of the double premutation.
// ---------------------------------------------------------------------------

struct InvolutionWitness {
  SpeciesWithPotential double_premut;  // mu~_k mu~_k (A, S)
  Morphism phi1, phi2, phi3;
  SpeciesWithPotential trivial;  // (C, T)
  bool verified = false;
};

inline InvolutionWitness involution_witness(const SpeciesWithPotential& sp, int k) {
  const FieldTower& tw = *sp.tw;
  SpeciesWithPotential once = premutate(sp, k);
  SpeciesWithPotential twice = premutate(once, k);
  const WeightedQuiver& qq = *twice.q;
  AlgebraElement like(twice.q, twice.tw, twice.trunc);

  // classify arrows of the double premutation by name against the original
  auto orig_index = [&](const std::string& name) { return sp.q->arrow_index(name); };
  // original arrows out of k (the "b" family), restored by double starring
  std::vector<int> b_family;  // indices in qq
  std::map<int, std::pair<std::pair<int, int>, int>> comp_star;  // qq idx -> ((a,b) orig, w)
  std::map<std::tuple<int, int, int>, int> comp1_map;            // (b, w, a) orig -> qq idx
  for (size_t t = 0; t < qq.arrows.size(); ++t) {
    const std::string& nm = qq.arrows[t].name;
    int oi = orig_index(nm);
    if (oi >= 0 && sp.q->arrows[oi].tail == k) b_family.push_back(int(t));
  }
  // composites of round 1 ([b.w.a]) and round 2 ([a*.w.b*]) by name structure
  for (size_t t = 0; t < qq.arrows.size(); ++t) {
    const std::string& nm = qq.arrows[t].name;
    if (nm.size() < 2 || nm.front() != '[' || nm.back() != ']') continue;
    std::string inner = nm.substr(1, nm.size() - 2);
    // split into left.w.right at the outermost dots (names may contain dots
    // only inside brackets, and k-incident arrows are never composites)
    size_t d1 = inner.find('.');
    size_t d2 = inner.rfind('.');
    if (d1 == std::string::npos || d1 == d2) continue;
    std::string left = inner.substr(0, d1);
    std::string right = inner.substr(d2 + 1);
    int w = std::stoi(inner.substr(d1 + 1, d2 - d1 - 1));
    if (!left.empty() && left.back() == '*') {
      // [a*.w.b*]: starred composite
      int a = orig_index(left.substr(0, left.size() - 1));
      int b = orig_index(right.substr(0, right.size() - 1));
      if (a >= 0 && b >= 0) comp_star[int(t)] = {{a, b}, w};
    } else {
      int b = orig_index(left);
      int a = orig_index(right);
      if (a >= 0 && b >= 0) comp1_map[{b, w, a}] = int(t);
    }
  }

  // phi1: multiply each restored original arrow b (out of k) by -1
  Morphism phi1 = identity_morphism(twice.q, twice.tw, twice.trunc);
  for (int t : b_family) phi1.images[t] = elem_neg(arrow_elem(like, t));

  // phi2: [b.w.a] -> [b.w.a] + b w a
  Morphism phi2 = identity_morphism(twice.q, twice.tw, twice.trunc);
  for (const auto& [key, t] : comp1_map) {
    auto [b, w, a] = key;
    int bq = qq.arrow_index(sp.q->arrows[b].name);
    int aq = qq.arrow_index(sp.q->arrows[a].name);
    require(bq >= 0 && aq >= 0, errc::internal_error, "restored arrows missing");
    Path p;
    p.arrows = {bq, aq};
    p.slots = {0, w, 0};
    AlgebraElement extra(twice.q, twice.tw, twice.trunc);
    extra.add_term(p, tw.k_one());
    phi2.images[t] = elem_add(arrow_elem(like, t), extra);
  }

  // trivial part (C, T) over qq: [ba][a*b*] + sum_l (1/c) [b v^l a][a* v^{d_k - l} b*]
  AlgebraElement T(twice.q, twice.tw, twice.trunc);
  int dk = sp.q->weights[k - 1];
  int step = tw.d / dk;
  KElem cinv = tw.k_from(spf::detail::inv_mod(tw.c, tw.p));
  std::map<int, std::pair<int, KElem>> pair_of;  // [b w a] -> ([a* w' b*], T coeff)
  for (const auto& [key, t1] : comp1_map) {
    auto [b, w, a] = key;
    int wl = w / step;                       // exponent of v_k
    int wdual = ((dk - wl) % dk) * step;     // v_k^{d_k - l} as a global exponent
    int t2 = -1;
    for (const auto& [tq, info] : comp_star)
      if (info.first == std::make_pair(a, b) && info.second == wdual) t2 = tq;
    require(t2 >= 0, errc::internal_error, "missing starred composite partner");
    KElem tc = wl == 0 ? tw.k_one() : cinv;
    pair_of[t1] = {t2, tc};
    Path p;
    p.arrows = {t1, t2};
    p.slots = {0, 0, 0};
    AlgebraElement term(twice.q, twice.tw, twice.trunc);
    term.add_term(p, tc);
    T = elem_add(T, term);
  }
  T = normalize_cyclic(T);

  // phi3 by elimination rounds on the starred-composite side
  AlgebraElement S23 = normalize_cyclic(apply_morphism(phi2, apply_morphism(phi1, twice.S)));
  Morphism phi3 = identity_morphism(twice.q, twice.tw, twice.trunc);
  AlgebraElement cur = S23;
  for (int round = 0; round < twice.trunc; ++round) {
    // residual terms still containing a round-1 composite t1: rotate ONE
    // occurrence of t1 to the front and fold the complement, scaled by the
    // inverse of the trivial coefficient, into the image of the partner t2.
    // One occurrence per term, so terms quadratic in t1 are not over-counted.
    AlgebraElement R = normalize_cyclic(elem_sub(cur, T));
    std::map<int, AlgebraElement> corr;  // t2 -> accumulated correction
    for (const auto& [p, cf] : R.terms) {
      int l = p.length();
      int pos = -1;
      for (int t = 0; t < l && pos < 0; ++t)
        if (pair_of.count(p.arrows[t])) pos = t;
      if (pos < 0) continue;  // no composite: belongs to the restored potential
      auto [t2, tc] = pair_of.at(p.arrows[pos]);
      AlgebraElement piece(twice.q, twice.tw, twice.trunc);
      piece.add_term(detail::cycle_complement(p, pos), tw.k_mul(cf, tw.k_inv(tc)));
      auto it = corr.find(t2);
      if (it == corr.end())
        corr.emplace(t2, piece);
      else
        it->second = elem_add(it->second, piece);
    }
    if (corr.empty()) break;
    Morphism step_m = identity_morphism(twice.q, twice.tw, twice.trunc);
    for (const auto& [t2, g] : corr)
      step_m.images[t2] = elem_sub(arrow_elem(like, t2), g);
    cur = normalize_cyclic(apply_morphism(step_m, cur));
    phi3 = compose(step_m, phi3);
  }

  InvolutionWitness w;
  w.double_premut = twice;
  w.phi1 = phi1;
  w.phi2 = phi2;
  w.phi3 = phi3;
  w.trivial = SpeciesWithPotential::make(twice.q, twice.tw, twice.trunc, T);
  // verification: phi3 phi2 phi1 (S1) = S + T with S read through restored names
  AlgebraElement target = normalize_cyclic(elem_add([&] {
    AlgebraElement s(twice.q, twice.tw, twice.trunc);
    for (const auto& [p, cf] : sp.S.terms) {
      Path np = p;
      for (int& a : np.arrows) {
        int t = qq.arrow_index(sp.q->arrows[a].name);
        require(t >= 0, errc::internal_error, "original arrow not restored");
        a = t;
      }
      s.add_term(np, cf);
    }
    return s;
  }(), T));
  w.verified = elem_eq(normalize_cyclic(cur), target);
  require(w.verified, errc::witness_failed, "involutivity witness did not verify");
  return w;
}

// ---------------------------------------------------------------------------
// Restriction to a vertex subset I: delete arrows touching the complement,
// kill every potential term through a deleted arrow.
// ---------------------------------------------------------------------------

inline SpeciesWithPotential restrict_sp(const SpeciesWithPotential& sp,
                                        const std::set<int>& I) {
  require(!I.empty(), errc::empty_subset, "restriction to the empty vertex set");
  const WeightedQuiver& q = *sp.q;
  for (int v : I)
    require(v >= 1 && v <= q.n(), errc::invalid_argument, "vertex out of range");
  auto nq = std::make_shared<WeightedQuiver>();
  nq->weights = q.weights;
  std::map<int, int> amap;
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    if (!I.count(q.arrows[a].tail) || !I.count(q.arrows[a].head)) continue;
    amap[int(a)] = int(nq->arrows.size());
    nq->arrows.push_back(q.arrows[a]);
  }
  AlgebraElement nS(nq, sp.tw, sp.trunc);
  for (const auto& [p, cf] : sp.S.terms) {
    bool keep = true;
    for (int a : p.arrows)
      if (!amap.count(a)) {
        keep = false;
        break;
      }
    if (!keep) continue;
    Path np = p;
    for (int& a : np.arrows) a = amap.at(a);
    nS.add_term(np, cf);
  }
  return SpeciesWithPotential::make(nq, sp.tw, sp.trunc, nS);
}

}  // namespace spf
