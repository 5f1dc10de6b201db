// Randomized property suites shared by the test binaries and the CLI verify
// command: derivation identities (cyclic invariance, Leibniz, chain rule),
// splitting/mutation invariants, and decorated-representation invariants.
// All randomness flows from a caller-provided seed; a fixed seed gives a
// bit-identical run.
#pragma once

#include <random>
#include <string>
#include <vector>

#include "spforge/dreps.hpp"
#include "spforge/io.hpp"
#include "spforge/nondeg.hpp"
#include "spforge/unfold.hpp"

namespace spf {

struct PropResult {
  int trials = 0;
  int skipped = 0;  // draws that hit a legitimate math dead end (degeneracy)
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

namespace propgen {

// smallest prime p = 1 (mod d) for the sampled degrees
inline u64 smallest_prime_for(int d) {
  for (u64 p = u64(d) + 1;; p += d)
    if (detail::is_prime_u64(p)) return p;
}

inline std::shared_ptr<const FieldTower> random_tower(std::mt19937_64& rng) {
  static const int degrees[3] = {6, 10, 15};
  int d = degrees[rng() % 3];
  return std::make_shared<FieldTower>(make_tower_auto_c(smallest_prime_for(d), d));
}

// pairwise-coprime weights dividing d, one per vertex
inline std::vector<int> random_weights(std::mt19937_64& rng, int d, int n) {
  std::vector<int> divs;
  for (int x = 1; x <= d; ++x)
    if (d % x == 0) divs.push_back(x);
  std::vector<int> w;
  for (int i = 0; i < n; ++i) {
    std::vector<int> ok;
    for (int x : divs) {
      bool good = true;
      for (int y : w)
        if (std::gcd(x, y) != 1) good = false;
      if (good) ok.push_back(x);
    }
    w.push_back(ok[rng() % ok.size()]);
  }
  return w;
}

inline std::shared_ptr<const WeightedQuiver> random_quiver(std::mt19937_64& rng, int d) {
  int n = 3 + int(rng() % 3);
  WeightedQuiver q;
  q.weights = random_weights(rng, d, n);
  // an oriented cycle through all vertices, so cyclic potentials exist
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), rng);
  for (int i = 0; i < n; ++i) {
    Arrow a;
    a.tail = order[i];
    a.head = order[(i + 1) % n];
    a.name = "c" + std::to_string(i + 1) + "_" + std::to_string(a.tail) +
             std::to_string(a.head);
    q.arrows.push_back(std::move(a));
  }
  int arrows = int(rng() % (n + 1));
  for (int i = 0; i < arrows; ++i) {
    for (int attempt = 0; attempt < 40; ++attempt) {
      int t = 1 + int(rng() % n), h = 1 + int(rng() % n);
      if (t == h) continue;
      if (q.arrow_count(h, t) > 0) continue;  // would make a 2-cycle
      Arrow a;
      a.name = "a" + std::to_string(i + 1) + "_" + std::to_string(t) +
               std::to_string(h);
      a.tail = t;
      a.head = h;
      q.arrows.push_back(std::move(a));
      break;
    }
  }
  return std::make_shared<WeightedQuiver>(std::move(q));
}

inline KElem random_scalar(std::mt19937_64& rng, const FieldTower& tw,
                           bool nonzero = false) {
  KElem x = tw.k_zero();
  do {
    for (int i = 0; i < tw.base_m; ++i) x[i] = rng() % tw.p;
  } while (nonzero && tw.k_is_zero(x));
  return x;
}

// random slots drawn from the eigenbasis of the vertex at each position
inline void randomize_slots(std::mt19937_64& rng, const WeightedQuiver& q,
                            const FieldTower& tw, Path& p) {
  for (size_t s = 0; s < p.slots.size(); ++s) {
    int v = slot_vertex(q, p, int(s));
    std::vector<int> basis = tw.subfield_basis(q.weights[v - 1]);
    p.slots[s] = basis[rng() % basis.size()];
  }
}

// potential supported on cycles of length min_len..max_len
inline AlgebraElement random_potential(std::mt19937_64& rng,
                                       std::shared_ptr<const WeightedQuiver> q,
                                       std::shared_ptr<const FieldTower> tw, int trunc,
                                       int min_len = 3, int max_len = 6) {
  AlgebraElement S = make_elem(q, tw, trunc);
  std::vector<std::vector<int>> shapes = detail::cycle_shapes(*q, max_len);
  for (const auto& shape : shapes) {
    if (int(shape.size()) < min_len) continue;
    if (rng() % 2 == 0) continue;  // sparse support
    Path p;
    p.vertex = q->arrows[shape[0]].head;
    p.arrows = shape;
    p.slots.assign(shape.size() + 1, 0);
    randomize_slots(rng, *q, *tw, p);
    S.add_term(p, random_scalar(rng, *tw));
  }
  return S;
}

// The random suites run at a lower truncation level than interactive use:
// mutation and splitting expand potentials combinatorially with the degree
// bound, and degree 8 is deep enough to exercise every identity on
// degree-<=6 potentials while keeping the suites fast.
inline constexpr int kSuiteTrunc = 8;

inline SpeciesWithPotential random_species(std::mt19937_64& rng,
                                           int trunc = kSuiteTrunc,
                                           int max_cycle_len = 6) {
  std::shared_ptr<const FieldTower> tw = random_tower(rng);
  std::shared_ptr<const WeightedQuiver> q = random_quiver(rng, tw->d);
  AlgebraElement S = random_potential(rng, q, tw, trunc, 3, max_cycle_len);
  return SpeciesWithPotential::make(q, tw, trunc, S);
}

// small acyclic quiver (1 -> 3 -> 2, 1 -> 2): vertex 1 is a source and vertex
// 2 is a sink, so both reflection functors are exercised.  Acyclicity forces
// the zero potential.
inline SpeciesWithPotential random_acyclic_species(std::mt19937_64& rng, int trunc) {
  std::shared_ptr<const FieldTower> tw = random_tower(rng);
  WeightedQuiver q;
  q.weights = random_weights(rng, tw->d, 3);
  auto add = [&q](const char* name, int t, int h) {
    Arrow a;
    a.name = name;
    a.tail = t;
    a.head = h;
    q.arrows.push_back(std::move(a));
  };
  add("s12", 1, 2);
  add("s13", 1, 3);
  add("s32", 3, 2);
  auto qp = std::make_shared<WeightedQuiver>(std::move(q));
  return SpeciesWithPotential::make(qp, tw, trunc, make_elem(qp, tw, trunc));
}

// unitriangular automorphism: a |-> a + (a few random longer paths)
inline Morphism random_automorphism(std::mt19937_64& rng, const SpeciesWithPotential& sp) {
  const WeightedQuiver& q = *sp.q;
  const FieldTower& tw = *sp.tw;
  // all slot-decorated paths of length 2..3, grouped generation
  std::vector<Path> l0 = detail::paths_of_length(q, tw, 0, {});
  std::vector<Path> l1 = detail::paths_of_length(q, tw, 1, l0);
  std::vector<Path> l2 = detail::paths_of_length(q, tw, 2, l1);
  std::vector<Path> l3 = detail::paths_of_length(q, tw, 3, l2);
  std::vector<Path> longer = l2;
  longer.insert(longer.end(), l3.begin(), l3.end());
  Morphism phi;
  phi.src = phi.dst = sp.q;
  phi.tw = sp.tw;
  phi.trunc = sp.trunc;
  AlgebraElement like = sp.zero_elem();
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    AlgebraElement img = arrow_elem(like, int(a));
    int extras = int(rng() % 3);
    for (int e = 0; e < extras; ++e) {
      std::vector<const Path*> fits;
      for (const Path& p : longer)
        if (path_head(q, p) == q.arrows[a].head && path_tail(q, p) == q.arrows[a].tail)
          fits.push_back(&p);
      if (fits.empty()) break;
      AlgebraElement term = sp.zero_elem();
      term.add_term(*fits[rng() % fits.size()], random_scalar(rng, tw));
      img = elem_add(img, term);
    }
    phi.images.push_back(std::move(img));
  }
  return phi;
}

// Valid representation for any potential of minimum degree >= 3: a two-level
// structure (every composite of two arrows acts as zero), so nilpotency and
// the relations hold by construction.  Simples/negative simples are mixed in
// through the decoration dimensions.
inline DecoratedRep random_rep(std::mt19937_64& rng, const SpeciesWithPotential& sp,
                               int max_dim = 4) {
  const WeightedQuiver& q = *sp.q;
  const FieldTower& tw = *sp.tw;
  std::vector<int> level(q.n());
  for (int i = 0; i < q.n(); ++i) level[i] = int(rng() % 2);
  std::vector<int> mdim(q.n()), vdim(q.n());
  for (int i = 0; i < q.n(); ++i) {
    mdim[i] = int(rng() % (max_dim + 1));
    vdim[i] = int(rng() % 3);
  }
  DecoratedRep r = make_zero_rep(sp.q, sp.tw, mdim, vdim);
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    int h = q.arrows[a].head, t = q.arrows[a].tail;
    if (!(level[t - 1] == 1 && level[h - 1] == 0)) continue;
    for (auto& row : r.act[a])
      for (auto& e : row) e = random_scalar(rng, tw);
  }
  return r;
}

}  // namespace propgen

// ---------------------------------------------------------------------------
// Individual properties.  Each returns an empty string on success.
// ---------------------------------------------------------------------------

namespace propcheck {

// embed a potential living on a sub-quiver (arrow subset, same vertices) into
// an element over the full quiver, matching arrows by name
inline AlgebraElement embed_by_name(const AlgebraElement& x,
                                    const SpeciesWithPotential& full) {
  AlgebraElement r = full.zero_elem();
  for (const auto& [p, cf] : x.terms) {
    Path np = p;
    for (size_t i = 0; i < np.arrows.size(); ++i) {
      int idx = full.q->arrow_index(x.q->arrows[p.arrows[i]].name);
      require(idx >= 0, errc::internal_error, "sub-quiver arrow missing from full quiver");
      np.arrows[i] = idx;
    }
    r.add_term(np, cf);
  }
  return r;
}

// d/da is invariant under cyclic rotation of the potential's terms
inline std::string check_cyclic_invariance(std::mt19937_64& rng,
                                           const SpeciesWithPotential& sp) {
  AlgebraElement rotated = sp.zero_elem();
  for (const auto& [p, cf] : sp.S.terms) {
    int r = p.length() ? int(rng() % p.length()) : 0;
    rotated.add_term(detail::rotate_cycle(p, r), cf);
  }
  for (size_t a = 0; a < sp.q->arrows.size(); ++a)
    if (!elem_eq(cyc_deriv(sp.S, int(a)), cyc_deriv(rotated, int(a))))
      return "cyclic derivative changed under rotation at arrow " +
             sp.q->arrows[a].name;
  return "";
}

// d/da(hg) = Delta_a(h) box g + Delta_a(g) box h for h: i<-j, g: j<-i
inline std::string check_leibniz(std::mt19937_64& rng, const SpeciesWithPotential& sp) {
  // split a random cyclic path of length >= 2 into h (prefix) and g (rest)
  std::vector<std::pair<Path, KElem>> cands;
  for (const auto& [p, cf] : sp.S.terms)
    if (p.length() >= 2) cands.push_back({p, cf});
  if (cands.empty()) return "";
  auto [p, cf] = cands[rng() % cands.size()];
  int cut = 1 + int(rng() % (p.length() - 1));
  Path hp, gp;
  for (int t = 0; t < cut; ++t) {
    hp.slots.push_back(p.slots[t]);
    hp.arrows.push_back(p.arrows[t]);
  }
  hp.slots.push_back(0);
  for (int t = cut; t < p.length(); ++t) {
    gp.slots.push_back(p.slots[t]);
    gp.arrows.push_back(p.arrows[t]);
  }
  gp.slots.push_back(p.slots[p.length()]);
  AlgebraElement h = sp.zero_elem(), g = sp.zero_elem();
  h.add_term(hp, cf);
  g.add_term(gp, sp.tw->k_one());
  AlgebraElement hg = elem_mul(h, g);
  for (size_t a = 0; a < sp.q->arrows.size(); ++a) {
    AlgebraElement lhs = cyc_deriv(hg, int(a));
    AlgebraElement rhs =
        elem_add(box(delta(h, int(a)), g), box(delta(g, int(a)), h));
    if (!elem_eq(lhs, rhs))
      return "Leibniz rule failed at arrow " + sp.q->arrows[a].name;
  }
  return "";
}

// d/da(phi(S)) = sum_b Delta_a(phi(b)) box phi(d/db(S))
inline std::string check_chain_rule(const SpeciesWithPotential& sp, const Morphism& phi) {
  // the identity is exact in the complete algebra, but at the working
  // truncation the two sides clip different boundary terms: the left loses
  // derivatives of the dropped high-degree part of phi(S) while the right
  // regenerates low-degree pieces of them.  Evaluate deep enough that phi(S)
  // is never clipped (arrow images have degree <= 3).
  int deep = 3 * sp.trunc;
  AlgebraElement S = sp.S;
  S.trunc = deep;
  Morphism ph = phi;
  ph.trunc = deep;
  for (AlgebraElement& im : ph.images) im.trunc = deep;
  AlgebraElement phiS = apply_morphism(ph, S);
  for (size_t a = 0; a < ph.dst->arrows.size(); ++a) {
    AlgebraElement lhs = cyc_deriv(phiS, int(a));
    AlgebraElement rhs(ph.dst, ph.tw, deep);
    for (size_t b = 0; b < ph.src->arrows.size(); ++b)
      rhs = elem_add(rhs, box(delta(ph.images[b], int(a)),
                              apply_morphism(ph, cyc_deriv(S, int(b)))));
    if (!elem_eq(lhs, rhs)) return "chain rule failed at arrow " + ph.dst->arrows[a].name;
  }
  return "";
}

// Largest degree bound <= cap whose cumulative decorated-path count stays
// below a work budget; dense quivers get a shallower (but still meaningful)
// dimension comparison.
inline int affordable_jacobian_depth(const SpeciesWithPotential& sp, int cap,
                                     size_t budget = 2000) {
  std::vector<Path> layer = spf::detail::paths_of_length(*sp.q, *sp.tw, 0, {});
  size_t total = 0;
  int depth = 2;
  for (int l = 1; l <= cap; ++l) {
    layer = spf::detail::paths_of_length(*sp.q, *sp.tw, l, layer);
    total += layer.size();
    if (l >= 2) {
      if (total > budget) break;
      depth = l;
    }
  }
  return depth;
}

// Jacobian dimension is invariant under automorphisms (degree-<=N layers)
inline std::string check_jacobian_morphism(const SpeciesWithPotential& sp,
                                           const Morphism& phi, int N) {
  N = std::min(N, affordable_jacobian_depth(sp, N));
  JacobianReport before = jacobian_dim(sp.S, N);
  JacobianReport after = jacobian_dim(apply_morphism(phi, sp.S), N);
  if (before.dim != after.dim)
    return "jacobian dimension changed under automorphism: " +
           std::to_string(before.dim) + " vs " + std::to_string(after.dim);
  return "";
}

// split is idempotent and its witness carries S_red + S_triv back to S
inline std::string check_split(const SpeciesWithPotential& sp) {
  SplitResult sr = split(sp);
  if (min_degree(sr.reduced.S) < 3 && !sr.reduced.S.is_zero())
    return "reduced part still has a degree-2 term";
  SplitResult again = split(sr.reduced);
  if (!elem_eq(again.reduced.S, sr.reduced.S) || !again.trivial.S.is_zero())
    return "split is not idempotent";
  AlgebraElement back = elem_add(embed_by_name(sr.reduced.S, sp),
                                 embed_by_name(sr.trivial.S, sp));
  AlgebraElement carried = apply_morphism(sr.witness, back);
  if (!elem_eq(normalize_cyclic(carried), sp.S))
    return "witness does not carry the split potential back to S";
  return "";
}

// quiver-level involution and the premutation involutivity witness
inline std::string check_involution(const SpeciesWithPotential& sp, int k) {
  const WeightedQuiver& q = *sp.q;
  if (q.has_2_cycle_at(k)) return "";
  WeightedQuiver twice = mutate_wq(mutate_wq(q, k), k);
  if (twice.shape() != q.shape()) return "mu_k^2 changed the quiver shape";
  InvolutionWitness w = involution_witness(sp, k);
  if (!w.verified) return "involutivity witness failed to verify";
  return "";
}

}  // namespace propcheck

// ---------------------------------------------------------------------------
// Suites.
// ---------------------------------------------------------------------------

inline PropResult run_derivation_suite(int trials, u64 seed) {
  PropResult res;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    SpeciesWithPotential sp = propgen::random_species(rng);
    ++res.trials;
    std::string e;
    if (!(e = propcheck::check_cyclic_invariance(rng, sp)).empty() ||
        !(e = propcheck::check_leibniz(rng, sp)).empty()) {
      res.failures.push_back("trial " + std::to_string(t) + ": " + e);
      continue;
    }
    Morphism phi = propgen::random_automorphism(rng, sp);
    if (!(e = propcheck::check_chain_rule(sp, phi)).empty())
      res.failures.push_back("trial " + std::to_string(t) + ": " + e);
  }
  return res;
}

inline PropResult run_involution_suite(int trials, u64 seed) {
  PropResult res;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    SpeciesWithPotential sp = propgen::random_species(rng);
    ++res.trials;
    std::string e;
    Morphism phi = propgen::random_automorphism(rng, sp);
    if (!(e = propcheck::check_jacobian_morphism(sp, phi, 5)).empty() ||
        !(e = propcheck::check_split(sp)).empty()) {
      res.failures.push_back("trial " + std::to_string(t) + ": " + e);
      continue;
    }
    int k = 1 + int(rng() % sp.q->n());
    try {
      if (!(e = propcheck::check_involution(sp, k)).empty())
        res.failures.push_back("trial " + std::to_string(t) + ": " + e);
    } catch (const error& err) {
      if (classify(err.code()) == err_class::math)
        ++res.skipped;  // degenerate draw, not a property failure
      else
        res.failures.push_back("trial " + std::to_string(t) + ": " + err.what());
    }
  }
  return res;
}

inline PropResult run_rep_suite(int trials, u64 seed) {
  PropResult res;
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    // degree <=4 potentials: representation identities do not need deep
    // potentials, and mutation of a premutated high-degree potential over a
    // large tower is by far the most expensive step of this suite.
    SpeciesWithPotential sp = propgen::random_species(rng, propgen::kSuiteTrunc, 4);
    DecoratedRep rep = propgen::random_rep(rng, sp);
    ++res.trials;
    std::vector<std::string> bad = validate_rep(rep, sp);
    if (!bad.empty()) {
      res.failures.push_back("trial " + std::to_string(t) +
                             ": generated rep invalid: " + bad[0]);
      continue;
    }
    int k = 1 + int(rng() % sp.q->n());
    if (sp.q->has_2_cycle_at(k)) {
      ++res.skipped;
      continue;
    }
    try {
      EF ef{sp.tw.get()};
      Triangle tr = triangle(rep, sp, k);
      // gamma beta = 0 and alpha gamma = 0
      Mat<EF> gb = mat_mul(ef, tr.gamma, tr.beta);
      Mat<EF> ag = mat_mul(ef, tr.alpha, tr.gamma);
      bool zero = true;
      for (const auto& m : {gb, ag})
        for (const auto& row : m)
          for (const auto& x : row)
            if (!ef.is_zero(x)) zero = false;
      if (!zero) {
        res.failures.push_back("trial " + std::to_string(t) +
                               ": triangle compositions not zero");
        continue;
      }
      RepMutation m1 = mutate_rep(rep, sp, k);  // validates internally
      // splitting-data independence
      RepMutation alt = premutate_rep(rep, sp, k, 1);
      RepMutation std0 = premutate_rep(rep, sp, k, 0);
      if (std0.rep.mdim != alt.rep.mdim || std0.rep.vdim != alt.rep.vdim ||
          !isomorphic_reps(std0.rep, alt.rep, seed + t)) {
        res.failures.push_back("trial " + std::to_string(t) +
                               ": splitting data choice changed the output class");
        continue;
      }
      // double mutation through the involutivity witness
      if (!double_mutation_restores(rep, sp, k, seed + t)) {
        res.failures.push_back("trial " + std::to_string(t) +
                               ": double mutation does not restore the rep");
        continue;
      }
      // mu_k swaps the simple at k with the negative simple at k
      std::vector<int> delta_k(sp.q->n(), 0), zero_dims(sp.q->n(), 0);
      delta_k[k - 1] = 1;
      RepMutation ms = mutate_rep(simple_rep(sp.q, sp.tw, k), sp, k);
      RepMutation mn = mutate_rep(negative_simple_rep(sp.q, sp.tw, k), sp, k);
      if (ms.rep.mdim != zero_dims || ms.rep.vdim != delta_k ||
          mn.rep.mdim != delta_k || mn.rep.vdim != zero_dims) {
        res.failures.push_back("trial " + std::to_string(t) +
                               ": mutation does not swap the simples at k");
        continue;
      }
      // at a sink/source, mutation is the Dlab-Ringel reflection plus
      // coker/ker many negative simples at k
      SpeciesWithPotential ac = propgen::random_acyclic_species(rng, propgen::kSuiteTrunc);
      DecoratedRep arep = propgen::random_rep(rng, ac);
      arep.vdim.assign(ac.q->n(), 0);  // the reflection lemmas concern (M, 0)
      EF aef{ac.tw.get()};
      Triangle sink_t = triangle(arep, ac, 2);
      int ka = int(detail::kernel_of(aef, sink_t.alpha, sink_t.dk, sink_t.din).size());
      DecoratedRep sink_want = reflect_sink(arep, ac, 2).rep;
      sink_want.vdim[1] += sink_t.dk - (sink_t.din - ka);
      DecoratedRep sink_got = mutate_rep(arep, ac, 2).rep;
      if (sink_got.mdim != sink_want.mdim || sink_got.vdim != sink_want.vdim ||
          !isomorphic_reps(sink_got, sink_want, seed + t)) {
        res.failures.push_back("trial " + std::to_string(t) +
                               ": sink mutation disagrees with the reflection");
        continue;
      }
      Triangle src_t = triangle(arep, ac, 1);
      int kb = int(detail::kernel_of(aef, src_t.beta, src_t.dout, src_t.dk).size());
      DecoratedRep src_want = reflect_source(arep, ac, 1).rep;
      src_want.vdim[0] += kb;
      DecoratedRep src_got = mutate_rep(arep, ac, 1).rep;
      if (src_got.mdim != src_want.mdim || src_got.vdim != src_want.vdim ||
          !isomorphic_reps(src_got, src_want, seed + t)) {
        res.failures.push_back("trial " + std::to_string(t) +
                               ": source mutation disagrees with the reflection");
        continue;
      }
    } catch (const error& err) {
      if (classify(err.code()) == err_class::math)
        ++res.skipped;
      else
        res.failures.push_back("trial " + std::to_string(t) + ": " + err.what());
    }
  }
  return res;
}

}  // namespace spf
