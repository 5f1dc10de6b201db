// Nondegeneracy along a prescribed mutation sequence: stepwise verification
// with a trace, and a seeded random search for witness potentials supported
// on short cycles, escalating the base field when the budget is exhausted.
#pragma once

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "spforge/spmut.hpp"

namespace spf {

struct SequenceQuery {
  std::shared_ptr<const WeightedQuiver> q;
  std::shared_ptr<const FieldTower> tw;
  std::vector<int> seq;
  int max_cycle_len = 6;
  int budget = 200;  // candidates per base field
  u64 seed = 1;
  int trunc = kDefaultTrunc;
};

struct SequenceReport {
  bool ok = false;
  int failed_step = -1;  // 1-based step index when !ok
  std::string reason;
  std::vector<std::string> trace;  // per step: quiver summary + potential hash
};

namespace detail {

inline u64 potential_hash(const AlgebraElement& S) {
  u64 h = 1469598103934665603ull;
  auto mix = [&](u64 x) {
    h ^= x;
    h *= 1099511628211ull;
  };
  for (const auto& [p, cf] : S.terms) {
    mix(u64(p.vertex));
    for (int a : p.arrows) mix(u64(a) + 17);
    for (int s : p.slots) mix(u64(s) + 101);
    for (u64 c : cf) mix(c + 1);
  }
  return h;
}

inline std::string quiver_summary(const WeightedQuiver& q) {
  std::ostringstream os;
  os << q.n() << " vertices, " << q.arrows.size() << " arrows:";
  for (const Arrow& a : q.arrows) os << " " << a.name;
  return os.str();
}

// representative cyclic arrow sequences of length 2..max_len, one per
// rotation class, in a deterministic order
inline std::vector<std::vector<int>> cycle_shapes(const WeightedQuiver& q, int max_len) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  // extend arrow-index sequences leftward-composable: next arrow's head is
  // the current tail; close when head of first equals tail of last
  std::function<void(int, int)> dfs = [&](int start_head, int cur_tail) {
    if (int(cur.size()) >= 2 && cur_tail == start_head) {
      // canonical representative: lexicographically minimal rotation
      std::vector<int> best = cur;
      for (size_t r = 1; r < cur.size(); ++r) {
        std::vector<int> rot(cur.begin() + r, cur.end());
        rot.insert(rot.end(), cur.begin(), cur.begin() + r);
        if (rot < best) best = rot;
      }
      if (best == cur) out.push_back(cur);
    }
    if (int(cur.size()) >= max_len) return;
    for (size_t a = 0; a < q.arrows.size(); ++a) {
      if (q.arrows[a].head != cur_tail) continue;
      cur.push_back(int(a));
      dfs(start_head, q.arrows[a].tail);
      cur.pop_back();
    }
  };
  for (size_t a = 0; a < q.arrows.size(); ++a) {
    cur = {int(a)};
    dfs(q.arrows[a].head, q.arrows[a].tail);
  }
  // dedupe (a class is emitted once per starting arrow that begins the
  // canonical rotation; classes can still repeat across starts)
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

inline SequenceReport is_sequence_nondegenerate(const SpeciesWithPotential& sp,
                                                const std::vector<int>& seq) {
  SequenceReport rep;
  for (size_t i = 0; i + 1 < seq.size(); ++i)
    require(seq[i] != seq[i + 1], errc::invalid_argument,
            "consecutive repeats in the mutation sequence");
  SpeciesWithPotential cur = sp;
  if (cur.q->has_2_cycle()) {
    rep.reason = "initial quiver has a 2-cycle";
    return rep;
  }
  rep.trace.push_back("start: " + detail::quiver_summary(*cur.q) + " | S#" +
                      std::to_string(detail::potential_hash(cur.S)));
  for (size_t t = 0; t < seq.size(); ++t) {
    int k = seq[t];
    require(k >= 1 && k <= cur.q->n(), errc::invalid_argument, "vertex out of range");
    try {
      cur = mutate(cur, k);
    } catch (const error& e) {
      rep.failed_step = int(t) + 1;
      rep.reason = std::string("degenerate at step ") + std::to_string(t + 1) + ": " +
                   e.what();
      return rep;
    }
    if (cur.q->has_2_cycle()) {
      rep.failed_step = int(t) + 1;
      rep.reason = "2-cycle after step " + std::to_string(t + 1);
      return rep;
    }
    rep.trace.push_back("after mu_" + std::to_string(k) + ": " +
                        detail::quiver_summary(*cur.q) + " | S#" +
                        std::to_string(detail::potential_hash(cur.S)));
  }
  rep.ok = true;
  return rep;
}

struct SearchResult {
  bool found = false;
  SpeciesWithPotential sp;  // witness, when found
  std::shared_ptr<const FieldTower> tw;
  int candidates_tried = 0;
  std::vector<int> escalations;  // base degrees m tried after the first field
};

// Samples potentials with uniform coefficients on cycles of length <= L over
// the current base field; escalates the base via the next m > 1 coprime to d
// (capped at 25) when the budget is exhausted.  Deterministic under the seed.
inline SearchResult search_sequence_nondegenerate(const SequenceQuery& query) {
  require(!query.q->has_2_cycle(), errc::has_2_cycle, "quiver has a 2-cycle");
  SearchResult res;
  std::vector<std::vector<int>> shapes =
      detail::cycle_shapes(*query.q, query.max_cycle_len);
  std::mt19937_64 rng(query.seed);
  std::shared_ptr<const FieldTower> tw = query.tw;
  int tried_m = 1;
  while (true) {
    const FieldTower& t = *tw;
    for (int cand = 0; cand < query.budget; ++cand) {
      AlgebraElement S = make_elem(query.q, tw, query.trunc);
      for (const auto& shape : shapes) {
        // a few random slot assignments per cycle shape, each with a random
        // (possibly zero) coefficient
        int variants = 1 + int(rng() % 3);
        for (int vtry = 0; vtry < variants; ++vtry) {
          KElem cf = t.k_zero();
          for (int i = 0; i < t.base_m; ++i) cf[i] = rng() % t.p;
          Path p;
          p.vertex = query.q->arrows[shape[0]].head;
          p.arrows = shape;
          p.slots.assign(shape.size() + 1, 0);
          for (size_t s = 0; s + 1 < p.slots.size(); ++s) {
            int v = slot_vertex(*query.q, p, int(s));
            std::vector<int> basis = t.subfield_basis(query.q->weights[v - 1]);
            p.slots[s] = basis[rng() % basis.size()];
          }
          if (!t.k_is_zero(cf)) S.add_term(p, cf);
        }
      }
      SpeciesWithPotential sp = SpeciesWithPotential::make(query.q, tw, query.trunc, S);
      ++res.candidates_tried;
      SequenceReport rep = is_sequence_nondegenerate(sp, query.seq);
      if (rep.ok) {
        res.found = true;
        res.sp = std::move(sp);
        res.tw = tw;
        return res;
      }
    }
    // escalate the base field
    int m = tried_m + 1;
    while (m <= 25 && std::gcd(m, query.tw->d) != 1) ++m;
    if (m > 25) return res;  // exhausted, inconclusive
    tried_m = m;
    res.escalations.push_back(m);
    tw = std::make_shared<FieldTower>(extend_base(*query.tw, m));
  }
}

}  // namespace spf
