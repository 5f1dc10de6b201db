// Cyclic normalization, cyclic derivatives, the Delta/box calculus, and
// truncated Jacobian-quotient dimensions.
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spforge/potentials.hpp"

using namespace spf;

namespace {

struct Fixture {
  std::shared_ptr<const FieldTower> tw;
  std::shared_ptr<const WeightedQuiver> q;
  int trunc = 24;
  int alpha, beta, gamma, delta;

  Fixture() {
    tw = std::make_shared<FieldTower>(make_tower(7, 6, 3));
    WeightedQuiver wq;
    wq.weights = {1, 2, 1, 3};
    wq.arrows = {{"delta", 1, 2}, {"gamma", 2, 3}, {"beta", 3, 4}, {"alpha", 4, 1}};
    q = std::make_shared<WeightedQuiver>(std::move(wq));
    delta = 0;
    gamma = 1;
    beta = 2;
    alpha = 3;
  }

  AlgebraElement zero() const { return make_elem(q, tw, trunc); }

  AlgebraElement term(const std::vector<int>& arrows, const std::vector<int>& slots,
                      long long coeff) const {
    Path p;
    p.arrows = arrows;
    p.slots = slots;
    if (arrows.empty()) p.vertex = 1;
    check_path(*q, *tw, p);
    AlgebraElement r = zero();
    u64 cf = u64(((coeff % 7) + 7) % 7);
    r.add_term(p, tw->k_from(cf));
    return r;
  }

  // S = alpha beta gamma delta - alpha v^2 beta gamma v^3 delta
  AlgebraElement signed_potential() const {
    return elem_add(term({alpha, beta, gamma, delta}, {0, 0, 0, 0, 0}, 1),
                    term({alpha, beta, gamma, delta}, {0, 2, 0, 3, 0}, -1));
  }
};

}  // namespace

TEST_CASE("cyclic normalization merges rotation classes") {
  Fixture f;
  AlgebraElement x = f.term({f.alpha, f.beta, f.gamma, f.delta}, {0, 2, 0, 3, 0}, 1);
  // the same cycle read from vertex 4: beta gamma delta alpha, slots shifted
  AlgebraElement y = f.term({f.beta, f.gamma, f.delta, f.alpha}, {2, 0, 3, 0, 0}, 1);
  AlgebraElement nx = normalize_cyclic(x), ny = normalize_cyclic(y);
  CHECK(elem_eq(nx, ny));
  CHECK(is_normal_potential(nx));
  CHECK(elem_eq(normalize_cyclic(nx), nx));  // idempotent
  // adding a rotation doubles the canonical coefficient
  AlgebraElement both = normalize_cyclic(elem_add(x, y));
  REQUIRE(both.terms.size() == 1);
  CHECK(both.terms.begin()->second == f.tw->k_from(2));
}

TEST_CASE("the four displayed cyclic derivatives of the signed potential") {
  Fixture f;
  AlgebraElement S = f.signed_potential();
  // d/d alpha = beta gamma delta - v^2 beta gamma v^3 delta
  CHECK(elem_eq(cyc_deriv(S, f.alpha),
                elem_add(f.term({f.beta, f.gamma, f.delta}, {0, 0, 0, 0}, 1),
                         f.term({f.beta, f.gamma, f.delta}, {2, 0, 3, 0}, -1))));
  // d/d beta = gamma delta alpha - gamma v^3 delta alpha v^2
  CHECK(elem_eq(cyc_deriv(S, f.beta),
                elem_add(f.term({f.gamma, f.delta, f.alpha}, {0, 0, 0, 0}, 1),
                         f.term({f.gamma, f.delta, f.alpha}, {0, 3, 0, 2}, -1))));
  // d/d gamma = delta alpha beta - v^3 delta alpha v^2 beta
  CHECK(elem_eq(cyc_deriv(S, f.gamma),
                elem_add(f.term({f.delta, f.alpha, f.beta}, {0, 0, 0, 0}, 1),
                         f.term({f.delta, f.alpha, f.beta}, {3, 0, 2, 0}, -1))));
  // d/d delta = alpha beta gamma - alpha v^2 beta gamma v^3
  CHECK(elem_eq(cyc_deriv(S, f.delta),
                elem_add(f.term({f.alpha, f.beta, f.gamma}, {0, 0, 0, 0}, 1),
                         f.term({f.alpha, f.beta, f.gamma}, {0, 2, 0, 3}, -1))));
}

TEST_CASE("cyclic derivatives are rotation-invariant") {
  Fixture f;
  std::mt19937_64 rng(21);
  AlgebraElement S = f.signed_potential();
  AlgebraElement rotated = f.zero();
  for (const auto& [p, cf] : S.terms)
    rotated.add_term(detail::rotate_cycle(p, int(rng() % p.length())), cf);
  for (size_t a = 0; a < f.q->arrows.size(); ++a)
    CHECK(elem_eq(cyc_deriv(S, int(a)), cyc_deriv(rotated, int(a))));
}

TEST_CASE("Delta/box computes the Leibniz decomposition") {
  Fixture f;
  // h = alpha v^2 beta (4-cycle prefix), g = gamma v^3 delta, hg cyclic at 1
  AlgebraElement h = f.term({f.alpha, f.beta}, {0, 2, 0}, 1);
  AlgebraElement g = f.term({f.gamma, f.delta}, {0, 3, 0}, 1);
  AlgebraElement hg = elem_mul(h, g);
  for (size_t a = 0; a < f.q->arrows.size(); ++a) {
    AlgebraElement lhs = cyc_deriv(hg, int(a));
    AlgebraElement rhs = elem_add(box(delta(h, int(a)), g), box(delta(g, int(a)), h));
    CHECK(elem_eq(lhs, rhs));
  }
}

TEST_CASE("second derivative deletes the arrow pair through the vertex") {
  Fixture f;
  // S has the cycle alpha v^2 beta gamma v^3 delta; the pair (b=alpha, a=beta)
  // passes through vertex 4 with separating slot 2
  AlgebraElement S = f.signed_potential();
  AlgebraElement dd = second_deriv(S, f.alpha, 2, f.beta);
  CHECK(elem_eq(dd, f.term({f.gamma, f.delta}, {0, 3, 0}, -1)));
  // slot 0 picks the unsigned term instead
  CHECK(elem_eq(second_deriv(S, f.alpha, 0, f.beta),
                f.term({f.gamma, f.delta}, {0, 0, 0}, 1)));
}

TEST_CASE("jacobian dimension of the running example stabilizes at 66") {
  Fixture f;
  AlgebraElement S = elem_add(f.term({f.alpha, f.beta, f.gamma, f.delta}, {0, 0, 0, 0, 0}, 1),
                              f.term({f.alpha, f.beta, f.gamma, f.delta}, {0, 2, 0, 3, 0}, 1));
  JacobianReport rep = jacobian_dim(S, 24);
  CHECK(rep.stabilized);
  CHECK(rep.dim == 66);
  long long total = 0;
  for (const auto& [ht, d] : rep.block_dims) {
    CHECK(d >= 0);
    total += d;
  }
  CHECK(total == rep.dim);
  CHECK(restricted_dim(rep, 4) <= rep.dim);
  // restricted and full dims differ exactly by the blocks touching vertex 4
  long long touching = 0;
  for (const auto& [ht, d] : rep.block_dims)
    if (ht.first == 4 || ht.second == 4) touching += d;
  CHECK(restricted_dim(rep, 4) + touching == rep.dim);
}
