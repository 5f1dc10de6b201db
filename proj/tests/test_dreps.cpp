// Decorated representations: actions, validation, the triangle at a vertex,
// mutation, and the Dlab-Ringel reflections.
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "spforge/propcheck.hpp"

using namespace spf;

namespace {

struct Fixture {
  std::shared_ptr<const FieldTower> tw;
  std::shared_ptr<const WeightedQuiver> q;
  int trunc = 12;

  Fixture() {
    tw = std::make_shared<FieldTower>(make_tower(7, 6, 3));
    WeightedQuiver wq;
    wq.weights = {1, 2, 1, 3};
    wq.arrows = {{"delta", 1, 2}, {"gamma", 2, 3}, {"beta", 3, 4}, {"alpha", 4, 1}};
    q = std::make_shared<WeightedQuiver>(std::move(wq));
  }

  SpeciesWithPotential running() const {
    AlgebraElement S = make_elem(q, tw, trunc);
    Path p1;
    p1.arrows = {3, 2, 1, 0};
    p1.slots = {0, 0, 0, 0, 0};
    S.add_term(p1, tw->k_one());
    Path p2 = p1;
    p2.slots = {0, 2, 0, 3, 0};
    S.add_term(p2, tw->k_one());
    return SpeciesWithPotential::make(q, tw, trunc, S);
  }
};

}  // namespace

TEST_CASE("simple and negative simple representations validate") {
  Fixture f;
  SpeciesWithPotential sp = f.running();
  for (int k = 1; k <= 4; ++k) {
    DecoratedRep s = simple_rep(f.q, f.tw, k);
    CHECK(validate_rep(s, sp).empty());
    CHECK(s.fdim(k) == f.q->weights[k - 1]);
    CHECK(s.total_fdim() == f.q->weights[k - 1]);
    DecoratedRep n = negative_simple_rep(f.q, f.tw, k);
    CHECK(validate_rep(n, sp).empty());
    CHECK(n.total_fdim() == 0);
    CHECK(n.vdim[k - 1] == 1);
  }
}

TEST_CASE("element action is multiplicative on paths") {
  Fixture f;
  SpeciesWithPotential sp = f.running();
  std::mt19937_64 rng(17);
  DecoratedRep rep = propgen::random_rep(rng, sp);
  REQUIRE(validate_rep(rep, sp).empty());
  KF kf{f.tw.get()};
  AlgebraElement like = sp.zero_elem();
  // single arrows act by their matrices
  for (size_t a = 0; a < f.q->arrows.size(); ++a) {
    const Arrow& ar = f.q->arrows[a];
    CHECK(elem_action(rep, arrow_elem(like, int(a)), ar.head, ar.tail) == rep.act[a]);
  }
  // the composite gamma delta (1 -> 3) acts by act[gamma] act[delta]
  AlgebraElement gd = elem_mul(arrow_elem(like, 1), arrow_elem(like, 0));
  Mat<KF> want = mat_mul(kf, rep.act[1], rep.act[0]);
  CHECK(elem_action(rep, gd, 3, 1) == want);
}

TEST_CASE("random representations validate and the triangle composes to zero") {
  Fixture f;
  std::mt19937_64 rng(19);
  int checked = 0;
  for (int t = 0; t < 10; ++t) {
    SpeciesWithPotential sp = propgen::random_species(rng, propgen::kSuiteTrunc, 4);
    DecoratedRep rep = propgen::random_rep(rng, sp);
    REQUIRE(validate_rep(rep, sp).empty());
    int k = 1 + int(rng() % sp.q->n());
    if (sp.q->has_2_cycle_at(k)) continue;
    ++checked;
    EF ef{sp.tw.get()};
    Triangle tr = triangle(rep, sp, k);
    for (const Mat<EF>& m : {mat_mul(ef, tr.gamma, tr.beta), mat_mul(ef, tr.alpha, tr.gamma)})
      for (const auto& row : m)
        for (const auto& x : row) CHECK(ef.is_zero(x));
  }
  CHECK(checked >= 5);
}

TEST_CASE("mutation validates and double mutation restores the class") {
  Fixture f;
  SpeciesWithPotential sp = f.running();
  std::mt19937_64 rng(23);
  DecoratedRep rep = propgen::random_rep(rng, sp);
  REQUIRE(validate_rep(rep, sp).empty());
  RepMutation m = mutate_rep(rep, sp, 4);
  CHECK(validate_rep(m.rep, m.sp).empty());
  CHECK(double_mutation_restores(rep, sp, 4, 31));
  // splitting-data independence
  RepMutation v0 = premutate_rep(rep, sp, 4, 0);
  RepMutation v1 = premutate_rep(rep, sp, 4, 1);
  CHECK(v0.rep.mdim == v1.rep.mdim);
  CHECK(v0.rep.vdim == v1.rep.vdim);
  CHECK(isomorphic_reps(v0.rep, v1.rep, 37));
}

TEST_CASE("mutation swaps the simple and negative simple at k") {
  Fixture f;
  SpeciesWithPotential sp = f.running();
  for (int k = 1; k <= 4; ++k) {
    std::vector<int> delta_k(4, 0), zero(4, 0);
    delta_k[k - 1] = 1;
    RepMutation ms = mutate_rep(simple_rep(f.q, f.tw, k), sp, k);
    CHECK(ms.rep.mdim == zero);
    CHECK(ms.rep.vdim == delta_k);
    RepMutation mn = mutate_rep(negative_simple_rep(f.q, f.tw, k), sp, k);
    CHECK(mn.rep.mdim == delta_k);
    CHECK(mn.rep.vdim == zero);
  }
}

TEST_CASE("sink and source mutations agree with the reflections") {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 5; ++t) {
    SpeciesWithPotential ac = propgen::random_acyclic_species(rng, propgen::kSuiteTrunc);
    DecoratedRep rep = propgen::random_rep(rng, ac);
    rep.vdim.assign(3, 0);  // the reflection lemmas concern (M, 0)
    REQUIRE(validate_rep(rep, ac).empty());
    EF ef{ac.tw.get()};
    // vertex 2 is a sink
    Triangle ts = triangle(rep, ac, 2);
    int ka = int(detail::kernel_of(ef, ts.alpha, ts.dk, ts.din).size());
    DecoratedRep want = reflect_sink(rep, ac, 2).rep;
    want.vdim[1] += ts.dk - (ts.din - ka);  // coker alpha many negative simples
    DecoratedRep got = mutate_rep(rep, ac, 2).rep;
    CHECK(got.mdim == want.mdim);
    CHECK(got.vdim == want.vdim);
    CHECK(isomorphic_reps(got, want, 41 + t));
    // vertex 1 is a source
    Triangle tsrc = triangle(rep, ac, 1);
    int kb = int(detail::kernel_of(ef, tsrc.beta, tsrc.dout, tsrc.dk).size());
    DecoratedRep want2 = reflect_source(rep, ac, 1).rep;
    want2.vdim[0] += kb;  // ker beta many negative simples
    DecoratedRep got2 = mutate_rep(rep, ac, 1).rep;
    CHECK(got2.mdim == want2.mdim);
    CHECK(got2.vdim == want2.vdim);
    CHECK(isomorphic_reps(got2, want2, 43 + t));
  }
}

TEST_CASE("direct sums add dimensions and stay valid") {
  Fixture f;
  SpeciesWithPotential sp = f.running();
  std::mt19937_64 rng(47);
  DecoratedRep x = propgen::random_rep(rng, sp);
  DecoratedRep y = propgen::random_rep(rng, sp);
  DecoratedRep s = direct_sum_rep(x, y);
  for (int v = 1; v <= 4; ++v) {
    CHECK(s.mdim[v - 1] == x.mdim[v - 1] + y.mdim[v - 1]);
    CHECK(s.vdim[v - 1] == x.vdim[v - 1] + y.vdim[v - 1]);
  }
  CHECK(validate_rep(s, sp).empty());
}
