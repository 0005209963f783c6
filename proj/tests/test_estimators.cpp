#include <doctest.h>

#include <array>
#include <cmath>

#include "coalrates/estimators.hpp"
#include "coalrates/model.hpp"

using namespace coalrates;

namespace {

std::vector<GeneTree3> random_dataset(Xoshiro256pp& rng, double t, int L) {
  SpeciesTree3 sp(0.0, t);
  std::vector<GeneTree3> trees;
  for (int i = 0; i < L; ++i) trees.push_back(sample_gene_tree(sp, rng));
  return trees;
}

GeneTree3 make_tree(Topology top, double t1, double t2) {
  return GeneTree3{top, t1, t2, top != Topology::AB_C};
}

std::vector<GeneTree3> permute_dataset(const std::vector<GeneTree3>& trees,
                                       const std::array<Taxon, 3>& perm) {
  std::vector<GeneTree3> out = trees;
  for (auto& g : out) g.topology = permute(g.topology, perm);
  return out;
}

}  // namespace

TEST_CASE("glass_mt direct definition") {
  std::vector<GeneTree3> trees = {make_tree(Topology::AB_C, 0.3, 1.0),
                                  make_tree(Topology::AB_C, 0.5, 1.4)};
  TieBreaker tie(1);
  auto e = glass_mt(trees, tie);
  CHECK(e.topology == Topology::AB_C);
  CHECK(*e.tau_cherry == doctest::Approx(0.3));
  CHECK(*e.tau_root == doctest::Approx(1.0));
  CHECK_FALSE(e.tie);
}

TEST_CASE("single-locus estimates return that locus") {
  std::vector<GeneTree3> one = {make_tree(Topology::AC_B, 0.8, 1.7)};
  TieBreaker tie(1);
  CHECK(glass_mt(one, tie).topology == Topology::AC_B);
  CHECK(rstar(one, tie).topology == Topology::AC_B);
  CHECK(star(one, tie).topology == Topology::AC_B);
  CHECK(mdc(one, tie).topology == Topology::AC_B);
  CHECK(steac_sc(one, tie).topology == Topology::AC_B);
  CHECK(ml(one, tie).topology == Topology::AC_B);
}

TEST_CASE("plurality counting") {
  std::vector<GeneTree3> trees;
  for (int i = 0; i < 5; ++i) trees.push_back(make_tree(Topology::AB_C, 1.0 + i * 0.01, 2.0));
  for (int i = 0; i < 3; ++i) trees.push_back(make_tree(Topology::AC_B, 1.1, 2.0));
  for (int i = 0; i < 2; ++i) trees.push_back(make_tree(Topology::BC_A, 1.2, 2.1));
  TieBreaker tie(1);
  CHECK(rstar(trees, tie).topology == Topology::AB_C);
  CHECK(mdc(trees, tie).topology == Topology::AB_C);
  CHECK(star(trees, tie).topology == Topology::AB_C);
}

TEST_CASE("steac argmin of average times") {
  std::vector<GeneTree3> trees = {make_tree(Topology::AB_C, 0.4, 1.6),
                                  make_tree(Topology::AC_B, 1.2, 1.4)};
  // avg(A,B) = (0.4 + 1.4)/2 = 0.9; avg(A,C) = (1.6 + 1.2)/2 = 1.4;
  // avg(B,C) = (1.6 + 1.4)/2 = 1.5
  TieBreaker tie(1);
  CHECK(steac_sc(trees, tie).topology == Topology::AB_C);
}

TEST_CASE("rstar and steac can disagree") {
  // a plurality of deep AB|C loci with shallow roots, against fewer AC|B
  // loci whose roots are far above the cherry: counts pick AB|C, average
  // times pick AC|B
  std::vector<GeneTree3> trees;
  for (int i = 0; i < 4; ++i) trees.push_back(make_tree(Topology::AB_C, 5.0, 5.1));
  for (int i = 0; i < 3; ++i) trees.push_back(make_tree(Topology::AC_B, 0.1, 1.1));
  TieBreaker t1(1), t2(1);
  CHECK(rstar(trees, t1).topology == Topology::AB_C);
  CHECK(steac_sc(trees, t2).topology == Topology::AC_B);
}

TEST_CASE("two-way count tie splits evenly over tie seeds") {
  std::vector<GeneTree3> trees;
  for (int i = 0; i < 4; ++i) trees.push_back(make_tree(Topology::AB_C, 1.0, 2.0));
  for (int i = 0; i < 4; ++i) trees.push_back(make_tree(Topology::AC_B, 1.0, 2.0));
  for (int i = 0; i < 2; ++i) trees.push_back(make_tree(Topology::BC_A, 1.0, 2.0));
  int ab = 0, ac = 0, bc = 0;
  const int N = 10000;
  for (int s = 0; s < N; ++s) {
    TieBreaker tie(s);
    auto e = rstar(trees, tie);
    CHECK(e.tie);
    ab += e.topology == Topology::AB_C;
    ac += e.topology == Topology::AC_B;
    bc += e.topology == Topology::BC_A;
  }
  CHECK(bc == 0);
  const double se = std::sqrt(0.25 * N);
  CHECK(std::abs(ab - N / 2.0) < 4 * se);
  CHECK(std::abs(ac - N / 2.0) < 4 * se);
}

TEST_CASE("fully symmetric input selects each topology 1/3 of the time") {
  // identical statistics for all three pairs: three failed loci forming a
  // symmetric orbit
  std::vector<GeneTree3> trees = {make_tree(Topology::AB_C, 1.0, 2.0),
                                  make_tree(Topology::AC_B, 1.0, 2.0),
                                  make_tree(Topology::BC_A, 1.0, 2.0)};
  const int N = 10000;
  for (MethodId m : {MethodId::GLASS_MT, MethodId::RSTAR, MethodId::STAR,
                     MethodId::MDC, MethodId::STEAC}) {
    std::array<int, 3> counts = {0, 0, 0};
    for (int s = 0; s < N; ++s) {
      TieBreaker tie(s * 7919 + 1);
      counts[int(estimate(m, trees, tie).topology)]++;
    }
    const double se = std::sqrt(N * (1.0 / 3.0) * (2.0 / 3.0));
    for (int c : counts) CHECK(std::abs(c - N / 3.0) < 3 * se);
  }
}

TEST_CASE("equivalences hold exactly on random datasets") {
  Xoshiro256pp rng(101);
  for (int i = 0; i < 500; ++i) {
    double t = 2.0 * rng.uniform();
    int L = 1 + int(rng.uniform_index(100));
    auto trees = random_dataset(rng, t, L);
    std::uint64_t seed = rng();
    TieBreaker t1(seed), t2(seed), t3(seed), t4(seed), t5(seed), t6(seed),
        t7(seed), t8(seed);
    CHECK(star(trees, t1).topology == rstar(trees, t2).topology);
    CHECK(mdc(trees, t3).topology == rstar(trees, t4).topology);
    CHECK(ml(trees, t5).topology == glass_mt(trees, t6).topology);
    CHECK(estimate(MethodId::SC, trees, t7).topology ==
          estimate(MethodId::STEAC, trees, t8).topology);
  }
}

TEST_CASE("ml grid refinement does not change the argmax") {
  Xoshiro256pp rng(103);
  for (int i = 0; i < 100; ++i) {
    auto trees = random_dataset(rng, 0.5, 20);
    std::uint64_t seed = rng();
    TieBreaker t1(seed), t2(seed);
    CHECK(ml(trees, t1, false).topology == ml(trees, t2, true).topology);
  }
}

TEST_CASE("ml times maximize the likelihood for the chosen topology") {
  Xoshiro256pp rng(107);
  for (int i = 0; i < 100; ++i) {
    auto trees = random_dataset(rng, 0.4, 15);
    TieBreaker tie(rng());
    auto e = ml(trees, tie);
    SpeciesTree3 at(*e.tau_cherry, *e.tau_root, e.topology);
    const double best = log_likelihood(trees, at);
    for (double eps : {1e-3, 0.05, 0.2}) {
      SpeciesTree3 lower(std::max(0.0, *e.tau_cherry - eps),
                         std::max(std::max(0.0, *e.tau_cherry - eps),
                                  *e.tau_root - eps),
                         e.topology);
      CHECK(log_likelihood(trees, lower) <= best + 1e-12);
    }
  }
}

TEST_CASE("permutation equivariance") {
  Xoshiro256pp rng(109);
  const std::array<Taxon, 3> swap_bc = {Taxon::A, Taxon::C, Taxon::B};
  const std::array<Taxon, 3> cycle = {Taxon::B, Taxon::C, Taxon::A};
  for (int i = 0; i < 200; ++i) {
    auto trees = random_dataset(rng, 0.8, 25);
    std::uint64_t seed = rng();
    for (const auto& perm : {swap_bc, cycle}) {
      auto relabeled = permute_dataset(trees, perm);
      for (MethodId m : {MethodId::GLASS_MT, MethodId::RSTAR, MethodId::STEAC,
                         MethodId::ML}) {
        TieBreaker t1(seed), t2(seed);
        CHECK(permute(estimate(m, trees, t1).topology, perm) ==
              estimate(m, relabeled, t2).topology);
      }
    }
  }
}

TEST_CASE("determinism: identical inputs and seeds give identical estimates") {
  Xoshiro256pp rng(113);
  auto trees = random_dataset(rng, 0.3, 40);
  for (MethodId m : kAllMethods) {
    TieBreaker t1(55), t2(55);
    auto a = estimate(m, trees, t1);
    auto b = estimate(m, trees, t2);
    CHECK(a.topology == b.topology);
    CHECK(a.tie == b.tie);
    CHECK(a.tau_cherry == b.tau_cherry);
    CHECK(a.tau_root == b.tau_root);
  }
}

TEST_CASE("empty dataset rejected") {
  TieBreaker tie(1);
  CHECK_THROWS(estimate(MethodId::RSTAR, {}, tie));
}
