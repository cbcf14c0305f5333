#include <doctest.h>

#include <bit>
#include <vector>

#include "fibra/error.hpp"
#include "fibra/quotient.hpp"
#include "support/instances.hpp"

using namespace fibra;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvariantViolation;
}

Bundle digits() { return Bundle("E", FinSet{"m"}, {FinSet{"0", "1", "2", "3"}}); }

ReducedFiberedCorrespondence parity(const Bundle& e) {
  const auto& f = e.fiber(0);
  std::vector<Mask> rows(f.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t j = 0; j < f.size(); ++j)
      if ((i + j) % 2 == 0) rows[i] |= bit(j);
  return ReducedFiberedCorrespondence(e, e, 1, {{0, Correspondence(f, f, rows)}});
}

/// Checks i t j = f at every total-space point plus the shape of each factor.
void check_factorization(const FiberedMorphism& f) {
  const auto [j, t, i] = factorize(f);
  CHECK(j.surjective());
  CHECK(t.bijective());
  CHECK(i.injective());
  CHECK(j.source() == f.source());
  CHECK(i.target() == f.target());
  for (std::size_t x = 0; x < f.maps().size(); ++x)
    for (std::size_t a = 0; a < f.maps()[x].size(); ++a) CHECK(i(x, t(x, j(x, a))) == f(x, a));
  CHECK(compose(i, compose(t, j)) == f);
}

}  // namespace

TEST_CASE("fibered morphism validation") {
  const Bundle a("A", FinSet{"m"}, {FinSet{"a", "b"}});
  const Bundle b("B", FinSet{"m"}, {FinSet{"u"}});
  const Bundle c("C", FinSet{"n"}, {FinSet{"u"}});
  CHECK_NOTHROW(FiberedMorphism(a, b, {{0, 0}}));
  CHECK(code_of([&] { FiberedMorphism(a, c, {{0, 0}}); }) == ErrorCode::BaseMismatch);
  CHECK(code_of([&] { FiberedMorphism(a, b, {{0}}); }) == ErrorCode::InvalidMorphism);
  CHECK(code_of([&] { FiberedMorphism(a, b, {{0, 1}}); }) == ErrorCode::InvalidMorphism);
}

TEST_CASE("quotient_bundle examples") {
  const Bundle e = digits();
  SUBCASE("parity classes") {
    const auto q = quotient_bundle(e, parity(e));
    CHECK(q.quotient.fiber(0) == FinSet{"0", "1"});
    CHECK(q.classes[0] == std::vector<Mask>{0b0101, 0b1010});
    CHECK(q.nat(0, 0) == q.nat(0, 2));
    CHECK(q.nat(0, 1) == q.nat(0, 3));
    CHECK(q.nat(0, 0) != q.nat(0, 1));
    CHECK_FALSE(q.quotient_topology.has_value());
  }
  SUBCASE("diagonal gives an isomorphic copy") {
    const auto q = quotient_bundle(e, reduced_diagonal(e));
    CHECK(q.quotient.fiber(0) == e.fiber(0));
    CHECK(q.nat.bijective());
  }
  SUBCASE("full relation collapses every fiber") {
    const auto& f = e.fiber(0);
    const ReducedFiberedCorrespondence full(e, e, 1, {{0, full_relation(f, f)}});
    const auto q = quotient_bundle(e, full);
    CHECK(q.quotient.fiber(0) == FinSet{"0"});
  }
  SUBCASE("refusals") {
    const auto& f = e.fiber(0);
    const ReducedFiberedCorrespondence bad(e, e, 1, {{0, Correspondence(f, f, {{"0", "1"}})}});
    CHECK(code_of([&] { quotient_bundle(e, bad); }) == ErrorCode::NotAnEquivalence);
    const Bundle two("T", FinSet{"x", "y"}, {FinSet{"a"}, FinSet{"a"}});
    CHECK(code_of([&] { quotient_bundle(two, ReducedFiberedCorrespondence(two, two, 0b01)); }) ==
          ErrorCode::PartialDomain);
    CHECK(code_of([&] { quotient_bundle(two, reduced_diagonal(e)); }) ==
          ErrorCode::BundleMismatch);
  }
}

TEST_CASE("quotient classes partition each fiber") {
  testing::Rng rng(211);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = testing::random_bundle(rng, "A", 0, 4, 0, 4);
    const auto b = testing::random_bundle_over(rng, "B", a.base(), 1, 3);
    const auto f = testing::random_morphism(rng, a, b);
    const auto q = quotient_bundle(a, kernel_equivalence(f));
    for (std::size_t x = 0; x < a.base().size(); ++x) {
      Mask cover = 0;
      for (Mask c : q.classes[x]) {
        CHECK((cover & c) == 0);
        cover |= c;
        // labelled by the least member, and nat sends each member there
        const std::size_t least = static_cast<std::size_t>(std::countr_zero(c));
        const Label label = a.fiber(x)[least];
        for_each_bit(c, [&](std::size_t m) {
          CHECK(q.quotient.fiber(x)[q.nat(x, m)] == label);
          CHECK(a.fiber(x)[m] >= label);
        });
      }
      CHECK(cover == a.fiber(x).all());
      CHECK(q.quotient.fiber(x).size() == q.classes[x].size());
    }
  }
}

TEST_CASE("kernel_equivalence examples") {
  const Bundle a = digits();
  const Bundle b("B", FinSet{"m"}, {FinSet{"u", "v", "w"}});
  const Bundle four("C", FinSet{"m"}, {FinSet{"p", "q", "r", "s"}});
  CHECK(kernel_equivalence(FiberedMorphism(a, four, {{2, 0, 3, 1}})) == reduced_diagonal(a));
  const auto constant = kernel_equivalence(FiberedMorphism(a, b, {{1, 1, 1, 1}}));
  CHECK(constant.fiber(0) == full_relation(a.fiber(0), a.fiber(0)));

  const Bundle three("D", FinSet{"m"}, {FinSet{"0", "1", "2"}});
  const auto k = kernel_equivalence(FiberedMorphism(three, b, {{0, 0, 1}}));
  CHECK(testing::union_find_classes(k.fiber(0)) == std::vector<Mask>{0b011, 0b100});
}

TEST_CASE("kernel equivalence is the graph composed with its inverse") {
  testing::Rng rng(223);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = testing::random_bundle(rng, "A", 0, 4, 0, 4);
    const auto b = testing::random_bundle_over(rng, "B", a.base(), 1, 4);
    const auto f = testing::random_morphism(rng, a, b);
    const auto k = kernel_equivalence(f);
    CHECK(k == reduced_compose(reduced_inverse(graph(f)), graph(f)));
    CHECK(classify(k).equivalence);
  }
}

TEST_CASE("factorize examples") {
  const Bundle a = digits();
  const Bundle b("B", FinSet{"m"}, {FinSet{"u", "v", "w"}});
  const FiberedMorphism f(a, b, {{0, 0, 1, 1}});
  const auto [j, t, i] = factorize(f);
  CHECK(j.target().fiber(0) == FinSet{"0", "2"});
  CHECK(t.target().fiber(0) == FinSet{"u", "v"});
  CHECK(i.target() == b);
  check_factorization(f);

  const Bundle four("C", FinSet{"m"}, {FinSet{"p", "q", "r", "s"}});
  const FiberedMorphism bij(a, four, {{3, 1, 0, 2}});
  const auto parts = factorize(bij);
  CHECK(parts.j.bijective());
  CHECK(parts.t.bijective());
  CHECK(parts.i.bijective());
  check_factorization(bij);

  const auto flat = factorize(FiberedMorphism(a, b, {{2, 2, 2, 2}}));
  CHECK(flat.j.target().fiber(0).size() == 1);
  CHECK(flat.t.target().fiber(0) == FinSet{"w"});
}

TEST_CASE("factorize holds on random morphisms") {
  testing::Rng rng(227);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = testing::random_bundle(rng, "A", 0, 4, 0, 4);
    const auto b = testing::random_bundle_over(rng, "B", a.base(), 1, 4);
    check_factorization(testing::random_morphism(rng, a, b));
  }
}

TEST_CASE("the quotient topology is the finest making nat continuous") {
  testing::Rng rng(229);
  std::size_t checked = 0;
  for (int trial = 0; trial < 12; ++trial) {
    const auto shape = testing::random_bundle(rng, "E", 1, 3, 1, 3);
    const auto total = shape.total_space();
    if (total.set.size() > 6) continue;
    const auto base_tops = enumerate_topologies(shape.base());
    const auto& base_top = base_tops[testing::uniform(rng, 0, base_tops.size() - 1)];
    const auto total_tops = enumerate_topologies(total.set);
    const auto& total_top = total_tops[testing::uniform(rng, 0, total_tops.size() - 1)];
    const Bundle e(shape.name(), shape.base(), shape.fibers(), std::nullopt, base_top, total_top);

    const auto b = testing::random_bundle_over(rng, "B", e.base(), 1, 2);
    const auto q = quotient_bundle(e, kernel_equivalence(testing::random_morphism(rng, e, b)));
    REQUIRE(q.quotient_topology.has_value());
    const auto nat_map = q.nat.total_map();
    const auto& qtop = *q.quotient_topology;
    CHECK(is_continuous_map(nat_map, total_top, qtop));

    // no topology on the quotient total space makes nat continuous while
    // having an open set outside qtop
    for (const auto& t : enumerate_topologies(qtop.points())) {
      if (!is_continuous_map(nat_map, total_top, t)) continue;
      for (Mask v : t.opens()) CHECK(qtop.is_open(v));
    }
    // a continuous projection E -> M descends to E/S -> M
    if (is_continuous_map(total.projection, total_top, base_top)) {
      CHECK(is_continuous_map(q.quotient.total_space().projection, qtop, base_top));
    }
    ++checked;
  }
  CHECK(checked > 3);
}
