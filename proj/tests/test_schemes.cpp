#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fspace/error.hpp"
#include "fspace/kernels.hpp"
#include "fspace/parse.hpp"
#include "fspace/schemes.hpp"
#include "support.hpp"

using namespace fspace;
using namespace testing;

namespace {

SchemeTree one_level(std::vector<std::pair<PeriodicSet, PeriodicSet>> nodes) {
  SchemeTree t;
  std::vector<SchemeNode> level;
  for (auto& [c, d] : nodes) level.push_back({-1, c, d});
  t.add_level(std::move(level));
  return t;
}

// T_1 = {e, o}: C_e = evens, C_o = odds, D_e = 0%4, D_o = 1%4.
SchemeTree example_tree() {
  SchemeTree t = one_level({{omega(), omega()}});
  t.add_level({{0, evens(), S(0, 4)}, {0, odds(), S(1, 4)}});
  return t;
}

bool has_clause(const std::vector<SchemeViolation>& v, const std::string& clause) {
  return std::any_of(v.begin(), v.end(), [&](const auto& x) { return x.clause == clause; });
}

bool injective(std::span<const Nat> xs) {
  std::set<Nat> seen(xs.begin(), xs.end());
  return seen.size() == xs.size();
}

}  // namespace

TEST_CASE("validate examples") {
  CHECK(validate(one_level({{evens(), S(0, 4)}, {odds(), S(1, 4)}})).empty());
  CHECK(validate(example_tree()).empty());
  SchemeTree gap = one_level({{omega(), omega()}});
  gap.add_level({{0, S(0, 4), omega()}, {0, odds(), omega()}});
  const auto v = validate(gap);
  CHECK(has_clause(v, "cover"));
  const auto finite_d = validate(one_level({{omega(), PeriodicSet::finite({1, 2})}}));
  CHECK(has_clause(finite_d, "infinite"));
  SchemeTree overlap = one_level({{evens(), omega()}, {S(0, 4) | odds(), omega()}});
  CHECK(has_clause(validate(overlap), "disjoint"));
  SchemeTree barren = one_level({{evens(), omega()}, {odds(), omega()}});
  barren.add_level({{0, omega(), omega()}});
  CHECK(has_clause(validate(barren), "splitting"));
  CHECK(has_clause(validate(barren), "nested"));
  CHECK_THROWS_AS(barren.add_level({{7, omega(), omega()}}), Error);
}

TEST_CASE("repair examples") {
  const auto shared = one_level({{evens(), omega()}, {odds() | PeriodicSet::finite({0, 2}), omega()}});
  const auto fixed = repair(shared);
  CHECK(fixed.nodes()[1].c == odds());
  CHECK(validate(fixed).empty());

  SchemeTree leak = one_level({{omega(), S(0, 3)}});
  leak.add_level({{0, omega(), S(0, 6) | PeriodicSet::finite({7})}});
  const auto sealed = repair(leak);
  CHECK(sealed.nodes()[1].d == S(0, 6));
  CHECK(validate(sealed).empty());

  const auto exact = example_tree();
  const auto same = repair(exact);
  CHECK(same.nodes().size() == exact.nodes().size());
  for (std::size_t i = 0; i < exact.nodes().size(); ++i) {
    CHECK(same.nodes()[i].c == exact.nodes()[i].c);
    CHECK(same.nodes()[i].d == exact.nodes()[i].d);
  }

  // Uncovered naturals go to the first child.
  SchemeTree holes = one_level({{omega(), omega()}});
  holes.add_level({{0, evens() - PeriodicSet::finite({4}), omega()}, {0, odds() - PeriodicSet::finite({1}), omega()}});
  const auto filled = repair(holes);
  CHECK(filled.nodes()[1].c == (evens() | PeriodicSet::finite({1})));

  SchemeTree hopeless = one_level({{evens(), omega()}, {S(0, 4) | odds(), omega()}});
  CHECK_THROWS_AS(repair(hopeless), Error);
}

TEST_CASE("build_injection examples") {
  const auto t = example_tree();
  auto phi = build_injection(t);
  const auto p = phi.extend(t, 6);
  CHECK(std::vector<Nat>(p.begin(), p.end()) == std::vector<Nat>{0, 1, 4, 5, 8, 9});

  const auto self = one_level({{evens(), evens()}, {odds(), odds()}});
  auto id_like = build_injection(self);
  const auto q = id_like.extend(self, 4);
  CHECK(std::vector<Nat>(q.begin(), q.end()) == std::vector<Nat>{0, 1, 2, 3});

  const auto into_odds = one_level({{omega(), odds()}});
  auto o = build_injection(into_odds);
  const auto r = o.extend(into_odds, 3);
  CHECK(std::vector<Nat>(r.begin(), r.end()) == std::vector<Nat>{1, 3, 5});

  CHECK_THROWS_AS(build_injection(SchemeTree{}), Error);
  CHECK_THROWS_AS(build_injection(one_level({{evens(), omega()}})), Error);
}

TEST_CASE("apply on the scheme injection") {
  const auto t = example_tree();
  LazyInjection phi = build_injection(t);
  CHECK(phi.apply(t, 2) == 4);
  CHECK(phi.apply(t, 0) == 0);
  LazyInjection empty;
  try {
    empty.apply(SchemeTree{}, 0);
    FAIL("expected not_deep_enough");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_deep_enough);
  }
}

TEST_CASE("verify_star examples") {
  const auto t = example_tree();
  auto phi = build_injection(t);
  CHECK(verify_star(t, phi, 512));
  std::vector<Nat> bad(phi.memo().begin(), phi.memo().end());
  std::swap(bad[2], bad[3]);
  CHECK_FALSE(verify_star(t, bad, 512));
  CHECK(verify_star(t, std::span<const Nat>{}, 0));
  CHECK_THROWS_AS(verify_star(t, std::span<const Nat>(bad).first(10), 11), Error);
}

TEST_CASE("chain_to_tree examples") {
  SUBCASE("one box") {
    const std::vector<ChainLink> chain{{BasicBox{parse_box("[0%2 -> 1%2] & [1%2 -> omega]")}, {}}};
    const auto t = chain_to_tree(chain);
    CHECK(t.level_count() == 1);
    auto phi = build_injection(t);
    const auto p = phi.extend(t, 512);
    CHECK(verify_star(t, p, 512));
    for (Nat n = 0; n < 512; n += 2) CHECK(p[n] % 2 == 1);
    CHECK(injective(p));
  }
  SUBCASE("repeating one box") {
    const BasicBox b{parse_box("[0%2 -> 1%2] & [1%2 -> omega]")};
    const auto same = refine(b, {});
    const std::vector<ChainLink> chain{{b, {}}, {same.box, same.cert}, {same.box, same.cert}};
    const auto t = chain_to_tree(chain);
    CHECK(t.level_count() == 3);
    for (std::size_t i = t.level_begin(1); i < t.nodes().size(); ++i) {
      CHECK(t.nodes()[i].parent == static_cast<int>(i - 2));
    }
    auto short_phi = build_injection(chain_to_tree(std::span(chain).first(1)));
    auto long_phi = build_injection(t);
    const auto a = short_phi.extend(chain_to_tree(std::span(chain).first(1)), 200);
    const auto c = long_phi.extend(t, 200);
    CHECK(std::equal(a.begin(), a.end(), c.begin()));
  }
  SUBCASE("splitting evens with shrinking targets") {
    const BasicBox b0{parse_box("[0%2 -> 0%2] & [1%2 -> omega]")};
    const auto r1 = refine(b0, parse_box("[0%4 -> 0%4] & [2%4 -> 2%4]"));
    const auto r2 = refine(r1.box, parse_box("[0%4 -> 0%8] & [2%4 -> 2%8]"));
    const std::vector<ChainLink> chain{{b0, {}}, {r1.box, r1.cert}, {r2.box, r2.cert}};
    const auto t = chain_to_tree(chain);
    CHECK(validate(t).empty());
    auto phi = build_injection(t);
    const auto p = phi.extend(t, 512);
    CHECK(verify_star(t, p, 512));
    for (Nat n = 2; n < 512; ++n) {
      if (n % 4 == 0) CHECK(p[n] % 8 == 0);
      if (n % 4 == 2) CHECK(p[n] % 8 == 2);
    }
  }
  CHECK_THROWS_AS(chain_to_tree(std::span<const ChainLink>{}), Error);
  const std::vector<ChainLink> broken{{BasicBox::full(), {}}, {BasicBox{parse_box("[0%2 -> 0%2] & [1%2 -> omega]")}, {{5, 5}}}};
  CHECK_THROWS_AS(chain_to_tree(broken), Error);
  const std::vector<ChainLink> empty{{BasicBox{parse_box("[0%2 -> {1}] & [1%2 -> omega]")}, {}}};
  CHECK_THROWS_AS(chain_to_tree(empty), Error);
}

TEST_CASE("property: injection matches the from-scratch recursion on random chains") {
  Rng rng(30);
  for (int i = 0; i < 40; ++i) {
    const auto chain = random_chain(rng, uniform(rng, 1, 6), 3);
    const auto t = chain_to_tree(chain);
    CHECK(validate(t).empty());
    auto phi = build_injection(t);
    const auto p = phi.extend(t, 512);
    const auto oracle = phi_oracle(t, 512);
    REQUIRE(std::equal(p.begin(), p.end(), oracle.begin()));
    CHECK(injective(p));
    CHECK(verify_star(t, p, 512));
    CHECK(kernels::verify_star_serial(t, p, 512));
  }
}

TEST_CASE("property: deepening never revises finalized values") {
  Rng rng(31);
  for (int i = 0; i < 30; ++i) {
    const auto chain = random_chain(rng, 6, 3);
    SchemeTree t;
    LazyInjection phi;
    std::vector<Nat> seen;
    for (std::size_t k = 0; k < chain.size(); ++k) {
      append_level(t, chain[k], k == 0 ? nullptr : &chain[k - 1].box);
      const auto p = phi.extend(t, 300);
      // Everything up to the previous height was final.
      for (std::size_t n = 0; n < seen.size() && n < k; ++n) REQUIRE(p[n] == seen[n]);
      seen.assign(p.begin(), p.end());
      CHECK(phi.finalized(t) == k + 1);
    }
  }
}

TEST_CASE("property: repair preserves denotations") {
  Rng rng(32);
  for (int i = 0; i < 100; ++i) {
    // Perturb an exact tree by finitely many points per node.
    const auto chain = random_chain(rng, 3, 3);
    SchemeTree exact = chain_to_tree(chain);
    SchemeTree noisy = exact;
    for (std::size_t k = 0; k < noisy.nodes().size(); ++k) {
      auto& node = noisy.node(k);
      const auto noise = PeriodicSet::finite({uniform(rng, 0, 40), uniform(rng, 0, 40)});
      node.c = uniform(rng, 0, 1) ? node.c | noise : node.c - noise;
      node.d = uniform(rng, 0, 1) ? node.d | noise : node.d - noise;
    }
    const auto fixed = repair(noisy);
    CHECK(validate(fixed).empty());
    for (std::size_t k = 0; k < fixed.nodes().size(); ++k) {
      CHECK(almost_equal(fixed.nodes()[k].c, noisy.nodes()[k].c));
      CHECK(almost_equal(fixed.nodes()[k].d, noisy.nodes()[k].d));
    }
  }
}

TEST_CASE("default horizon") {
  CHECK(default_horizon() > 0);
}
