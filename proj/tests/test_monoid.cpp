#include <doctest.h>

#include "ccn/errors.hpp"
#include "ccn/monoid.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace ccn;

TEST_CASE("fixture generators close to the brute-force fixpoint") {
  const auto gens = oracle::fixture_generators();
  const Monoid m = close_monoid(gens);
  const auto brute = oracle::brute_closure(gens);
  CHECK(m.size() == 8);
  CHECK(brute.size() == 8);
  std::set<std::vector<int>> got;
  for (const auto& e : m.elements) got.insert(e.image());
  CHECK(got == brute);
  CHECK(m.elements.front().is_identity());
  CHECK(m.generators.size() == 2);
}

TEST_CASE("product table matches composition") {
  const Monoid m = close_monoid(oracle::fixture_generators());
  for (int p = 0; p < m.size(); ++p)
    for (int q = 0; q < m.size(); ++q)
      CHECK(m.elements[static_cast<std::size_t>(m.table[p][q])] == m.elements[p].then(m.elements[q]));
  CHECK(check_associativity(m));
}

TEST_CASE("representation is an exact homomorphism") {
  const Monoid m = close_monoid(oracle::fixture_generators());
  const MonoidRep rep = build_representation(m, 8);
  for (int p = 0; p < m.size(); ++p) {
    CHECK(rep.matrices[p].cast<double>() == oracle::selection_matrix(m.elements[p]));
    for (int q = 0; q < m.size(); ++q) CHECK(rep.matrices[m.table[p][q]] == rep.matrices[p] * rep.matrices[q]);
  }
}

TEST_CASE("element order does not depend on generator order") {
  auto gens = oracle::fixture_generators();
  const Monoid a = close_monoid(gens);
  std::reverse(gens.begin(), gens.end());
  const Monoid b = close_monoid(gens);
  CHECK(a.elements == b.elements);
}

TEST_CASE("closure size is bounded by n^n") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    std::vector<int> a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      a[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform() * n) % n;
      b[static_cast<std::size_t>(i)] = static_cast<int>(rng.uniform() * n) % n;
    }
    const Monoid m = close_monoid({CellMap(a), CellMap(b)});
    CHECK(m.size() <= static_cast<int>(std::pow(n, n)));
    CHECK(static_cast<std::size_t>(m.size()) == oracle::brute_closure({CellMap(a), CellMap(b)}).size());
  }
}

TEST_CASE("closure cap and mismatched generators are model errors") {
  // The full transformation monoid on 4 cells has 256 elements.
  const std::vector<CellMap> full{CellMap({1, 0, 2, 3}), CellMap({1, 2, 3, 0}), CellMap({0, 0, 2, 3})};
  CHECK(close_monoid(full).size() == 256);
  CHECK_THROWS_AS(close_monoid(full, 100), ModelError);
  CHECK_THROWS_AS(close_monoid({CellMap({0, 1}), CellMap({0})}), ModelError);
  CHECK_THROWS_AS(close_monoid({}), ModelError);
}
