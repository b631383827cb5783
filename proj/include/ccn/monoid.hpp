#pragma once

#include "ccn/cell_map.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace ccn {

using IntMat = Eigen::MatrixXi;

/// Finite monoid of cell maps with its multiplication table.
struct Monoid {
  std::vector<CellMap> elements;            // elements[0] is the identity
  std::vector<std::vector<int>> table;      // table[p][q] = index of p * q
  std::vector<int> generators;              // indices of the supplied generators

  int size() const { return static_cast<int>(elements.size()); }
  int n_cells() const { return elements.empty() ? 0 : elements.front().size(); }
  int index_of(const CellMap& m) const;     // -1 when absent
};

inline constexpr std::size_t kDefaultMonoidCap = 10000;

/// Closure of {identity} u generators under CellMap::then. Elements are
/// ordered breadth-first by word length, lexicographically by image tuple
/// within a length, so the result does not depend on generator order.
/// Throws ModelError when the generators disagree on the cell count or the
/// closure exceeds `cap` elements.
Monoid close_monoid(const std::vector<CellMap>& generators, std::size_t cap = kDefaultMonoidCap);

/// Exhaustive associativity check for monoids with at most 64 elements,
/// `samples` random triples beyond that.
bool check_associativity(const Monoid& mon, std::uint64_t seed = 0, int samples = 20000);

/// 0/1 matrix with M(i, s(i)) = 1, so (M x)_i = x_{s(i)}.
IntMat rep_matrix(const CellMap& sigma, int n);

struct MonoidRep {
  Monoid monoid;
  int dim = 0;
  std::vector<IntMat> matrices;             // one per monoid element

  /// Generator matrices as doubles, in Monoid::generators order.
  std::vector<Eigen::MatrixXd> generator_actions() const;
  std::vector<Eigen::MatrixXd> element_actions() const;
};

/// Throws NumericalError if A_{p*q} != A_p A_q for some pair.
MonoidRep build_representation(const Monoid& mon, int n);

}  // namespace ccn
