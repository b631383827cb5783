#pragma once

#include "ccn/decomposition.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace ccn {

/// Codimensions of the strata of nilpotent maps on an isotypic component
/// W^s with End(W)/radical of dimension `index`:
///   index 1:    {s} u {i^2 : 2 <= i <= s}
///   index 2, 4: {i^2 index : 1 <= i <= s}
/// Sorted ascending. Throws std::invalid_argument for other indices or s < 1.
std::vector<int> isotypic_nilpotent_codims(int index, int s);

/// All sums d_1 + ... + d_k with d_r drawn from the catalog of (index_r, s_r);
/// {0} for the empty choice.
std::vector<int> stratum_codims(const std::vector<std::pair<int, int>>& index_and_multiplicity);

struct Stratum {
  std::vector<std::pair<int, int>> kernel_isotype;  // (iso class, s_r), s_r >= 1
  int kernel_dim = 0;
  std::vector<int> codim_options;
  int min_codim = 0;
  bool generic = false;                             // min_codim == 1
};

struct StrataEnumeration {
  std::vector<Stratum> strata;   // sorted by (min_codim, kernel_dim), then enumeration order
  bool truncated = false;
  std::size_t cap = 0;
};

inline constexpr std::size_t kDefaultStrataCap = 100000;

/// Every choice of multiplicities 0 <= s_r <= j_r over the iso-classes,
/// enumerated lexicographically and truncated after `cap` choices.
StrataEnumeration enumerate_strata(const Decomposition& dec, std::size_t cap = kDefaultStrataCap);

struct Prediction {
  std::vector<Stratum> generic;      // one per absolutely indecomposable class
  int min_nongeneric_codim = 0;      // smallest min_codim among the other nonempty strata (0 if none)
};

Prediction predict_generic_bifurcations(const Decomposition& dec);

}  // namespace ccn
