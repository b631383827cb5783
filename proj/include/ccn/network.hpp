#pragma once

#include "ccn/cell_map.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ccn {

struct Arrow {
  std::string name;
  CellMap map;

  friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// Homogeneous coupled cell network: n identical cells, one input map per
/// arrow type. Arrow 0 is always the identity (the cell's own state).
class Network {
 public:
  /// Validates the structural assumptions; throws ModelError.
  Network(int n_cells, std::vector<Arrow> arrows);

  int n_cells() const { return n_cells_; }
  int n_arrows() const { return static_cast<int>(arrows_.size()); }
  const std::vector<Arrow>& arrows() const { return arrows_; }

  friend bool operator==(const Network&, const Network&) = default;

 private:
  int n_cells_;
  std::vector<Arrow> arrows_;
};

/// Named cell maps from a generator file.
struct GeneratorSet {
  int n_cells = 0;
  std::vector<std::string> names;
  std::vector<CellMap> maps;
};

Network parse_network(std::string_view text);
GeneratorSet parse_generators(std::string_view text);
std::string serialize_network(const Network& net);
std::string serialize_generators(const GeneratorSet& gens);

enum class InputKind { Network, Generators };

/// Looks at the first arrow/generator line to decide what a file holds.
InputKind detect_input_kind(std::string_view text);

/// Input maps in arrow order (a copy).
std::vector<CellMap> input_maps(const Network& net);

struct SelfFundamentalReport {
  bool closed = false;
  bool has_identity = false;
  /// table[p][q] = index of arrow p * q (monoid convention of CellMap::then);
  /// present iff closed.
  std::vector<std::vector<int>> table;
  /// First pair (p, q) whose product is not an arrow; present iff !closed.
  std::optional<std::pair<int, int>> violation;
};

SelfFundamentalReport check_self_fundamental(const Network& net);

/// Hidden symmetries of a network that is its own fundamental network.
/// Requires a closed arrow set with as many arrows as cells and a base cell
/// b for which k -> arrow_k(b) is a bijection; cell c is then identified
/// with the arrow k(c) sending b to c, and the symmetry attached to cell i is
/// c -> arrow_{k(c)}(i). Every returned map commutes exactly with every
/// arrow. Returns a minimal generating subset (identity dropped), or nullopt
/// when the construction does not apply.
std::optional<GeneratorSet> hidden_symmetries(const Network& net);

}  // namespace ccn
