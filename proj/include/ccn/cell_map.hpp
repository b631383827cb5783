#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace ccn {

/// A self-map of the cell index set {0, ..., n-1}. Stored 0-based; every
/// text format and report uses 1-based indices.
class CellMap {
 public:
  CellMap() = default;
  /// Throws ModelError if an image value is outside [0, size).
  explicit CellMap(std::vector<int> image);

  static CellMap identity(int n);
  static CellMap constant(int n, int target);

  int size() const { return static_cast<int>(image_.size()); }
  int operator()(int i) const { return image_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& image() const { return image_; }
  bool is_identity() const;

  /// Monoid product this * other := other o this, i.e. i -> other(this(i)).
  /// With (A_s x)_i = x_{s(i)} this makes A_{s*t} = A_s A_t.
  CellMap then(const CellMap& other) const;

  /// "(2, 6, 4, 8, 2, 6, 7, 8)" in 1-based notation.
  std::string to_string() const;

  friend bool operator==(const CellMap&, const CellMap&) = default;
  friend auto operator<=>(const CellMap& a, const CellMap& b) {
    return a.image_ <=> b.image_;
  }

 private:
  std::vector<int> image_;
};

}  // namespace ccn
