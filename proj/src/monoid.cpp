#include "ccn/monoid.hpp"

#include "ccn/errors.hpp"
#include "ccn/numeric.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ccn {

CellMap::CellMap(std::vector<int> image) : image_(std::move(image)) {
  const int n = size();
  for (int v : image_)
    if (v < 0 || v >= n) throw ModelError("cell map value out of range");
}

CellMap CellMap::identity(int n) {
  std::vector<int> image(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) image[static_cast<std::size_t>(i)] = i;
  return CellMap(std::move(image));
}

CellMap CellMap::constant(int n, int target) {
  return CellMap(std::vector<int>(static_cast<std::size_t>(n), target));
}

bool CellMap::is_identity() const {
  for (int i = 0; i < size(); ++i)
    if ((*this)(i) != i) return false;
  return true;
}

CellMap CellMap::then(const CellMap& other) const {
  std::vector<int> image(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i)
    image[i] = other(image_[i]);
  CellMap out;
  out.image_ = std::move(image);
  return out;
}

std::string CellMap::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(image_[i] + 1);
  }
  return s + ")";
}

int Monoid::index_of(const CellMap& m) const {
  auto it = std::find(elements.begin(), elements.end(), m);
  return it == elements.end() ? -1 : static_cast<int>(it - elements.begin());
}

Monoid close_monoid(const std::vector<CellMap>& generators, std::size_t cap) {
  if (generators.empty())
    throw ModelError("close_monoid needs at least one generator or a cell count");
  const int n = generators.front().size();
  for (const auto& g : generators)
    if (g.size() != n) throw ModelError("generators act on different cell counts");

  Monoid mon;
  std::map<CellMap, int> index;
  auto add = [&](const CellMap& m) {
    if (index.count(m)) return false;
    if (mon.elements.size() >= cap)
      throw ModelError("monoid closure exceeds the cap of " + std::to_string(cap) + " elements");
    index.emplace(m, static_cast<int>(mon.elements.size()));
    mon.elements.push_back(m);
    return true;
  };

  add(CellMap::identity(n));
  std::vector<CellMap> level{mon.elements.front()};
  while (!level.empty()) {
    std::set<CellMap> next;
    for (const auto& x : level)
      for (const auto& g : generators) {
        CellMap y = x.then(g);
        if (!index.count(y)) next.insert(std::move(y));
      }
    level.assign(next.begin(), next.end());
    for (const auto& y : level) add(y);
  }

  const std::size_t size = mon.elements.size();
  mon.table.assign(size, std::vector<int>(size, 0));
  for (std::size_t p = 0; p < size; ++p)
    for (std::size_t q = 0; q < size; ++q)
      mon.table[p][q] = index.at(mon.elements[p].then(mon.elements[q]));

  for (const auto& g : generators) {
    const int idx = index.at(g);
    if (std::find(mon.generators.begin(), mon.generators.end(), idx) == mon.generators.end())
      mon.generators.push_back(idx);
  }
  return mon;
}

bool check_associativity(const Monoid& mon, std::uint64_t seed, int samples) {
  const int m = mon.size();
  auto ok = [&](int a, int b, int c) {
    const auto& t = mon.table;
    return t[static_cast<std::size_t>(t[a][b])][c] == t[a][static_cast<std::size_t>(t[b][c])];
  };
  if (m <= 64) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          if (!ok(a, b, c)) return false;
    return true;
  }
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const int a = static_cast<int>(rng.next() % static_cast<std::uint64_t>(m));
    const int b = static_cast<int>(rng.next() % static_cast<std::uint64_t>(m));
    const int c = static_cast<int>(rng.next() % static_cast<std::uint64_t>(m));
    if (!ok(a, b, c)) return false;
  }
  return true;
}

IntMat rep_matrix(const CellMap& sigma, int n) {
  if (sigma.size() != n) throw ModelError("cell map does not act on the requested dimension");
  IntMat m = IntMat::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, sigma(i)) = 1;
  return m;
}

MonoidRep build_representation(const Monoid& mon, int n) {
  MonoidRep rep;
  rep.monoid = mon;
  rep.dim = n;
  rep.matrices.reserve(mon.elements.size());
  for (const auto& e : mon.elements) rep.matrices.push_back(rep_matrix(e, n));

  if (rep.matrices.front() != IntMat::Identity(n, n))
    throw NumericalError("representation of the identity element is not the identity matrix");
  const int m = mon.size();
  for (int p = 0; p < m; ++p)
    for (int q = 0; q < m; ++q) {
      const IntMat prod = rep.matrices[p] * rep.matrices[q];
      if (prod != rep.matrices[mon.table[p][q]])
        throw NumericalError("homomorphism law A_{pq} = A_p A_q fails for elements " +
                             std::to_string(p) + ", " + std::to_string(q));
    }
  return rep;
}

std::vector<Eigen::MatrixXd> MonoidRep::generator_actions() const {
  std::vector<Eigen::MatrixXd> out;
  for (int g : monoid.generators)
    if (!monoid.elements[g].is_identity()) out.push_back(matrices[g].cast<double>());
  return out;
}

std::vector<Eigen::MatrixXd> MonoidRep::element_actions() const {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& m : matrices) out.push_back(m.cast<double>());
  return out;
}

}  // namespace ccn
