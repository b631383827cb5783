#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace oracle {

std::string data_path(const std::string& name) { return std::string(CCN_DATA_DIR) + "/" + name; }

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<ccn::CellMap> fixture_generators() {
  auto zero_based = [](std::vector<int> v) {
    for (int& x : v) --x;
    return ccn::CellMap(v);
  };
  return {zero_based({2, 6, 4, 8, 2, 6, 7, 8}), zero_based({3, 5, 7, 3, 8, 6, 7, 8})};
}

Mat ref_a() { return (Mat(3, 3) << 0, 0, 0, 1, 0, 0, 0, 0, 1).finished(); }
Mat ref_b() { return (Mat(3, 3) << 0, 1, 0, 0, 0, 1, 0, 0, 1).finished(); }
Mat ref_a_prime() { return ref_b(); }
Mat ref_b_prime() { return ref_a(); }
Mat ref_phi() { return (Mat(3, 3) << 0, -1, 1, -1, 0, 1, 0, 0, 1).finished(); }

Mat ref_v_basis() {
  Mat v = Mat::Zero(8, 3);
  v(0, 0) = v(3, 0) = 1;
  v(2, 1) = 1;
  v(6, 2) = 1;
  return v;
}

Mat ref_w_basis() {
  Mat w = Mat::Zero(8, 3);
  w(0, 0) = w(4, 0) = 1;
  w(1, 1) = 1;
  w(5, 2) = 1;
  return w;
}

std::vector<ReferenceBranch> reference_branch_table() {
  return {{{}, 0},        {{1, 4}, 1},    {{3}, 1},       {{1, 3, 4}, 1},
          {{7}, 2},       {{1, 4, 7}, 2}, {{3, 7}, 2},    {{1, 3, 4, 7}, 2}};
}

std::set<std::vector<int>> brute_closure(const std::vector<ccn::CellMap>& gens) {
  const int n = gens.front().size();
  std::vector<int> id(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
  std::set<std::vector<int>> all{id};
  for (const auto& g : gens) all.insert(g.image());
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<std::vector<int>> snapshot(all.begin(), all.end());
    for (const auto& p : snapshot)
      for (const auto& q : snapshot) {
        std::vector<int> pq(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pq[static_cast<std::size_t>(i)] = q[static_cast<std::size_t>(p[static_cast<std::size_t>(i)])];
        grew |= all.insert(pq).second;
      }
  }
  return all;
}

int lu_hom_dim(const std::vector<Mat>& from, const std::vector<Mat>& to) {
  const auto df = from.front().rows();
  const auto dt = to.front().rows();
  const auto u = df * dt;
  Mat sys = Mat::Zero(static_cast<Eigen::Index>(from.size()) * u, u);
  // Unknown L(r, c) sits at column c * dt + r.
  for (std::size_t g = 0; g < from.size(); ++g)
    for (Eigen::Index r = 0; r < dt; ++r)
      for (Eigen::Index c = 0; c < df; ++c) {
        const Eigen::Index row = static_cast<Eigen::Index>(g) * u + c * dt + r;
        // (L A)(r, c) = sum_k L(r, k) A(k, c);  (B L)(r, c) = sum_k B(r, k) L(k, c)
        for (Eigen::Index k = 0; k < df; ++k) sys(row, k * dt + r) += from[g](k, c);
        for (Eigen::Index k = 0; k < dt; ++k) sys(row, c * dt + k) -= to[g](r, k);
      }
  Eigen::FullPivLU<Mat> lu(sys);
  lu.setThreshold(1e-10);
  return static_cast<int>(u - lu.rank());
}

Mat selection_matrix(const ccn::CellMap& s) {
  Mat a = Mat::Zero(s.size(), s.size());
  for (int i = 0; i < s.size(); ++i) a(i, s(i)) = 1.0;
  return a;
}

std::set<int> literal_codims(int index, int s) {
  std::set<int> out;
  if (index == 1) {
    out.insert(s);
    for (int i = 2; i <= s; ++i) out.insert(i * i);
  } else {
    for (int i = 1; i <= s; ++i) out.insert(i * i * index);
  }
  return out;
}

std::set<int> brute_sums(const std::vector<std::set<int>>& catalogs) {
  std::set<int> out;
  std::function<void(std::size_t, int)> rec = [&](std::size_t k, int acc) {
    if (k == catalogs.size()) {
      out.insert(acc);
      return;
    }
    for (int d : catalogs[k]) rec(k + 1, acc + d);
  };
  rec(0, 0);
  return out;
}

std::vector<double> pencil_real_roots(const Mat& l0, const Mat& l1, double lo, double hi) {
  Eigen::GeneralizedEigenSolver<Mat> ges(l0, -l1);
  std::vector<double> r;
  for (Eigen::Index i = 0; i < l0.rows(); ++i) {
    const double b = ges.betas()(i);
    if (std::abs(b) < 1e-14) continue;
    const std::complex<double> z = ges.alphas()(i) / b;
    if (std::abs(z.imag()) < 1e-6 * std::max(1.0, std::abs(z)) && z.real() >= lo && z.real() <= hi) r.push_back(z.real());
  }
  std::sort(r.begin(), r.end());
  std::vector<double> u;
  for (double x : r)
    if (u.empty() || x - u.back() > 1e-6) u.push_back(x);
  return u;
}

std::vector<Mat> quarter_turn() { return {(Mat(2, 2) << 0, -1, 1, 0).finished()}; }

std::vector<Mat> quaternion_units() {
  // Left multiplication on (w, x, y, z).
  Mat li(4, 4), lj(4, 4);
  li << 0, -1, 0, 0,  //
      1, 0, 0, 0,     //
      0, 0, 0, -1,    //
      0, 0, 1, 0;
  lj << 0, 0, -1, 0,  //
      0, 0, 0, 1,     //
      1, 0, 0, 0,     //
      0, -1, 0, 0;
  return {li, lj};
}

}  // namespace oracle
