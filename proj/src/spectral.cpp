#include "ccn/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ccn {
namespace {

constexpr double kGapLimit = 1e-4;
constexpr double kDirectSumLimit = 1e-6;

int find_root(std::vector<int>& parent, int i) {
  while (parent[static_cast<std::size_t>(i)] != i) i = parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
  return i;
}

}  // namespace

std::optional<std::vector<EigenCluster>> cluster_eigenvalues(const CVec& ev, double rel_tol, double scale) {
  const int n = static_cast<int>(ev.size());
  const double dist = rel_tol * std::max(scale, 1e-300);
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(ev(i) - ev(j)) <= dist) parent[static_cast<std::size_t>(find_root(parent, i))] = find_root(parent, j);

  std::vector<std::vector<int>> groups(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) groups[static_cast<std::size_t>(find_root(parent, i))].push_back(i);

  struct Raw {
    std::complex<double> center;
    int size;
  };
  std::vector<Raw> raw;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    std::complex<double> c = 0.0;
    for (int i : g) c += ev(i);
    raw.push_back({c / static_cast<double>(g.size()), static_cast<int>(g.size())});
  }

  std::vector<EigenCluster> out;
  std::vector<bool> used(raw.size(), false);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    if (std::abs(raw[i].center.imag()) <= dist) {
      out.push_back({{raw[i].center.real(), 0.0}, raw[i].size, true});
      continue;
    }
    // find the conjugate partner
    std::size_t best = raw.size();
    double best_d = 0.0;
    for (std::size_t j = 0; j < raw.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(raw[j].center - std::conj(raw[i].center));
      if (best == raw.size() || d < best_d) {
        best = j;
        best_d = d;
      }
    }
    if (best == raw.size() || best_d > 10.0 * dist + 1e-12 * scale || raw[best].size != raw[i].size) return std::nullopt;
    used[best] = true;
    const std::complex<double> c = 0.5 * (raw[i].center + std::conj(raw[best].center));
    out.push_back({{c.real(), std::abs(c.imag())}, raw[i].size, false});
  }
  std::sort(out.begin(), out.end(), [](const EigenCluster& a, const EigenCluster& b) {
    if (a.center.real() != b.center.real()) return a.center.real() < b.center.real();
    return a.center.imag() < b.center.imag();
  });
  return out;
}

Mat generalized_eigenspace(const Mat& l, const EigenCluster& cluster, double* gap) {
  const auto m = l.rows();
  const Mat id = Mat::Identity(m, m);
  Mat base;
  if (cluster.real) {
    base = l - cluster.center.real() * id;
  } else {
    const Mat shifted = l - cluster.center.real() * id;
    base = shifted * shifted + cluster.center.imag() * cluster.center.imag() * id;
  }
  Mat power = id;
  for (int i = 0; i < cluster.multiplicity; ++i) {
    power = power * base;
    const double nrm = power.norm();
    if (nrm > 0.0) power /= nrm;  // keep the scale tame; the kernel is unchanged
  }
  const int k = cluster.subspace_dim();
  Eigen::JacobiSVD<Mat> svd(power, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  if (gap) {
    if (k >= m || s(0) == 0.0) {
      *gap = 0.0;
    } else {
      const double kept = s(m - k - 1);
      *gap = kept > 0.0 ? s(m - k) / kept : 1.0;
    }
  }
  return svd.matrixV().rightCols(k);
}

Mat refine_invariant_subspace(const Mat& l, const Mat& q, int iterations) {
  const auto m = l.rows();
  const auto k = q.cols();
  if (k == 0 || k >= m) return q;
  auto leakage = [&](const Mat& basis, Mat* full) {
    Eigen::HouseholderQR<Mat> qr(basis);
    *full = qr.householderQ();
    return (full->rightCols(m - k).transpose() * l * full->leftCols(k)).norm();
  };
  Mat best = q;
  Mat full;
  double best_leak = leakage(best, &full);
  const double scale = std::max(l.norm(), 1e-300);
  for (int it = 0; it < iterations && best_leak > 1e-15 * scale; ++it) {
    const Mat q0 = full.leftCols(k);
    const Mat qp = full.rightCols(m - k);
    const Mat a11 = q0.transpose() * l * q0;
    const Mat a21 = qp.transpose() * l * q0;
    const Mat a22 = qp.transpose() * l * qp;
    const auto r = m - k;
    // vec(A22 X - X A11) = (I_k kron A22 - A11^T kron I_r) vec(X)
    Mat sys = Mat::Zero(r * k, r * k);
    for (Eigen::Index j = 0; j < k; ++j) {
      sys.block(j * r, j * r, r, r) += a22;
      for (Eigen::Index i = 0; i < k; ++i) sys.block(j * r, i * r, r, r).diagonal().array() -= a11(i, j);
    }
    Eigen::JacobiSVD<Mat> svd(sys, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-10 * scale) break;  // spectra not separated
    const Vec rhs = -Eigen::Map<const Vec>(a21.data(), a21.size());
    const Vec x = svd.solve(rhs);
    const Mat tilted = q0 + qp * Eigen::Map<const Mat>(x.data(), r, k);
    const Mat candidate = orthonormalize(tilted);
    Mat cand_full;
    const double leak = leakage(candidate, &cand_full);
    if (!(leak < best_leak)) break;
    best = candidate;
    best_leak = leak;
    full = cand_full;
  }
  return best;
}

std::optional<std::vector<Mat>> spectral_split(const Mat& l, const RepActions& rep, const Tolerances& tol) {
  const auto m = l.rows();
  if (m <= 1) return std::nullopt;
  Eigen::EigenSolver<Mat> es(l, false);
  if (es.info() != Eigen::Success) return std::nullopt;
  const CVec ev = es.eigenvalues();
  const double scale = std::max(spectral_norm(l), 1e-300);

  for (double rel = tol.cluster; rel <= 1e-2 * 1.0001; rel *= 100.0) {
    const auto clusters = cluster_eigenvalues(ev, rel, scale);
    if (!clusters) continue;
    if (clusters->size() < 2) return std::nullopt;

    std::vector<Mat> parts;
    bool ok = true;
    for (const auto& c : *clusters) {
      double gap = 1.0;
      parts.push_back(refine_invariant_subspace(l, generalized_eigenspace(l, c, &gap)));
      if (gap > kGapLimit) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    Mat stacked(m, m);
    Eigen::Index col = 0;
    for (const auto& p : parts) {
      stacked.middleCols(col, p.cols()) = p;
      col += p.cols();
    }
    if (col != m || min_singular_value(stacked) < kDirectSumLimit) continue;
    for (const auto& p : parts)
      if (rep.invariance(p) > tol.invariance) ok = false;
    if (!ok) continue;
    return parts;
  }
  return std::nullopt;
}

}  // namespace ccn
