#include "ccn/numeric.hpp"

#include "ccn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ccn {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

double Rng::uniform() {
  // 53 random bits, shifted off zero.
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Mat gaussian_matrix(int rows, int cols, Rng& rng) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.gaussian();
  return m;
}

Mat nullspace(const Mat& a, double rel_tol, double reference) {
  const Eigen::Index n = a.cols();
  if (a.rows() == 0 || n == 0) return Mat::Identity(n, n);
  if (!a.allFinite()) throw NumericalError("nullspace: non-finite input");
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double cutoff = rel_tol * std::max(s.size() > 0 ? s(0) : 0.0, reference);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0.0) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

Mat column_space(const Mat& a, double rel_tol) {
  if (a.cols() == 0 || a.rows() == 0) return Mat(a.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU);
  const Vec& s = svd.singularValues();
  const double cutoff = rel_tol * s(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff && s(i) > 0.0) ++rank;
  return svd.matrixU().leftCols(rank);
}

int numerical_rank(const Mat& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0) && s(i) > 0.0) ++rank;
  return rank;
}

int numerical_rank(const CMat& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<CMat> svd(a);
  const Vec& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0) && s(i) > 0.0) ++rank;
  return rank;
}

double spectral_norm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

double min_singular_value(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec& s = svd.singularValues();
  return s(s.size() - 1);
}

double invariance_residual(const Mat& q, const Mat& a, double scale_floor) {
  const double scale = std::max(a.norm(), scale_floor);
  if (scale == 0.0 || q.cols() == 0) return 0.0;
  const Mat aq = a * q;
  return (aq - q * (q.transpose() * aq)).norm() / scale;
}

double hadamard_bound(const Mat& a) {
  double bound = 1.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) bound *= a.row(i).norm();
  return bound;
}

Mat orthonormalize(const Mat& a) {
  Eigen::HouseholderQR<Mat> qr(a);
  return qr.householderQ() * Mat::Identity(a.rows(), a.cols());
}

}  // namespace ccn
