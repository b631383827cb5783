#include "ccn/hypercomplex.hpp"

#include "ccn/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace ccn {

double Quaternion::norm() const { return std::sqrt(norm2()); }

Quaternion Quaternion::inverse() const {
  const double n2 = norm2();
  if (n2 == 0.0) throw NumericalError("inverse of the zero quaternion");
  return (1.0 / n2) * conj();
}

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::Real: return "R";
    case Domain::Complex: return "C";
    case Domain::Quaternion: return "H";
  }
  return "?";
}

HMatrix HMatrix::identity(int n) {
  HMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i).w = 1.0;
  return m;
}

HMatrix HMatrix::from_real(const Mat& m) {
  HMatrix h(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < h.cols(); ++j) h(i, j).w = m(i, j);
  return h;
}

HMatrix HMatrix::random(int rows, int cols, Domain domain, Rng& rng) {
  HMatrix h(rows, cols);
  const int d = real_dim(domain);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      Quaternion& q = h(i, j);
      q.w = rng.gaussian();
      if (d >= 2) q.x = rng.gaussian();
      if (d >= 4) {
        q.y = rng.gaussian();
        q.z = rng.gaussian();
      }
    }
  return h;
}

HMatrix HMatrix::block(int r0, int c0, int rows, int cols) const {
  HMatrix b(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void HMatrix::set_block(int r0, int c0, const HMatrix& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

double HMatrix::norm() const {
  double s = 0.0;
  for (const auto& q : data_) s += q.norm2();
  return std::sqrt(s);
}

HMatrix operator*(const HMatrix& a, const HMatrix& b) {
  if (a.cols() != b.rows()) throw ModelError("HMatrix product: dimension mismatch");
  HMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const Quaternion aik = a(i, k);
      for (int j = 0; j < b.cols(); ++j) c(i, j) = c(i, j) + aik * b(k, j);
    }
  return c;
}

HMatrix operator+(const HMatrix& a, const HMatrix& b) {
  HMatrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

HMatrix operator-(const HMatrix& a, const HMatrix& b) {
  HMatrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

HMatrix operator*(double s, const HMatrix& a) {
  HMatrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
  return c;
}

Mat HMatrix::real_part() const {
  Mat m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = (*this)(i, j).w;
  return m;
}

CMat HMatrix::complex_part() const {
  CMat m(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(i, j) = {(*this)(i, j).w, (*this)(i, j).x};
  return m;
}

CMat complex_adjoint(const HMatrix& a) {
  CMat c(2 * a.rows(), 2 * a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      const Quaternion& q = a(i, j);
      const std::complex<double> alpha(q.w, q.x);
      const std::complex<double> beta(q.y, q.z);
      c(2 * i, 2 * j) = alpha;
      c(2 * i, 2 * j + 1) = beta;
      c(2 * i + 1, 2 * j) = -std::conj(beta);
      c(2 * i + 1, 2 * j + 1) = std::conj(alpha);
    }
  return c;
}

int quaternion_rank(const HMatrix& a, double rel_tol) {
  const int complex_rank = numerical_rank(complex_adjoint(a), rel_tol);
  if (complex_rank % 2 != 0)
    throw NumericalError("complex adjoint has odd rank " + std::to_string(complex_rank));
  return complex_rank / 2;
}

int quaternion_rank_elimination(const HMatrix& input, double rel_tol) {
  HMatrix a = input;
  const int rows = a.rows();
  const int cols = a.cols();
  double largest = 0.0;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) largest = std::max(largest, a(i, j).norm());
  if (largest == 0.0) return 0;
  const double cutoff = rel_tol * largest;

  int rank = 0;
  while (rank < std::min(rows, cols)) {
    int pr = rank, pc = rank;
    double best = -1.0;
    for (int i = rank; i < rows; ++i)
      for (int j = rank; j < cols; ++j)
        if (a(i, j).norm() > best) {
          best = a(i, j).norm();
          pr = i;
          pc = j;
        }
    if (best <= cutoff) break;
    for (int j = 0; j < cols; ++j) std::swap(a(rank, j), a(pr, j));
    for (int i = 0; i < rows; ++i) std::swap(a(i, rank), a(i, pc));
    const Quaternion pivot_inv = a(rank, rank).inverse();
    for (int i = rank + 1; i < rows; ++i) {
      const Quaternion factor = a(i, rank) * pivot_inv;
      for (int j = rank; j < cols; ++j) a(i, j) = a(i, j) - factor * a(rank, j);
    }
    ++rank;
  }
  return rank;
}

int rank_over(const HMatrix& a, Domain domain, double rel_tol) {
  switch (domain) {
    case Domain::Real: return numerical_rank(a.real_part(), rel_tol);
    case Domain::Complex: return numerical_rank(a.complex_part(), rel_tol);
    case Domain::Quaternion: return quaternion_rank(a, rel_tol);
  }
  return 0;
}

HMatrix inverse(const HMatrix& input, double rel_tol) {
  if (input.rows() != input.cols()) throw ModelError("inverse of a non-square matrix");
  const int n = input.rows();
  HMatrix a = input;
  HMatrix inv = HMatrix::identity(n);
  const double scale = std::max(a.norm(), std::numeric_limits<double>::min());
  for (int c = 0; c < n; ++c) {
    int pr = c;
    for (int i = c + 1; i < n; ++i)
      if (a(i, c).norm() > a(pr, c).norm()) pr = i;
    if (a(pr, c).norm() <= rel_tol * scale) throw NumericalError("matrix is numerically singular");
    for (int j = 0; j < n; ++j) {
      std::swap(a(c, j), a(pr, j));
      std::swap(inv(c, j), inv(pr, j));
    }
    const Quaternion p = a(c, c).inverse();
    for (int j = 0; j < n; ++j) {
      a(c, j) = p * a(c, j);
      inv(c, j) = p * inv(c, j);
    }
    for (int i = 0; i < n; ++i) {
      if (i == c) continue;
      const Quaternion f = a(i, c);
      if (f.norm2() == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        a(i, j) = a(i, j) - f * a(c, j);
        inv(i, j) = inv(i, j) - f * inv(c, j);
      }
    }
  }
  return inv;
}

SchurCertificate schur_rank_certificate(const HMatrix& a, const HMatrix& b, const HMatrix& c, const HMatrix& d,
                                        double tol) {
  const int r = a.rows();
  if (a.cols() != r || b.rows() != r || c.cols() != r || d.rows() != c.rows() || d.cols() != b.cols())
    throw ModelError("schur_rank_certificate: inconsistent block shapes");
  if (r > 0 && quaternion_rank(a) < r) throw NumericalError("leading block is numerically singular");
  SchurCertificate cert;
  const HMatrix cab = r > 0 ? c * inverse(a) * b : HMatrix(d.rows(), d.cols());
  cert.residual = (d - cab).norm();
  cert.scale = std::max({1.0, d.norm(), cab.norm()});
  cert.has_rank_r = cert.residual <= tol * cert.scale;
  return cert;
}

HMatrix sample_rank_r(int n, int r, Domain domain, Rng& rng) {
  if (r < 0 || r > n) throw ModelError("sample_rank_r: rank out of range");
  if (r == 0) return HMatrix(n, n);
  for (int attempt = 0; attempt < 8; ++attempt) {
    const HMatrix g = HMatrix::random(n, r, domain, rng);
    const HMatrix h = HMatrix::random(r, n, domain, rng);
    HMatrix m = g * h;
    if (rank_over(m, domain) == r) return m;
  }
  throw NumericalError("sample_rank_r: could not draw a matrix of rank " + std::to_string(r));
}

namespace {

Quaternion unit(int which) {
  switch (which) {
    case 0: return {1, 0, 0, 0};
    case 1: return Quaternion::i();
    case 2: return Quaternion::j();
    default: return Quaternion::k();
  }
}

double component(const Quaternion& q, int which) {
  switch (which) {
    case 0: return q.w;
    case 1: return q.x;
    case 2: return q.y;
    default: return q.z;
  }
}

}  // namespace

int certificate_jacobian_rank(const HMatrix& at, int r, Domain domain, double rel_tol) {
  const int n = at.rows();
  const int m = n - r;
  const int dk = real_dim(domain);
  if (m == 0) return 0;
  const HMatrix alpha = at.block(0, 0, r, r);
  const HMatrix beta = at.block(0, r, r, m);
  const HMatrix gamma = at.block(r, 0, m, r);
  const HMatrix alpha_inv = r > 0 ? inverse(alpha) : HMatrix();
  const HMatrix left = r > 0 ? gamma * alpha_inv : HMatrix(m, 0);   // gamma alpha^{-1}
  const HMatrix right = r > 0 ? alpha_inv * beta : HMatrix(0, m);   // alpha^{-1} beta

  Mat jac(m * m * dk, n * n * dk);
  int col = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int u = 0; u < dk; ++u, ++col) {
        HMatrix e(n, n);
        e(i, j) = unit(u);
        // D f[E] = -E_g a^-1 b + g a^-1 E_a a^-1 b - g a^-1 E_b + E_d
        HMatrix df = e.block(r, r, m, m);
        if (r > 0) {
          df = df - e.block(r, 0, m, r) * right;
          df = df + left * e.block(0, 0, r, r) * right;
          df = df - left * e.block(0, r, r, m);
        }
        int row = 0;
        for (int a = 0; a < m; ++a)
          for (int b = 0; b < m; ++b)
            for (int c = 0; c < dk; ++c) jac(row++, col) = component(df(a, b), c);
      }
  return numerical_rank(jac, rel_tol);
}

Vec characteristic_coefficients(const Mat& a) {
  const Eigen::Index n = a.rows();
  Vec coeffs(n);
  Mat m = Mat::Zero(n, n);
  double previous = 1.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + previous * Mat::Identity(n, n);
    coeffs(k - 1) = -(a * m).trace() / static_cast<double>(k);
    previous = coeffs(k - 1);
  }
  return coeffs;
}

int characteristic_map_jacobian_rank(const Mat& at, double rel_tol) {
  const Eigen::Index n = at.rows();
  const double h = 1e-5 * std::max(1.0, at.norm());
  Mat jac(n, n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      Mat plus = at, minus = at;
      plus(i, j) += h;
      minus(i, j) -= h;
      jac.col(i * n + j) = (characteristic_coefficients(plus) - characteristic_coefficients(minus)) / (2 * h);
    }
  return numerical_rank(jac, rel_tol);
}

NilpotencyCheck nilpotency(const Mat& m, double tol, double reference_norm) {
  NilpotencyCheck check;
  const double s = std::max(spectral_norm(m), reference_norm);
  if (m.size() == 0 || s == 0.0) {
    check.by_eigenvalues = check.by_traces = true;
    return check;
  }
  const Mat mh = m / s;
  const auto n = static_cast<double>(m.rows());
  const double eps = std::numeric_limits<double>::epsilon();

  Eigen::EigenSolver<Mat> es(mh, false);
  check.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();

  Mat power = Mat::Identity(m.rows(), m.cols());
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    power = power * mh;
    check.max_power_trace = std::max(check.max_power_trace, std::abs(power.trace()));
  }

  const double eig_tol = std::max(tol, std::pow(1e3 * n * eps, 1.0 / n));
  check.by_eigenvalues = check.spectral_radius < eig_tol;
  check.by_traces = check.max_power_trace < tol;
  return check;
}

bool is_nilpotent(const Mat& m, double tol, double reference_norm) {
  const NilpotencyCheck c = nilpotency(m, tol, reference_norm);
  return c.by_eigenvalues && c.by_traces;
}

}  // namespace ccn
