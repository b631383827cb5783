#pragma once

#include "ccn/numeric.hpp"

#include <complex>
#include <vector>

namespace ccn {

/// q = w + x i + y j + z k
struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  static Quaternion i() { return {0, 1, 0, 0}; }
  static Quaternion j() { return {0, 0, 1, 0}; }
  static Quaternion k() { return {0, 0, 0, 1}; }

  Quaternion conj() const { return {w, -x, -y, -z}; }
  double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const;
  Quaternion inverse() const;

  friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
    return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
    return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
  friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend Quaternion operator*(double s, const Quaternion& a) { return {s * a.w, s * a.x, s * a.y, s * a.z}; }
};

/// Scalar domain of a matrix space viewed as a real vector space.
enum class Domain { Real = 1, Complex = 2, Quaternion = 4 };

inline int real_dim(Domain d) { return static_cast<int>(d); }
const char* domain_name(Domain d);

/// Dense quaternionic matrix, row-major. Real and complex matrices embed
/// with vanishing (y, z) or (x, y, z) parts.
class HMatrix {
 public:
  HMatrix() = default;
  HMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols)) {}

  static HMatrix identity(int n);
  static HMatrix from_real(const Mat& m);
  static HMatrix random(int rows, int cols, Domain domain, Rng& rng);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Quaternion& operator()(int r, int c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
  const Quaternion& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r * cols_ + c)]; }

  HMatrix block(int r0, int c0, int rows, int cols) const;
  void set_block(int r0, int c0, const HMatrix& b);
  double norm() const;  // Frobenius

  friend HMatrix operator*(const HMatrix& a, const HMatrix& b);
  friend HMatrix operator+(const HMatrix& a, const HMatrix& b);
  friend HMatrix operator-(const HMatrix& a, const HMatrix& b);
  friend HMatrix operator*(double s, const HMatrix& a);

  /// Real part only (valid for Domain::Real data).
  Mat real_part() const;
  /// w + x i part (valid for Domain::Complex data).
  CMat complex_part() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Quaternion> data_;
};

/// Writes each entry q = alpha + beta j (alpha = w + x i, beta = y + z i)
/// as the complex block [[alpha, beta], [-conj(beta), conj(alpha)]].
/// adjoint(A B) = adjoint(A) adjoint(B).
CMat complex_adjoint(const HMatrix& a);

/// Number of right-linearly independent columns: half the complex rank of
/// the complex adjoint. An odd adjoint rank throws NumericalError.
int quaternion_rank(const HMatrix& a, double rel_tol = 1e-9);

/// Independent rank oracle: Gaussian elimination over H with complete
/// pivoting (largest-norm pivot) and row operations by left multiplication.
int quaternion_rank_elimination(const HMatrix& a, double rel_tol = 1e-9);

/// Rank over the scalar domain: SVD for R and C, complex adjoint for H.
int rank_over(const HMatrix& a, Domain domain, double rel_tol = 1e-9);

/// Inverse over H by Gauss-Jordan with left-multiplied row operations.
/// Throws NumericalError if a is numerically singular.
HMatrix inverse(const HMatrix& a, double rel_tol = 1e-12);

struct SchurCertificate {
  double residual = 0.0;   // ||D - C A^{-1} B||_F
  double scale = 0.0;      // max(1, ||D||, ||C A^{-1} B||)
  bool has_rank_r = false; // residual <= tol * scale
};

/// Block matrix [[A, B], [C, D]] with invertible r x r block A has rank r
/// iff its Schur complement D - C A^{-1} B vanishes. Throws NumericalError
/// when A is numerically singular.
SchurCertificate schur_rank_certificate(const HMatrix& a, const HMatrix& b, const HMatrix& c, const HMatrix& d,
                                        double tol = 1e-9);

/// G * H with G (n x r) and H (r x n) Gaussian over the domain; the rank is
/// verified and resampled up to 8 times. Throws NumericalError otherwise.
HMatrix sample_rank_r(int n, int r, Domain domain, Rng& rng);

/// Rank of the real differential of K -> D - C A^{-1} B (blocks split at r)
/// at the point `at`, over the real basis of M(n; K).
int certificate_jacobian_rank(const HMatrix& at, int r, Domain domain, double rel_tol = 1e-9);

/// Coefficients a_1..a_n of det(t I - M) = t^n + a_1 t^{n-1} + ... + a_n
/// (Faddeev-LeVerrier).
Vec characteristic_coefficients(const Mat& m);

/// Rank of the Jacobian of M -> characteristic_coefficients(M) at `at`
/// (central differences).
int characteristic_map_jacobian_rank(const Mat& at, double rel_tol = 1e-6);

struct NilpotencyCheck {
  double spectral_radius = 0.0;   // of the normalized matrix
  double max_power_trace = 0.0;   // max_k |tr(M^k)|, normalized, k = 1..n
  bool by_eigenvalues = false;
  bool by_traces = false;
};

/// Both nilpotency criteria on M / max(||M||_2, reference_norm). The
/// eigenvalue threshold is max(tol, (1000 n eps)^(1/n)): a defective zero
/// eigenvalue of multiplicity n moves by about eps^(1/n) under rounding.
NilpotencyCheck nilpotency(const Mat& m, double tol = 1e-7, double reference_norm = 0.0);

/// Both criteria of `nilpotency`. The defect-aware eigenvalue threshold is
/// loose for larger n (about 0.03 at n = 8); the power traces pin it down.
bool is_nilpotent(const Mat& m, double tol = 1e-7, double reference_norm = 0.0);

}  // namespace ccn
