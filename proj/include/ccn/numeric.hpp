#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

namespace ccn {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Tolerance policy shared by the numerical modules. All values are
/// relative to the natural scale of the object being tested unless the
/// name says otherwise.
struct Tolerances {
  double rank = 1e-9;           // singular values <= rank * sigma_max are zero
  double nilpotent = 1e-7;      // eigenvalue modulus / power-trace threshold
  double cluster = 1e-6;        // eigenvalue grouping distance
  double zero_cluster = 1e-6;   // eigenvalues this small feed the generalized kernel
  double invariance = 1e-8;     // ||(I - P) A P|| / ||A||
  double closure = 1e-8;        // structure-constant re-expansion residual
  double invertible = 1e-8;     // sigma_min / sigma_max above this is invertible
  double intertwining = 1e-9;   // ||B A - A' B|| / (||B|| ||A||)
};

/// Portable pseudo-random source. The engine is std::mt19937_64, whose
/// output sequence is fixed by the standard; the real-valued transforms are
/// done here so samples are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double gaussian();
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives an independent stream seed from a base seed and a stream index.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

Mat gaussian_matrix(int rows, int cols, Rng& rng);

/// Orthonormal basis of the null space, singular values
/// <= rel_tol * max(sigma_max, reference) counted as zero. `reference` is the
/// natural scale of the problem, so a system that is pure rounding noise has
/// a full null space. A matrix with no rows has the whole domain as null space.
Mat nullspace(const Mat& a, double rel_tol, double reference = 0.0);

/// Orthonormal basis of the column space.
Mat column_space(const Mat& a, double rel_tol);

int numerical_rank(const Mat& a, double rel_tol);
int numerical_rank(const CMat& a, double rel_tol);

double spectral_norm(const Mat& a);
double min_singular_value(const Mat& a);

/// Relative invariance residual ||(I - Q Q^T) A Q|| / max(||A||, scale_floor)
/// of the subspace with orthonormal basis Q under A. Zero when both vanish.
double invariance_residual(const Mat& q, const Mat& a, double scale_floor = 0.0);

/// Product of the Euclidean row norms: an upper bound for |det|.
double hadamard_bound(const Mat& a);

/// Orthonormalize the columns (thin QR); the columns must be independent.
Mat orthonormalize(const Mat& a);

}  // namespace ccn
