#pragma once

#include "ccn/commutant.hpp"
#include "ccn/numeric.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace ccn {

/// Eigenvalues grouped by single linkage. A complex cluster stands for a
/// conjugate pair: `center` has positive imaginary part and `multiplicity`
/// counts one member of the pair, so its real invariant subspace has
/// dimension 2 * multiplicity.
struct EigenCluster {
  std::complex<double> center;
  int multiplicity = 0;
  bool real = true;

  int subspace_dim() const { return real ? multiplicity : 2 * multiplicity; }
};

/// Groups eigenvalues whose distance is at most rel_tol * scale, merges
/// conjugate clusters into one complex cluster and orders the result by
/// (real part, imaginary part). Returns nullopt when conjugate clusters have
/// different sizes (the grouping is then inconsistent at this tolerance).
std::optional<std::vector<EigenCluster>> cluster_eigenvalues(const CVec& eigenvalues, double rel_tol, double scale);

/// Orthonormal basis of the real generalized eigenspace of L for a cluster:
/// the kernel of (L - mu)^k, or of ((L - a)^2 + b^2)^k for a complex cluster
/// mu = a + ib. `gap` receives the ratio between the largest discarded and
/// the smallest kept singular value (small is good).
Mat generalized_eigenspace(const Mat& l, const EigenCluster& cluster, double* gap = nullptr);

/// Newton refinement of an approximately L-invariant subspace with
/// orthonormal basis q: each step solves the Sylvester equation
/// A22 X - X A11 = -A21 in the basis [q, q_perp] and tilts q by q_perp X.
/// Converges to accuracy eps / sep(A11, A22) instead of the much weaker
/// accuracy of a subspace read off a matrix power. Returns q unchanged when
/// the two spectra are not separated.
Mat refine_invariant_subspace(const Mat& l, const Mat& q, int iterations = 3);

/// Splits the carrier into the real generalized eigenspaces of the
/// equivariant map L. Returns nullopt when the spectrum is a single cluster
/// or when no tolerance level yields a clean, invariant direct-sum split.
std::optional<std::vector<Mat>> spectral_split(const Mat& l, const RepActions& rep, const Tolerances& tol = {});

}  // namespace ccn
