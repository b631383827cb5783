#pragma once

#include "ccn/numeric.hpp"

#include <vector>

namespace ccn {

/// Generator matrices of a representation on a carrier of dimension `dim`.
/// An empty generator list is the trivial monoid.
struct RepActions {
  int dim = 0;
  std::vector<Mat> generators;
  /// Norm floor inherited from the action this one was restricted from, so
  /// a restricted generator that is zero up to rounding is judged on the
  /// scale of the original action.
  double scale = 0.0;

  /// Actions Q^T A Q on the invariant subspace with orthonormal basis Q
  /// (columns in carrier coordinates).
  RepActions restrict_to(const Mat& q) const;
  /// Largest invariance_residual of the subspace over the generators.
  double invariance(const Mat& q) const;
};

/// Orthonormal (Frobenius) basis of Hom_S(V, W): maps L with
/// L A_g|V = A_g|W L for every generator g. Each basis matrix is dim W x dim V.
struct HomSpace {
  int dim_from = 0;
  int dim_to = 0;
  std::vector<Mat> basis;

  int dim() const { return static_cast<int>(basis.size()); }
  /// sum_p coeffs[p] basis[p]
  Mat element(const Vec& coeffs) const;
  Mat random_element(Rng& rng) const;
};

/// Solves the stacked intertwining system for the generator actions on V
/// (`from`) and W (`to`); both lists must follow the same generator order.
/// Imposing the constraint on generators suffices: it is multiplicative.
HomSpace hom_basis(const RepActions& from, const RepActions& to, const Tolerances& tol = {});

/// Largest relative intertwining residual ||B A - A' B|| / (||B|| ||A||) over
/// basis elements and generators.
double intertwining_residual(const HomSpace& hom, const RepActions& from, const RepActions& to);

/// End_S(V) with its associative structure, nilpotent radical and the
/// quotient by the radical (a product of matrix algebras over R, C, H).
class EquiAlgebra {
 public:
  int carrier_dim() const { return carrier_dim_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::vector<Mat>& basis() const { return basis_; }

  /// c[p][q][r] with B_p B_q = sum_r c[p][q][r] B_r
  double constant(int p, int q, int r) const {
    return structure_[static_cast<std::size_t>((p * dim() + q) * dim() + r)];
  }
  double closure_residual() const { return closure_residual_; }

  /// Orthonormal coordinate vectors (columns) spanning the radical and its
  /// orthogonal complement in coordinate space.
  const Mat& radical_coords() const { return radical_coords_; }
  const Mat& complement_coords() const { return complement_coords_; }
  int radical_dim() const { return static_cast<int>(radical_coords_.cols()); }
  int quotient_dim() const { return static_cast<int>(complement_coords_.cols()); }
  std::vector<Mat> radical_basis() const;

  Mat element(const Vec& coords) const;
  /// Least-squares coordinates; `residual` receives ||M - element(coords)|| / ||M||.
  Vec coordinates(const Mat& m, double* residual = nullptr) const;
  /// Coordinates of the product of two elements given by coordinates.
  Vec multiply(const Vec& a, const Vec& b) const;
  /// Left-regular matrix: column q holds the coordinates of a * B_q.
  Mat left_regular(const Vec& a) const;

 private:
  friend EquiAlgebra end_algebra(const RepActions& rep, const Tolerances& tol);

  int carrier_dim_ = 0;
  std::vector<Mat> basis_;
  std::vector<double> structure_;
  double closure_residual_ = 0.0;
  Mat radical_coords_;
  Mat complement_coords_;
};

struct RadicalInfo {
  Mat radical_coords;     // d x r
  Mat complement_coords;  // d x (d - r)
  int quotient_dim = 0;
};

/// Commutant of the generator actions on an m-dimensional carrier, with
/// structure constants and radical. Throws NumericalError if products do not
/// re-expand in the basis or a radical element is not nilpotent.
EquiAlgebra end_algebra(const RepActions& rep, const Tolerances& tol = {});

/// Kernel of the trace form t(a, b) = tr(L_a L_b) on the left-regular
/// representation. Throws NumericalError if a radical basis element fails the
/// matrix nilpotency test.
RadicalInfo radical(const EquiAlgebra& alg, const Tolerances& tol = {});

/// Coordinates of L modulo the radical in the complement basis. Throws
/// ModelError if L is not in the algebra (relative residual > 1e-8).
Vec quotient_element(const EquiAlgebra& alg, const Mat& l);

/// Left multiplication by the quotient element `q` on the quotient algebra.
/// L is nilpotent iff this matrix is.
Mat quotient_left_regular(const EquiAlgebra& alg, const Vec& q);

}  // namespace ccn
