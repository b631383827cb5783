#pragma once

// Reference data and independent oracles. Nothing here calls the code under
// test for the quantity it checks: closures are brute-force fixpoints,
// commutant dimensions come from LU kernels of integer systems, codimension
// catalogs are the closed formulas written out literally.

#include "ccn/cell_map.hpp"
#include "ccn/numeric.hpp"

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using ccn::Mat;
using ccn::Vec;

std::string data_path(const std::string& name);
std::string read_text(const std::string& path);

// ---- the eight-cell fixture ------------------------------------------------

/// Generator row maps, 1-based as written: sigma_1, sigma_2.
std::vector<ccn::CellMap> fixture_generators();
/// Restricted actions on V and W in the reference bases (column convention).
Mat ref_a();
Mat ref_b();
Mat ref_a_prime();
Mat ref_b_prime();
Mat ref_phi();
/// Displayed (non-orthonormal) bases of V and W as 8 x 3 matrices.
Mat ref_v_basis();
Mat ref_w_basis();

/// One reference branch: synchronous nonzero block (1-based cells) and its
/// slope factor (1 for -alpha/beta, 2 for -alpha/(beta+gamma)); the trivial
/// branch has an empty block.
struct ReferenceBranch {
  std::set<int> cells;
  int slope_kind = 0;  // 0 trivial, 1 single, 2 pair
};
std::vector<ReferenceBranch> reference_branch_table();

// ---- brute-force algebra ---------------------------------------------------

/// Fixpoint closure: repeatedly multiply every pair until nothing new appears.
std::set<std::vector<int>> brute_closure(const std::vector<ccn::CellMap>& gens);

/// Dimension of {L : L A_g = B_g L for all g} via the exact kernel of the
/// Kronecker system (FullPivLU on small integer-valued data).
int lu_hom_dim(const std::vector<Mat>& from, const std::vector<Mat>& to);

/// Permutation-style 0/1 matrix (A x)_i = x_{s(i)}.
Mat selection_matrix(const ccn::CellMap& s);

// ---- codimension catalog ---------------------------------------------------

std::set<int> literal_codims(int index, int s);
/// Every sum of one entry per catalog (brute-force recursion).
std::set<int> brute_sums(const std::vector<std::set<int>>& catalogs);

// ---- pencils ---------------------------------------------------------------

/// Distinct real eigenvalues of det(L0 + t L1) = 0 inside [lo, hi].
std::vector<double> pencil_real_roots(const Mat& l0, const Mat& l1, double lo, double hi);

// ---- standalone representations -------------------------------------------

/// Quarter turn on R^2: the pure complex-type example.
std::vector<Mat> quarter_turn();
/// Left multiplication by i and j on H = R^4: the pure quaternionic example.
std::vector<Mat> quaternion_units();

}  // namespace oracle
