#pragma once

#include "ccn/decomposition.hpp"
#include "ccn/poly_field.hpp"
#include "ccn/verifier.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ccn {

struct BranchConfig {
  double lambda_min = -0.5;      // bifurcation search window
  double lambda_max = 0.5;
  double epsilon = 1e-3;         // seed amplitude along kernel directions
  double delta = 1e-3;           // seed offset from lambda0 and continuation step
  double range = 1e-2;           // continuation reaches lambda0 +- range
  double newton_tol = 1e-12;
  int newton_iterations = 50;
  int max_halvings = 8;
  double dedupe_tol = 1e-6;      // relative state agreement at three common parameters
  double sync_tol = 1e-6;        // relative coordinate equality for synchrony blocks
  ScanConfig scan;
  Tolerances tol;
};

enum class Crossing { Transversal, Tangential };
const char* crossing_name(Crossing c);

struct Bifurcation {
  double lambda0 = 0.0;
  Mat kernel;                    // orthonormal basis of the generalized kernel
  KernelReport isotype;
  bool generic = false;          // kernel is one absolutely indecomposable class, multiplicity 1
  Crossing crossing = Crossing::Transversal;
  double crossing_speed = 0.0;   // smallest singular value of the projected d/dL Jacobian
  Mat projector;                 // spectral projector onto the kernel along the reduced image
};

/// Locates lambda0 in the window where D_x F(0, lambda) is singular (the
/// singular point closest to the window centre when there are several) and
/// identifies its kernel. Throws NoBifurcation when none exists and
/// ModelError when the linearization is singular for every lambda.
Bifurcation detect_bifurcation(const NetworkField& field, const Decomposition& dec, const BranchConfig& cfg, Rng& rng);

struct BranchPoint {
  double lambda = 0.0;
  Vec x;
  double residual = 0.0;         // ||F(x, lambda)||
};

struct SyncBlock {
  std::vector<int> cells;        // 0-based
  bool zero = false;             // block vanishes along the branch
  double slope = 0.0;            // mean d x_i / d lambda at lambda0
};

struct Branch {
  std::vector<BranchPoint> points;   // sorted by lambda, lambda0 excluded
  Vec direction;                     // kernel seed direction (ambient), zero for the trivial branch
  Vec slopes;                        // central differences at lambda0
  std::vector<SyncBlock> synchrony;
  bool trivial = false;
  std::vector<std::string> warnings;
};

/// Seeds Newton from x = eps v at lambda0 +- delta for v on the cube mesh of
/// kernel directions, continues every converged nontrivial solution over
/// lambda0 +- range and deduplicates. The trivial branch is always first.
/// `seed_basis` (columns spanning the kernel) defaults to the orthonormal
/// kernel basis. Throws NumericalError when Newton fails on every seed.
std::vector<Branch> trace_branches(const NetworkField& field, const Bifurcation& bif, const BranchConfig& cfg,
                                   const std::optional<Mat>& seed_basis = std::nullopt);

/// Partition of cells by coordinate equality along the stored points
/// (|x_i - x_j| <= tol ||x|| everywhere). Vanishing coordinates form one
/// block flagged zero. Blocks are ordered by their smallest cell.
std::vector<SyncBlock> synchrony_pattern(const Branch& branch, double tol = 1e-6);

/// Actions (a, b) of the two generators on the standard model of the
/// 3-dimensional absolutely indecomposable class, in the basis where the
/// reduced equations take the form
///   r_1 = alpha L v_1 + beta v_1^2 + gamma v_1 v_3, r_2 likewise in v_2,
///   r_3 = alpha L v_3 + (beta + gamma) v_3^2.
struct ModelActions {
  Mat a;
  Mat b;
};
ModelActions three_dim_model();

struct ReducedCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  Mat basis;                     // n x 3 intertwiner from the model into the kernel
  double hidden_residual = 0.0;  // equivariance residual of the truncated reduced map
  std::vector<std::string> warnings;

  double slope_single() const { return -alpha / beta; }
  double slope_pair() const { return -alpha / (beta + gamma); }
};

/// Quadratic Lyapunov-Schmidt coefficients for a kernel of the 3-dim class.
/// `generators` are the ambient generator matrices (in model order). Throws
/// ModelError when the kernel is not isomorphic to the model.
ReducedCoefficients estimate_reduced_coefficients(const NetworkField& field, const Bifurcation& bif,
                                                  const std::vector<Mat>& generators, Rng& rng);

}  // namespace ccn
