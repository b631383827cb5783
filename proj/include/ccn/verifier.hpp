#pragma once

#include "ccn/commutant.hpp"
#include "ccn/decomposition.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ccn {

struct ScanConfig {
  double lambda_min = -2.0;
  double lambda_max = 2.0;
  int grid = 10000;
  int bisection_iterations = 60;
  double det_threshold = 1e-10;        // |det| <= this * Hadamard bound counts as singular
  double secondary_threshold = 1e-6;   // local minima of |det| below this * global scale
  double accept_sigma = 1e-8;          // even-multiplicity candidates: sigma_min <= this * ||L||
  double dedupe = 1e-8;
};

struct VerifierConfig {
  int trials = 1000;
  std::uint64_t seed = 0;
  ScanConfig scan;
  Tolerances tol;
  int threads = 0;                     // 0: ANALYZER_THREADS or 1
};

/// L(lambda) = L0 + lambda L1 with Gaussian coordinates over the End basis.
struct FamilySample {
  std::uint64_t seed = 0;
  Vec c0, c1;
  Mat l0, l1;

  Mat at(double lambda) const { return l0 + lambda * l1; }
};

FamilySample sample_family(const EquiAlgebra& alg, std::uint64_t seed);
FamilySample sample_family(const EquiAlgebra& alg, Rng& rng);

struct SingularPoint {
  double lambda = 0.0;
  double sigma_min = 0.0;   // smallest singular value of L(lambda*) relative to ||L(lambda*)||
  bool sign_change = true;  // false: found as a local minimum of |det|
};

/// Writes L(lambda) into the output matrix (resized by the callee if needed).
using MatrixFamily = std::function<void(double, Mat&)>;

/// Sign-change scan of det L(lambda) on a uniform grid with bisection, plus
/// the even-multiplicity pass over local minima of |det|; the result is
/// sorted and deduplicated. Roots are polished by snapping to the nearest
/// entry of `known_roots` (within a few grid steps) or by a secant iteration
/// on the smallest real eigenvalue.
std::vector<SingularPoint> find_singularities(const MatrixFamily& family, int dim, const ScanConfig& cfg,
                                              const std::vector<double>& known_roots = {});

/// Affine family L0 + lambda L1; the real generalized eigenvalues of the
/// pencil serve as known roots.
std::vector<SingularPoint> find_singularities(const Mat& l0, const Mat& l1, const ScanConfig& cfg = {});

struct KernelReport {
  double lambda = 0.0;
  double sigma_min = 0.0;
  int kernel_dim = 0;
  std::vector<std::pair<int, int>> isotype;  // (iso class, multiplicity); class -1 = unmatched
  bool indeterminate = false;
  std::string note;
  double invariance = 0.0;

  /// Exactly one absolutely indecomposable class with multiplicity 1.
  bool single_absolute(const Decomposition& dec) const;
  std::string isotype_string() const;
};

/// Generalized kernel of the singular equivariant map L (ambient
/// coordinates), decomposed and matched against the classes of `dec`.
/// Ill-separated or non-invariant kernels are reported as indeterminate.
KernelReport kernel_isotype(const Mat& l, const Decomposition& dec, Rng& rng, const Tolerances& tol = {});

struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  FamilySample family;
  std::vector<KernelReport> points;
};

struct ExperimentReport {
  VerifierConfig config;
  int trials = 0;
  int singular_points = 0;
  int indeterminate = 0;
  int single_absolute = 0;
  std::map<std::string, int> histogram;       // isotype string -> count (classified points)
  std::vector<std::pair<int, KernelReport>> anomalies;  // (trial, report)
  std::vector<TrialRecord> records;

  /// Fraction of classified points whose kernel is not a single absolutely
  /// indecomposable class with multiplicity 1.
  double anomaly_fraction() const;
  double indeterminate_fraction() const;
};

/// Worker count from ANALYZER_THREADS (default 1, at least 1).
int analyzer_threads();

ExperimentReport run_experiment(const Decomposition& dec, const EquiAlgebra& alg, const VerifierConfig& cfg);

}  // namespace ccn
