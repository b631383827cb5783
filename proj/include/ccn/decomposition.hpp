#pragma once

#include "ccn/commutant.hpp"
#include "ccn/monoid.hpp"
#include "ccn/numeric.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ccn {

/// Orthonormal basis (columns) of a subspace of R^ambient_dim.
struct SubspaceBasis {
  int ambient_dim = 0;
  Mat basis;

  int dim() const { return static_cast<int>(basis.cols()); }
};

enum class DivisionType { Real = 1, Complex = 2, Quaternionic = 4 };
const char* type_name(DivisionType t);

struct Component {
  SubspaceBasis carrier;       // ambient coordinates
  RepActions rep;              // generator actions in carrier coordinates
  EquiAlgebra end_alg;
  DivisionType type = DivisionType::Real;
  int index = 1;
  int iso_class = -1;          // 0-based; reports print it 1-based
  Vec character;               // traces of the generator actions

  int dim() const { return carrier.dim(); }
};

struct IsoClass {
  int dim = 0;
  int index = 1;
  DivisionType type = DivisionType::Real;
  std::vector<int> members;    // component indices
  Vec character;

  int multiplicity() const { return static_cast<int>(members.size()); }
  int representative() const { return members.front(); }
};

struct Decomposition {
  int ambient_dim = 0;
  RepActions ambient;
  std::vector<Component> components;   // grouped by class, classes in label order
  std::vector<IsoClass> classes;
  double completeness_sigma = 0.0;     // smallest singular value of the stacked carriers
  std::uint64_t seed = 0;
};

struct FittingSplit {
  Mat gker;   // ker L^m, orthonormal, carrier coordinates
  Mat redim;  // im L^m, orthonormal, carrier coordinates
};

/// Fitting decomposition of the carrier by the equivariant map L (carrier
/// coordinates). Throws IllSeparatedSpectrum when a nonzero eigenvalue sits
/// within 10x of the zero tolerance, or when a part fails the invariance
/// check.
FittingSplit fitting_split(const RepActions& rep, const Mat& l, const Tolerances& tol = {});

/// Maximum number of random commutant samples tried before a node is
/// declared indecomposable.
inline constexpr int kMaxSplitAttempts = 32;

/// Splits the representation into indecomposable pieces by generalized
/// eigenspaces of random commutant elements. Returns orthonormal bases in
/// `rep` coordinates, in tree order. The RNG is consumed sequentially.
std::vector<Mat> generic_split(const RepActions& rep, Rng& rng, const Tolerances& tol = {});

struct IsoVerdict {
  bool isomorphic = false;
  Mat witness;   // invertible phi with phi A_1 = A_2 phi (when isomorphic)
  int trials = 0;
};

/// Randomized isomorphism test between two representations of the same
/// monoid (generator actions in matching order).
IsoVerdict are_isomorphic(const RepActions& a, const RepActions& b, Rng& rng, const Tolerances& tol = {});
IsoVerdict are_isomorphic(const Component& a, const Component& b, std::uint64_t seed, const Tolerances& tol = {});

/// Fills type and index from the quotient dimension; throws NumericalError
/// when it is not 1, 2 or 4.
void classify_type(Component& c);

/// Builds a component from an orthonormal invariant basis (ambient coords).
Component make_component(const RepActions& ambient, const Mat& basis, const Tolerances& tol = {});

/// Full pipeline: split, per-leaf commutant and radical, pairwise
/// isomorphism tests, isotypic grouping, type labels. Deterministic in seed.
Decomposition decompose(const RepActions& rep, std::uint64_t seed, const Tolerances& tol = {});
Decomposition decompose(const MonoidRep& rep, std::uint64_t seed, const Tolerances& tol = {});

/// Generator actions of a monoid representation as a RepActions value.
RepActions actions_of(const MonoidRep& rep);

/// "X", "Y" style labels are not meaningful in general; classes print as
/// "[k]" with k the 1-based class label.
std::string class_label(int iso_class);

}  // namespace ccn
