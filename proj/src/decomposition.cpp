#include "ccn/decomposition.hpp"

#include "ccn/errors.hpp"
#include "ccn/hypercomplex.hpp"
#include "ccn/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ccn {
namespace {

bool invertible(const Mat& m, double rel_tol) {
  if (m.size() == 0) return true;
  Eigen::JacobiSVD<Mat> svd(m);
  const Vec& s = svd.singularValues();
  return s(0) > 0.0 && s(s.size() - 1) / s(0) > rel_tol;
}

Vec character_of(const RepActions& rep) {
  Vec c(static_cast<Eigen::Index>(rep.generators.size()));
  for (std::size_t g = 0; g < rep.generators.size(); ++g) c(static_cast<Eigen::Index>(g)) = rep.generators[g].trace();
  return c;
}

// Lexicographic comparison after rounding to 1e-6 so rounding noise cannot
// reorder classes.
int compare_character(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i) {
    const double x = std::round(a(i) * 1e6), y = std::round(b(i) * 1e6);
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

void split_node(const RepActions& rep, const Mat& basis, Rng& rng, const Tolerances& tol, std::vector<Mat>& leaves) {
  const int m = rep.dim;
  if (m <= 1) {
    leaves.push_back(basis);
    return;
  }
  const EquiAlgebra alg = end_algebra(rep, tol);
  if (alg.dim() <= 1) {
    leaves.push_back(basis);
    return;
  }

  auto recurse = [&](const std::vector<Mat>& parts) {
    for (const auto& p : parts) {
      const Mat q = orthonormalize(p);
      split_node(rep.restrict_to(q), basis * q, rng, tol, leaves);
    }
  };

  for (int attempt = 0; attempt < kMaxSplitAttempts; ++attempt) {
    Vec coeffs(alg.dim());
    for (int p = 0; p < alg.dim(); ++p) coeffs(p) = rng.gaussian();
    if (auto parts = spectral_split(alg.element(coeffs), rep, tol)) {
      recurse(*parts);
      return;
    }
  }

  // Fitting spot-check: on an indecomposable every commutant element is
  // invertible or nilpotent; anything else splits the carrier.
  for (const auto& b : alg.basis()) {
    if (invertible(b, tol.invertible) || is_nilpotent(b, tol.nilpotent)) continue;
    try {
      const FittingSplit fs = fitting_split(rep, b, tol);
      if (fs.gker.cols() > 0 && fs.redim.cols() > 0) {
        recurse({fs.gker, fs.redim});
        return;
      }
    } catch (const IllSeparatedSpectrum&) {
    }
  }
  leaves.push_back(basis);
}

}  // namespace

const char* type_name(DivisionType t) {
  switch (t) {
    case DivisionType::Real: return "real";
    case DivisionType::Complex: return "complex";
    case DivisionType::Quaternionic: return "quaternionic";
  }
  return "?";
}

std::string class_label(int iso_class) { return "[" + std::to_string(iso_class + 1) + "]"; }

RepActions actions_of(const MonoidRep& rep) {
  RepActions out;
  out.dim = rep.dim;
  out.generators = rep.generator_actions();
  return out;
}

FittingSplit fitting_split(const RepActions& rep, const Mat& l, const Tolerances& tol) {
  const auto m = l.rows();
  FittingSplit out;
  const double scale = spectral_norm(l);
  if (m == 0 || scale == 0.0 || is_nilpotent(l, tol.nilpotent)) {
    out.gker = Mat::Identity(m, m);
    out.redim = Mat(m, 0);
    return out;
  }
  Eigen::EigenSolver<Mat> es(l, false);
  const CVec ev = es.eigenvalues();
  const double zero = tol.zero_cluster * scale;
  int k = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double a = std::abs(ev(i));
    if (a <= zero) {
      ++k;
    } else if (a <= 10.0 * zero) {
      throw IllSeparatedSpectrum("eigenvalue " + std::to_string(a / scale) + " (relative) too close to the zero cluster");
    }
  }
  if (k == 0) {
    out.gker = Mat(m, 0);
    out.redim = Mat::Identity(m, m);
    return out;
  }
  if (k == m) {
    out.gker = Mat::Identity(m, m);
    out.redim = Mat(m, 0);
    return out;
  }
  Mat power = Mat::Identity(m, m);
  for (int i = 0; i < k; ++i) {
    power = power * l;
    power /= std::max(power.norm(), 1e-300);
  }
  Eigen::JacobiSVD<Mat> svd(power, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  if (s(m - k) > 1e-4 * s(m - k - 1)) throw IllSeparatedSpectrum("generalized kernel is not separated from the reduced image");
  out.gker = refine_invariant_subspace(l, svd.matrixV().rightCols(k));
  out.redim = refine_invariant_subspace(l, svd.matrixU().leftCols(m - k));
  if (rep.invariance(out.gker) > tol.invariance || rep.invariance(out.redim) > tol.invariance)
    throw IllSeparatedSpectrum("Fitting parts fail the invariance check");
  return out;
}

std::vector<Mat> generic_split(const RepActions& rep, Rng& rng, const Tolerances& tol) {
  std::vector<Mat> leaves;
  if (rep.dim == 0) return leaves;
  split_node(rep, Mat::Identity(rep.dim, rep.dim), rng, tol, leaves);
  return leaves;
}

IsoVerdict are_isomorphic(const RepActions& a, const RepActions& b, Rng& rng, const Tolerances& tol) {
  IsoVerdict v;
  if (a.dim != b.dim) return v;
  const HomSpace ab = hom_basis(a, b, tol);
  const HomSpace ba = hom_basis(b, a, tol);
  if (ab.dim() == 0 || ba.dim() == 0) return v;
  for (int t = 0; t < kMaxSplitAttempts; ++t) {
    ++v.trials;
    const Mat l = ab.random_element(rng);
    const Mat k = ba.random_element(rng);
    if (invertible(k * l, tol.invertible)) {
      v.isomorphic = true;
      v.witness = l;
      return v;
    }
  }
  return v;
}

IsoVerdict are_isomorphic(const Component& a, const Component& b, std::uint64_t seed, const Tolerances& tol) {
  if (a.dim() == b.dim() && a.carrier.ambient_dim == b.carrier.ambient_dim) {
    const Mat& qa = a.carrier.basis;
    const Mat& qb = b.carrier.basis;
    if ((qa * qa.transpose() - qb * qb.transpose()).norm() <= 1e-10) {
      IsoVerdict v;
      v.isomorphic = true;
      v.witness = qb.transpose() * qa;  // identity on the common subspace
      return v;
    }
  }
  Rng rng(seed);
  return are_isomorphic(a.rep, b.rep, rng, tol);
}

void classify_type(Component& c) {
  const int q = c.end_alg.quotient_dim();
  switch (q) {
    case 1: c.type = DivisionType::Real; break;
    case 2: c.type = DivisionType::Complex; break;
    case 4: c.type = DivisionType::Quaternionic; break;
    default:
      throw NumericalError("component of dimension " + std::to_string(c.dim()) + " has quotient dimension " +
                           std::to_string(q) + ", expected 1, 2 or 4");
  }
  c.index = q;
}

Component make_component(const RepActions& ambient, const Mat& basis, const Tolerances& tol) {
  Component c;
  c.carrier.ambient_dim = ambient.dim;
  c.carrier.basis = basis;
  // Sign convention for readable reports: the largest entry of each basis
  // vector is positive.
  for (Eigen::Index j = 0; j < basis.cols(); ++j) {
    Eigen::Index at = 0;
    c.carrier.basis.col(j).cwiseAbs().maxCoeff(&at);
    if (c.carrier.basis(at, j) < 0.0) c.carrier.basis.col(j) *= -1.0;
  }
  c.rep = ambient.restrict_to(c.carrier.basis);
  c.end_alg = end_algebra(c.rep, tol);
  c.character = character_of(c.rep);
  return c;
}

Decomposition decompose(const RepActions& rep, std::uint64_t seed, const Tolerances& tol) {
  Decomposition dec;
  dec.ambient_dim = rep.dim;
  dec.ambient = rep;
  dec.seed = seed;
  Rng rng(seed);
  const std::vector<Mat> leaves = generic_split(rep, rng, tol);

  std::vector<Component> comps;
  for (const auto& leaf : leaves) {
    Component c = make_component(rep, leaf, tol);
    if (rep.invariance(leaf) > tol.invariance)
      throw NumericalError("component fails the invariance check (residual " + std::to_string(rep.invariance(leaf)) + ")");
    classify_type(c);
    comps.push_back(std::move(c));
  }

  // Group by pairwise isomorphism against class representatives.
  std::vector<IsoClass> classes;
  for (int i = 0; i < static_cast<int>(comps.size()); ++i) {
    auto& c = comps[static_cast<std::size_t>(i)];
    for (int k = 0; k < static_cast<int>(classes.size()); ++k) {
      const auto& rep_c = comps[static_cast<std::size_t>(classes[static_cast<std::size_t>(k)].representative())];
      if (rep_c.dim() != c.dim() || rep_c.index != c.index) continue;
      if (are_isomorphic(rep_c.rep, c.rep, rng, tol).isomorphic) {
        c.iso_class = k;
        break;
      }
    }
    if (c.iso_class < 0) {
      IsoClass cls;
      cls.dim = c.dim();
      cls.index = c.index;
      cls.type = c.type;
      cls.character = c.character;
      c.iso_class = static_cast<int>(classes.size());
      classes.push_back(cls);
    }
    classes[static_cast<std::size_t>(c.iso_class)].members.push_back(i);
  }

  // Stable labels: (dimension, index, character descending), then first seen.
  std::vector<int> order(classes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    const auto& a = classes[static_cast<std::size_t>(x)];
    const auto& b = classes[static_cast<std::size_t>(y)];
    if (a.dim != b.dim) return a.dim < b.dim;
    if (a.index != b.index) return a.index < b.index;
    return compare_character(a.character, b.character) > 0;
  });
  std::vector<int> relabel(classes.size());
  for (std::size_t k = 0; k < order.size(); ++k) relabel[static_cast<std::size_t>(order[k])] = static_cast<int>(k);

  for (int k : order) {
    IsoClass cls = classes[static_cast<std::size_t>(k)];
    std::vector<int> members;
    for (int idx : cls.members) {
      Component c = comps[static_cast<std::size_t>(idx)];
      c.iso_class = relabel[static_cast<std::size_t>(k)];
      members.push_back(static_cast<int>(dec.components.size()));
      dec.components.push_back(std::move(c));
    }
    cls.members = members;
    dec.classes.push_back(cls);
  }

  if (rep.dim > 0) {
    Mat stacked(rep.dim, rep.dim);
    Eigen::Index col = 0;
    for (const auto& c : dec.components) {
      if (col + c.dim() > rep.dim) throw NumericalError("component dimensions exceed the ambient dimension");
      stacked.middleCols(col, c.dim()) = c.carrier.basis;
      col += c.dim();
    }
    if (col != rep.dim) throw NumericalError("component dimensions do not add up to the ambient dimension");
    dec.completeness_sigma = min_singular_value(stacked);
    if (dec.completeness_sigma < 1e-8) throw NumericalError("components do not span the ambient space");
  }
  return dec;
}

Decomposition decompose(const MonoidRep& rep, std::uint64_t seed, const Tolerances& tol) {
  return decompose(actions_of(rep), seed, tol);
}

}  // namespace ccn
