#include "ccn/commutant.hpp"

#include "ccn/errors.hpp"
#include "ccn/hypercomplex.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace ccn {

RepActions RepActions::restrict_to(const Mat& q) const {
  RepActions out;
  out.dim = static_cast<int>(q.cols());
  out.generators.reserve(generators.size());
  out.scale = scale;
  for (const auto& g : generators) {
    out.generators.push_back(q.transpose() * g * q);
    out.scale = std::max(out.scale, g.norm());
  }
  return out;
}

double RepActions::invariance(const Mat& q) const {
  double worst = 0.0;
  for (const auto& g : generators) worst = std::max(worst, invariance_residual(q, g, scale));
  return worst;
}

Mat HomSpace::element(const Vec& coeffs) const {
  Mat m = Mat::Zero(dim_to, dim_from);
  for (int p = 0; p < dim(); ++p) m += coeffs(p) * basis[static_cast<std::size_t>(p)];
  return m;
}

Mat HomSpace::random_element(Rng& rng) const {
  Vec c(dim());
  for (int p = 0; p < dim(); ++p) c(p) = rng.gaussian();
  return element(c);
}

HomSpace hom_basis(const RepActions& from, const RepActions& to, const Tolerances& tol) {
  if (from.generators.size() != to.generators.size())
    throw ModelError("hom_basis: generator lists differ in length");
  HomSpace hom;
  hom.dim_from = from.dim;
  hom.dim_to = to.dim;
  const int df = from.dim, dt = to.dim;
  const int unknowns = df * dt;
  if (unknowns == 0) return hom;

  // vec(L A) = (A^T kron I_dt) vec(L),  vec(A' L) = (I_df kron A') vec(L)
  const auto gens = static_cast<int>(from.generators.size());
  Mat system = Mat::Zero(gens * unknowns, unknowns);
  for (int g = 0; g < gens; ++g) {
    const Mat& a = from.generators[static_cast<std::size_t>(g)];
    const Mat& b = to.generators[static_cast<std::size_t>(g)];
    auto blk = system.block(g * unknowns, 0, unknowns, unknowns);
    for (int i = 0; i < df; ++i)
      for (int j = 0; j < df; ++j)
        if (a(j, i) != 0.0) blk.block(i * dt, j * dt, dt, dt).diagonal().array() += a(j, i);
    for (int i = 0; i < df; ++i) blk.block(i * dt, i * dt, dt, dt) -= b;
  }

  // Actions are restrictions of 0/1 matrices, so unit scale is the floor: a
  // representation acting as zero must not turn rounding noise into rank.
  double reference = std::max({1.0, from.scale, to.scale});
  for (std::size_t g = 0; g < from.generators.size(); ++g)
    reference = std::max({reference, from.generators[g].norm(), to.generators[g].norm()});
  const Mat null = nullspace(system, tol.rank, reference);
  for (Eigen::Index c = 0; c < null.cols(); ++c)
    hom.basis.push_back(Eigen::Map<const Mat>(null.col(c).data(), dt, df));
  return hom;
}

double intertwining_residual(const HomSpace& hom, const RepActions& from, const RepActions& to) {
  double worst = 0.0;
  for (const auto& b : hom.basis)
    for (std::size_t g = 0; g < from.generators.size(); ++g) {
      const Mat& a = from.generators[g];
      const Mat& a2 = to.generators[g];
      const double scale = b.norm() * std::max({a.norm(), a2.norm(), from.scale, to.scale});
      if (scale == 0.0) continue;
      worst = std::max(worst, (b * a - a2 * b).norm() / scale);
    }
  return worst;
}

std::vector<Mat> EquiAlgebra::radical_basis() const {
  std::vector<Mat> out;
  for (Eigen::Index c = 0; c < radical_coords_.cols(); ++c) out.push_back(element(radical_coords_.col(c)));
  return out;
}

Mat EquiAlgebra::element(const Vec& coords) const {
  Mat m = Mat::Zero(carrier_dim_, carrier_dim_);
  for (int p = 0; p < dim(); ++p) m += coords(p) * basis_[static_cast<std::size_t>(p)];
  return m;
}

Vec EquiAlgebra::coordinates(const Mat& m, double* residual) const {
  Vec c(dim());
  for (int p = 0; p < dim(); ++p) c(p) = (basis_[static_cast<std::size_t>(p)].array() * m.array()).sum();
  if (residual) {
    const double scale = m.norm();
    *residual = scale == 0.0 ? 0.0 : (m - element(c)).norm() / scale;
  }
  return c;
}

Vec EquiAlgebra::multiply(const Vec& a, const Vec& b) const {
  const int d = dim();
  Vec out = Vec::Zero(d);
  for (int p = 0; p < d; ++p) {
    if (a(p) == 0.0) continue;
    for (int q = 0; q < d; ++q) {
      const double w = a(p) * b(q);
      if (w == 0.0) continue;
      for (int r = 0; r < d; ++r) out(r) += w * constant(p, q, r);
    }
  }
  return out;
}

Mat EquiAlgebra::left_regular(const Vec& a) const {
  const int d = dim();
  Mat l = Mat::Zero(d, d);
  for (int p = 0; p < d; ++p) {
    if (a(p) == 0.0) continue;
    for (int q = 0; q < d; ++q)
      for (int r = 0; r < d; ++r) l(r, q) += a(p) * constant(p, q, r);
  }
  return l;
}

EquiAlgebra end_algebra(const RepActions& rep, const Tolerances& tol) {
  EquiAlgebra alg;
  alg.carrier_dim_ = rep.dim;
  alg.basis_ = hom_basis(rep, rep, tol).basis;
  const int d = alg.dim();
  alg.structure_.assign(static_cast<std::size_t>(d * d * d), 0.0);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      const Mat prod = alg.basis_[static_cast<std::size_t>(p)] * alg.basis_[static_cast<std::size_t>(q)];
      Mat rebuilt = Mat::Zero(rep.dim, rep.dim);
      for (int r = 0; r < d; ++r) {
        const double c = (alg.basis_[static_cast<std::size_t>(r)].array() * prod.array()).sum();
        alg.structure_[static_cast<std::size_t>((p * d + q) * d + r)] = c;
        rebuilt += c * alg.basis_[static_cast<std::size_t>(r)];
      }
      alg.closure_residual_ = std::max(alg.closure_residual_, (prod - rebuilt).norm());
    }
  if (!(alg.closure_residual_ <= tol.closure))
    throw NumericalError("commutant is not closed under products (residual " +
                         std::to_string(alg.closure_residual_) + "); check the rank tolerance");

  const RadicalInfo rad = radical(alg, tol);
  alg.radical_coords_ = rad.radical_coords;
  alg.complement_coords_ = rad.complement_coords;
  return alg;
}

RadicalInfo radical(const EquiAlgebra& alg, const Tolerances& tol) {
  const int d = alg.dim();
  RadicalInfo info;
  if (d == 0) {
    info.radical_coords = Mat(0, 0);
    info.complement_coords = Mat(0, 0);
    return info;
  }
  // The left-regular representation is a homomorphism, so
  // tr(L_a L_b) = tr(L_{ab}) = sum_r (ab)_r tau_r with tau_r = tr(L_{B_r}).
  Vec tau = Vec::Zero(d);
  for (int r = 0; r < d; ++r)
    for (int q = 0; q < d; ++q) tau(r) += alg.constant(r, q, q);
  Mat form(d, d);
  for (int p = 0; p < d; ++p)
    for (int q = 0; q < d; ++q) {
      double t = 0.0;
      for (int r = 0; r < d; ++r) t += alg.constant(p, q, r) * tau(r);
      form(p, q) = t;
    }
  form = 0.5 * (form + form.transpose());

  Eigen::SelfAdjointEigenSolver<Mat> es(form);
  const Vec& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> null_idx, range_idx;
  for (Eigen::Index i = 0; i < d; ++i)
    (std::abs(ev(i)) <= 10.0 * tol.rank * scale || scale == 0.0 ? null_idx : range_idx).push_back(i);

  info.radical_coords.resize(d, static_cast<Eigen::Index>(null_idx.size()));
  info.complement_coords.resize(d, static_cast<Eigen::Index>(range_idx.size()));
  for (std::size_t i = 0; i < null_idx.size(); ++i)
    info.radical_coords.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(null_idx[i]);
  for (std::size_t i = 0; i < range_idx.size(); ++i)
    info.complement_coords.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(range_idx[i]);
  info.quotient_dim = static_cast<int>(range_idx.size());

  for (Eigen::Index c = 0; c < info.radical_coords.cols(); ++c) {
    const Mat n = alg.element(info.radical_coords.col(c));
    if (!is_nilpotent(n, tol.nilpotent))
      throw NumericalError("radical element fails the nilpotency test; inconsistent tolerances");
  }
  return info;
}

Vec quotient_element(const EquiAlgebra& alg, const Mat& l) {
  double residual = 0.0;
  const Vec coords = alg.coordinates(l, &residual);
  if (residual > 1e-8) throw ModelError("matrix is not an element of the commutant");
  return alg.complement_coords().transpose() * coords;
}

Mat quotient_left_regular(const EquiAlgebra& alg, const Vec& q) {
  const Mat& comp = alg.complement_coords();
  const Vec a = comp * q;
  Mat out(comp.cols(), comp.cols());
  for (Eigen::Index j = 0; j < comp.cols(); ++j) out.col(j) = comp.transpose() * alg.multiply(a, comp.col(j));
  return out;
}

}  // namespace ccn
