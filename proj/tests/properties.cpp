// Structural properties, checked on the eight-cell fixture and on random
// cell-map monoids: invariance of every computed piece, the
// invertible-or-nilpotent dichotomy on indecomposables, nilpotency of block
// products between non-isomorphic isotypic components, nilpotency of the
// isotypic diagonal blocks of a nilpotent map, and seed stability of the
// decomposition.

#include <doctest.h>

#include "ccn/commutant.hpp"
#include "ccn/decomposition.hpp"
#include "ccn/hypercomplex.hpp"
#include "ccn/monoid.hpp"
#include "oracles.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <tuple>

using namespace ccn;

namespace {

std::vector<CellMap> random_maps(Rng& rng, int n, int count) {
  std::vector<CellMap> out;
  for (int g = 0; g < count; ++g) {
    std::vector<int> img(static_cast<std::size_t>(n));
    for (int& v : img) v = std::min(n - 1, static_cast<int>(rng.uniform() * n));
    out.emplace_back(img);
  }
  return out;
}

/// The fixture plus a deterministic batch of random monoids on 3-6 cells.
std::vector<MonoidRep> sample_reps() {
  std::vector<MonoidRep> reps{build_representation(close_monoid(oracle::fixture_generators()), 8)};
  Rng rng(2024);
  for (int t = 0; t < 24; ++t) {
    const int n = 3 + t % 4;
    const auto gens = random_maps(rng, n, 1 + t % 2);
    reps.push_back(build_representation(close_monoid(gens), n));
  }
  return reps;
}

const std::vector<MonoidRep>& reps() {
  static const std::vector<MonoidRep> r = sample_reps();
  return r;
}

Mat isotypic_basis(const Decomposition& d, int cls) {
  Mat out(d.ambient_dim, 0);
  for (int m : d.classes[cls].members) {
    const Mat& b = d.components[m].carrier.basis;
    Mat grown(d.ambient_dim, out.cols() + b.cols());
    grown << out, b;
    out = grown;
  }
  return out;
}

/// Basis adapted to the isotypic decomposition plus the column offsets.
std::pair<Mat, std::vector<int>> adapted_basis(const Decomposition& d) {
  Mat t(d.ambient_dim, 0);
  std::vector<int> offsets{0};
  for (int k = 0; k < static_cast<int>(d.classes.size()); ++k) {
    const Mat b = isotypic_basis(d, k);
    Mat grown(d.ambient_dim, t.cols() + b.cols());
    grown << t, b;
    t = grown;
    offsets.push_back(static_cast<int>(t.cols()));
  }
  return {t, offsets};
}

Mat random_element(const EquiAlgebra& alg, Rng& rng) {
  Vec c(alg.dim());
  for (int p = 0; p < alg.dim(); ++p) c(p) = rng.gaussian();
  return alg.element(c);
}

Mat projector(const Mat& basis) {
  const Mat q = orthonormalize(basis);
  return q * q.transpose();
}

}  // namespace

TEST_CASE("every component is invariant and the components span the space") {
  for (const auto& rep : reps()) {
    const Decomposition d = decompose(rep, 0);
    int total = 0;
    for (const auto& c : d.components) {
      CHECK(d.ambient.invariance(c.carrier.basis) <= 1e-8);
      total += c.dim();
    }
    CHECK(total == rep.dim);
    CHECK(d.completeness_sigma >= 1e-8);
  }
}

TEST_CASE("commutant elements of an indecomposable are invertible or nilpotent") {
  Rng rng(77);
  for (const auto& rep : reps()) {
    const Decomposition d = decompose(rep, 0);
    for (const auto& c : d.components) {
      std::vector<Mat> samples = c.end_alg.basis();
      for (int t = 0; t < 10; ++t) samples.push_back(random_element(c.end_alg, rng));
      for (const Mat& m : samples) {
        const double smin = min_singular_value(m) / std::max(spectral_norm(m), 1e-300);
        const bool invertible = smin > 1e-8;
        CHECK((invertible || is_nilpotent(m)));
      }
      // index = dimension of End modulo its radical, one of 1, 2, 4
      CHECK(c.index == c.end_alg.quotient_dim());
    }
  }
}

TEST_CASE("block products between non-isomorphic isotypic components are nilpotent") {
  Rng rng(5);
  for (const auto& rep : reps()) {
    const Decomposition d = decompose(rep, 0);
    const int nc = static_cast<int>(d.classes.size());
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j) {
        if (i == j) continue;
        const Mat qi = orthonormalize(isotypic_basis(d, i));
        const Mat qj = orthonormalize(isotypic_basis(d, j));
        const RepActions vi = d.ambient.restrict_to(qi);
        const RepActions vj = d.ambient.restrict_to(qj);
        const HomSpace l_space = hom_basis(vi, vj);
        const HomSpace k_space = hom_basis(vj, vi);
        if (l_space.dim() == 0 || k_space.dim() == 0) continue;
        for (int t = 0; t < 5; ++t) {
          const Mat k = k_space.random_element(rng), l = l_space.random_element(rng);
          const Mat kl = k * l;
          const double scale = spectral_norm(k) * spectral_norm(l);
          // express KL in the component basis of V_i and cut into blocks
          const Mat comp = qi.transpose() * isotypic_basis(d, i);
          const Mat blocks = comp.inverse() * kl * comp;
          const int dx = d.classes[i].dim;
          const int s = d.classes[i].multiplicity();
          // identify every copy with the representative through a witness
          const Component& rep0 = d.components[d.classes[i].representative()];
          std::vector<Mat> to_rep;
          for (int m : d.classes[i].members) {
            const IsoVerdict v = are_isomorphic(d.components[m], rep0, 3);
            REQUIRE(v.isomorphic);
            to_rep.push_back(v.witness);
          }
          for (int a = 0; a < s; ++a)
            for (int b = 0; b < s; ++b) {
              const Mat blk = to_rep[a] * blocks.block(a * dx, b * dx, dx, dx) * to_rep[b].inverse();
              CHECK(is_nilpotent(blk, 1e-7, scale));
            }
        }
      }
  }
}

TEST_CASE("diagonal isotypic blocks of a nilpotent equivariant map are nilpotent") {
  Rng rng(13);
  for (const auto& rep : reps()) {
    const Decomposition d = decompose(rep, 0);
    const EquiAlgebra alg = end_algebra(d.ambient);
    const auto [t, offsets] = adapted_basis(d);
    // Strictly block-upper-triangular map in the component basis: nilpotent
    // and equivariant. Conjugating by a random invertible commutant element
    // mixes the isotypic components while keeping both properties.
    const int nc = static_cast<int>(d.components.size());
    std::vector<int> comp_off{0};
    for (const auto& c : d.components) comp_off.push_back(comp_off.back() + c.dim());
    Mat cbasis(d.ambient_dim, 0);
    for (const auto& c : d.components) {
      Mat grown(d.ambient_dim, cbasis.cols() + c.dim());
      grown << cbasis, c.carrier.basis;
      cbasis = grown;
    }
    for (int trial = 0; trial < 3; ++trial) {
      Mat n_comp = Mat::Zero(d.ambient_dim, d.ambient_dim);
      for (int a = 0; a < nc; ++a) {
        for (const Mat& r : d.components[a].end_alg.radical_basis())
          n_comp.block(comp_off[a], comp_off[a], r.rows(), r.cols()) += rng.gaussian() * r;
        for (int b = a + 1; b < nc; ++b) {
          const HomSpace h = hom_basis(d.components[b].rep, d.components[a].rep);
          if (h.dim() > 0) n_comp.block(comp_off[a], comp_off[b], d.components[a].dim(), d.components[b].dim()) = h.random_element(rng);
        }
      }
      const Mat n0 = cbasis * n_comp * cbasis.inverse();
      REQUIRE(is_nilpotent(n0));
      Mat g = random_element(alg, rng);
      while (min_singular_value(g) < 1e-3 * spectral_norm(g)) g = random_element(alg, rng);
      const Mat n = g * n0 * g.inverse();
      for (const auto& gen : d.ambient.generators) CHECK((n * gen - gen * n).norm() <= 1e-8 * std::max(1.0, n.norm()));
      CHECK(is_nilpotent(n, 1e-7));
      const Mat in_t = t.inverse() * n * t;
      for (std::size_t k = 0; k + 1 < offsets.size(); ++k) {
        const int o = offsets[k], w = offsets[k + 1] - offsets[k];
        CHECK(is_nilpotent(in_t.block(o, o, w, w), 1e-7, spectral_norm(in_t)));
      }
    }
  }
}

TEST_CASE("decomposition is unique up to isomorphism across seeds") {
  for (const auto& rep : reps()) {
    const Decomposition ref = decompose(rep, 0);
    auto signature = [](const Decomposition& d) {
      std::vector<std::tuple<int, int, int>> s;
      for (const auto& c : d.classes) s.emplace_back(c.dim, c.index, c.multiplicity());
      std::sort(s.begin(), s.end());
      return s;
    };
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const Decomposition d = decompose(rep, seed);
      INFO("rep dim ", rep.dim, " seed ", seed);
      for (const auto& c : ref.classes) INFO("ref class ", c.dim, " ", c.index, " ", c.multiplicity());
      CHECK(signature(d) == signature(ref));
      // Krull-Schmidt: every class has an isomorphic partner with the same
      // multiplicity (isotypic subspaces themselves need not coincide)
      for (const auto& cls : d.classes) {
        bool matched = false;
        for (const auto& rc : ref.classes) {
          if (matched || rc.dim != cls.dim || rc.multiplicity() != cls.multiplicity()) continue;
          matched = are_isomorphic(d.components[cls.representative()], ref.components[rc.representative()], 9).isomorphic;
        }
        CHECK(matched);
      }
    }
  }
}
