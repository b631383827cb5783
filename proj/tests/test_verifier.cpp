#include <doctest.h>

#include "ccn/commutant.hpp"
#include "ccn/decomposition.hpp"
#include "ccn/monoid.hpp"
#include "ccn/verifier.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace ccn;

namespace {

struct Fixture {
  Decomposition dec;
  EquiAlgebra alg;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture x;
    x.dec = decompose(build_representation(close_monoid(oracle::fixture_generators()), 8), 7);
    x.alg = end_algebra(x.dec.ambient);
    return x;
  }();
  return f;
}

Mat projector(const Mat& basis) {
  const Mat q = orthonormalize(basis);
  return q * q.transpose();
}

}  // namespace

TEST_CASE("detected singular points equal the real pencil eigenvalues") {
  const auto& f = fixture();
  for (int t = 0; t < 60; ++t) {
    const FamilySample fam = sample_family(f.alg, mix_seed(99, t));
    const auto got = find_singularities(fam.l0, fam.l1);
    const auto want = oracle::pencil_real_roots(fam.l0, fam.l1, -2.0, 2.0);
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].lambda == doctest::Approx(want[i]).epsilon(1e-9));
  }
}

TEST_CASE("general families: sign changes and even-multiplicity roots") {
  ScanConfig cfg;
  cfg.lambda_min = -1.0;
  cfg.lambda_max = 1.0;
  cfg.grid = 2000;
  const MatrixFamily fam = [](double t, Mat& m) {
    m = Mat::Zero(3, 3);
    m(0, 0) = t * t - 0.25;
    m(1, 1) = t - 0.3;
    m(2, 2) = 1.0;
  };
  const auto pts = find_singularities(fam, 3, cfg);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].lambda == doctest::Approx(-0.5).epsilon(1e-9));
  CHECK(pts[1].lambda == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(pts[2].lambda == doctest::Approx(0.5).epsilon(1e-9));

  const MatrixFamily touch = [](double t, Mat& m) {
    m = Mat::Identity(2, 2);
    m(0, 0) = (t - 0.2) * (t - 0.2);
  };
  const auto even = find_singularities(touch, 2, cfg);
  REQUIRE(even.size() == 1);
  CHECK(even[0].lambda == doctest::Approx(0.2).epsilon(1e-6));
  CHECK_FALSE(even[0].sign_change);

  const MatrixFamily never = [](double t, Mat& m) { m = (2.0 + t) * Mat::Identity(2, 2); };
  CHECK(find_singularities(never, 2, cfg).empty());
}

TEST_CASE("kernel isotype of constructed singular maps") {
  const auto& f = fixture();
  Rng rng(1);
  const Mat id = Mat::Identity(8, 8);
  // project onto X along the invariant complement Y + V + W
  Mat xc(8, 8);
  xc << Mat::Ones(8, 1), Mat::Identity(8, 1), oracle::ref_v_basis(), oracle::ref_w_basis();
  Mat dx = Mat::Identity(8, 8);
  dx(0, 0) = 0.0;
  const KernelReport kx = kernel_isotype(xc * dx * xc.inverse(), f.dec, rng);
  CHECK(kx.isotype_string() == "[1]");
  CHECK(kx.single_absolute(f.dec));

  Mat vw(8, 6);
  vw << oracle::ref_v_basis(), oracle::ref_w_basis();
  // I - P onto V + W along X + Y: equivariant since both sums are invariant
  Mat xy(8, 2);
  xy << Mat::Ones(8, 1), Mat::Identity(8, 1);
  Mat all(8, 8);
  all << vw, xy;
  Mat d = Mat::Identity(8, 8);
  for (int i = 0; i < 6; ++i) d(i, i) = 0.0;
  const Mat l = all * d * all.inverse();
  const KernelReport kv = kernel_isotype(l, f.dec, rng);
  CHECK(kv.kernel_dim == 6);
  CHECK(kv.isotype_string() == "[3]^2");
  CHECK_FALSE(kv.single_absolute(f.dec));

  const KernelReport none = kernel_isotype(id, f.dec, rng);
  CHECK(none.kernel_dim == 0);
}

TEST_CASE("experiment is deterministic and independent of the thread count") {
  const auto& f = fixture();
  VerifierConfig cfg;
  cfg.trials = 40;
  cfg.seed = 3;
  cfg.threads = 1;
  const ExperimentReport a = run_experiment(f.dec, f.alg, cfg);
  cfg.threads = 3;
  const ExperimentReport b = run_experiment(f.dec, f.alg, cfg);
  CHECK(a.singular_points == b.singular_points);
  CHECK(a.histogram == b.histogram);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t t = 0; t < a.records.size(); ++t) {
    REQUIRE(a.records[t].points.size() == b.records[t].points.size());
    for (std::size_t i = 0; i < a.records[t].points.size(); ++i)
      CHECK(a.records[t].points[i].lambda == b.records[t].points[i].lambda);
  }
  CHECK(a.anomalies.empty());
  CHECK(a.singular_points > 0);
}

TEST_CASE("zero trials give an empty histogram") {
  const auto& f = fixture();
  VerifierConfig cfg;
  cfg.trials = 0;
  const ExperimentReport r = run_experiment(f.dec, f.alg, cfg);
  CHECK(r.histogram.empty());
  CHECK(r.singular_points == 0);
  CHECK(r.anomaly_fraction() == 0.0);
}
