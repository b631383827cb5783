#include <doctest.h>

#include "ccn/branches.hpp"
#include "ccn/decomposition.hpp"
#include "ccn/errors.hpp"
#include "ccn/monoid.hpp"
#include "ccn/network.hpp"
#include "oracles.hpp"

#include <cmath>
#include <set>

using namespace ccn;

namespace {

struct Setup {
  Network net;
  Decomposition dec;
};

const Setup& setup() {
  static const Setup s = [] {
    Setup x{parse_network(oracle::read_text(oracle::data_path("fixture8.network"))), {}};
    x.dec = decompose(build_representation(close_monoid(oracle::fixture_generators()), 8), 0);
    return x;
  }();
  return s;
}

NetworkField load_field(const std::string& name) {
  return NetworkField(setup().net, parse_field(oracle::read_text(oracle::data_path(name))));
}

std::set<int> nonzero_cells(const Branch& b) {
  std::set<int> out;
  for (const auto& blk : b.synchrony)
    if (!blk.zero)
      for (int c : blk.cells) out.insert(c + 1);
  return out;
}

}  // namespace

TEST_CASE("V-tuned field: bifurcation at zero with a V-class kernel") {
  const NetworkField field = load_field("fixture8_v.field");
  Rng rng(0);
  const Bifurcation bif = detect_bifurcation(field, setup().dec, BranchConfig{}, rng);
  CHECK(std::abs(bif.lambda0) <= 1e-10);
  CHECK(bif.kernel.cols() == 3);
  CHECK(bif.isotype.isotype_string() == "[3]");
  CHECK(bif.generic);
  CHECK(bif.crossing == Crossing::Transversal);
}

TEST_CASE("reduced coefficients of the V-tuned field") {
  const NetworkField field = load_field("fixture8_v.field");
  Rng rng(0);
  const Bifurcation bif = detect_bifurcation(field, setup().dec, BranchConfig{}, rng);
  const ReducedCoefficients rc = estimate_reduced_coefficients(field, bif, setup().dec.ambient.generators, rng);
  CHECK(rc.alpha == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rc.beta == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rc.gamma == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(rc.hidden_residual <= 1e-8);
  CHECK(rc.warnings.empty());
  // The intertwiner is the reference basis of V.
  CHECK((rc.basis - oracle::ref_v_basis()).norm() <= 1e-8);
}

TEST_CASE("hidden constraints of the reduced map") {
  // r(v, L) = B^+ P F(B v, L): the field projected onto the kernel along the
  // reduced image, in the coordinates of the model basis B.
  const NetworkField field = load_field("fixture8_v.field");
  Rng rng(0);
  const Bifurcation bif = detect_bifurcation(field, setup().dec, BranchConfig{}, rng);
  const ReducedCoefficients rc = estimate_reduced_coefficients(field, bif, setup().dec.ambient.generators, rng);
  const Mat pinv = (rc.basis.transpose() * rc.basis).inverse() * rc.basis.transpose();
  auto r = [&](const Vec& v, double l) -> Vec { return pinv * bif.projector * field.eval(rc.basis * v, l); };
  for (int t = 0; t < 20; ++t) {
    Vec v(3);
    for (int i = 0; i < 3; ++i) v(i) = 0.1 * rng.gaussian();
    const double l = 0.1 * rng.gaussian();
    const Vec rv = r(v, l);
    Vec s(3);
    s << 0.0, v(0), v(2);  // action of a
    Vec u(3);
    u << v(1), v(2), v(2);  // action of b
    const Vec ra = r(s, l), rb = r(u, l);
    const double tol = 1e-12;
    CHECK(std::abs(ra(0)) <= tol);
    CHECK(std::abs(ra(1) - rv(0)) <= tol);
    CHECK(std::abs(ra(2) - rv(2)) <= tol);
    CHECK(std::abs(rb(0) - rv(1)) <= tol);
    CHECK(std::abs(rb(1) - rv(2)) <= tol);
    CHECK(std::abs(rb(2) - rv(2)) <= tol);
  }
}

TEST_CASE("eight branches with the expected synchrony and slopes") {
  const NetworkField field = load_field("fixture8_v.field");
  Rng rng(0);
  const BranchConfig cfg;
  const Bifurcation bif = detect_bifurcation(field, setup().dec, cfg, rng);
  const ReducedCoefficients rc = estimate_reduced_coefficients(field, bif, setup().dec.ambient.generators, rng);
  const auto branches = trace_branches(field, bif, cfg, rc.basis);
  REQUIRE(branches.size() == 8);
  CHECK(branches.front().trivial);
  std::set<std::set<int>> got;
  for (const auto& b : branches) {
    got.insert(nonzero_cells(b));
    for (const auto& blk : b.synchrony) {
      if (blk.zero) continue;
      const std::set<int> cells = nonzero_cells(b);
      const bool single = !cells.count(7);
      const double expected = single ? -1.0 : -0.5;
      CHECK(std::abs(blk.slope - expected) <= 1e-4 * std::abs(expected));
    }
    for (const auto& p : b.points) CHECK(p.residual <= 1e-10);
  }
  std::set<std::set<int>> want;
  for (const auto& pb : oracle::reference_branch_table()) want.insert(pb.cells);
  CHECK(got == want);
}

TEST_CASE("degenerate gamma = -beta field warns and loses branches") {
  const NetworkField field = load_field("fixture8_degenerate.field");
  Rng rng(0);
  const BranchConfig cfg;
  const Bifurcation bif = detect_bifurcation(field, setup().dec, cfg, rng);
  const ReducedCoefficients rc = estimate_reduced_coefficients(field, bif, setup().dec.ambient.generators, rng);
  CHECK(rc.gamma == doctest::Approx(-1.0).epsilon(1e-8));
  REQUIRE_FALSE(rc.warnings.empty());
  const auto branches = trace_branches(field, bif, cfg, rc.basis);
  CHECK(branches.size() < 8);
}

TEST_CASE("linear field has no bifurcation") {
  const NetworkField field = load_field("fixture8_linear.field");
  Rng rng(0);
  CHECK_THROWS_AS(detect_bifurcation(field, setup().dec, BranchConfig{}, rng), NoBifurcation);
}

TEST_CASE("tangential crossing is flagged") {
  const NetworkField field = load_field("fixture8_tangential.field");
  Rng rng(0);
  const Bifurcation bif = detect_bifurcation(field, setup().dec, BranchConfig{}, rng);
  CHECK(bif.crossing == Crossing::Tangential);
}

TEST_CASE("synchrony pattern of a hand-made branch") {
  Branch b;
  for (double l : {-0.01, 0.01}) {
    Vec x = Vec::Zero(4);
    x(0) = x(2) = -l;
    x(1) = 2 * l;
    b.points.push_back({l, x, 0.0});
  }
  const auto blocks = synchrony_pattern(b);
  REQUIRE(blocks.size() == 3);
  CHECK(blocks[0].cells == std::vector<int>{0, 2});
  CHECK(blocks[1].cells == std::vector<int>{1});
  CHECK(blocks[2].cells == std::vector<int>{3});
  CHECK(blocks[2].zero);
}
