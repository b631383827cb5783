#include <doctest.h>

#include "ccn/errors.hpp"
#include "ccn/monoid.hpp"
#include "ccn/network.hpp"
#include "ccn/poly_field.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace ccn;

namespace {

Network fixture_network() { return parse_network(oracle::read_text(oracle::data_path("fixture8.network"))); }

std::vector<Mat> fixture_actions() {
  std::vector<Mat> out;
  for (const auto& g : oracle::fixture_generators()) out.push_back(oracle::selection_matrix(g));
  return out;
}

}  // namespace

TEST_CASE("field grammar") {
  const PolyField f = parse_field("# comment\ndegree = 3\nf = 2 * y1^2 * L - y2\n  + 0.5 * y1 * y2 + y1 * L^2\n");
  CHECK(f.degree_cap == 3);
  CHECK(f.n_inputs == 2);
  REQUIRE(f.terms.size() == 4);
  const double y[2] = {0.3, -0.7};
  const double l = 0.2;
  const double expected = 2 * 0.09 * l - (-0.7) + 0.5 * 0.3 * -0.7 + 0.3 * l * l;
  CHECK(f.value(y, l) == doctest::Approx(expected).epsilon(1e-14));
  // derivatives
  CHECK(f.value(y, l, 0) == doctest::Approx(4 * 0.3 * l + 0.5 * -0.7 + l * l).epsilon(1e-14));
  CHECK(f.value(y, l, 0, 0) == doctest::Approx(4 * l).epsilon(1e-14));
  CHECK(f.value(y, l, 0, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(f.value(y, l, -1, -1, 1) == doctest::Approx(2 * 0.09 + 2 * 0.3 * l).epsilon(1e-14));
}

TEST_CASE("duplicate monomials merge and serialization round-trips") {
  const PolyField f = parse_field("f = y1 * y2 + 2 * y2 * y1 - 0.1 * y1\n");
  CHECK(f.terms.size() == 2);
  const PolyField g = parse_field(serialize_field(f));
  const double y[2] = {1.3, 0.4};
  CHECK(g.value(y, 0.0) == doctest::Approx(f.value(y, 0.0)).epsilon(1e-15));
  const PolyField fixture = parse_field(oracle::read_text(oracle::data_path("fixture8_v.field")));
  CHECK(serialize_field(parse_field(serialize_field(fixture))) == serialize_field(fixture));
}

TEST_CASE("field parse errors carry positions") {
  CHECK_THROWS_AS(parse_field(""), ParseError);
  CHECK_THROWS_AS(parse_field("f = \n"), ParseError);
  CHECK_THROWS_AS(parse_field("f = y0\n"), ParseError);
  CHECK_THROWS_AS(parse_field("f = 2 * * y1\n"), ParseError);
  CHECK_THROWS_AS(parse_field("f = y1\nf = y2\n"), ParseError);
  CHECK_THROWS_AS(parse_field("degree = x\nf = y1\n"), ParseError);
  try {
    parse_field("f = y1\n  + 3 * q2\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("network field model checks") {
  const Network net = fixture_network();
  CHECK_THROWS_AS(NetworkField(net, parse_field("f = y9\n")), ModelError);
  CHECK_THROWS_AS(NetworkField(net, parse_field("f = L + y1\n")), ModelError);
  CHECK_THROWS_AS(NetworkField(net, parse_field("degree = 2\nf = y1^3\n")), ModelError);
}

TEST_CASE("network field evaluation, Jacobians and equivariance") {
  const NetworkField field(fixture_network(), parse_field(oracle::read_text(oracle::data_path("fixture8_v.field"))));
  Rng rng(21);
  Vec x(8);
  for (int i = 0; i < 8; ++i) x(i) = rng.gaussian();
  const double l = 0.37;
  // F(x)_i = f(x_{eta_1(i)}, ..., x_{eta_8(i)}) checked by hand for cell 2
  const Network& net = field.network();
  std::vector<double> y;
  for (const auto& a : net.arrows()) y.push_back(x(a.map(1)));
  CHECK(field.eval(x, l)(1) == doctest::Approx(field.field().value(y.data(), l)).epsilon(1e-14));

  const double h = 1e-6;
  const Mat j = field.jacobian(x, l);
  for (int c = 0; c < 8; ++c) {
    Vec e = Vec::Zero(8);
    e(c) = h;
    const Vec fd = (field.eval(x + e, l) - field.eval(x - e, l)) / (2 * h);
    CHECK((fd - j.col(c)).norm() <= 1e-7);
  }
  const Mat jl = field.jacobian_lambda(x, l);
  CHECK((jl - (field.jacobian(x, l + h) - field.jacobian(x, l - h)) / (2 * h)).norm() <= 1e-7);
  Vec u(8), w(8);
  for (int i = 0; i < 8; ++i) {
    u(i) = rng.gaussian();
    w(i) = rng.gaussian();
  }
  const Vec d2 = field.second_derivative(x, l, u, w);
  const Vec fd2 = (field.jacobian(x + h * w, l) - field.jacobian(x - h * w, l)) * u / (2 * h);
  CHECK((d2 - fd2).norm() <= 1e-6);

  CHECK(field.equivariance_residual(fixture_actions(), rng) <= 1e-12);
  CHECK(field.eval(Vec::Zero(8), l).norm() == 0.0);
}
