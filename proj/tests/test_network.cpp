#include <doctest.h>

#include "ccn/errors.hpp"
#include "ccn/network.hpp"
#include "oracles.hpp"

using namespace ccn;

TEST_CASE("fixture network parses and round-trips") {
  const Network net = parse_network(oracle::read_text(oracle::data_path("fixture8.network")));
  CHECK(net.n_cells() == 8);
  CHECK(net.n_arrows() == 8);
  CHECK(net.arrows().front().map.is_identity());
  CHECK(net.arrows()[1].map.to_string() == "(2, 6, 5, 2, 6, 6, 8, 6)");
  const Network again = parse_network(serialize_network(net));
  CHECK(again == net);
}

TEST_CASE("generator file parses and round-trips") {
  const GeneratorSet g = parse_generators(oracle::read_text(oracle::data_path("fixture8.generators")));
  REQUIRE(g.maps.size() == 2);
  const auto expected = oracle::fixture_generators();
  CHECK(g.maps[0] == expected[0]);
  CHECK(g.maps[1] == expected[1]);
  const GeneratorSet again = parse_generators(serialize_generators(g));
  CHECK(again.names == g.names);
  CHECK(again.maps == g.maps);
}

TEST_CASE("comments, blank lines and CRLF are accepted") {
  const Network net = parse_network("# header\r\n\r\ncells = 2  # two\r\narrow id = (1, 2)\r\narrow s = (2,2)\r\n");
  CHECK(net.n_cells() == 2);
  CHECK(net.arrows()[1].map.image() == std::vector<int>{1, 1});
}

TEST_CASE("input kind detection") {
  CHECK(detect_input_kind(oracle::read_text(oracle::data_path("fixture8.network"))) == InputKind::Network);
  CHECK(detect_input_kind(oracle::read_text(oracle::data_path("rot90.generators"))) == InputKind::Generators);
}

TEST_CASE("parse errors report line and column") {
  SUBCASE("index out of range") {
    try {
      parse_network("cells = 2\narrow id = (1, 2)\narrow s = (1, 3)\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
      CHECK(e.column() == 15);
    }
  }
  SUBCASE("wrong arity") {
    try {
      parse_network("cells = 3\narrow id = (1, 2, 3)\narrow s = (1, 2)\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("missing header") { CHECK_THROWS_AS(parse_network("arrow id = (1)\n"), ParseError); }
  SUBCASE("missing identity arrow") {
    CHECK_THROWS_AS(parse_network("cells = 2\narrow s = (2, 2)\n"), ParseError);
  }
  SUBCASE("empty file") { CHECK_THROWS_AS(parse_network(""), ParseError); }
  SUBCASE("garbage after tuple") {
    try {
      parse_generators("cells = 1\ngenerator g = (1) x\n");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
}

TEST_CASE("fixture network is its own fundamental network") {
  const Network net = parse_network(oracle::read_text(oracle::data_path("fixture8.network")));
  const auto rep = check_self_fundamental(net);
  REQUIRE(rep.closed);
  CHECK(rep.has_identity);
  const auto maps = input_maps(net);
  for (std::size_t p = 0; p < maps.size(); ++p)
    for (std::size_t q = 0; q < maps.size(); ++q)
      CHECK(maps[static_cast<std::size_t>(rep.table[p][q])] == maps[p].then(maps[q]));
}

TEST_CASE("hidden symmetries of the fixture are the reference generators, in order") {
  const Network net = parse_network(oracle::read_text(oracle::data_path("fixture8.network")));
  const auto hs = hidden_symmetries(net);
  REQUIRE(hs.has_value());
  const auto expected = oracle::fixture_generators();
  REQUIRE(hs->maps.size() == 2);
  CHECK(hs->maps[0] == expected[0]);
  CHECK(hs->maps[1] == expected[1]);
  for (const auto& s : hs->maps)
    for (const auto& a : input_maps(net)) CHECK(s.then(a) == a.then(s));
}

TEST_CASE("a network whose arrows are not closed has no hidden symmetries") {
  const Network net = parse_network("cells = 3\narrow id = (1, 2, 3)\narrow s = (2, 3, 1)\narrow t = (1, 1, 2)\n");
  const auto rep = check_self_fundamental(net);
  CHECK_FALSE(rep.closed);
  CHECK(rep.violation.has_value());
  CHECK_FALSE(hidden_symmetries(net).has_value());
}

TEST_CASE("cell maps reject out-of-range images") { CHECK_THROWS_AS(CellMap({0, 2}), ModelError); }
