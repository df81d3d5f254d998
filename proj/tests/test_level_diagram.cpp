#include "lzsim/level_diagram.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <stdexcept>

using namespace lzsim;

namespace {

LevelDiagram symmetric_two_level(double slope) {
  return LevelDiagram{{slope, {0.0}}, {-slope, {0.0}}, RateTable(1, 1, 0.1)};
}

LevelDiagram random_diagram(std::size_t nl, std::size_t nr) {
  LevelDiagram d;
  d.left.slope = oracle::uniform(0.5, 3.0);
  d.right.slope = -oracle::uniform(0.5, 3.0);
  double e = oracle::uniform(-5.0, 5.0);
  for (std::size_t k = 0; k < nl; ++k)
    d.left.offsets.push_back(e += oracle::uniform(0.5, 8.0));
  e = oracle::uniform(-5.0, 5.0);
  for (std::size_t k = 0; k < nr; ++k)
    d.right.offsets.push_back(e += oracle::uniform(0.5, 8.0));
  d.delta = RateTable(nl, nr, 0.1);
  return d;
}

} // namespace

TEST_CASE("epsilon_ij: hand-solved crossings") {
  CHECK(epsilon_ij(symmetric_two_level(2.0), 0.0, 0, 0) == 0.0);

  const LevelDiagram d{{1.0, {0.0}}, {-1.0, {5.0}}, RateTable(1, 1)};
  CHECK(epsilon_ij(d, 2.5, 0, 0) == 0.0);
  CHECK(crossing_flux(d, 0, 0) == 2.5);
  CHECK(epsilon_ij(d, 0.0, 0, 0) == -5.0);
}

TEST_CASE("epsilon_ij: index out of range") {
  const auto d = symmetric_two_level(1.0);
  CHECK_THROWS_AS(epsilon_ij(d, 0.0, 1, 0), std::out_of_range);
  CHECK_THROWS_AS(epsilon_ij(d, 0.0, 0, 1), std::out_of_range);
}

TEST_CASE("property: epsilon vanishes at the closed-form crossing position") {
  for (int trial = 0; trial < 50; ++trial) {
    const auto d = random_diagram(4, 3);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        const double flux = (d.right.offsets[j] - d.left.offsets[i]) / (d.left.slope - d.right.slope);
        CHECK(std::abs(epsilon_ij(d, flux, i, j)) <= 1e-12 * std::max(1.0, std::abs(d.left.offsets[i])));
      }
  }
}

TEST_CASE("property: epsilon is affine with slope left - right") {
  for (int trial = 0; trial < 30; ++trial) {
    const auto d = random_diagram(3, 3);
    const double expected = d.left.slope - d.right.slope;
    const double flux = oracle::uniform(-10.0, 10.0);
    const double h = 1e-3;
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        const double fd = (epsilon_ij(d, flux + h, i, j) - epsilon_ij(d, flux - h, i, j)) / (2 * h);
        CHECK(fd == doctest::Approx(expected).epsilon(1e-8));
      }
  }
}

TEST_CASE("property: mirror symmetry of a symmetric diagram") {
  for (int trial = 0; trial < 30; ++trial) {
    auto d = random_diagram(3, 3);
    d.right.offsets = d.left.offsets;
    d.right.slope = -d.left.slope;
    const double flux = oracle::uniform(-10.0, 10.0);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        CHECK(epsilon_ij(d, flux, i, j) == -epsilon_ij(d, -flux, j, i));
  }
}

TEST_CASE("validate") {
  const auto d = symmetric_two_level(1.0);
  auto relax = RelaxationSpec::none(d);

  SUBCASE("well-formed") { CHECK(validate(d, relax).empty()); }

  SUBCASE("delta table with the wrong shape") {
    auto bad = d;
    bad.delta = RateTable(2, 1);
    const auto v = validate(bad, relax);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "delta");
    CHECK(v[0].message.find("dimension mismatch") != std::string::npos);
  }

  SUBCASE("negative rate") {
    relax.inter_lr(0, 0) = -0.1;
    const auto v = validate(d, relax);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "relaxation.inter_lr[0][0]");
    CHECK(v[0].message.find("nonnegative") != std::string::npos);
  }

  SUBCASE("structural violations") {
    LevelDiagram bad{{1.0, {0.0, 0.0}}, {1.0, {}}, RateTable(2, 0)};
    const auto v = validate(bad, RelaxationSpec::none(bad));
    const auto has = [&](const std::string &field) {
      return std::any_of(v.begin(), v.end(), [&](const Violation &x) { return x.field == field; });
    };
    CHECK(has("left.offsets[1]"));
    CHECK(has("right.offsets"));
    CHECK(has("right.slope"));
  }

  SUBCASE("self relaxation") {
    LevelDiagram two{{1.0, {0.0, 1.0}}, {-1.0, {0.0}}, RateTable(2, 1)};
    auto r = RelaxationSpec::none(two);
    r.intra_left(1, 1) = 0.3;
    const auto v = validate(two, r);
    REQUIRE(v.size() == 1);
    CHECK(v[0].field == "relaxation.intra_left[1][1]");
  }
}
