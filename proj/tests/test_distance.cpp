#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cubealg/distance.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace cubetest;

namespace {

constexpr double kExact = 1e-12;

}  // namespace

TEST_CASE("filter distance is Jaccard over detailed values") {
  const Catalog& cat = taxesCatalog();
  const Dimension& date = cat.dimension(0);
  LevelIndex year = date.level("Year");
  auto yearAtom = [&](std::initializer_list<const char*> ys) {
    Atom a{0, year, {}};
    for (const char* y : ys) a.values.push_back(date.memberAtLevel(year, y));
    std::sort(a.values.begin(), a.values.end());
    return a;
  };

  Atom a = yearAtom({"2019", "2020"});
  Atom b = yearAtom({"2018", "2019"});
  // 12 shared months out of 36
  CHECK(atomDistance(cat, a, b) == doctest::Approx(2.0 / 3.0).epsilon(kExact));
  CHECK(atomDistance(cat, a, a) == doctest::Approx(0.0));
  CHECK(atomDistance(cat, a, yearAtom({"2018"})) == doctest::Approx(1.0));

  // levels may differ; the sets are compared detailed
  LevelIndex month = date.level("Month");
  Atom jan{0, month, {date.memberAtLevel(month, "2019-01")}};
  CHECK(atomDistance(cat, yearAtom({"2019"}), jan) ==
        doctest::Approx(11.0 / 12.0).epsilon(kExact));

  // both empty: identical
  Atom e1{0, year, {}};
  Atom e2{0, month, {}};
  CHECK(atomDistance(cat, e1, e2) == doctest::Approx(0.0));

  Atom wrongDim{1, 1, {cat.dimension(1).memberAtLevel(1, "Gov")}};
  CHECK_THROWS_AS(atomDistance(cat, a, wrongDim), Error);
}

TEST_CASE("condition distance averages over the dimensions") {
  const Catalog& cat = taxesCatalog();
  CubeQuery base = fixtureQuery(cat, "taxes/queries/q_monthly.cq");
  CubeQuery other = fixtureQuery(cat, "taxes/queries/q_intersect.cq");
  // Date differs by Jaccard 2/3, the other two dimensions coincide
  CHECK(conditionDistance(cat, base, other) ==
        doctest::Approx(2.0 / 9.0).epsilon(kExact));
  CHECK(conditionDistance(cat, base, base) == doctest::Approx(0.0));
}

TEST_CASE("level distance uses height on chains, round trips elsewhere") {
  const Catalog& cat = taxesCatalog();
  const Dimension& date = cat.dimension(0);
  LevelIndex month = date.level("Month");
  LevelIndex year = date.level("Year");
  CHECK(levelDistance(date, month, month) == doctest::Approx(0.0));
  CHECK(levelDistance(date, month, year) ==
        doctest::Approx(2.0 / 3.0).epsilon(kExact));
  CHECK(levelDistance(date, year, month) ==
        doctest::Approx(2.0 / 3.0).epsilon(kExact));
  CHECK(levelDistance(date, month, date.top()) == doctest::Approx(1.0));

  // the calendar lattice is no chain: week and month need a round trip
  Catalog cal = calendarCatalog();
  const Dimension& c = cal.dimension(0);
  CHECK(c.isChain() == false);
  double wm = levelDistance(c, c.level("Week"), c.level("Month"));
  CHECK(wm == doctest::Approx(1.0).epsilon(kExact));  // 3 hops of diameter 3
  CHECK(levelDistance(c, c.level("Week"), c.level("Year")) ==
        doctest::Approx(2.0 / 3.0).epsilon(kExact));
  CHECK(levelDistance(c, c.level("Day"), c.level("ALL")) ==
        doctest::Approx(2.0 / 3.0).epsilon(kExact));
}

TEST_CASE("measure distance counts unpaired aggregates") {
  const Catalog& cat = taxesCatalog();
  CubeQuery base = fixtureQuery(cat, "taxes/queries/q_monthly.cq");
  CubeQuery range = fixtureQuery(cat, "taxes/queries/q_range.cq");
  // base has sum(TaxPaid); range has sum(TaxPaid) and one more
  CHECK(measureDistance(base, range) ==
        doctest::Approx(1.0 / 3.0).epsilon(kExact));
  CHECK(measureDistance(base, base) == doctest::Approx(0.0));

  CubeQuery renamed = base;
  renamed.measures[0].name = "Alias";
  CHECK(measureDistance(base, renamed) == doctest::Approx(0.0));

  CubeQuery swapped = base;
  swapped.measures[0].fn = AggFn::Min;
  CHECK(measureDistance(base, swapped) == doctest::Approx(1.0));
}

TEST_CASE("blended distance validates its weights") {
  const Catalog& cat = taxesCatalog();
  CubeQuery base = fixtureQuery(cat, "taxes/queries/q_monthly.cq");
  CubeQuery other = fixtureQuery(cat, "taxes/queries/q_intersect.cq");

  DistanceBreakdown d = queryDistance(cat, base, other);
  CHECK(d.condition == doctest::Approx(2.0 / 9.0).epsilon(kExact));
  CHECK(d.level == doctest::Approx(0.0));
  CHECK(d.measure == doctest::Approx(0.0));
  CHECK(d.total == doctest::Approx(1.0 / 9.0).epsilon(kExact));
  CHECK(d.weights.condition == doctest::Approx(0.5));
  CHECK(d.weights.level == doctest::Approx(0.35));
  CHECK(d.weights.measure == doctest::Approx(0.15));
  REQUIRE(d.perDimCondition.size() == 3);
  CHECK(d.perDimCondition[0] == doctest::Approx(2.0 / 3.0).epsilon(kExact));
  CHECK(d.perDimCondition[1] == doctest::Approx(0.0));

  CHECK_THROWS_AS(queryDistance(cat, base, other, {0.5, 0.4, 0.2}), Error);
  CHECK_THROWS_AS(queryDistance(cat, base, other, {1.2, -0.1, -0.1}), Error);
  try {
    queryDistance(cat, base, other, {0.9, 0.05, 0.0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidArgument);
  }
  DistanceBreakdown lop = queryDistance(cat, base, other, {1.0, 0.0, 0.0});
  CHECK(lop.total == doctest::Approx(2.0 / 9.0).epsilon(kExact));

  CubeQuery geoQuery = fixtureQuery(geoCatalog(), "geo/queries/qn_continent.cq");
  CHECK_THROWS_AS(queryDistance(cat, base, geoQuery), Error);
}

TEST_CASE("distance behaves like a metric on random queries") {
  std::mt19937 rng(67);
  for (int i = 0; i < 120; ++i) {
    Catalog cat = randomCatalog(rng);
    CubeQuery a = randomQuery(rng, cat);
    CubeQuery b = randomQuery(rng, cat);
    DistanceBreakdown ab = queryDistance(cat, a, b);
    DistanceBreakdown ba = queryDistance(cat, b, a);
    CHECK(ab.total == doctest::Approx(ba.total).epsilon(kExact));
    CHECK(ab.total >= 0.0);
    CHECK(ab.total <= 1.0);
    CHECK(queryDistance(cat, a, a).total == doctest::Approx(0.0));
  }
}
