#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "cubealg/compare.hpp"
#include "cubealg/executor.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace cubetest;

namespace {

const TraceEntry* entry(const Verdict& v, const std::string& condition) {
  for (const TraceEntry& e : v.trace) {
    if (e.condition == condition) return &e;
  }
  return nullptr;
}

bool detailedSubset(const Catalog& cat, const CubeQuery& qn,
                    const CubeQuery& qb) {
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    auto n = admittedDetailed(cat, qn, dim);
    auto b = admittedDetailed(cat, qb, dim);
    if (!std::includes(b.begin(), b.end(), n.begin(), n.end())) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("rollability: filter at or above the grouping level") {
  Catalog cal = calendarCatalog();
  const Dimension& c = cal.dimension(0);
  LevelIndex day = c.level("Day"), week = c.level("Week");
  LevelIndex month = c.level("Month"), year = c.level("Year");

  Atom y{0, year, {c.memberAtLevel(year, "y1")}};
  CHECK(isPerfectlyRollable(cal, y, month).rollable);
  CHECK(isPerfectlyRollable(cal, y, year).rollable);

  // filter below the grouping level: whole families only
  Atom w1Days{0, day, {c.memberAtLevel(day, "d1"), c.memberAtLevel(day, "d2")}};
  CHECK(isPerfectlyRollable(cal, w1Days, week).rollable);

  Atom justD1{0, day, {c.memberAtLevel(day, "d1")}};
  RollabilityReport broken = isPerfectlyRollable(cal, justD1, week);
  CHECK_FALSE(broken.rollable);
  REQUIRE(broken.witness.has_value());
  CHECK(c.memberValue(*broken.witness) == "w1");
}

TEST_CASE("rollability across incomparable levels goes through the bottom") {
  Catalog cal = calendarCatalog();
  const Dimension& c = cal.dimension(0);
  LevelIndex week = c.level("Week"), month = c.level("Month");

  // m1 = {d1,d2,d3} touches w2 = {d3,d4} but misses d4
  Atom m1{0, month, {c.memberAtLevel(month, "m1")}};
  RollabilityReport r = isPerfectlyRollable(cal, m1, week);
  CHECK_FALSE(r.rollable);
  REQUIRE(r.witness.has_value());
  CHECK(c.memberValue(*r.witness) == "w2");

  Atom both{0, month,
            {c.memberAtLevel(month, "m1"), c.memberAtLevel(month, "m2")}};
  CHECK(isPerfectlyRollable(cal, both, week).rollable);
}

TEST_CASE("exact containment decides by detailed subsets") {
  const Catalog& cat = taxesCatalog();
  CubeQuery narrow = fixtureQuery(cat, "taxes/queries/q_narrow.cq");
  CubeQuery base = fixtureQuery(cat, "taxes/queries/q_monthly.cq");
  CHECK(foundationalContains(cat, narrow, base).holds);
  CHECK_FALSE(foundationalContains(cat, base, narrow).holds);

  std::mt19937 rng(47);
  for (int i = 0; i < 150; ++i) {
    Catalog rc = randomCatalog(rng);
    CubeQuery qa = randomQuery(rng, rc);
    CubeQuery qb = randomQuery(rng, rc);
    qb.groupers = qa.groupers;
    qb.measures = qa.measures;
    qb = normalized(rc, qb);
    CHECK(foundationalContains(rc, qa, qb).holds == detailedSubset(rc, qa, qb));
  }
}

TEST_CASE("the quick ancestor test is sufficient but not necessary") {
  const Catalog& geo = geoCatalog();
  CubeQuery qn = fixtureQuery(geo, "geo/queries/qn_continent.cq");
  CubeQuery qb = fixtureQuery(geo, "geo/queries/qb_countries.cq");

  // Oceania's countries are all inside qb's list, so exact containment holds
  CHECK(foundationalContains(geo, qn, qb).holds);

  // but qb filters at Country and qn at Continent, which sits above, so the
  // ancestor test cannot decide and must answer no rather than err
  Verdict fast = foundationalContainsFast(geo, qn, qb);
  CHECK_FALSE(fast.holds);
  REQUIRE_FALSE(fast.trace.empty());
  CHECK_FALSE(fast.trace.front().pass);

  std::mt19937 rng(53);
  for (int i = 0; i < 200; ++i) {
    Catalog rc = randomCatalog(rng);
    CubeQuery qa = randomQuery(rng, rc);
    CubeQuery q2 = randomQuery(rng, rc);
    q2.groupers = qa.groupers;
    q2.measures = qa.measures;
    q2 = normalized(rc, q2);
    if (foundationalContainsFast(rc, qa, q2).holds) {
      CHECK(foundationalContains(rc, qa, q2).holds);
    }
  }
}

TEST_CASE("same-schema containment walks its conditions in order") {
  const Catalog& cat = taxesCatalog();
  CubeQuery narrow = fixtureQuery(cat, "taxes/queries/q_narrow.cq");
  CubeQuery base = fixtureQuery(cat, "taxes/queries/q_monthly.cq");

  Verdict v = sameLevelContains(cat, narrow, base);
  CHECK(v.holds);
  for (const char* c : {"1", "2b(i)", "2b(ii)"}) {
    const TraceEntry* e = entry(v, c);
    REQUIRE(e != nullptr);
    CHECK(e->pass);
  }

  // schema mismatch trips condition 1
  CubeQuery renamed = narrow;
  renamed.measures[0].fn = AggFn::Min;
  Verdict v1 = sameLevelContains(cat, normalized(cat, renamed), base);
  CHECK_FALSE(v1.holds);
  CHECK_FALSE(entry(v1, "1")->pass);

  // measure names are no part of the schema, only (fn, source) pairs are
  CubeQuery alias = narrow;
  alias.measures[0].name = "Other";
  CHECK(sameLevelContains(cat, normalized(cat, alias), base).holds);

  // a collapsed dimension with different atoms trips 2a
  CubeQuery eduCut = parseQuery(
      "QUERY e FROM taxes\n"
      "WHERE Date.Year IN {2019} AND Workclass.L2 IN {with-pay}"
      " AND Education.L2 IN {Primary}\n"
      "GROUP BY Date.Month, Workclass.L1, Education.ALL\n"
      "AGG sum(TaxPaid) AS SumTax\n",
      cat);
  Verdict v2a = sameLevelContains(cat, eduCut, base);
  CHECK_FALSE(v2a.holds);
  REQUIRE(entry(v2a, "2a") != nullptr);
  CHECK_FALSE(entry(v2a, "2a")->pass);

  // a filter cutting below the grouping level trips rollability
  CubeQuery ragged = parseQuery(
      "QUERY r FROM taxes\n"
      "WHERE Date.Month IN {2019-01, 2019-02} AND Workclass.L2 IN {with-pay}\n"
      "GROUP BY Date.Year, Workclass.L1, Education.ALL\n"
      "AGG sum(TaxPaid) AS SumTax\n",
      cat);
  CubeQuery yearly = fixtureQuery(cat, "taxes/queries/q_rollup_year.cq");
  Verdict v2b = sameLevelContains(cat, ragged, yearly);
  CHECK_FALSE(v2b.holds);
  CHECK_FALSE(entry(v2b, "2b(i)")->pass);

  // value sets outside the base trip the subset condition
  CubeQuery wider = parseQuery(
      "QUERY w FROM taxes\n"
      "WHERE Date.Year IN {2018, 2019, 2020} AND Workclass.L2 IN {with-pay}\n"
      "GROUP BY Date.Month, Workclass.L1, Education.ALL\n"
      "AGG sum(TaxPaid) AS SumTax\n",
      cat);
  Verdict v2bii = sameLevelContains(cat, wider, base);
  CHECK_FALSE(v2bii.holds);
  CHECK(entry(v2bii, "2b(i)")->pass);
  CHECK_FALSE(entry(v2bii, "2b(ii)")->pass);
}

TEST_CASE("same-schema intersection needs overlap on every dimension") {
  const Catalog& cat = taxesCatalog();
  CubeQuery base = fixtureQuery(cat, "taxes/queries/q_monthly.cq");
  CubeQuery other = fixtureQuery(cat, "taxes/queries/q_intersect.cq");
  Verdict v = sameLevelIntersects(cat, base, other);
  CHECK(v.holds);
  CHECK(entry(v, "2c") != nullptr);

  CubeQuery disjoint = parseQuery(
      "QUERY d FROM taxes\n"
      "WHERE Date.Year IN {2018} AND Workclass.L2 IN {with-pay}\n"
      "GROUP BY Date.Month, Workclass.L1, Education.ALL\n"
      "AGG sum(TaxPaid) AS SumTax\n",
      cat);
  Verdict miss = sameLevelIntersects(cat, base, disjoint);
  CHECK_FALSE(miss.holds);
  const TraceEntry* e = entry(miss, "2c");
  REQUIRE(e != nullptr);
  CHECK_FALSE(e->pass);

  std::mt19937 rng(59);
  for (int i = 0; i < 150; ++i) {
    Catalog rc = randomCatalog(rng);
    auto [q1, q2] = intersectionPair(rng, rc);
    CHECK(sameLevelIntersects(rc, q1, q2).holds);
  }
}

TEST_CASE("containment pairs satisfy the test by construction") {
  std::mt19937 rng(61);
  for (int i = 0; i < 150; ++i) {
    Catalog rc = randomCatalog(rng);
    auto [qn, qb] = containmentPair(rng, rc);
    CHECK(sameLevelContains(rc, qn, qb).holds);
    CHECK(foundationalContains(rc, qn, qb).holds);
  }
}

TEST_CASE("guarded enumeration refuses pairs outside its theorem") {
  const Catalog& cat = taxesCatalog();
  CubeQuery narrow = fixtureQuery(cat, "taxes/queries/q_narrow.cq");
  CubeQuery base = fixtureQuery(cat, "taxes/queries/q_monthly.cq");
  CubeQuery other = fixtureQuery(cat, "taxes/queries/q_intersect.cq");

  CoverageReport contained = enumerateContainment(cat, narrow, base);
  CHECK(signatureEmpty(contained.novel));
  CHECK(signatureCount(contained.covered) ==
        signatureCount(querySignature(cat, narrow)));

  CoverageReport overlap = enumerateIntersection(cat, other, base);
  CHECK(signatureCount(overlap.covered) == 36);

  // base does not fit inside narrow, so the containment gate must refuse
  CHECK_THROWS_AS(enumerateContainment(cat, base, narrow), Error);
  try {
    enumerateContainment(cat, base, narrow);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TheoremNotSatisfied);
  }

  CubeQuery disjoint = parseQuery(
      "QUERY d FROM taxes\n"
      "WHERE Date.Year IN {2018} AND Workclass.L2 IN {with-pay}\n"
      "GROUP BY Date.Month, Workclass.L1, Education.ALL\n"
      "AGG sum(TaxPaid) AS SumTax\n",
      cat);
  CHECK_THROWS_AS(enumerateIntersection(cat, base, disjoint), Error);
}

TEST_CASE("enumerated shared coordinates match the executed overlap") {
  const Catalog& cat = taxesCatalog();
  CubeQuery base = fixtureQuery(cat, "taxes/queries/q_monthly.cq");
  CubeQuery other = fixtureQuery(cat, "taxes/queries/q_intersect.cq");
  CoverageReport rep = enumerateIntersection(cat, other, base);
  QueryResult shared =
      resultIntersect(execute(cat, other), execute(cat, base));
  auto tuples = materialize(rep.covered);
  REQUIRE(tuples.size() == shared.cells.size());  // fixture data is dense
  for (size_t i = 0; i < tuples.size(); ++i) {
    CHECK(tuples[i] == shared.cells[i].coords);
  }
}

TEST_CASE("a session of tiles covers the whole signature") {
  const Catalog& cat = taxesCatalog();
  CubeQuery q = fixtureQuery(cat, "taxes/queries/q_monthly.cq");
  QuerySession session;
  session.queries.push_back(fixtureQuery(cat, "taxes/session/s1_2019.cq"));
  session.queries.push_back(fixtureQuery(cat, "taxes/session/s2_2020.cq"));

  CoverageReport rep = partialCoverage(cat, session, q);
  CHECK(signatureCount(rep.covered) == 72);
  CHECK(signatureEmpty(rep.novel));

  // one tile alone leaves the other year novel
  QuerySession half;
  half.queries.push_back(session.queries[0]);
  CoverageReport part = partialCoverage(cat, half, q);
  CHECK(signatureCount(part.covered) == 36);
  CHECK(signatureCount(part.novel) == 36);

  // members that provably cannot intersect contribute nothing
  QuerySession noise;
  noise.queries.push_back(parseQuery(
      "QUERY n FROM taxes\n"
      "WHERE Date.Year IN {2018} AND Workclass.L2 IN {with-pay}\n"
      "GROUP BY Date.Month, Workclass.L1, Education.ALL\n"
      "AGG sum(TaxPaid) AS SumTax\n",
      cat));
  CoverageReport none = partialCoverage(cat, noise, q);
  CHECK(signatureEmpty(none.covered));
  CHECK(signatureCount(none.novel) == 72);
}

TEST_CASE("session membership is expression identity") {
  const Catalog& cat = taxesCatalog();
  CubeQuery q = fixtureQuery(cat, "taxes/queries/q_monthly.cq");
  QuerySession session;
  session.queries.push_back(fixtureQuery(cat, "taxes/session/s1_2019.cq"));
  CHECK_FALSE(syntacticMembership(cat, session, q));
  session.queries.push_back(q);
  CHECK(syntacticMembership(cat, session, q));

  // equal result, different expression: still no membership
  CubeQuery sliced = session.queries[0];
  QuerySession other;
  CubeQuery viaMonths = parseQuery(
      "QUERY m FROM taxes\n"
      "WHERE Date.Month IN {2019-01, 2019-02, 2019-03, 2019-04, 2019-05,"
      " 2019-06, 2019-07, 2019-08, 2019-09, 2019-10, 2019-11, 2019-12}"
      " AND Workclass.L2 IN {with-pay}\n"
      "GROUP BY Date.Month, Workclass.L1, Education.ALL\n"
      "AGG sum(TaxPaid) AS SumTax\n",
      cat);
  other.queries.push_back(viaMonths);
  CHECK_FALSE(syntacticMembership(cat, other, sliced));
}
