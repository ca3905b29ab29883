#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "cubealg/signature.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace cubetest;

namespace {

std::vector<std::vector<std::string>> tupleNames(const Catalog& cat,
                                                 const Signature& s) {
  std::vector<std::vector<std::string>> out;
  for (const auto& t : materialize(s)) {
    std::vector<std::string> row;
    for (int d = 0; d < cat.dimensionCount(); ++d) {
      row.push_back(cat.dimension(d).memberValue(t[d]));
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

TEST_CASE("factored form with an empty factor is the empty set") {
  Signature s = makeFactored({0, 0}, {{3, 1}, {}});
  CHECK(signatureEmpty(s));
  CHECK(signatureCount(s) == 0);
  for (const auto& f : s.factors) CHECK(f.empty());
  CHECK(materialize(s).empty());

  Signature one = makeFactored({0, 0}, {{1, 2}, {5}});
  CHECK(signatureCount(one) == 2);
  CHECK(signatureContains(one, {1, 5}));
  CHECK_FALSE(signatureContains(one, {1, 6}));
}

TEST_CASE("materialized tuples come out in ordinal-lexicographic order") {
  const Catalog& cat = taxesCatalog();
  const Dimension& wc = cat.dimension(1);
  const Dimension& edu = cat.dimension(2);
  Signature s = makeFactored(
      {cat.dimension(0).top(), 1, edu.top()},
      {{cat.dimension(0).memberAtLevel(cat.dimension(0).top(), "all")},
       {wc.memberAtLevel(1, "Private"), wc.memberAtLevel(1, "Gov")},
       {edu.memberAtLevel(edu.top(), "all")}});
  auto rows = tupleNames(cat, s);
  REQUIRE(rows.size() == 2);
  // Private is declared before Gov, so it materializes first
  CHECK(rows[0] == std::vector<std::string>{"all", "Private", "all"});
  CHECK(rows[1] == std::vector<std::string>{"all", "Gov", "all"});

  Signature big = detailedSignature(cat, fixtureQuery(cat, "taxes/queries/q_monthly.cq"));
  CHECK(signatureCount(big) == 2304);
  CHECK_THROWS_AS(materialize(big, 100), Error);
  try {
    materialize(big, 100);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MaterializationCap);
  }
}

TEST_CASE("set operations respect form and levels") {
  Signature a = makeFactored({0, 0}, {{0, 1}, {4, 5}});
  Signature b = makeFactored({0, 0}, {{1, 2}, {5, 6}});

  Signature i = sigIntersect(a, b);
  CHECK(i.factored());
  CHECK(i.factors == std::vector<std::vector<MemberIndex>>{{1}, {5}});

  Signature u = sigUnion(a, b);
  CHECK_FALSE(u.factored());
  CHECK(signatureCount(u) == 7);  // 4 + 4 with (1,5) shared
  CHECK(std::is_sorted(u.tuples.begin(), u.tuples.end()));

  Signature d = sigDifference(a, b);
  CHECK(signatureCount(d) == 3);
  CHECK(signatureContains(d, {0, 4}));
  CHECK(signatureContains(d, {0, 5}));
  CHECK(signatureContains(d, {1, 4}));

  // mixed forms work through materialization
  Signature ue = sigUnion(makeExplicit({0, 0}, {{0, 4}}), b);
  CHECK(signatureCount(ue) == 5);
  CHECK(signatureEquals(sigIntersect(ue, a), makeExplicit({0, 0}, {{0, 4}, {1, 5}})));

  Signature other = makeFactored({0, 1}, {{0}, {0}});
  CHECK_THROWS_AS(sigUnion(a, other), Error);
  try {
    sigIntersect(a, other);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::LevelMismatch);
  }
}

TEST_CASE("equality is tuple-set equality across forms") {
  Signature f = makeFactored({0, 0}, {{0, 1}, {2}});
  Signature e = makeExplicit({0, 0}, {{1, 2}, {0, 2}});
  CHECK(signatureEquals(f, e));
  CHECK(signatureEquals(e, f));
  Signature e2 = makeExplicit({0, 0}, {{0, 2}});
  CHECK_FALSE(signatureEquals(f, e2));
  CHECK_FALSE(signatureEquals(f, makeExplicit({0, 1}, {{0, 2}, {1, 2}})));
}

TEST_CASE("grouper images follow the lattice direction") {
  Catalog cal = calendarCatalog();
  const Dimension& c = cal.dimension(0);
  LevelIndex day = c.level("Day"), week = c.level("Week");
  LevelIndex month = c.level("Month"), year = c.level("Year");

  Atom m1{0, month, {c.memberAtLevel(month, "m1")}};

  // grouper below the atom level: descendants
  auto downs = gdomValues(cal, m1, day);
  REQUIRE(downs.size() == 3);
  CHECK(c.memberValue(downs[0]) == "d1");

  // grouper above: ancestors
  auto ups = gdomValues(cal, m1, year);
  REQUIRE(ups.size() == 1);
  CHECK(c.memberValue(ups[0]) == "y1");

  // incomparable: image through the bottom level; m1 = {d1,d2,d3} touches
  // w1 = {d1,d2} and w2 = {d3,d4}
  auto across = gdomValues(cal, m1, week);
  REQUIRE(across.size() == 2);
  CHECK(c.memberValue(across[0]) == "w1");
  CHECK(c.memberValue(across[1]) == "w2");

  // same level: identity
  CHECK(gdomValues(cal, m1, month) == m1.values);
}

TEST_CASE("fixture signatures match the worked example") {
  const Catalog& cat = taxesCatalog();
  CubeQuery q = fixtureQuery(cat, "taxes/queries/q_monthly.cq");

  Signature condSig = conditionSignature(cat, q);
  CHECK(condSig.factored());
  auto condRows = tupleNames(cat, condSig);
  REQUIRE(condRows.size() == 2);
  CHECK(condRows[0] == std::vector<std::string>{"2019", "with-pay", "all"});
  CHECK(condRows[1] == std::vector<std::string>{"2020", "with-pay", "all"});

  CHECK(signatureCount(detailedSignature(cat, q)) == 24 * 6 * 16);
  Signature qs = querySignature(cat, q);
  CHECK(signatureCount(qs) == 24 * 3 * 1);

  CubeQuery q2 = fixtureQuery(cat, "taxes/queries/q_wide.cq");
  Signature wideSig = conditionSignature(cat, q2);
  CHECK(signatureCount(wideSig) == 4);
  Signature both = sigIntersect(condSig, wideSig);
  auto rows = tupleNames(cat, both);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0] == std::vector<std::string>{"2019", "with-pay", "all"});
  CHECK(signatureCount(sigUnion(condSig, wideSig)) == 5);
}

TEST_CASE("both query signature routes agree") {
  std::mt19937 rng(23);
  for (int i = 0; i < 200; ++i) {
    Catalog cat = randomCatalog(rng);
    CubeQuery q = randomQuery(rng, cat);
    Signature direct = querySignature(cat, q);
    Signature viaDetailed = querySignatureViaDetailed(cat, q);
    CHECK(signatureEquals(direct, viaDetailed));
  }
}

TEST_CASE("coverage splits a signature against a benchmark") {
  const Catalog& cat = taxesCatalog();
  CubeQuery q = fixtureQuery(cat, "taxes/queries/q_intersect.cq");
  CubeQuery base = fixtureQuery(cat, "taxes/queries/q_monthly.cq");
  CoverageReport rep = coveredAndNovel(cat, q, base);
  CHECK(signatureCount(rep.covered) + signatureCount(rep.novel) ==
        signatureCount(querySignature(cat, q)));
  CHECK(signatureCount(rep.covered) == 36);

  CubeQuery yearly = fixtureQuery(cat, "taxes/queries/q_rollup_year.cq");
  CHECK_THROWS_AS(coveredAndNovel(cat, yearly, base), Error);
}
