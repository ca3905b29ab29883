#include "cubealg/compare.hpp"

#include <algorithm>

#include "cubealg/sorted_set.hpp"

namespace cubealg {

namespace {

void requireSameShape(const Catalog& cat, const CubeQuery& a,
                      const CubeQuery& b) {
  const size_t n = static_cast<size_t>(cat.dimensionCount());
  if (a.atoms.size() != n || b.atoms.size() != n ||
      a.groupers.size() != n || b.groupers.size() != n) {
    fail(ErrorKind::SchemaMismatch,
         "queries do not share the catalog's dimension list");
  }
}

// Aggregate measures as a name-free multiset of (function, source) pairs.
std::vector<std::pair<AggFn, std::string>> measureBag(const CubeQuery& q) {
  std::vector<std::pair<AggFn, std::string>> bag;
  bag.reserve(q.measures.size());
  for (const AggMeasure& m : q.measures) bag.emplace_back(m.fn, m.source);
  std::sort(bag.begin(), bag.end());
  return bag;
}

std::string describeAtom(const Catalog& cat, const Atom& a) {
  const Dimension& d = cat.dimension(a.dim);
  std::string s = d.name() + "." + d.levelName(a.level) + " in {";
  for (size_t i = 0; i < a.values.size() && i < 4; ++i) {
    if (i) s += ", ";
    s += d.memberValue(a.values[i]);
  }
  if (a.values.size() > 4) s += ", ...";
  return s + "}";
}

}  // namespace

RollabilityReport isPerfectlyRollable(const Catalog& cat, const Atom& atom,
                                      LevelIndex grouper) {
  const Dimension& d = cat.dimension(atom.dim);
  if (d.leq(grouper, atom.level)) return {true, std::nullopt};

  // The filter sits below (or beside) the grouping level: every touched
  // grouping member must contribute its complete detailed descendant set.
  std::vector<MemberIndex> v0 = atomDetailedValues(cat, atom);
  std::vector<MemberIndex> touched;
  touched.reserve(v0.size());
  for (MemberIndex m : v0) touched.push_back(d.anc(d.bottom(), grouper, m));
  sortUnique(touched);
  for (MemberIndex u : touched) {
    if (!isSubset(d.desc(grouper, d.bottom(), u), v0)) {
      return {false, u};
    }
  }
  return {true, std::nullopt};
}

Verdict foundationalContains(const Catalog& cat, const CubeQuery& qn,
                             const CubeQuery& qb) {
  requireSameShape(cat, qn, qb);
  if (qn.dataset != qb.dataset || qn.groupers != qb.groupers ||
      measureBag(qn) != measureBag(qb)) {
    fail(ErrorKind::SchemaMismatch,
         "detailed-area containment expects equal datasets, grouping levels "
         "and aggregate measures");
  }
  Verdict v;
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    const Dimension& d = cat.dimension(dim);
    bool ok = isSubset(atomDetailedValues(cat, qn.atoms[dim]),
                       atomDetailedValues(cat, qb.atoms[dim]));
    v.add("V0-subset", ok,
          d.name() + ": detailed filter values of qn " +
              (ok ? "are contained in" : "escape") + " qb's");
  }
  return v;
}

Verdict foundationalContainsFast(const Catalog& cat, const CubeQuery& qn,
                                 const CubeQuery& qb) {
  requireSameShape(cat, qn, qb);
  if (qn.dataset != qb.dataset || qn.groupers != qb.groupers ||
      measureBag(qn) != measureBag(qb)) {
    fail(ErrorKind::SchemaMismatch,
         "detailed-area containment expects equal datasets, grouping levels "
         "and aggregate measures");
  }
  Verdict v;
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    const Dimension& d = cat.dimension(dim);
    const Atom& an = qn.atoms[dim];
    const Atom& ab = qb.atoms[dim];
    if (!d.leq(an.level, ab.level)) {
      v.add("ancestor-membership", false,
            d.name() + ": filter level " + d.levelName(an.level) +
                " is not at or below " + d.levelName(ab.level) +
                ", quick test cannot decide");
      continue;
    }
    bool ok = true;
    std::string culprit;
    for (MemberIndex m : an.values) {
      MemberIndex up = d.anc(an.level, ab.level, m);
      if (!std::binary_search(ab.values.begin(), ab.values.end(), up)) {
        ok = false;
        culprit = d.memberValue(m);
        break;
      }
    }
    v.add("ancestor-membership", ok,
          ok ? d.name() + ": every filter value rolls up into qb's value set"
             : d.name() + ": '" + culprit +
                   "' rolls up outside qb's value set");
  }
  return v;
}

namespace {

// Condition 1 shared by the same-schema theorems: equal dataset, grouping
// levels and (name-free) aggregate measures.
bool condition1(const Catalog& cat, const CubeQuery& a, const CubeQuery& b,
                Verdict& v) {
  requireSameShape(cat, a, b);
  bool ok = a.dataset == b.dataset;
  std::string what = ok ? "" : "datasets differ";
  if (ok && a.groupers != b.groupers) {
    ok = false;
    what = "grouping levels differ";
  }
  if (ok && measureBag(a) != measureBag(b)) {
    ok = false;
    what = "aggregate measures differ";
  }
  v.add("1", ok,
        ok ? "same dataset, grouping levels and aggregate measures" : what);
  return ok;
}

}  // namespace

Verdict sameLevelContains(const Catalog& cat, const CubeQuery& qn,
                          const CubeQuery& qb) {
  Verdict v;
  if (!condition1(cat, qn, qb, v)) return v;
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    const Dimension& d = cat.dimension(dim);
    const Atom& an = qn.atoms[dim];
    const Atom& ab = qb.atoms[dim];
    if (qn.groupers[dim] == d.top()) {
      // Collapsed dimension: the two filters must coincide exactly.
      bool ok = an == ab;
      v.add("2a", ok,
            d.name() + ": " +
                (ok ? "identical filters on the collapsed dimension"
                    : "filters differ (" + describeAtom(cat, an) + " vs " +
                          describeAtom(cat, ab) + ")"));
      continue;
    }
    LevelIndex g = qn.groupers[dim];
    auto rn = isPerfectlyRollable(cat, an, g);
    auto rb = isPerfectlyRollable(cat, ab, g);
    bool ok = rn.rollable && rb.rollable;
    std::string detail = d.name() + ": ";
    if (ok) {
      detail += "both filters roll perfectly to " + d.levelName(g);
    } else {
      const auto& bad = rn.rollable ? rb : rn;
      detail += std::string(rn.rollable ? "qb" : "qn") +
                " filter is not perfectly rollable";
      if (bad.witness) {
        detail += " (member '" + d.memberValue(*bad.witness) +
                  "' is only partially covered)";
      }
    }
    v.add("2b(i)", ok, detail);
    bool sub = isSubset(atomDetailedValues(cat, an),
                        atomDetailedValues(cat, ab));
    v.add("2b(ii)", sub,
          d.name() + ": detailed filter values of qn " +
              (sub ? "are contained in" : "escape") + " qb's");
  }
  return v;
}

Verdict sameLevelIntersects(const Catalog& cat, const CubeQuery& q1,
                            const CubeQuery& q2) {
  Verdict v;
  if (!condition1(cat, q1, q2, v)) return v;
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    const Dimension& d = cat.dimension(dim);
    const Atom& a1 = q1.atoms[dim];
    const Atom& a2 = q2.atoms[dim];
    LevelIndex g = q1.groupers[dim];
    if (g == d.top()) {
      bool ok = a1 == a2;
      v.add("2a", ok,
            d.name() + ": " +
                (ok ? "identical filters on the collapsed dimension"
                    : "filters differ (" + describeAtom(cat, a1) + " vs " +
                          describeAtom(cat, a2) + ")"));
    } else {
      auto r1 = isPerfectlyRollable(cat, a1, g);
      auto r2 = isPerfectlyRollable(cat, a2, g);
      bool ok = r1.rollable && r2.rollable;
      std::string detail = d.name() + ": ";
      if (ok) {
        detail += "both filters roll perfectly to " + d.levelName(g);
      } else {
        const auto& bad = r1.rollable ? r2 : r1;
        detail += std::string(r1.rollable ? "q2" : "q1") +
                  " filter is not perfectly rollable";
        if (bad.witness) {
          detail += " (member '" + d.memberValue(*bad.witness) +
                    "' is only partially covered)";
        }
      }
      v.add("2b", ok, detail);
    }
    bool overlap = intersects(gdomValues(cat, a1, g), gdomValues(cat, a2, g));
    v.add("2c", overlap,
          d.name() + ": grouping-level images " +
              (overlap ? "overlap" : "are disjoint"));
  }
  return v;
}

namespace {

std::string failedConditions(const Verdict& v) {
  std::string out;
  for (const TraceEntry& t : v.trace) {
    if (t.pass) continue;
    if (!out.empty()) out += ", ";
    out += t.condition + " (" + t.detail + ")";
  }
  return out;
}

}  // namespace

CoverageReport enumerateContainment(const Catalog& cat, const CubeQuery& qn,
                                    const CubeQuery& qb, std::uint64_t cap) {
  Verdict v = sameLevelContains(cat, qn, qb);
  if (!v.holds) {
    fail(ErrorKind::TheoremNotSatisfied,
         "containment not established: " + failedConditions(v));
  }
  return coveredAndNovel(cat, qn, qb, cap);
}

CoverageReport enumerateIntersection(const Catalog& cat, const CubeQuery& q,
                                     const CubeQuery& qstar,
                                     std::uint64_t cap) {
  Verdict v = sameLevelIntersects(cat, q, qstar);
  if (!v.holds) {
    fail(ErrorKind::TheoremNotSatisfied,
         "intersection not established: " + failedConditions(v));
  }
  return coveredAndNovel(cat, q, qstar, cap);
}

CoverageReport partialCoverage(const Catalog& cat, const QuerySession& session,
                               const CubeQuery& q, std::uint64_t cap) {
  Signature qPlus = querySignature(cat, q);
  CoverageReport r;
  r.covered = makeExplicit(q.groupers, {});
  r.novel = qPlus;
  for (const CubeQuery& qstar : session.queries) {
    if (qstar.dataset != q.dataset || qstar.groupers != q.groupers) continue;
    if (!sameLevelIntersects(cat, q, qstar).holds) continue;
    Signature shared = sigIntersect(querySignature(cat, qstar), qPlus, cap);
    if (signatureEmpty(shared)) continue;
    r.covered = sigUnion(r.covered, shared, cap);
    r.novel = sigDifference(r.novel, shared, cap);
    if (signatureEmpty(r.novel)) break;
  }
  return r;
}

bool syntacticMembership(const Catalog& cat, const QuerySession& session,
                         const CubeQuery& q) {
  (void)cat;
  for (const CubeQuery& member : session.queries) {
    if (sameQueryExpression(member, q)) return true;
  }
  return false;
}

}  // namespace cubealg
