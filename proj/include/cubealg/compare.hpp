#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubealg/signature.hpp"

namespace cubealg {

struct TraceEntry {
  std::string condition;  // which check this entry reports, e.g. "2b(i)"
  bool pass;
  std::string detail;
};

// Outcome of a syntactic decision procedure: the boolean plus one trace entry
// per evaluated condition, so a failure names what broke.
struct Verdict {
  bool holds = true;
  std::vector<TraceEntry> trace;

  void add(std::string condition, bool pass, std::string detail) {
    holds = holds && pass;
    trace.push_back({std::move(condition), pass, std::move(detail)});
  }
};

struct RollabilityReport {
  bool rollable = false;
  // Present iff not rollable from comparable levels: the first grouping-level
  // member whose detailed descendants are not all admitted by the filter.
  std::optional<MemberIndex> witness;
};

// Perfect rollability of a filter atom with respect to a grouping level:
// either the grouping level sits at or below the atom's level, or every
// grouping-level member touched by the filter contributes all of its
// detailed descendants.
RollabilityReport isPerfectlyRollable(const Catalog& cat, const Atom& atom,
                                      LevelIndex grouper);

// Exact detailed-area containment: qn's result is derivable from qb's
// detailed area iff, per dimension, qn's detailed filter values are a subset
// of qb's.  Grouping levels and aggregates do not matter here, but the two
// queries must share the dataset.
Verdict foundationalContains(const Catalog& cat, const CubeQuery& qn,
                             const CubeQuery& qb);

// One-directional quick test: every filter value of qn must have its
// ancestor at qb's filter level inside qb's value set.  Sufficient but not
// necessary; incomparable filter levels report false, never an error.
Verdict foundationalContainsFast(const Catalog& cat, const CubeQuery& qn,
                                 const CubeQuery& qb);

// Same-schema containment test: condition 1 (same dataset, grouping levels
// and aggregate measures), 2a (identical atoms on collapsed dimensions), and
// per grouped dimension 2b(i) rollability of both filters plus 2b(ii)
// detailed value-set inclusion.  Sound, not complete.
Verdict sameLevelContains(const Catalog& cat, const CubeQuery& qn,
                          const CubeQuery& qb);

// Same-schema intersection test: condition 1 as above, 2a on collapsed
// dimensions, 2b rollability of both filters on grouped dimensions, and 2c
// non-empty overlap of the grouping-level images on every dimension.
Verdict sameLevelIntersects(const Catalog& cat, const CubeQuery& q1,
                            const CubeQuery& q2);

// Coordinate enumeration guarded by the matching theorem; throws
// TheoremNotSatisfied when the verdict does not hold.  Both delegate to
// coveredAndNovel with the subject query first.
CoverageReport enumerateContainment(const Catalog& cat, const CubeQuery& qn,
                                    const CubeQuery& qb,
                                    std::uint64_t cap = kDefaultMaterializeCap);
CoverageReport enumerateIntersection(const Catalog& cat, const CubeQuery& q,
                                     const CubeQuery& qstar,
                                     std::uint64_t cap = kDefaultMaterializeCap);

// Folds a session of previously answered queries over q's signature: every
// session member that provably intersects q contributes its shared
// coordinates.  Stops early once nothing novel remains.
CoverageReport partialCoverage(const Catalog& cat, const QuerySession& session,
                               const CubeQuery& q,
                               std::uint64_t cap = kDefaultMaterializeCap);

// Expression-level membership: is a normalized query already in the session,
// identical atom for atom?  Purely syntactic; equal results at different
// levels do not count.
bool syntacticMembership(const Catalog& cat, const QuerySession& session,
                         const CubeQuery& q);

}  // namespace cubealg
