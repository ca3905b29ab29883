#pragma once

#include <optional>

#include "cubealg/compare.hpp"
#include "cubealg/executor.hpp"

namespace cubealg {

// Distributive aggregates can be recomputed from partial aggregates of a
// partition; avg cannot.
bool isDistributive(AggFn fn);

// The function that merges partial aggregates of `fn`: count re-aggregates
// by sum, the others by themselves.  Throws InvalidArgument for avg.
AggFn facilitator(AggFn fn);

// Equivalent atom at `level`, when one exists: requires the atom to roll
// perfectly to `level`, in which case the image of its values up there picks
// exactly the same detailed area.  nullopt otherwise.
std::optional<Atom> raiseAtomToLevel(const Catalog& cat, const Atom& atom,
                                     LevelIndex level);

// Decides whether a cached result of qb can answer qn, by conditions only:
// (1) shared dataset; (2) every aggregate of qn pairs 1:1 with an aggregate
// of qb by (function, source), all distributive; (3) simple conditions;
// (4) each filter sits at or above its grouping level, after salvaging
// perfectly rollable lower filters to their grouping-level equivalent;
// (5) qb groups at or below qn on every dimension; (6) qn's filter image at
// qb's grouping level stays inside qb's own image there.
Verdict checkUsable(const Catalog& cat, const CubeQuery& qn,
                    const CubeQuery& qb);

// Answers qn from a cached result of qb: filters the cached cells through
// qn's condition at qb's grouping levels, regroups them at qn's levels, and
// merges measures with their facilitators.  Throws NotUsable when checkUsable
// fails and StaleResult when qbResult does not carry qb's schema.
QueryResult rewriteAndAnswer(const Catalog& cat, const CubeQuery& qn,
                             const CubeQuery& qb, const QueryResult& qbResult);

// Streamlined checks for queries derived from q by one operator.

// Is rollUp(q, dim, to) answerable from q's result?  Needs distributive
// aggregates; the rollability check is skipped when the target level sits at
// or below the filter level.
Verdict rollUpUsability(const Catalog& cat, const CubeQuery& q, int dim,
                        LevelIndex to);

// Is slice(q, extra) answerable from q's result?  Fast path: an extra filter
// at the existing filter's level, value-subset, at or above the grouping
// level.  Anything else falls back to the full check.
Verdict extraFilterUsability(const Catalog& cat, const CubeQuery& q,
                             const Atom& extra);

}  // namespace cubealg
