#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubealg/catalog.hpp"

namespace cubealg {

enum class AggFn { Sum, Min, Max, Count, Avg };

const char* aggFnName(AggFn fn);
std::optional<AggFn> parseAggFn(std::string_view name);

struct AggMeasure {
  std::string name;    // output column name
  AggFn fn;
  std::string source;  // measure of the detailed dataset

  bool operator==(const AggMeasure&) const = default;
};

// One selection atom in normal form: an IN set over members of one level.
// The value set is ordinal-sorted and duplicate-free; it may be empty only as
// the outcome of query set operations (the parser rejects empty sets).
struct Atom {
  int dim = -1;
  LevelIndex level = kNoLevel;
  std::vector<MemberIndex> values;

  bool operator==(const Atom&) const = default;
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

// A cube query in canonical form over one catalog: exactly one atom and one
// grouping level per dimension, in catalog dimension order, plus at least one
// aggregate measure.  Dimensions without an explicit filter carry the
// top-level atom ALL IN {all}; a grouping level of top() means the dimension
// is collapsed in the result.
struct CubeQuery {
  std::string name;     // identifier only; ignored by query equality
  std::string dataset;
  std::vector<Atom> atoms;
  std::vector<LevelIndex> groupers;
  std::vector<AggMeasure> measures;
};

bool sameQueryExpression(const CubeQuery& a, const CubeQuery& b);

// A sequence of previously answered queries over one dataset.
struct QuerySession {
  std::vector<CubeQuery> queries;
};

// --- Normalization ----------------------------------------------------------

// Detailed proxy of one atom: the equivalent IN set at the bottom level
// (the union of the descendant sets of the atom's values, sorted).
std::vector<MemberIndex> atomDetailedValues(const Catalog& cat, const Atom& a);
Atom atomToDetailed(const Catalog& cat, const Atom& a);

// Expands a comparison atom into the equivalent detailed IN set, following
// the member order of the bottom level.  Range operators require an ordered
// dimension (OrderRequired otherwise); Eq/Ne work on any dimension.
Atom comparisonToDetailed(const Catalog& cat, int dim, LevelIndex level,
                          CmpOp op, MemberIndex value);

// Canonicalizes a query in place: validates every reference against the
// catalog, fills missing dimensions with top-level atoms, sorts and dedupes
// value sets, and orders atoms/groupers by catalog dimension order.
// Idempotent.  Throws UnknownDimension/UnknownLevel/ValueOutsideDomain/
// UnknownMeasure on bad references.
CubeQuery normalized(const Catalog& cat, CubeQuery q);

// Detailed membership test, one bitmap per dimension: detailedSelector(q)[d]
// marks the bottom-level ordinals admitted by q's atom on dimension d.
std::vector<std::vector<bool>> detailedSelector(const Catalog& cat,
                                                const CubeQuery& q);

// --- Classic cube operators -------------------------------------------------

// Replaces the grouping level on one dimension; rollUp moves it up the
// lattice, drillDown moves it down (LevelsNotComparable otherwise).
CubeQuery rollUp(const Catalog& cat, const CubeQuery& q, int dim, LevelIndex to);
CubeQuery drillDown(const Catalog& cat, const CubeQuery& q, int dim,
                    LevelIndex to);

// Conjoins one more atom onto the selection condition.  Same-level atoms
// intersect value sets; mixed levels conjoin at the bottom level through the
// detailed proxies.
CubeQuery slice(const Catalog& cat, const CubeQuery& q, const Atom& extra);

CubeQuery addMeasure(const Catalog& cat, const CubeQuery& q, AggMeasure m);
CubeQuery removeMeasure(const Catalog& cat, const CubeQuery& q,
                        const std::string& outputName);

// Joins two queries over the same dataset and grouping levels: the result
// carries the conjunction of the two conditions and both measure lists.
CubeQuery drillAcrossInner(const Catalog& cat, const CubeQuery& a,
                           const CubeQuery& b);

// Set operations over the selection conditions of two schema-compatible
// queries, dimension by dimension: at a shared level directly on the value
// sets, otherwise on the detailed proxies at the bottom level.
CubeQuery queryUnion(const Catalog& cat, const CubeQuery& a, const CubeQuery& b);
CubeQuery queryIntersect(const Catalog& cat, const CubeQuery& a,
                         const CubeQuery& b);
CubeQuery queryDifference(const Catalog& cat, const CubeQuery& a,
                          const CubeQuery& b);

}  // namespace cubealg
