#pragma once

#include <cstdint>
#include <vector>

#include "cubealg/query.hpp"

namespace cubealg {

inline constexpr std::uint64_t kDefaultMaterializeCap = 1'000'000;

// A set of coordinate tuples, one coordinate per dimension at a fixed level.
// FACTORED keeps the set as a Cartesian product of per-dimension value sets;
// EXPLICIT keeps the tuples themselves, lexicographically sorted.  Semantic
// equality is tuple-set equality regardless of form.
struct Signature {
  enum class Form { Factored, Explicit };

  std::vector<LevelIndex> levels;  // per dimension, catalog order
  Form form = Form::Factored;
  std::vector<std::vector<MemberIndex>> factors;  // Factored: per-dim values
  std::vector<std::vector<MemberIndex>> tuples;   // Explicit: sorted tuples

  bool factored() const { return form == Form::Factored; }
};

// Canonical factored signature: a factored set with any empty factor is the
// empty set, normalized to all-empty factors.
Signature makeFactored(std::vector<LevelIndex> levels,
                       std::vector<std::vector<MemberIndex>> factors);
Signature makeExplicit(std::vector<LevelIndex> levels,
                       std::vector<std::vector<MemberIndex>> tuples);

std::uint64_t signatureCount(const Signature& s);
bool signatureEmpty(const Signature& s);

// Expands to the explicit tuple list; throws MaterializationCap when the
// tuple count exceeds `cap`.
std::vector<std::vector<MemberIndex>> materialize(
    const Signature& s, std::uint64_t cap = kDefaultMaterializeCap);

bool signatureEquals(const Signature& a, const Signature& b);
bool signatureContains(const Signature& s, const std::vector<MemberIndex>& t);

// Set operations; both operands must sit at the same levels (LevelMismatch).
// Intersection preserves the factored form; union and difference of factored
// operands may demote the result to explicit form.
Signature sigIntersect(const Signature& a, const Signature& b,
                       std::uint64_t cap = kDefaultMaterializeCap);
Signature sigUnion(const Signature& a, const Signature& b,
                   std::uint64_t cap = kDefaultMaterializeCap);
Signature sigDifference(const Signature& a, const Signature& b,
                        std::uint64_t cap = kDefaultMaterializeCap);

// The grouper-level image of one atom: the atom's value set restricted or
// completed to `grouper`, i.e. descendants when the grouper sits at or below
// the atom's level, ancestors when it sits above, and the image through the
// bottom level when the two are incomparable.
std::vector<MemberIndex> gdomValues(const Catalog& cat, const Atom& atom,
                                    LevelIndex grouper);

// Signature of the selection condition: the admitted members at each atom's
// own level (factored).
Signature conditionSignature(const Catalog& cat, const CubeQuery& q);

// The same condition pushed down to the bottom levels (factored).
Signature detailedSignature(const Catalog& cat, const CubeQuery& q);

// Coordinates the query can produce, at the grouping levels, built
// dimension-wise from gdomValues.  Stays factored.
Signature querySignature(const Catalog& cat, const CubeQuery& q);

// Same tuple set built the long way round: materialize the detailed
// signature and roll every tuple up to the grouping levels.  Exists as an
// independent construction; the two routes must agree.
Signature querySignatureViaDetailed(const Catalog& cat, const CubeQuery& q,
                                    std::uint64_t cap = kDefaultMaterializeCap);

struct CoverageReport {
  Signature covered;
  Signature novel;
};

// Splits q's signature against a benchmark: covered holds the coordinates
// both queries can produce, novel holds q's remainder.  Both queries must
// group at the same levels.
CoverageReport coveredAndNovel(const Catalog& cat, const CubeQuery& q,
                               const CubeQuery& qstar,
                               std::uint64_t cap = kDefaultMaterializeCap);

}  // namespace cubealg
