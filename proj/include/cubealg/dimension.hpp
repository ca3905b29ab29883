#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cubealg/errors.hpp"

namespace cubealg {

using LevelIndex = int;
using MemberIndex = std::int32_t;

inline constexpr LevelIndex kNoLevel = -1;
inline constexpr MemberIndex kNoMember = -1;

struct LevelInfo {
  std::string name;
  std::string annotation;  // inert free-form note, carried but never interpreted
};

enum class ViolationKind {
  NoUniqueBottom,
  NoUniqueTop,
  CyclicOrder,
  NotALattice,
  BadTopDomain,
  DomainOverlap,
  MissingAncestor,
  InconsistentAncestor,
  PathInconsistency,
  NonMonotone,
};

const char* violationKindName(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string dimension;
  std::string detail;  // names the condition and the offending levels/members
};

// A dimension: a lattice of levels with a unique bottom (detailed) level and a
// unique top level whose domain is a single member, plus per-level member
// domains and ancestor functions along the lattice edges.  Instances are
// immutable once built; ancestor/descendant maps for every comparable level
// pair are precomputed, so anc() and desc() are O(1) lookups.
class Dimension {
 public:
  const std::string& name() const { return name_; }
  bool ordered() const { return ordered_; }

  // Levels -----------------------------------------------------------------
  int levelCount() const { return static_cast<int>(levels_.size()); }
  const LevelInfo& levelInfo(LevelIndex l) const { return levels_[l]; }
  const std::string& levelName(LevelIndex l) const { return levels_[l].name; }
  LevelIndex bottom() const { return bottom_; }
  LevelIndex top() const { return top_; }

  LevelIndex findLevel(std::string_view name) const noexcept;
  LevelIndex level(std::string_view name) const;  // throws UnknownLevel

  // Partial order on levels.  leq(a, b) holds when a is at or below b.
  bool leq(LevelIndex a, LevelIndex b) const { return leq_[a][b]; }
  bool comparable(LevelIndex a, LevelIndex b) const {
    return leq_[a][b] || leq_[b][a];
  }
  bool isChain() const { return chain_; }

  // Longest edge path from the bottom level.
  int height(LevelIndex l) const { return height_[l]; }

  // Shortest common-ancestor round trip between two levels: the minimum over
  // common upper bounds A of edges(a up to A) + edges(b up to A).
  int lcaPathLength(LevelIndex a, LevelIndex b) const;

  // Largest lcaPathLength over all level pairs.
  int latticeDiameter() const { return diameter_; }

  const std::vector<std::pair<LevelIndex, LevelIndex>>& edges() const {
    return edges_;
  }

  // Members ----------------------------------------------------------------
  int memberCount() const { return static_cast<int>(values_.size()); }
  int levelSize(LevelIndex l) const {
    return levelEnd_[l] - levelStart_[l];
  }
  // Member ids of one level are contiguous and ordinal-ordered.
  MemberIndex memberAt(LevelIndex l, int ordinal) const {
    return levelStart_[l] + ordinal;
  }
  const std::string& memberValue(MemberIndex m) const { return values_[m]; }
  LevelIndex memberLevel(MemberIndex m) const { return memberLevel_[m]; }
  int ordinal(MemberIndex m) const { return m - levelStart_[memberLevel_[m]]; }

  MemberIndex findMember(std::string_view value) const noexcept;
  MemberIndex member(std::string_view value) const;  // throws UnknownMember
  // Member lookup restricted to one level; throws ValueOutsideDomain when the
  // value exists in the dimension but at a different level.
  MemberIndex memberAtLevel(LevelIndex l, std::string_view value) const;

  std::vector<MemberIndex> domain(LevelIndex l) const;

  // Ancestor of v (a member of `from`) at level `to`; requires from below-or-equal to.
  MemberIndex anc(LevelIndex from, LevelIndex to, MemberIndex v) const;

  // Descendants of v (a member of `from`) at level `to`; requires to below-or-equal from.
  // The returned vector is ordinal-sorted.
  const std::vector<MemberIndex>& desc(LevelIndex from, LevelIndex to,
                                       MemberIndex v) const;

 private:
  friend class DimensionBuilder;

  struct PairMaps {
    // anc[ordinal of lower-level member] -> member id at the higher level
    std::vector<MemberIndex> anc;
    // desc[ordinal of higher-level member] -> sorted lower-level member ids
    std::vector<std::vector<MemberIndex>> desc;
  };

  const PairMaps& pair(LevelIndex lo, LevelIndex hi) const;

  std::string name_;
  bool ordered_ = false;
  bool chain_ = false;
  std::vector<LevelInfo> levels_;
  std::vector<std::pair<LevelIndex, LevelIndex>> edges_;  // (child, parent)
  LevelIndex bottom_ = kNoLevel;
  LevelIndex top_ = kNoLevel;
  std::vector<std::vector<bool>> leq_;
  std::vector<int> height_;
  std::vector<std::vector<int>> upDist_;  // min edge count going up, -1 if !leq
  int diameter_ = 0;

  std::vector<std::string> values_;     // member id -> value
  std::vector<LevelIndex> memberLevel_;  // member id -> level
  std::vector<int> levelStart_, levelEnd_;
  std::vector<std::pair<std::string, MemberIndex>> valueIndex_;  // sorted

  // pairs_[lo * levelCount + hi], present when lo is below-or-equal hi
  std::vector<std::unique_ptr<PairMaps>> pairs_;
};

// Accumulates raw declarations for one dimension, checks every lattice and
// member invariant, and produces an immutable Dimension.  validate() returns
// the violations as data; build() throws ValidationFailed unless clean.
class DimensionBuilder {
 public:
  explicit DimensionBuilder(std::string name) : name_(std::move(name)) {}

  DimensionBuilder& setOrdered(bool ordered) {
    ordered_ = ordered;
    return *this;
  }

  // Levels are declared bottom-up; the first declared level is the candidate
  // bottom only by convention, the real bottom/top are derived from the order.
  LevelIndex addLevel(const std::string& name, const std::string& annotation = "");
  DimensionBuilder& addEdge(const std::string& child, const std::string& parent);

  // Declares a member; ordinals follow declaration order within the level.
  // Re-declaring the same (level, value) pair is a no-op.
  DimensionBuilder& addMember(const std::string& level, const std::string& value);

  // Declares anc(child value) = parent value along the edge child->parent.
  // Conflicting declarations become InconsistentAncestor violations.
  DimensionBuilder& setAncestor(const std::string& childLevel,
                                const std::string& parentLevel,
                                const std::string& childValue,
                                const std::string& parentValue);

  bool hasLevel(const std::string& name) const;

  // Adds a top level named ALL with single member "all" above every maximal
  // level, unless a single-member top already exists.
  DimensionBuilder& ensureAllLevel();

  std::vector<Violation> validate() const;
  Dimension build() const;  // throws Error(ValidationFailed) listing violations

 private:
  struct RawMember {
    std::string value;
    int level;
  };
  struct RawEdge {
    int child, parent;
    // mapping: child member slot -> parent member slot, -1 when undeclared
    std::vector<int> anc;
  };

  int levelIndex(const std::string& name) const;
  int memberSlot(int level, const std::string& value) const;

  void checkOrder(std::vector<Violation>& out,
                  std::vector<std::vector<bool>>& leq) const;
  void checkMembers(std::vector<Violation>& out) const;
  void checkPaths(std::vector<Violation>& out,
                  const std::vector<std::vector<bool>>& leq) const;
  void checkMonotone(std::vector<Violation>& out) const;

  std::vector<std::vector<int>> allPaths(int from, int to) const;
  std::vector<int> composePath(const std::vector<int>& path) const;

  std::string name_;
  bool ordered_ = false;
  std::vector<LevelInfo> levels_;
  std::vector<RawEdge> edges_;
  std::vector<std::vector<RawMember>> members_;  // per level, ordinal order
  std::vector<std::string> conflicts_;
};

}  // namespace cubealg
