#include "cubealg/dimension.hpp"

#include <algorithm>
#include <sstream>

namespace cubealg {

const char* violationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::NoUniqueBottom: return "NoUniqueBottom";
    case ViolationKind::NoUniqueTop: return "NoUniqueTop";
    case ViolationKind::CyclicOrder: return "CyclicOrder";
    case ViolationKind::NotALattice: return "NotALattice";
    case ViolationKind::BadTopDomain: return "BadTopDomain";
    case ViolationKind::DomainOverlap: return "DomainOverlap";
    case ViolationKind::MissingAncestor: return "MissingAncestor";
    case ViolationKind::InconsistentAncestor: return "InconsistentAncestor";
    case ViolationKind::PathInconsistency: return "PathInconsistency";
    case ViolationKind::NonMonotone: return "NonMonotone";
  }
  return "Unknown";
}

const char* errorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnknownDimension: return "UnknownDimension";
    case ErrorKind::UnknownLevel: return "UnknownLevel";
    case ErrorKind::UnknownMember: return "UnknownMember";
    case ErrorKind::UnknownMeasure: return "UnknownMeasure";
    case ErrorKind::ValueOutsideDomain: return "ValueOutsideDomain";
    case ErrorKind::LevelsNotComparable: return "LevelsNotComparable";
    case ErrorKind::OrderRequired: return "OrderRequired";
    case ErrorKind::DuplicateCoordinates: return "DuplicateCoordinates";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::SchemaMismatch: return "SchemaMismatch";
    case ErrorKind::LevelMismatch: return "LevelMismatch";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::IncompatibleSchemas: return "IncompatibleSchemas";
    case ErrorKind::MaterializationCap: return "MaterializationCap";
    case ErrorKind::TheoremNotSatisfied: return "TheoremNotSatisfied";
    case ErrorKind::NotUsable: return "NotUsable";
    case ErrorKind::StaleResult: return "StaleResult";
    case ErrorKind::ValidationFailed: return "ValidationFailed";
  }
  return "Error";
}

// ---------------------------------------------------------------------------
// Dimension accessors

LevelIndex Dimension::findLevel(std::string_view name) const noexcept {
  for (int i = 0; i < levelCount(); ++i) {
    if (levels_[i].name == name) return i;
  }
  return kNoLevel;
}

LevelIndex Dimension::level(std::string_view name) const {
  LevelIndex l = findLevel(name);
  if (l == kNoLevel) {
    fail(ErrorKind::UnknownLevel,
         "no level '" + std::string(name) + "' in dimension " + name_);
  }
  return l;
}

MemberIndex Dimension::findMember(std::string_view value) const noexcept {
  auto it = std::lower_bound(
      valueIndex_.begin(), valueIndex_.end(), value,
      [](const auto& entry, std::string_view v) { return entry.first < v; });
  if (it == valueIndex_.end() || it->first != value) return kNoMember;
  return it->second;
}

MemberIndex Dimension::member(std::string_view value) const {
  MemberIndex m = findMember(value);
  if (m == kNoMember) {
    fail(ErrorKind::UnknownMember,
         "no member '" + std::string(value) + "' in dimension " + name_);
  }
  return m;
}

MemberIndex Dimension::memberAtLevel(LevelIndex l, std::string_view value) const {
  MemberIndex m = member(value);
  if (memberLevel_[m] != l) {
    fail(ErrorKind::ValueOutsideDomain,
         "member '" + std::string(value) + "' of dimension " + name_ +
             " belongs to level " + levelName(memberLevel_[m]) + ", not " +
             levelName(l));
  }
  return m;
}

std::vector<MemberIndex> Dimension::domain(LevelIndex l) const {
  std::vector<MemberIndex> out(levelSize(l));
  for (int i = 0; i < static_cast<int>(out.size()); ++i) {
    out[i] = levelStart_[l] + i;
  }
  return out;
}

const Dimension::PairMaps& Dimension::pair(LevelIndex lo, LevelIndex hi) const {
  return *pairs_[static_cast<size_t>(lo) * levelCount() + hi];
}

MemberIndex Dimension::anc(LevelIndex from, LevelIndex to, MemberIndex v) const {
  if (!leq(from, to)) {
    fail(ErrorKind::LevelsNotComparable,
         name_ + ": level " + levelName(from) + " is not at or below " +
             levelName(to));
  }
  if (memberLevel_[v] != from) {
    fail(ErrorKind::InvalidArgument,
         name_ + ": member '" + values_[v] + "' is not at level " +
             levelName(from));
  }
  return pair(from, to).anc[ordinal(v)];
}

const std::vector<MemberIndex>& Dimension::desc(LevelIndex from, LevelIndex to,
                                                MemberIndex v) const {
  if (!leq(to, from)) {
    fail(ErrorKind::LevelsNotComparable,
         name_ + ": level " + levelName(to) + " is not at or below " +
             levelName(from));
  }
  if (memberLevel_[v] != from) {
    fail(ErrorKind::InvalidArgument,
         name_ + ": member '" + values_[v] + "' is not at level " +
             levelName(from));
  }
  return pair(to, from).desc[ordinal(v)];
}

int Dimension::lcaPathLength(LevelIndex a, LevelIndex b) const {
  int best = -1;
  for (int c = 0; c < levelCount(); ++c) {
    if (!leq_[a][c] || !leq_[b][c]) continue;
    int d = upDist_[a][c] + upDist_[b][c];
    if (best < 0 || d < best) best = d;
  }
  return best;  // never negative: the top level is a common ancestor
}

// ---------------------------------------------------------------------------
// DimensionBuilder

int DimensionBuilder::levelIndex(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(levels_.size()); ++i) {
    if (levels_[i].name == name) return i;
  }
  return -1;
}

bool DimensionBuilder::hasLevel(const std::string& name) const {
  return levelIndex(name) >= 0;
}

int DimensionBuilder::memberSlot(int level, const std::string& value) const {
  const auto& dom = members_[level];
  for (int i = 0; i < static_cast<int>(dom.size()); ++i) {
    if (dom[i].value == value) return i;
  }
  return -1;
}

LevelIndex DimensionBuilder::addLevel(const std::string& name,
                                      const std::string& annotation) {
  if (levelIndex(name) >= 0) {
    fail(ErrorKind::InvalidArgument,
         name_ + ": level '" + name + "' declared twice");
  }
  levels_.push_back(LevelInfo{name, annotation});
  members_.emplace_back();
  return static_cast<LevelIndex>(levels_.size()) - 1;
}

DimensionBuilder& DimensionBuilder::addEdge(const std::string& child,
                                            const std::string& parent) {
  int c = levelIndex(child), p = levelIndex(parent);
  if (c < 0 || p < 0) {
    fail(ErrorKind::UnknownLevel,
         name_ + ": edge " + child + "<" + parent + " names an undeclared level");
  }
  for (const auto& e : edges_) {
    if (e.child == c && e.parent == p) return *this;
  }
  edges_.push_back(RawEdge{c, p, {}});
  edges_.back().anc.resize(members_[c].size(), -1);
  return *this;
}

DimensionBuilder& DimensionBuilder::addMember(const std::string& level,
                                              const std::string& value) {
  int l = levelIndex(level);
  if (l < 0) {
    fail(ErrorKind::UnknownLevel,
         name_ + ": member '" + value + "' names undeclared level " + level);
  }
  if (memberSlot(l, value) >= 0) return *this;
  members_[l].push_back(RawMember{value, l});
  for (auto& e : edges_) {
    if (e.child == l) e.anc.push_back(-1);
  }
  return *this;
}

DimensionBuilder& DimensionBuilder::setAncestor(const std::string& childLevel,
                                                const std::string& parentLevel,
                                                const std::string& childValue,
                                                const std::string& parentValue) {
  addMember(childLevel, childValue);
  addMember(parentLevel, parentValue);
  int c = levelIndex(childLevel), p = levelIndex(parentLevel);
  RawEdge* edge = nullptr;
  for (auto& e : edges_) {
    if (e.child == c && e.parent == p) edge = &e;
  }
  if (edge == nullptr) {
    fail(ErrorKind::InvalidArgument,
         name_ + ": no edge " + childLevel + "<" + parentLevel);
  }
  int cs = memberSlot(c, childValue);
  int ps = memberSlot(p, parentValue);
  if (edge->anc[cs] == -1) {
    edge->anc[cs] = ps;
  } else if (edge->anc[cs] != ps) {
    conflicts_.push_back("edge " + childLevel + "<" + parentLevel +
                         ": member '" + childValue + "' maps to both '" +
                         members_[p][edge->anc[cs]].value + "' and '" +
                         parentValue + "'");
  }
  return *this;
}

DimensionBuilder& DimensionBuilder::ensureAllLevel() {
  std::vector<bool> hasOut(levels_.size(), false);
  for (const auto& e : edges_) hasOut[e.child] = true;
  std::vector<int> maximal;
  for (int i = 0; i < static_cast<int>(levels_.size()); ++i) {
    if (!hasOut[i]) maximal.push_back(i);
  }
  if (maximal.size() == 1 && members_[maximal[0]].size() == 1) return *this;

  int tl = levelIndex("ALL");
  if (tl < 0) tl = addLevel("ALL");
  if (members_[tl].empty()) addMember("ALL", "all");
  const std::string allValue = members_[tl][0].value;
  for (int m : maximal) {
    if (m == tl) continue;
    addEdge(levels_[m].name, "ALL");
    for (const auto& member : members_[m]) {
      setAncestor(levels_[m].name, "ALL", member.value, allValue);
    }
  }
  return *this;
}

void DimensionBuilder::checkOrder(std::vector<Violation>& out,
                                  std::vector<std::vector<bool>>& leq) const {
  const int n = static_cast<int>(levels_.size());
  leq.assign(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) leq[i][i] = true;
  for (const auto& e : edges_) leq[e.child][e.parent] = true;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      if (!leq[i][k]) continue;
      for (int j = 0; j < n; ++j) {
        if (leq[k][j]) leq[i][j] = true;
      }
    }
  }

  bool cyclic = false;
  for (int i = 0; i < n && !cyclic; ++i) {
    for (int j = i + 1; j < n && !cyclic; ++j) {
      if (leq[i][j] && leq[j][i]) {
        out.push_back({ViolationKind::CyclicOrder, name_,
                       "levels " + levels_[i].name + " and " + levels_[j].name +
                           " are mutually reachable"});
        cyclic = true;
      }
    }
  }
  if (cyclic) return;

  std::vector<int> bottoms, tops;
  for (int i = 0; i < n; ++i) {
    bool isBottom = true, isTop = true;
    for (int j = 0; j < n; ++j) {
      if (!leq[i][j]) isBottom = false;
      if (!leq[j][i]) isTop = false;
    }
    if (isBottom) bottoms.push_back(i);
    if (isTop) tops.push_back(i);
  }
  if (bottoms.size() != 1) {
    out.push_back({ViolationKind::NoUniqueBottom, name_,
                   "expected exactly one level below all others, found " +
                       std::to_string(bottoms.size())});
  }
  if (tops.size() != 1) {
    out.push_back({ViolationKind::NoUniqueTop, name_,
                   "expected exactly one level above all others, found " +
                       std::to_string(tops.size())});
  } else if (members_[tops[0]].size() != 1) {
    out.push_back({ViolationKind::BadTopDomain, name_,
                   "top level " + levels_[tops[0]].name + " has " +
                       std::to_string(members_[tops[0]].size()) +
                       " members, expected exactly one"});
  }

  // Join uniqueness: every level pair needs a single least upper bound.  For
  // a finite bounded order this is enough to make (levels, <=) a lattice.
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      std::vector<int> ubs;
      for (int c = 0; c < n; ++c) {
        if (leq[a][c] && leq[b][c]) ubs.push_back(c);
      }
      std::vector<int> minimal;
      for (int c : ubs) {
        bool isMinimal = true;
        for (int d : ubs) {
          if (d != c && leq[d][c]) isMinimal = false;
        }
        if (isMinimal) minimal.push_back(c);
      }
      if (minimal.size() > 1) {
        out.push_back({ViolationKind::NotALattice, name_,
                       "levels " + levels_[a].name + " and " + levels_[b].name +
                           " have no unique least upper bound"});
      }
    }
  }
}

void DimensionBuilder::checkMembers(std::vector<Violation>& out) const {
  // Domains must be pairwise disjoint across levels (and duplicate-free
  // within one; addMember already collapses exact duplicates).
  std::vector<std::pair<std::string, int>> seen;
  for (int l = 0; l < static_cast<int>(levels_.size()); ++l) {
    for (const auto& m : members_[l]) seen.emplace_back(m.value, l);
  }
  std::sort(seen.begin(), seen.end());
  for (size_t i = 1; i < seen.size(); ++i) {
    if (seen[i].first == seen[i - 1].first) {
      out.push_back({ViolationKind::DomainOverlap, name_,
                     "member '" + seen[i].first + "' appears in levels " +
                         levels_[seen[i - 1].second].name + " and " +
                         levels_[seen[i].second].name});
    }
  }

  for (const auto& e : edges_) {
    for (size_t i = 0; i < members_[e.child].size(); ++i) {
      if (e.anc[i] == -1) {
        out.push_back({ViolationKind::MissingAncestor, name_,
                       "member '" + members_[e.child][i].value +
                           "' has no ancestor along edge " +
                           levels_[e.child].name + "<" + levels_[e.parent].name});
      }
    }
  }
  for (const auto& c : conflicts_) {
    out.push_back({ViolationKind::InconsistentAncestor, name_, c});
  }
}

std::vector<std::vector<int>> DimensionBuilder::allPaths(int from, int to) const {
  // Levels per dimension are few, so plain DFS path enumeration is fine.
  std::vector<std::vector<int>> paths;
  std::vector<int> stack{from};
  struct Frame {
    int level;
    size_t nextEdge;
  };
  std::vector<Frame> frames{{from, 0}};
  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.level == to) {
      paths.push_back(stack);
      frames.pop_back();
      stack.pop_back();
      continue;
    }
    bool advanced = false;
    while (f.nextEdge < edges_.size()) {
      const auto& e = edges_[f.nextEdge++];
      if (e.child == f.level) {
        frames.push_back({e.parent, 0});
        stack.push_back(e.parent);
        advanced = true;
        break;
      }
    }
    if (!advanced && frames.back().level != to) {
      frames.pop_back();
      stack.pop_back();
    }
  }
  return paths;
}

std::vector<int> DimensionBuilder::composePath(const std::vector<int>& path) const {
  // Maps child member slot to a slot at the final level; -1 where any hop is
  // undeclared (those members are already reported by checkMembers).
  std::vector<int> map(members_[path[0]].size());
  for (size_t i = 0; i < map.size(); ++i) map[i] = static_cast<int>(i);
  for (size_t h = 0; h + 1 < path.size(); ++h) {
    const RawEdge* edge = nullptr;
    for (const auto& e : edges_) {
      if (e.child == path[h] && e.parent == path[h + 1]) edge = &e;
    }
    for (auto& slot : map) {
      if (slot != -1) slot = edge->anc[slot];
    }
  }
  return map;
}

void DimensionBuilder::checkPaths(std::vector<Violation>& out,
                                  const std::vector<std::vector<bool>>& leq) const {
  const int n = static_cast<int>(levels_.size());
  for (int lo = 0; lo < n; ++lo) {
    for (int hi = 0; hi < n; ++hi) {
      if (lo == hi || !leq[lo][hi]) continue;
      auto paths = allPaths(lo, hi);
      if (paths.size() < 2) continue;
      auto reference = composePath(paths[0]);
      for (size_t p = 1; p < paths.size(); ++p) {
        auto other = composePath(paths[p]);
        for (size_t m = 0; m < reference.size(); ++m) {
          if (reference[m] != -1 && other[m] != -1 && reference[m] != other[m]) {
            out.push_back(
                {ViolationKind::PathInconsistency, name_,
                 "member '" + members_[lo][m].value + "' reaches both '" +
                     members_[hi][reference[m]].value + "' and '" +
                     members_[hi][other[m]].value + "' at level " +
                     levels_[hi].name});
          }
        }
      }
    }
  }
}

void DimensionBuilder::checkMonotone(std::vector<Violation>& out) const {
  if (!ordered_) return;
  for (const auto& e : edges_) {
    for (size_t i = 1; i < members_[e.child].size(); ++i) {
      int a = e.anc[i - 1], b = e.anc[i];
      if (a != -1 && b != -1 && b < a) {
        out.push_back({ViolationKind::NonMonotone, name_,
                       "edge " + levels_[e.child].name + "<" +
                           levels_[e.parent].name + ": '" +
                           members_[e.child][i].value +
                           "' rolls up before its predecessor '" +
                           members_[e.child][i - 1].value + "'"});
      }
    }
  }
}

std::vector<Violation> DimensionBuilder::validate() const {
  std::vector<Violation> out;
  std::vector<std::vector<bool>> leq;
  checkOrder(out, leq);
  for (const auto& v : out) {
    if (v.kind == ViolationKind::CyclicOrder) return out;
  }
  checkMembers(out);
  checkPaths(out, leq);
  checkMonotone(out);
  return out;
}

Dimension DimensionBuilder::build() const {
  auto violations = validate();
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "dimension " << name_ << " is invalid:";
    for (const auto& v : violations) {
      msg << "\n  [" << violationKindName(v.kind) << "] " << v.detail;
    }
    fail(ErrorKind::ValidationFailed, msg.str());
  }

  Dimension d;
  d.name_ = name_;
  d.ordered_ = ordered_;
  d.levels_ = levels_;
  const int n = static_cast<int>(levels_.size());

  std::vector<std::vector<bool>> leq;
  std::vector<Violation> ignored;
  checkOrder(ignored, leq);
  d.leq_ = leq;
  for (const auto& e : edges_) d.edges_.emplace_back(e.child, e.parent);

  for (int i = 0; i < n; ++i) {
    bool isBottom = true, isTop = true;
    for (int j = 0; j < n; ++j) {
      if (!leq[i][j]) isBottom = false;
      if (!leq[j][i]) isTop = false;
    }
    if (isBottom) d.bottom_ = i;
    if (isTop) d.top_ = i;
  }
  d.chain_ = true;
  for (int i = 0; i < n && d.chain_; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!leq[i][j] && !leq[j][i]) {
        d.chain_ = false;
        break;
      }
    }
  }

  // Minimal upward edge counts, then heights as longest paths from bottom.
  constexpr int kInf = 1 << 20;
  d.upDist_.assign(n, std::vector<int>(n, kInf));
  for (int i = 0; i < n; ++i) d.upDist_[i][i] = 0;
  for (const auto& e : edges_) d.upDist_[e.child][e.parent] = 1;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        int via = d.upDist_[i][k] + d.upDist_[k][j];
        if (via < d.upDist_[i][j]) d.upDist_[i][j] = via;
      }
    }
  }
  d.height_.assign(n, 0);
  // Longest path from the bottom: relax in topological (reachability) order.
  for (int pass = 0; pass < n; ++pass) {
    for (const auto& e : edges_) {
      if (d.height_[e.parent] < d.height_[e.child] + 1) {
        d.height_[e.parent] = d.height_[e.child] + 1;
      }
    }
  }

  d.levelStart_.resize(n);
  d.levelEnd_.resize(n);
  for (int l = 0; l < n; ++l) {
    d.levelStart_[l] = static_cast<int>(d.values_.size());
    for (const auto& m : members_[l]) {
      d.values_.push_back(m.value);
      d.memberLevel_.push_back(l);
    }
    d.levelEnd_[l] = static_cast<int>(d.values_.size());
  }
  d.valueIndex_.reserve(d.values_.size());
  for (MemberIndex m = 0; m < static_cast<MemberIndex>(d.values_.size()); ++m) {
    d.valueIndex_.emplace_back(d.values_[m], m);
  }
  std::sort(d.valueIndex_.begin(), d.valueIndex_.end());

  d.pairs_.resize(static_cast<size_t>(n) * n);
  for (int lo = 0; lo < n; ++lo) {
    for (int hi = 0; hi < n; ++hi) {
      if (!leq[lo][hi]) continue;
      auto maps = std::make_unique<Dimension::PairMaps>();
      std::vector<int> slotMap;
      if (lo == hi) {
        slotMap.resize(members_[lo].size());
        for (size_t i = 0; i < slotMap.size(); ++i) {
          slotMap[i] = static_cast<int>(i);
        }
      } else {
        slotMap = composePath(allPaths(lo, hi)[0]);
      }
      maps->anc.resize(slotMap.size());
      maps->desc.resize(members_[hi].size());
      for (size_t i = 0; i < slotMap.size(); ++i) {
        MemberIndex child = d.levelStart_[lo] + static_cast<MemberIndex>(i);
        MemberIndex parent = d.levelStart_[hi] + slotMap[i];
        maps->anc[i] = parent;
        maps->desc[slotMap[i]].push_back(child);
      }
      d.pairs_[static_cast<size_t>(lo) * n + hi] = std::move(maps);
    }
  }

  int diameter = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      diameter = std::max(diameter, d.lcaPathLength(a, b));
    }
  }
  d.diameter_ = diameter;
  return d;
}

}  // namespace cubealg
