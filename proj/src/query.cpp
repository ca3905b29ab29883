#include "cubealg/query.hpp"

#include <algorithm>

#include "cubealg/sorted_set.hpp"

namespace cubealg {

const char* aggFnName(AggFn fn) {
  switch (fn) {
    case AggFn::Sum: return "sum";
    case AggFn::Min: return "min";
    case AggFn::Max: return "max";
    case AggFn::Count: return "count";
    case AggFn::Avg: return "avg";
  }
  return "?";
}

std::optional<AggFn> parseAggFn(std::string_view name) {
  if (name == "sum") return AggFn::Sum;
  if (name == "min") return AggFn::Min;
  if (name == "max") return AggFn::Max;
  if (name == "count") return AggFn::Count;
  if (name == "avg") return AggFn::Avg;
  return std::nullopt;
}

bool sameQueryExpression(const CubeQuery& a, const CubeQuery& b) {
  return a.dataset == b.dataset && a.atoms == b.atoms &&
         a.groupers == b.groupers && a.measures == b.measures;
}

std::vector<MemberIndex> atomDetailedValues(const Catalog& cat, const Atom& a) {
  const Dimension& d = cat.dimension(a.dim);
  std::vector<MemberIndex> out;
  for (MemberIndex v : a.values) {
    const auto& ds = d.desc(a.level, d.bottom(), v);
    out.insert(out.end(), ds.begin(), ds.end());
  }
  // Descendant sets of distinct members partition the bottom level, so a
  // plain sort gives the canonical duplicate-free form.
  std::sort(out.begin(), out.end());
  return out;
}

Atom atomToDetailed(const Catalog& cat, const Atom& a) {
  return Atom{a.dim, cat.dimension(a.dim).bottom(), atomDetailedValues(cat, a)};
}

Atom comparisonToDetailed(const Catalog& cat, int dim, LevelIndex level,
                          CmpOp op, MemberIndex value) {
  const Dimension& d = cat.dimension(dim);
  const LevelIndex l0 = d.bottom();
  const auto& descSet = d.desc(level, l0, value);

  if (op != CmpOp::Eq && op != CmpOp::Ne && !d.ordered()) {
    fail(ErrorKind::OrderRequired,
         "dimension " + d.name() + " is not ordered; '" + d.memberValue(value) +
             "' cannot be range-compared");
  }
  if (d.levelSize(l0) == 0) return Atom{dim, l0, {}};
  if (descSet.empty() && op != CmpOp::Eq && op != CmpOp::Ne) {
    fail(ErrorKind::InvalidArgument,
         "member '" + d.memberValue(value) +
             "' has no detailed descendants to order against");
  }
  const MemberIndex first = d.memberAt(l0, 0);
  const MemberIndex last = d.memberAt(l0, d.levelSize(l0) - 1);

  std::vector<MemberIndex> out;
  auto pushRange = [&](MemberIndex lo, MemberIndex hi) {
    for (MemberIndex m = lo; m <= hi; ++m) out.push_back(m);
  };
  switch (op) {
    case CmpOp::Eq:
      out = descSet;
      break;
    case CmpOp::Ne: {
      std::vector<MemberIndex> all;
      for (MemberIndex m = first; m <= last; ++m) all.push_back(m);
      out = setDifference(all, descSet);
      break;
    }
    case CmpOp::Lt:
      if (descSet.front() > first) pushRange(first, descSet.front() - 1);
      break;
    case CmpOp::Le:
      pushRange(first, descSet.back());
      break;
    case CmpOp::Gt:
      if (descSet.back() < last) pushRange(descSet.back() + 1, last);
      break;
    case CmpOp::Ge:
      pushRange(descSet.front(), last);
      break;
  }
  return Atom{dim, l0, std::move(out)};
}

namespace {

Atom topAtom(const Catalog& cat, int dim) {
  const Dimension& d = cat.dimension(dim);
  return Atom{dim, d.top(), {d.memberAt(d.top(), 0)}};
}

// Conjunction of two atoms on the same dimension: value-set intersection at a
// shared level, otherwise intersection of the detailed proxies.
Atom conjoinAtoms(const Catalog& cat, const Atom& x, const Atom& y) {
  if (x.level == y.level) {
    return Atom{x.dim, x.level, setIntersect(x.values, y.values)};
  }
  return Atom{x.dim, cat.dimension(x.dim).bottom(),
              setIntersect(atomDetailedValues(cat, x),
                           atomDetailedValues(cat, y))};
}

void validateAtom(const Catalog& cat, Atom& a) {
  if (a.dim < 0 || a.dim >= cat.dimensionCount()) {
    fail(ErrorKind::UnknownDimension,
         "atom references dimension #" + std::to_string(a.dim));
  }
  const Dimension& d = cat.dimension(a.dim);
  if (a.level < 0 || a.level >= d.levelCount()) {
    fail(ErrorKind::UnknownLevel,
         "atom on dimension " + d.name() + " references an unknown level");
  }
  sortUnique(a.values);
  for (MemberIndex v : a.values) {
    if (v < 0 || v >= d.memberCount() || d.memberLevel(v) != a.level) {
      fail(ErrorKind::ValueOutsideDomain,
           "atom on " + d.name() + "." + d.levelName(a.level) +
               " holds a value outside the level's domain");
    }
  }
}

void validateMeasures(const Catalog& cat, const std::vector<AggMeasure>& ms) {
  if (ms.empty()) {
    fail(ErrorKind::InvalidArgument, "query needs at least one measure");
  }
  for (size_t i = 0; i < ms.size(); ++i) {
    cat.measureIndex(ms[i].source);
    for (size_t j = i + 1; j < ms.size(); ++j) {
      if (ms[i].name == ms[j].name) {
        fail(ErrorKind::InvalidArgument,
             "duplicate measure output name '" + ms[i].name + "'");
      }
    }
  }
}

}  // namespace

CubeQuery normalized(const Catalog& cat, CubeQuery q) {
  const int n = cat.dimensionCount();
  if (q.dataset.empty()) q.dataset = cat.dataset().name;
  if (q.dataset != cat.dataset().name) {
    fail(ErrorKind::InvalidArgument,
         "query is over dataset '" + q.dataset + "' but the catalog provides '" +
             cat.dataset().name + "'");
  }

  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (int dim = 0; dim < n; ++dim) atoms.push_back(topAtom(cat, dim));
  std::vector<bool> bound(n, false);
  for (Atom& a : q.atoms) {
    validateAtom(cat, a);
    if (bound[a.dim]) {
      atoms[a.dim] = conjoinAtoms(cat, atoms[a.dim], a);
    } else {
      atoms[a.dim] = a;
      bound[a.dim] = true;
    }
  }
  q.atoms = std::move(atoms);

  if (q.groupers.empty()) {
    q.groupers.assign(n, kNoLevel);
    for (int dim = 0; dim < n; ++dim) q.groupers[dim] = cat.dimension(dim).top();
  }
  if (static_cast<int>(q.groupers.size()) != n) {
    fail(ErrorKind::ArityMismatch,
         "query declares " + std::to_string(q.groupers.size()) +
             " grouping levels for " + std::to_string(n) + " dimensions");
  }
  for (int dim = 0; dim < n; ++dim) {
    const Dimension& d = cat.dimension(dim);
    if (q.groupers[dim] < 0 || q.groupers[dim] >= d.levelCount()) {
      fail(ErrorKind::UnknownLevel,
           "grouping level for dimension " + d.name() + " is unknown");
    }
  }
  validateMeasures(cat, q.measures);
  return q;
}

std::vector<std::vector<bool>> detailedSelector(const Catalog& cat,
                                                const CubeQuery& q) {
  std::vector<std::vector<bool>> sel(cat.dimensionCount());
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    const Dimension& d = cat.dimension(dim);
    sel[dim].assign(d.levelSize(d.bottom()), false);
    for (MemberIndex v : atomDetailedValues(cat, q.atoms[dim])) {
      sel[dim][d.ordinal(v)] = true;
    }
  }
  return sel;
}

CubeQuery rollUp(const Catalog& cat, const CubeQuery& q, int dim,
                 LevelIndex to) {
  const Dimension& d = cat.dimension(dim);
  if (!d.leq(q.groupers[dim], to)) {
    fail(ErrorKind::LevelsNotComparable,
         "cannot roll " + d.name() + " up from " +
             d.levelName(q.groupers[dim]) + " to " + d.levelName(to));
  }
  CubeQuery out = q;
  out.groupers[dim] = to;
  return out;
}

CubeQuery drillDown(const Catalog& cat, const CubeQuery& q, int dim,
                    LevelIndex to) {
  const Dimension& d = cat.dimension(dim);
  if (!d.leq(to, q.groupers[dim])) {
    fail(ErrorKind::LevelsNotComparable,
         "cannot drill " + d.name() + " down from " +
             d.levelName(q.groupers[dim]) + " to " + d.levelName(to));
  }
  CubeQuery out = q;
  out.groupers[dim] = to;
  return out;
}

CubeQuery slice(const Catalog& cat, const CubeQuery& q, const Atom& extra) {
  Atom a = extra;
  validateAtom(cat, a);
  CubeQuery out = q;
  out.atoms[a.dim] = conjoinAtoms(cat, out.atoms[a.dim], a);
  return out;
}

CubeQuery addMeasure(const Catalog& cat, const CubeQuery& q, AggMeasure m) {
  CubeQuery out = q;
  out.measures.push_back(std::move(m));
  validateMeasures(cat, out.measures);
  return out;
}

CubeQuery removeMeasure(const Catalog& cat, const CubeQuery& q,
                        const std::string& outputName) {
  CubeQuery out = q;
  auto it = std::find_if(out.measures.begin(), out.measures.end(),
                         [&](const AggMeasure& m) { return m.name == outputName; });
  if (it == out.measures.end()) {
    fail(ErrorKind::UnknownMeasure, "query has no measure named " + outputName);
  }
  out.measures.erase(it);
  validateMeasures(cat, out.measures);
  return out;
}

CubeQuery drillAcrossInner(const Catalog& cat, const CubeQuery& a,
                           const CubeQuery& b) {
  if (a.dataset != b.dataset) {
    fail(ErrorKind::SchemaMismatch, "drill-across needs a shared dataset");
  }
  if (a.groupers != b.groupers) {
    fail(ErrorKind::SchemaMismatch, "drill-across needs equal grouping levels");
  }
  CubeQuery out = a;
  out.name.clear();
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    out.atoms[dim] = conjoinAtoms(cat, a.atoms[dim], b.atoms[dim]);
  }
  for (const AggMeasure& m : b.measures) {
    auto it = std::find_if(out.measures.begin(), out.measures.end(),
                           [&](const AggMeasure& x) { return x.name == m.name; });
    if (it == out.measures.end()) {
      out.measures.push_back(m);
    } else if (it->fn != m.fn || it->source != m.source) {
      fail(ErrorKind::IncompatibleSchemas,
           "measure name '" + m.name + "' means different aggregates");
    }
  }
  return out;
}

namespace {

enum class SetOp { Union, Intersect, Difference };

CubeQuery applySetOp(const Catalog& cat, const CubeQuery& a, const CubeQuery& b,
                     SetOp op) {
  if (a.dataset != b.dataset || a.groupers != b.groupers ||
      a.measures != b.measures) {
    fail(ErrorKind::SchemaMismatch,
         "query set operations need identical schemata");
  }
  CubeQuery out = a;
  out.name.clear();
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    Atom x = a.atoms[dim];
    Atom y = b.atoms[dim];
    if (x.level != y.level) {
      x = atomToDetailed(cat, x);
      y = atomToDetailed(cat, y);
    }
    switch (op) {
      case SetOp::Union:
        out.atoms[dim] = Atom{dim, x.level, setUnion(x.values, y.values)};
        break;
      case SetOp::Intersect:
        out.atoms[dim] = Atom{dim, x.level, setIntersect(x.values, y.values)};
        break;
      case SetOp::Difference:
        out.atoms[dim] = Atom{dim, x.level, setDifference(x.values, y.values)};
        break;
    }
  }
  return out;
}

}  // namespace

CubeQuery queryUnion(const Catalog& cat, const CubeQuery& a, const CubeQuery& b) {
  return applySetOp(cat, a, b, SetOp::Union);
}

CubeQuery queryIntersect(const Catalog& cat, const CubeQuery& a,
                         const CubeQuery& b) {
  return applySetOp(cat, a, b, SetOp::Intersect);
}

CubeQuery queryDifference(const Catalog& cat, const CubeQuery& a,
                          const CubeQuery& b) {
  return applySetOp(cat, a, b, SetOp::Difference);
}

}  // namespace cubealg
