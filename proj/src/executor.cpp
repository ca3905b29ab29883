#include "cubealg/executor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace cubealg {

namespace {

struct Accum {
  double sum = 0.0;
  double mn = std::numeric_limits<double>::infinity();
  double mx = -std::numeric_limits<double>::infinity();
  std::uint64_t cells = 0;    // every grouped cell
  std::uint64_t present = 0;  // cells whose source value is not absent

  void add(double v) {
    ++cells;
    if (std::isnan(v)) return;
    ++present;
    sum += v;
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }

  double value(AggFn fn) const {
    switch (fn) {
      case AggFn::Sum: return sum;
      case AggFn::Min:
        return present ? mn : std::numeric_limits<double>::quiet_NaN();
      case AggFn::Max:
        return present ? mx : std::numeric_limits<double>::quiet_NaN();
      case AggFn::Count: return static_cast<double>(cells);
      case AggFn::Avg:
        return present ? sum / static_cast<double>(present)
                       : std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
};

}  // namespace

QueryResult execute(const Catalog& cat, const CubeQuery& q) {
  const int n = cat.dimensionCount();
  auto sel = detailedSelector(cat, q);

  std::vector<int> srcIdx(q.measures.size());
  for (size_t j = 0; j < q.measures.size(); ++j) {
    srcIdx[j] = cat.measureIndex(q.measures[j].source);
  }

  std::map<std::vector<MemberIndex>, std::vector<Accum>> groups;
  std::vector<MemberIndex> key(n);
  for (const Cell& cell : cat.dataset().cells) {
    bool selected = true;
    for (int dim = 0; dim < n && selected; ++dim) {
      const Dimension& d = cat.dimension(dim);
      selected = sel[dim][d.ordinal(cell.coords[dim])];
    }
    if (!selected) continue;
    for (int dim = 0; dim < n; ++dim) {
      const Dimension& d = cat.dimension(dim);
      key[dim] = d.anc(d.bottom(), q.groupers[dim], cell.coords[dim]);
    }
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) it->second.resize(q.measures.size());
    for (size_t j = 0; j < q.measures.size(); ++j) {
      it->second[j].add(cell.measures[srcIdx[j]]);
    }
  }

  QueryResult r;
  r.dataset = q.dataset;
  r.levels = q.groupers;
  for (const AggMeasure& m : q.measures) r.measureNames.push_back(m.name);
  r.cells.reserve(groups.size());
  for (auto& [coords, accums] : groups) {
    ResultCell cell;
    cell.coords = coords;
    cell.measures.reserve(accums.size());
    for (size_t j = 0; j < accums.size(); ++j) {
      cell.measures.push_back(accums[j].value(q.measures[j].fn));
    }
    r.cells.push_back(std::move(cell));
  }
  return r;
}

bool sameResultSchema(const QueryResult& a, const QueryResult& b) {
  return a.dataset == b.dataset && a.levels == b.levels &&
         a.measureNames == b.measureNames;
}

namespace {

bool hasCoords(const QueryResult& r, const std::vector<MemberIndex>& coords) {
  auto it = std::lower_bound(
      r.cells.begin(), r.cells.end(), coords,
      [](const ResultCell& c, const std::vector<MemberIndex>& key) {
        return c.coords < key;
      });
  return it != r.cells.end() && it->coords == coords;
}

QueryResult filterByCoords(const QueryResult& a, const QueryResult& b,
                           bool keepShared) {
  if (!sameResultSchema(a, b)) {
    fail(ErrorKind::SchemaMismatch,
         "result set operations need identical result schemata");
  }
  QueryResult out;
  out.dataset = a.dataset;
  out.levels = a.levels;
  out.measureNames = a.measureNames;
  for (const ResultCell& c : a.cells) {
    if (hasCoords(b, c.coords) == keepShared) out.cells.push_back(c);
  }
  return out;
}

}  // namespace

QueryResult resultIntersect(const QueryResult& a, const QueryResult& b) {
  return filterByCoords(a, b, true);
}

QueryResult resultDifference(const QueryResult& a, const QueryResult& b) {
  return filterByCoords(a, b, false);
}

}  // namespace cubealg
