#include "cubealg/distance.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cubealg/sorted_set.hpp"

namespace cubealg {

double atomDistance(const Catalog& cat, const Atom& a, const Atom& b) {
  if (a.dim != b.dim) {
    fail(ErrorKind::DimensionMismatch,
         "atom distance needs atoms on the same dimension");
  }
  auto va = atomDetailedValues(cat, a);
  auto vb = atomDetailedValues(cat, b);
  auto common = setIntersect(va, vb);
  double unionSize =
      static_cast<double>(va.size() + vb.size() - common.size());
  if (unionSize == 0.0) return 0.0;
  return 1.0 - static_cast<double>(common.size()) / unionSize;
}

double conditionDistance(const Catalog& cat, const CubeQuery& a,
                         const CubeQuery& b) {
  const int n = cat.dimensionCount();
  double sum = 0.0;
  for (int dim = 0; dim < n; ++dim) {
    sum += atomDistance(cat, a.atoms[dim], b.atoms[dim]);
  }
  return n ? sum / n : 0.0;
}

double levelDistance(const Dimension& d, LevelIndex a, LevelIndex b) {
  if (a == b) return 0.0;
  if (d.isChain()) {
    int denom = d.height(d.top());
    if (denom == 0) return 0.0;
    return std::abs(d.height(a) - d.height(b)) / static_cast<double>(denom);
  }
  int denom = d.latticeDiameter();
  if (denom == 0) return 0.0;
  return d.lcaPathLength(a, b) / static_cast<double>(denom);
}

double schemaLevelDistance(const Catalog& cat, const CubeQuery& a,
                           const CubeQuery& b) {
  const int n = cat.dimensionCount();
  double sum = 0.0;
  for (int dim = 0; dim < n; ++dim) {
    sum += levelDistance(cat.dimension(dim), a.groupers[dim], b.groupers[dim]);
  }
  return n ? sum / n : 0.0;
}

double measureDistance(const CubeQuery& a, const CubeQuery& b) {
  std::map<std::pair<AggFn, std::string>, int> bag;
  for (const AggMeasure& m : a.measures) bag[{m.fn, m.source}] += 1;
  size_t matched = 0;
  for (const AggMeasure& m : b.measures) {
    auto it = bag.find({m.fn, m.source});
    if (it != bag.end() && it->second > 0) {
      --it->second;
      ++matched;
    }
  }
  double total = static_cast<double>(a.measures.size() + b.measures.size());
  if (total == 0.0) return 0.0;
  return (total - 2.0 * static_cast<double>(matched)) / total;
}

DistanceBreakdown queryDistance(const Catalog& cat, const CubeQuery& a,
                                const CubeQuery& b, const DistanceWeights& w) {
  if (a.dataset != b.dataset) {
    fail(ErrorKind::SchemaMismatch,
         "query distance is defined over a shared dataset");
  }
  if (w.condition < 0 || w.level < 0 || w.measure < 0 ||
      std::abs(w.condition + w.level + w.measure - 1.0) > 1e-9) {
    fail(ErrorKind::InvalidArgument,
         "distance weights must be non-negative and sum to one");
  }
  DistanceBreakdown out;
  out.weights = w;
  const int n = cat.dimensionCount();
  for (int dim = 0; dim < n; ++dim) {
    out.perDimCondition.push_back(
        atomDistance(cat, a.atoms[dim], b.atoms[dim]));
    out.perDimLevel.push_back(
        levelDistance(cat.dimension(dim), a.groupers[dim], b.groupers[dim]));
  }
  for (double x : out.perDimCondition) out.condition += x;
  for (double x : out.perDimLevel) out.level += x;
  if (n) {
    out.condition /= n;
    out.level /= n;
  }
  out.measure = measureDistance(a, b);
  out.total = w.condition * out.condition + w.level * out.level +
              w.measure * out.measure;
  return out;
}

}  // namespace cubealg
