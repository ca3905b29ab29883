#pragma once

#include <vector>

#include "cubealg/query.hpp"

namespace cubealg {

struct DistanceWeights {
  double condition = 0.5;
  double level = 0.35;
  double measure = 0.15;
};

struct DistanceBreakdown {
  double condition = 0.0;
  double level = 0.0;
  double measure = 0.0;
  double total = 0.0;
  DistanceWeights weights;
  std::vector<double> perDimCondition;
  std::vector<double> perDimLevel;
};

// Jaccard distance of the two filters' detailed value sets: 1 - |shared| / |either|.
// Two empty sets count as identical.  The atoms must live on one dimension.
double atomDistance(const Catalog& cat, const Atom& a, const Atom& b);

// Mean atom distance across all dimensions.
double conditionDistance(const Catalog& cat, const CubeQuery& a,
                         const CubeQuery& b);

// Distance between two levels of one dimension, in [0, 1].  On a chain this
// is the height difference over the dimension height; in general it is the
// shortest common-ancestor round trip over the largest such round trip.
double levelDistance(const Dimension& d, LevelIndex a, LevelIndex b);

// Mean grouping-level distance across all dimensions.
double schemaLevelDistance(const Catalog& cat, const CubeQuery& a,
                           const CubeQuery& b);

// Fraction of aggregate measures without a partner on the other side, where
// partners pair up by (function, source measure): (ma + mb - 2*matched) over
// (ma + mb).
double measureDistance(const CubeQuery& a, const CubeQuery& b);

// Weighted blend of the three component distances; weights must be
// non-negative and sum to one.
DistanceBreakdown queryDistance(const Catalog& cat, const CubeQuery& a,
                                const CubeQuery& b,
                                const DistanceWeights& w = {});

}  // namespace cubealg
