#pragma once

#include <string>
#include <vector>

#include "cubealg/query.hpp"

namespace cubealg {

struct ResultCell {
  std::vector<MemberIndex> coords;  // one member per dimension, grouper level
  std::vector<double> measures;
};

struct QueryResult {
  std::string dataset;
  std::vector<LevelIndex> levels;  // per dimension, catalog order
  std::vector<std::string> measureNames;
  std::vector<ResultCell> cells;  // lexicographically sorted, unique coords
};

// Reference evaluation of a normalized query against the catalog's detailed
// dataset: filter cells through the detailed selection condition, group them
// by their ancestors at the grouping levels, and aggregate each group.
// Groups with no surviving cells produce no row.  Cells are aggregated in
// ascending detailed coordinate order, so float results are reproducible.
QueryResult execute(const Catalog& cat, const CubeQuery& q);

bool sameResultSchema(const QueryResult& a, const QueryResult& b);

// Coordinate-keyed set operations on result rows.  The caller is responsible
// for only combining results whose shared coordinates mean the same cells;
// measures are taken from the left operand.
QueryResult resultIntersect(const QueryResult& a, const QueryResult& b);
QueryResult resultDifference(const QueryResult& a, const QueryResult& b);

}  // namespace cubealg
