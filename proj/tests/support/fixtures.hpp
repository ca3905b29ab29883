#pragma once

#include <string>

#include "cubealg/dsl.hpp"

// Hand-built catalogs shared across test binaries, plus loaders for the
// on-disk fixture catalogs (path injected by the build).
namespace cubetest {

using namespace cubealg;

inline std::string fixturePath(const std::string& rel) {
  return std::string(CUBEALG_FIXTURE_DIR) + "/" + rel;
}

inline const Catalog& taxesCatalog() {
  static Catalog cat = loadCatalog(fixturePath("taxes/catalog.manifest"));
  return cat;
}

inline const Catalog& geoCatalog() {
  static Catalog cat = loadCatalog(fixturePath("geo/catalog.manifest"));
  return cat;
}

inline CubeQuery fixtureQuery(const Catalog& cat, const std::string& rel) {
  return loadQueryFile(fixturePath(rel), cat);
}

// Day -> Week and Day -> Month -> Year, with Week incomparable to both Month
// and Year.  Weeks deliberately cross month boundaries.
inline Dimension calendarDimension() {
  DimensionBuilder b("Cal");
  b.addLevel("Day");
  b.addLevel("Week");
  b.addLevel("Month");
  b.addLevel("Year");
  b.addEdge("Day", "Week");
  b.addEdge("Day", "Month");
  b.addEdge("Month", "Year");
  const char* monthOf[] = {"m1", "m1", "m1", "m2", "m2", "m2"};
  const char* weekOf[] = {"w1", "w1", "w2", "w2", "w3", "w3"};
  for (int i = 0; i < 6; ++i) {
    std::string day = "d" + std::to_string(i + 1);
    b.addMember("Day", day);
    b.setAncestor("Day", "Month", day, monthOf[i]);
    b.setAncestor("Day", "Week", day, weekOf[i]);
  }
  b.setAncestor("Month", "Year", "m1", "y1");
  b.setAncestor("Month", "Year", "m2", "y1");
  b.ensureAllLevel();
  return b.build();
}

// One-dimensional catalog over calendarDimension with per-day sales and a
// partially absent second measure.
inline Catalog calendarCatalog() {
  DetailedDataset ds;
  ds.name = "sales";
  ds.measures = {"Qty", "Rating"};
  Dimension cal = calendarDimension();
  for (int i = 0; i < 6; ++i) {
    Cell c;
    c.coords = {cal.memberAtLevel(cal.level("Day"), "d" + std::to_string(i + 1))};
    c.measures = {2.0 * (i + 1), i % 2 == 0
                                     ? static_cast<double>(10 - i)
                                     : std::numeric_limits<double>::quiet_NaN()};
    ds.cells.push_back(std::move(c));
  }
  std::vector<Dimension> dims;
  dims.push_back(std::move(cal));
  return Catalog("calendar", std::move(dims), std::move(ds));
}

}  // namespace cubetest
