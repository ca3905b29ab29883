#pragma once

#include <string>
#include <vector>

#include "cubealg/dimension.hpp"

namespace cubealg {

// One detailed fact: a coordinate per dimension (bottom-level members, in
// catalog dimension order) and one numeric value per declared measure.
// Absent measure values are stored as NaN.
struct Cell {
  std::vector<MemberIndex> coords;
  std::vector<double> measures;
};

struct DetailedDataset {
  std::string name;
  std::vector<std::string> measures;
  std::vector<Cell> cells;  // sorted by coords; coords are unique
};

// A multidimensional catalog: the dimensions plus one detailed dataset whose
// cells obey the functional dependency coordinates -> measures.
class Catalog {
 public:
  Catalog(std::string name, std::vector<Dimension> dimensions,
          DetailedDataset dataset);

  const std::string& name() const { return name_; }
  int dimensionCount() const { return static_cast<int>(dims_.size()); }
  const Dimension& dimension(int i) const { return dims_[i]; }
  const std::vector<Dimension>& dimensions() const { return dims_; }

  int findDimension(std::string_view name) const noexcept;
  int dimensionIndex(std::string_view name) const;  // throws UnknownDimension

  const DetailedDataset& dataset() const { return dataset_; }
  int measureIndex(std::string_view name) const;  // throws UnknownMeasure
  int findMeasure(std::string_view name) const noexcept;

  // Cell lookup by detailed coordinates; -1 when the cell is not populated.
  int cellLookup(const std::vector<MemberIndex>& coords) const;

 private:
  std::string name_;
  std::vector<Dimension> dims_;
  DetailedDataset dataset_;
};

}  // namespace cubealg
