#include "cubealg/catalog.hpp"

#include <algorithm>

namespace cubealg {

Catalog::Catalog(std::string name, std::vector<Dimension> dimensions,
                 DetailedDataset dataset)
    : name_(std::move(name)),
      dims_(std::move(dimensions)),
      dataset_(std::move(dataset)) {
  if (name_.empty()) fail(ErrorKind::InvalidArgument, "catalog needs a name");
  const size_t n = dims_.size();
  for (auto& cell : dataset_.cells) {
    if (cell.coords.size() != n) {
      fail(ErrorKind::ArityMismatch,
           "cell in dataset " + dataset_.name + " has " +
               std::to_string(cell.coords.size()) + " coordinates, expected " +
               std::to_string(n));
    }
    if (cell.measures.size() != dataset_.measures.size()) {
      fail(ErrorKind::ArityMismatch,
           "cell in dataset " + dataset_.name + " has " +
               std::to_string(cell.measures.size()) + " measures, expected " +
               std::to_string(dataset_.measures.size()));
    }
    for (size_t i = 0; i < n; ++i) {
      const Dimension& d = dims_[i];
      MemberIndex m = cell.coords[i];
      if (m < 0 || m >= d.memberCount() || d.memberLevel(m) != d.bottom()) {
        fail(ErrorKind::UnknownMember,
             "cell coordinate in dimension " + d.name() +
                 " is not a detailed member");
      }
    }
  }
  std::sort(dataset_.cells.begin(), dataset_.cells.end(),
            [](const Cell& a, const Cell& b) { return a.coords < b.coords; });
  for (size_t i = 1; i < dataset_.cells.size(); ++i) {
    if (dataset_.cells[i].coords == dataset_.cells[i - 1].coords) {
      const Cell& c = dataset_.cells[i];
      std::string where;
      for (size_t k = 0; k < n; ++k) {
        if (k) where += ",";
        where += dims_[k].memberValue(c.coords[k]);
      }
      fail(ErrorKind::DuplicateCoordinates,
           "dataset " + dataset_.name + " has two cells at (" + where + ")");
    }
  }
}

int Catalog::findDimension(std::string_view name) const noexcept {
  for (int i = 0; i < dimensionCount(); ++i) {
    if (dims_[i].name() == name) return i;
  }
  return -1;
}

int Catalog::dimensionIndex(std::string_view name) const {
  int i = findDimension(name);
  if (i < 0) {
    fail(ErrorKind::UnknownDimension,
         "no dimension '" + std::string(name) + "' in catalog " + name_);
  }
  return i;
}

int Catalog::findMeasure(std::string_view name) const noexcept {
  for (int i = 0; i < static_cast<int>(dataset_.measures.size()); ++i) {
    if (dataset_.measures[i] == name) return i;
  }
  return -1;
}

int Catalog::measureIndex(std::string_view name) const {
  int i = findMeasure(name);
  if (i < 0) {
    fail(ErrorKind::UnknownMeasure,
         "dataset " + dataset_.name + " has no measure '" + std::string(name) +
             "'");
  }
  return i;
}

int Catalog::cellLookup(const std::vector<MemberIndex>& coords) const {
  auto it = std::lower_bound(
      dataset_.cells.begin(), dataset_.cells.end(), coords,
      [](const Cell& c, const std::vector<MemberIndex>& key) {
        return c.coords < key;
      });
  if (it == dataset_.cells.end() || it->coords != coords) return -1;
  return static_cast<int>(it - dataset_.cells.begin());
}

}  // namespace cubealg
