#include "cubealg/json_out.hpp"

#include <cmath>

namespace cubealg {

namespace {

nlohmann::json levelRefs(const Catalog& cat,
                         const std::vector<LevelIndex>& levels) {
  nlohmann::json out = nlohmann::json::array();
  for (size_t d = 0; d < levels.size(); ++d) {
    const Dimension& dim = cat.dimension(static_cast<int>(d));
    out.push_back(dim.name() + "." + dim.levelName(levels[d]));
  }
  return out;
}

nlohmann::json tupleValues(const Catalog& cat,
                           const std::vector<MemberIndex>& tuple) {
  nlohmann::json out = nlohmann::json::array();
  for (size_t d = 0; d < tuple.size(); ++d) {
    out.push_back(cat.dimension(static_cast<int>(d)).memberValue(tuple[d]));
  }
  return out;
}

}  // namespace

nlohmann::json toJson(const Catalog& cat, const Signature& s,
                      std::uint64_t cap) {
  nlohmann::json out;
  out["levels"] = levelRefs(cat, s.levels);
  out["form"] = s.factored() ? "factored" : "explicit";
  out["count"] = signatureCount(s);
  nlohmann::json tuples = nlohmann::json::array();
  for (const auto& t : materialize(s, cap)) {
    tuples.push_back(tupleValues(cat, t));
  }
  out["tuples"] = std::move(tuples);
  return out;
}

nlohmann::json toJson(const Catalog& cat, const CoverageReport& r,
                      std::uint64_t cap) {
  nlohmann::json out;
  out["covered"] = toJson(cat, r.covered, cap);
  out["novel"] = toJson(cat, r.novel, cap);
  return out;
}

nlohmann::json toJson(const Verdict& v) {
  nlohmann::json out;
  out["holds"] = v.holds;
  nlohmann::json trace = nlohmann::json::array();
  for (const TraceEntry& e : v.trace) {
    trace.push_back({{"condition", e.condition},
                     {"pass", e.pass},
                     {"detail", e.detail}});
  }
  out["trace"] = std::move(trace);
  return out;
}

nlohmann::json toJson(const Catalog& cat, const DistanceBreakdown& d) {
  nlohmann::json out;
  out["total"] = d.total;
  out["condition"] = d.condition;
  out["level"] = d.level;
  out["measure"] = d.measure;
  out["weights"] = {{"condition", d.weights.condition},
                    {"level", d.weights.level},
                    {"measure", d.weights.measure}};
  nlohmann::json dims = nlohmann::json::array();
  for (size_t i = 0; i < d.perDimCondition.size(); ++i) {
    dims.push_back({{"dimension", cat.dimension(static_cast<int>(i)).name()},
                    {"condition", d.perDimCondition[i]},
                    {"level", d.perDimLevel[i]}});
  }
  out["perDimension"] = std::move(dims);
  return out;
}

nlohmann::json toJson(const Catalog& cat, const QueryResult& r) {
  nlohmann::json out;
  out["dataset"] = r.dataset;
  out["levels"] = levelRefs(cat, r.levels);
  out["measures"] = r.measureNames;
  nlohmann::json cells = nlohmann::json::array();
  for (const ResultCell& cell : r.cells) {
    nlohmann::json values = nlohmann::json::array();
    for (double v : cell.measures) {
      if (std::isnan(v)) {
        values.push_back(nullptr);
      } else {
        values.push_back(v);
      }
    }
    cells.push_back({{"coords", tupleValues(cat, cell.coords)},
                     {"values", std::move(values)}});
  }
  out["cells"] = std::move(cells);
  return out;
}

nlohmann::json toJson(const CatalogReport& r) {
  nlohmann::json out;
  out["clean"] = r.clean();
  nlohmann::json violations = nlohmann::json::array();
  for (const Violation& v : r.violations) {
    violations.push_back({{"kind", violationKindName(v.kind)},
                          {"dimension", v.dimension},
                          {"detail", v.detail}});
  }
  out["violations"] = std::move(violations);
  out["dataFaults"] = r.dataFaults;
  return out;
}

}  // namespace cubealg
