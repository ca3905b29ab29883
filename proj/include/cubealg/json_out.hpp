#pragma once

#include <json.hpp>

#include "cubealg/compare.hpp"
#include "cubealg/distance.hpp"
#include "cubealg/dsl.hpp"
#include "cubealg/executor.hpp"
#include "cubealg/signature.hpp"

namespace cubealg {

// JSON views of the library's value types, used by the CLI's --json mode.
// Member ids are rendered as their string values, levels as Dim.Level refs;
// absent measure values become null.

nlohmann::json toJson(const Catalog& cat, const Signature& s,
                      std::uint64_t cap = kDefaultMaterializeCap);
nlohmann::json toJson(const Catalog& cat, const CoverageReport& r,
                      std::uint64_t cap = kDefaultMaterializeCap);
nlohmann::json toJson(const Verdict& v);
nlohmann::json toJson(const Catalog& cat, const DistanceBreakdown& d);
nlohmann::json toJson(const Catalog& cat, const QueryResult& r);
nlohmann::json toJson(const CatalogReport& r);

}  // namespace cubealg
