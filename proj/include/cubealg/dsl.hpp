#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cubealg/executor.hpp"
#include "cubealg/query.hpp"

namespace cubealg {

struct Diagnostic {
  int line = 0;  // 1-based
  int col = 0;   // 1-based
  std::string message;
};

std::string formatDiagnostics(const std::vector<Diagnostic>& diags);

// Parses one query in the textual form
//
//   QUERY <id> FROM <dataset>
//   [WHERE <dim>.<level> IN {v, ...} [AND ...]]        -- or <op> <value>
//   GROUP BY <dim>.<level> [, ...]
//   AGG <fn>(<measure>) AS <name> [, ...]
//
// resolving every name against the catalog.  Comparison atoms are expanded
// to detailed IN sets; the result is fully normalized.  The throwing form
// raises Error(ParseError) carrying all diagnostics in its message.
bool tryParseQuery(const std::string& text, const Catalog& cat, CubeQuery* out,
                   std::vector<Diagnostic>* diagnostics);
CubeQuery parseQuery(const std::string& text, const Catalog& cat);

// Canonical text for a normalized query: every dimension's atom in catalog
// order with sorted value sets, explicit top-level atoms included.  Parsing
// the output reproduces the query exactly.
std::string serializeQuery(const Catalog& cat, const CubeQuery& q);

// Catalog loading.  The manifest is a key = value file:
//
//   catalog = taxes
//   delimiter = ,
//   dimension.Date = date.dim.csv            -- or `auto` (from fact column)
//   dimension.Date.ordered = true
//   dimension.Date.edges = Month<Quarter, Quarter<Year
//   dimension.Date.annotation.Month = ...
//   facts.taxes = taxes.facts.csv
//   facts.taxes.measures = TaxPaid, HoursSpent
//
// Dimension files are delimiter-separated with a level-name header row
// (detailed level first) and one row per detailed member giving its ancestor
// at every level; a single-member top level named ALL is added when missing.
// The fact file header names every dimension then every measure.
Catalog loadCatalog(const std::string& manifestPath);

// Same pipeline, but collecting problems instead of failing fast: lattice and
// member violations per dimension, then data faults (bad fact rows and the
// like) as plain messages.  IO and syntax errors still throw.
struct CatalogReport {
  std::vector<Violation> violations;
  std::vector<std::string> dataFaults;

  bool clean() const { return violations.empty() && dataFaults.empty(); }
};
CatalogReport validateCatalogFiles(const std::string& manifestPath);

CubeQuery loadQueryFile(const std::string& path, const Catalog& cat);

// Result cell files, as written by the CLI's exec subcommand and read back by
// rewrite --cached-result.  Self-describing header, then one row per cell.
void writeResultFile(std::ostream& out, const Catalog& cat,
                     const QueryResult& result);
QueryResult readResultFile(std::istream& in, const Catalog& cat);

std::string formatDouble(double v);

}  // namespace cubealg
