// cubealg command line: catalog validation, query execution, and the
// syntactic query-relationship checks, over files on disk.
//
// Exit codes: 0 = success / relation holds, 1 = relation does not hold or
// the catalog has violations, 2 = usage or processing error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cubealg/compare.hpp"
#include "cubealg/distance.hpp"
#include "cubealg/dsl.hpp"
#include "cubealg/executor.hpp"
#include "cubealg/json_out.hpp"
#include "cubealg/usability.hpp"

namespace {

using namespace cubealg;

std::uint64_t materializeCap() {
  if (const char* s = std::getenv("CUBEALG_MATERIALIZE_CAP")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
    fail(ErrorKind::InvalidArgument,
         std::string("CUBEALG_MATERIALIZE_CAP: '") + s +
             "' is not a positive integer");
  }
  return kDefaultMaterializeCap;
}

void printJson(const nlohmann::json& j) { std::cout << j.dump(2) << "\n"; }

void printVerdict(const Verdict& v) {
  for (const TraceEntry& e : v.trace) {
    std::cout << "  " << (e.pass ? "pass" : "FAIL") << " " << e.condition;
    if (!e.detail.empty()) std::cout << ": " << e.detail;
    std::cout << "\n";
  }
  std::cout << (v.holds ? "holds" : "does not hold") << "\n";
}

void printTuples(const Catalog& cat, const Signature& s, std::uint64_t cap) {
  for (const auto& t : materialize(s, cap)) {
    for (size_t d = 0; d < t.size(); ++d) {
      if (d) std::cout << ",";
      std::cout << cat.dimension(static_cast<int>(d)).memberValue(t[d]);
    }
    std::cout << "\n";
  }
}

void printCoverage(const Catalog& cat, const CoverageReport& r,
                   std::uint64_t cap) {
  std::cout << "covered (" << signatureCount(r.covered) << "):\n";
  printTuples(cat, r.covered, cap);
  std::cout << "novel (" << signatureCount(r.novel) << "):\n";
  printTuples(cat, r.novel, cap);
}

std::vector<CubeQuery> loadSession(const std::string& dir, const Catalog& cat) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".cq") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<CubeQuery> queries;
  for (const auto& f : files) {
    queries.push_back(loadQueryFile(f.string(), cat));
  }
  return queries;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cube query algebra toolkit"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "emit JSON instead of plain text");

  std::string manifest, queryPath, otherPath, outPath, sessionDir;
  std::string relation, weightsArg, cachedPath, cachedResultPath;
  bool detailed = false, containment = false;

  CLI::App* validate =
      app.add_subcommand("validate", "check catalog files for violations");
  validate->add_option("manifest", manifest)->required();

  CLI::App* exec = app.add_subcommand("exec", "run a query against the data");
  exec->add_option("manifest", manifest)->required();
  exec->add_option("query", queryPath)->required();
  exec->add_option("-o,--output", outPath, "write the result file here");

  CLI::App* signature =
      app.add_subcommand("signature", "print a query's coordinate signature");
  signature->add_option("manifest", manifest)->required();
  signature->add_option("query", queryPath)->required();
  signature->add_flag("--detailed", detailed,
                      "bottom-level signature instead of grouping-level");

  CLI::App* check = app.add_subcommand(
      "check", "decide a relation between two queries syntactically");
  check
      ->add_option("relation", relation,
                   "fcontains | fcontains-fast | contains | intersects")
      ->required()
      ->check(CLI::IsMember(
          {"fcontains", "fcontains-fast", "contains", "intersects"}));
  check->add_option("manifest", manifest)->required();
  check->add_option("query", queryPath)->required();
  check->add_option("other", otherPath)->required();

  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "split a query's coordinates against a benchmark query");
  enumerate->add_option("manifest", manifest)->required();
  enumerate->add_option("query", queryPath)->required();
  enumerate->add_option("benchmark", otherPath)->required();
  enumerate->add_flag("--containment", containment,
                      "guard with the containment test instead of intersection");

  CLI::App* coverage = app.add_subcommand(
      "coverage", "fold a session of answered queries over a query");
  coverage->add_option("manifest", manifest)->required();
  coverage->add_option("session", sessionDir, "directory of .cq files")
      ->required();
  coverage->add_option("query", queryPath)->required();

  CLI::App* distance =
      app.add_subcommand("distance", "similarity distance between two queries");
  distance->add_option("manifest", manifest)->required();
  distance->add_option("query", queryPath)->required();
  distance->add_option("other", otherPath)->required();
  distance->add_option("--weights", weightsArg,
                       "condition,level,measure (default 0.5,0.35,0.15)");

  CLI::App* rewrite = app.add_subcommand(
      "rewrite", "answer a query from a cached result when usable");
  rewrite->add_option("manifest", manifest)->required();
  rewrite->add_option("query", queryPath)->required();
  rewrite->add_option("--cached", cachedPath, "the answered query")->required();
  rewrite
      ->add_option("--cached-result", cachedResultPath,
                   "its result file, as written by exec")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const std::uint64_t cap = materializeCap();

    if (*validate) {
      CatalogReport report = validateCatalogFiles(manifest);
      if (json) {
        printJson(toJson(report));
      } else {
        for (const Violation& v : report.violations) {
          std::cout << violationKindName(v.kind) << " " << v.dimension << ": "
                    << v.detail << "\n";
        }
        for (const std::string& f : report.dataFaults) {
          std::cout << "data: " << f << "\n";
        }
        if (report.clean()) std::cout << "ok\n";
      }
      return report.clean() ? 0 : 1;
    }

    Catalog cat = loadCatalog(manifest);

    if (*exec) {
      QueryResult result = execute(cat, loadQueryFile(queryPath, cat));
      if (json) {
        printJson(toJson(cat, result));
      } else if (outPath.empty()) {
        writeResultFile(std::cout, cat, result);
      } else {
        std::ofstream out(outPath);
        if (!out) fail(ErrorKind::IoError, "cannot write " + outPath);
        writeResultFile(out, cat, result);
      }
      return 0;
    }

    if (*signature) {
      CubeQuery q = loadQueryFile(queryPath, cat);
      Signature s = detailed ? detailedSignature(cat, q) : querySignature(cat, q);
      printJson(toJson(cat, s, cap));
      return 0;
    }

    if (*check) {
      CubeQuery a = loadQueryFile(queryPath, cat);
      CubeQuery b = loadQueryFile(otherPath, cat);
      Verdict v;
      if (relation == "fcontains") v = foundationalContains(cat, a, b);
      else if (relation == "fcontains-fast") v = foundationalContainsFast(cat, a, b);
      else if (relation == "contains") v = sameLevelContains(cat, a, b);
      else v = sameLevelIntersects(cat, a, b);
      if (json) {
        printJson(toJson(v));
      } else {
        printVerdict(v);
      }
      return v.holds ? 0 : 1;
    }

    if (*enumerate) {
      CubeQuery q = loadQueryFile(queryPath, cat);
      CubeQuery qstar = loadQueryFile(otherPath, cat);
      CoverageReport r = containment ? enumerateContainment(cat, q, qstar, cap)
                                     : enumerateIntersection(cat, q, qstar, cap);
      if (json) {
        printJson(toJson(cat, r, cap));
      } else {
        printCoverage(cat, r, cap);
      }
      return 0;
    }

    if (*coverage) {
      QuerySession session{loadSession(sessionDir, cat)};
      CubeQuery q = loadQueryFile(queryPath, cat);
      CoverageReport r = partialCoverage(cat, session, q, cap);
      if (json) {
        printJson(toJson(cat, r, cap));
      } else {
        printCoverage(cat, r, cap);
      }
      return 0;
    }

    if (*distance) {
      CubeQuery a = loadQueryFile(queryPath, cat);
      CubeQuery b = loadQueryFile(otherPath, cat);
      DistanceWeights w;
      if (!weightsArg.empty()) {
        double parts[3];
        size_t pos = 0;
        for (int i = 0; i < 3; ++i) {
          size_t comma = weightsArg.find(',', pos);
          std::string piece = comma == std::string::npos
                                  ? weightsArg.substr(pos)
                                  : weightsArg.substr(pos, comma - pos);
          char* end = nullptr;
          parts[i] = std::strtod(piece.c_str(), &end);
          bool last = (i == 2);
          if (!end || *end != '\0' || piece.empty() ||
              (last ? comma != std::string::npos
                    : comma == std::string::npos)) {
            fail(ErrorKind::InvalidArgument,
                 "--weights needs three comma-separated numbers");
          }
          pos = comma + 1;
        }
        w = DistanceWeights{parts[0], parts[1], parts[2]};
      }
      DistanceBreakdown d = queryDistance(cat, a, b, w);
      if (json) {
        printJson(toJson(cat, d));
      } else {
        std::cout << "condition " << formatDouble(d.condition) << "\n"
                  << "level     " << formatDouble(d.level) << "\n"
                  << "measure   " << formatDouble(d.measure) << "\n"
                  << "total     " << formatDouble(d.total) << "\n";
      }
      return 0;
    }

    if (*rewrite) {
      CubeQuery qn = loadQueryFile(queryPath, cat);
      CubeQuery qb = loadQueryFile(cachedPath, cat);
      std::ifstream in(cachedResultPath);
      if (!in) fail(ErrorKind::IoError, "cannot open " + cachedResultPath);
      QueryResult cached = readResultFile(in, cat);
      QueryResult result;
      try {
        result = rewriteAndAnswer(cat, qn, qb, cached);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::NotUsable) {
          std::cerr << e.what() << "\n";
          return 1;
        }
        throw;
      }
      if (json) {
        printJson(toJson(cat, result));
      } else {
        writeResultFile(std::cout, cat, result);
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
