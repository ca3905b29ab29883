#include "cubealg/usability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "cubealg/sorted_set.hpp"

namespace cubealg {

bool isDistributive(AggFn fn) { return fn != AggFn::Avg; }

AggFn facilitator(AggFn fn) {
  switch (fn) {
    case AggFn::Sum: return AggFn::Sum;
    case AggFn::Min: return AggFn::Min;
    case AggFn::Max: return AggFn::Max;
    case AggFn::Count: return AggFn::Sum;
    case AggFn::Avg: break;
  }
  fail(ErrorKind::InvalidArgument, "avg has no facilitator; it is not distributive");
}

std::optional<Atom> raiseAtomToLevel(const Catalog& cat, const Atom& atom,
                                     LevelIndex level) {
  const Dimension& d = cat.dimension(atom.dim);
  if (atom.level == level) return atom;
  if (!isPerfectlyRollable(cat, atom, level).rollable) return std::nullopt;
  return Atom{atom.dim, level, gdomValues(cat, atom, level)};
}

namespace {

// qn's measures paired against qb's by (function, source); returns the qb
// measure index for each qn measure, or nullopt when some measure can't be
// paired injectively.
std::optional<std::vector<int>> mapMeasures(const CubeQuery& qn,
                                            const CubeQuery& qb) {
  std::vector<int> mapping(qn.measures.size(), -1);
  std::vector<bool> used(qb.measures.size(), false);
  for (size_t i = 0; i < qn.measures.size(); ++i) {
    for (size_t j = 0; j < qb.measures.size(); ++j) {
      if (used[j]) continue;
      if (qn.measures[i].fn == qb.measures[j].fn &&
          qn.measures[i].source == qb.measures[j].source) {
        mapping[i] = static_cast<int>(j);
        used[j] = true;
        break;
      }
    }
    if (mapping[i] < 0) return std::nullopt;
  }
  return mapping;
}

// Conditions 4..6 need qn's filters in convenience form (filter level at or
// above the grouping level); lower filters that roll perfectly are replaced
// by their exact higher-level equivalent first.
std::vector<Atom> salvagedAtoms(const Catalog& cat, const CubeQuery& q,
                                Verdict* v, const std::string& who) {
  std::vector<Atom> atoms = q.atoms;
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    const Dimension& d = cat.dimension(dim);
    LevelIndex g = q.groupers[dim];
    if (d.leq(g, atoms[dim].level)) {
      if (v) {
        v->add("4", true,
               who + " " + d.name() + ": filter at or above the grouping level");
      }
      continue;
    }
    auto raised = raiseAtomToLevel(cat, atoms[dim], g);
    if (raised) {
      atoms[dim] = *raised;
      if (v) {
        v->add("4", true,
               who + " " + d.name() + ": low filter rolls perfectly, replaced "
               "by its " + d.levelName(g) + "-level equivalent");
      }
    } else if (v) {
      v->add("4", false,
             who + " " + d.name() + ": filter below the grouping level and "
             "not perfectly rollable");
    }
  }
  return atoms;
}

}  // namespace

Verdict checkUsable(const Catalog& cat, const CubeQuery& qn,
                    const CubeQuery& qb) {
  Verdict v;
  const size_t n = static_cast<size_t>(cat.dimensionCount());
  if (qn.atoms.size() != n || qb.atoms.size() != n ||
      qn.groupers.size() != n || qb.groupers.size() != n) {
    fail(ErrorKind::SchemaMismatch,
         "queries do not share the catalog's dimension list");
  }

  v.add("1", qn.dataset == qb.dataset,
        qn.dataset == qb.dataset ? "same dataset"
                                 : "datasets differ: " + qn.dataset + " vs " +
                                       qb.dataset);

  auto mapping = mapMeasures(qn, qb);
  bool distributive = true;
  for (const AggMeasure& m : qn.measures) {
    if (!isDistributive(m.fn)) distributive = false;
  }
  if (!mapping) {
    v.add("2", false,
          "some aggregate of the new query has no (function, source) partner "
          "in the cached query");
  } else if (!distributive) {
    v.add("2", false, "non-distributive aggregate (avg) cannot be merged "
          "from cached groups");
  } else {
    v.add("2", true,
          "aggregates pair 1:1 by function and source; all distributive");
  }

  v.add("3", true, "both conditions are simple (one IN filter per dimension)");

  std::vector<Atom> atoms = salvagedAtoms(cat, qn, &v, "qn");
  salvagedAtoms(cat, qb, &v, "qb");

  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    const Dimension& d = cat.dimension(dim);
    bool ok = d.leq(qb.groupers[dim], qn.groupers[dim]);
    v.add("5", ok,
          d.name() + ": cached grouping level " +
              d.levelName(qb.groupers[dim]) +
              (ok ? " is at or below " : " is not at or below ") +
              d.levelName(qn.groupers[dim]));
  }

  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    const Dimension& d = cat.dimension(dim);
    LevelIndex gb = qb.groupers[dim];
    bool ok = isSubset(gdomValues(cat, atoms[dim], gb),
                       gdomValues(cat, qb.atoms[dim], gb));
    v.add("6", ok,
          d.name() + ": the new filter's image at " + d.levelName(gb) +
              (ok ? " stays inside" : " escapes") +
              " the cached result's coordinates");
  }
  return v;
}

namespace {

struct FacilitatorAccum {
  double sum = 0.0;
  double mn = std::numeric_limits<double>::infinity();
  double mx = -std::numeric_limits<double>::infinity();
  std::uint64_t present = 0;

  void add(double v) {
    if (std::isnan(v)) return;
    ++present;
    sum += v;
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }

  double value(AggFn mergeFn) const {
    if (!present) return std::numeric_limits<double>::quiet_NaN();
    switch (mergeFn) {
      case AggFn::Sum: return sum;
      case AggFn::Min: return mn;
      case AggFn::Max: return mx;
      default: return std::numeric_limits<double>::quiet_NaN();
    }
  }
};

std::string failedConditions(const Verdict& v) {
  std::string out;
  for (const TraceEntry& t : v.trace) {
    if (t.pass) continue;
    if (!out.empty()) out += ", ";
    out += t.condition + " (" + t.detail + ")";
  }
  return out;
}

}  // namespace

QueryResult rewriteAndAnswer(const Catalog& cat, const CubeQuery& qn,
                             const CubeQuery& qb, const QueryResult& qbResult) {
  Verdict v = checkUsable(cat, qn, qb);
  if (!v.holds) {
    fail(ErrorKind::NotUsable,
         "cached result cannot answer the query: " + failedConditions(v));
  }

  std::vector<std::string> qbNames;
  for (const AggMeasure& m : qb.measures) qbNames.push_back(m.name);
  if (qbResult.dataset != qb.dataset || qbResult.levels != qb.groupers ||
      qbResult.measureNames != qbNames) {
    fail(ErrorKind::StaleResult,
         "cached result does not carry the cached query's schema");
  }

  std::vector<Atom> atoms = salvagedAtoms(cat, qn, nullptr, "");
  auto mapping = *mapMeasures(qn, qb);

  // Admitted coordinate sets at the cached grouping levels.
  std::vector<std::vector<MemberIndex>> admit(cat.dimensionCount());
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    admit[dim] = gdomValues(cat, atoms[dim], qb.groupers[dim]);
  }

  std::map<std::vector<MemberIndex>, std::vector<FacilitatorAccum>> groups;
  std::vector<MemberIndex> key(cat.dimensionCount());
  for (const ResultCell& cell : qbResult.cells) {
    bool selected = true;
    for (int dim = 0; dim < cat.dimensionCount() && selected; ++dim) {
      selected = std::binary_search(admit[dim].begin(), admit[dim].end(),
                                    cell.coords[dim]);
    }
    if (!selected) continue;
    for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
      const Dimension& d = cat.dimension(dim);
      key[dim] =
          d.anc(qb.groupers[dim], qn.groupers[dim], cell.coords[dim]);
    }
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) it->second.resize(qn.measures.size());
    for (size_t j = 0; j < qn.measures.size(); ++j) {
      it->second[j].add(cell.measures[mapping[j]]);
    }
  }

  QueryResult out;
  out.dataset = qn.dataset;
  out.levels = qn.groupers;
  for (const AggMeasure& m : qn.measures) out.measureNames.push_back(m.name);
  for (auto& [coords, accums] : groups) {
    ResultCell cell;
    cell.coords = coords;
    for (size_t j = 0; j < accums.size(); ++j) {
      cell.measures.push_back(accums[j].value(facilitator(qn.measures[j].fn)));
    }
    out.cells.push_back(std::move(cell));
  }
  return out;
}

Verdict rollUpUsability(const Catalog& cat, const CubeQuery& q, int dim,
                        LevelIndex to) {
  const Dimension& d = cat.dimension(dim);
  Verdict v;
  bool up = d.leq(q.groupers[dim], to);
  v.add("direction", up,
        up ? d.name() + ": " + d.levelName(to) + " is a roll-up target"
           : d.name() + ": " + d.levelName(to) +
                 " is not above the current grouping level");
  bool distributive = true;
  for (const AggMeasure& m : q.measures) {
    if (!isDistributive(m.fn)) distributive = false;
  }
  v.add("measures", distributive,
        distributive ? "all aggregates are distributive"
                     : "non-distributive aggregate (avg) blocks reuse");
  if (!v.holds) return v;

  if (d.leq(to, q.atoms[dim].level)) {
    v.add("filter", true,
          d.name() + ": target level at or below the filter level; groups "
          "merge whole");
  } else {
    auto r = isPerfectlyRollable(cat, q.atoms[dim], to);
    std::string detail = d.name() + ": filter " +
                         (r.rollable ? "rolls perfectly to " : "breaks at ") +
                         d.levelName(to);
    if (!r.rollable && r.witness) {
      detail += " (member '" + d.memberValue(*r.witness) + "')";
    }
    v.add("rollability", r.rollable, detail);
  }
  return v;
}

Verdict extraFilterUsability(const Catalog& cat, const CubeQuery& q,
                             const Atom& extra) {
  const Dimension& d = cat.dimension(extra.dim);
  const Atom& current = q.atoms[extra.dim];
  bool sameLevel = extra.level == current.level;
  bool subset = sameLevel && isSubset(extra.values, current.values);
  bool aboveGrouper = d.leq(q.groupers[extra.dim], extra.level);
  if (sameLevel && subset && aboveGrouper) {
    Verdict v;
    v.add("same-level", true,
          d.name() + ": extra filter at the existing filter level");
    v.add("subset", true, d.name() + ": extra values narrow the filter");
    v.add("at-or-above-grouping", true,
          d.name() + ": filter level at or above the grouping level");
    return v;
  }
  Verdict v = checkUsable(cat, slice(cat, q, extra), q);
  v.trace.insert(v.trace.begin(),
                 TraceEntry{"fast-path", true,
                            "extra filter is not a same-level narrowing; "
                            "ran the full usability check"});
  return v;
}

}  // namespace cubealg
