#include "cubealg/signature.hpp"

#include <algorithm>
#include <limits>

#include "cubealg/sorted_set.hpp"

namespace cubealg {

Signature makeFactored(std::vector<LevelIndex> levels,
                       std::vector<std::vector<MemberIndex>> factors) {
  Signature s;
  s.levels = std::move(levels);
  s.form = Signature::Form::Factored;
  s.factors = std::move(factors);
  for (const auto& f : s.factors) {
    if (f.empty()) {
      for (auto& g : s.factors) g.clear();
      break;
    }
  }
  return s;
}

Signature makeExplicit(std::vector<LevelIndex> levels,
                       std::vector<std::vector<MemberIndex>> tuples) {
  Signature s;
  s.levels = std::move(levels);
  s.form = Signature::Form::Explicit;
  sortUnique(tuples);
  s.tuples = std::move(tuples);
  return s;
}

std::uint64_t signatureCount(const Signature& s) {
  if (!s.factored()) return s.tuples.size();
  if (!s.factors.empty() && s.factors[0].empty()) return 0;
  std::uint64_t n = 1;
  for (const auto& f : s.factors) {
    if (f.empty()) return 0;
    if (n > std::numeric_limits<std::uint64_t>::max() / f.size()) {
      return std::numeric_limits<std::uint64_t>::max();  // saturate
    }
    n *= f.size();
  }
  return n;
}

bool signatureEmpty(const Signature& s) { return signatureCount(s) == 0; }

std::vector<std::vector<MemberIndex>> materialize(const Signature& s,
                                                  std::uint64_t cap) {
  if (!s.factored()) {
    if (s.tuples.size() > cap) {
      fail(ErrorKind::MaterializationCap,
           "signature holds " + std::to_string(s.tuples.size()) +
               " tuples, cap is " + std::to_string(cap));
    }
    return s.tuples;
  }
  std::uint64_t n = signatureCount(s);
  if (n > cap) {
    fail(ErrorKind::MaterializationCap,
         "signature would materialize " + std::to_string(n) +
             " tuples, cap is " + std::to_string(cap));
  }
  std::vector<std::vector<MemberIndex>> out;
  if (n == 0) return out;
  out.reserve(n);
  const size_t dims = s.factors.size();
  std::vector<size_t> idx(dims, 0);
  // Odometer over ordinal-sorted factors yields lexicographically sorted
  // tuples directly.
  while (true) {
    std::vector<MemberIndex> t(dims);
    for (size_t i = 0; i < dims; ++i) t[i] = s.factors[i][idx[i]];
    out.push_back(std::move(t));
    size_t d = dims;
    while (d > 0) {
      --d;
      if (++idx[d] < s.factors[d].size()) break;
      idx[d] = 0;
      if (d == 0) return out;
    }
    if (dims == 0) return out;
  }
}

bool signatureContains(const Signature& s, const std::vector<MemberIndex>& t) {
  if (s.factored()) {
    if (s.factors.size() != t.size()) return false;
    for (size_t i = 0; i < t.size(); ++i) {
      if (!std::binary_search(s.factors[i].begin(), s.factors[i].end(), t[i])) {
        return false;
      }
    }
    return true;
  }
  return std::binary_search(s.tuples.begin(), s.tuples.end(), t);
}

bool signatureEquals(const Signature& a, const Signature& b) {
  if (a.levels != b.levels) return false;
  if (a.factored() && b.factored()) {
    if (signatureEmpty(a) && signatureEmpty(b)) return true;
    return a.factors == b.factors;
  }
  if (!a.factored() && !b.factored()) return a.tuples == b.tuples;
  const Signature& f = a.factored() ? a : b;
  const Signature& e = a.factored() ? b : a;
  if (signatureCount(f) != e.tuples.size()) return false;
  for (const auto& t : e.tuples) {
    if (!signatureContains(f, t)) return false;
  }
  return true;
}

namespace {

void requireSameLevels(const Signature& a, const Signature& b) {
  if (a.levels != b.levels) {
    fail(ErrorKind::LevelMismatch,
         "signature operands sit at different levels");
  }
}

}  // namespace

Signature sigIntersect(const Signature& a, const Signature& b,
                       std::uint64_t cap) {
  requireSameLevels(a, b);
  if (a.factored() && b.factored()) {
    std::vector<std::vector<MemberIndex>> factors(a.factors.size());
    for (size_t i = 0; i < factors.size(); ++i) {
      factors[i] = setIntersect(a.factors[i], b.factors[i]);
    }
    return makeFactored(a.levels, std::move(factors));
  }
  // Mixed forms: filter the explicit side through the other operand instead
  // of materializing a possibly huge factored side.
  const Signature* e = !a.factored() ? &a : (!b.factored() ? &b : nullptr);
  const Signature* other = (e == &a) ? &b : &a;
  std::vector<std::vector<MemberIndex>> out;
  for (const auto& t : e->tuples) {
    if (signatureContains(*other, t)) out.push_back(t);
  }
  (void)cap;
  return makeExplicit(a.levels, std::move(out));
}

Signature sigUnion(const Signature& a, const Signature& b, std::uint64_t cap) {
  requireSameLevels(a, b);
  if (a.factored() && b.factored() && a.factors == b.factors) return a;
  auto ta = materialize(a, cap);
  auto tb = materialize(b, cap);
  return makeExplicit(a.levels, setUnion(ta, tb));
}

Signature sigDifference(const Signature& a, const Signature& b,
                        std::uint64_t cap) {
  requireSameLevels(a, b);
  if (!a.factored()) {
    std::vector<std::vector<MemberIndex>> out;
    for (const auto& t : a.tuples) {
      if (!signatureContains(b, t)) out.push_back(t);
    }
    return makeExplicit(a.levels, std::move(out));
  }
  auto ta = materialize(a, cap);
  if (!b.factored()) {
    return makeExplicit(a.levels, setDifference(ta, b.tuples));
  }
  std::vector<std::vector<MemberIndex>> out;
  for (auto& t : ta) {
    if (!signatureContains(b, t)) out.push_back(std::move(t));
  }
  return makeExplicit(a.levels, std::move(out));
}

std::vector<MemberIndex> gdomValues(const Catalog& cat, const Atom& atom,
                                    LevelIndex grouper) {
  const Dimension& d = cat.dimension(atom.dim);
  if (grouper == atom.level) return atom.values;
  if (d.leq(grouper, atom.level)) {
    std::vector<MemberIndex> out;
    for (MemberIndex v : atom.values) {
      const auto& ds = d.desc(atom.level, grouper, v);
      out.insert(out.end(), ds.begin(), ds.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  if (d.leq(atom.level, grouper)) {
    std::vector<MemberIndex> out;
    out.reserve(atom.values.size());
    for (MemberIndex v : atom.values) {
      out.push_back(d.anc(atom.level, grouper, v));
    }
    sortUnique(out);
    return out;
  }
  // Incomparable levels: take the image through the bottom level.
  std::vector<MemberIndex> out;
  for (MemberIndex v0 : atomDetailedValues(cat, atom)) {
    out.push_back(d.anc(d.bottom(), grouper, v0));
  }
  sortUnique(out);
  return out;
}

Signature conditionSignature(const Catalog& cat, const CubeQuery& q) {
  std::vector<LevelIndex> levels;
  std::vector<std::vector<MemberIndex>> factors;
  for (const Atom& a : q.atoms) {
    levels.push_back(a.level);
    factors.push_back(a.values);
  }
  (void)cat;
  return makeFactored(std::move(levels), std::move(factors));
}

Signature detailedSignature(const Catalog& cat, const CubeQuery& q) {
  std::vector<LevelIndex> levels;
  std::vector<std::vector<MemberIndex>> factors;
  for (const Atom& a : q.atoms) {
    levels.push_back(cat.dimension(a.dim).bottom());
    factors.push_back(atomDetailedValues(cat, a));
  }
  return makeFactored(std::move(levels), std::move(factors));
}

Signature querySignature(const Catalog& cat, const CubeQuery& q) {
  std::vector<std::vector<MemberIndex>> factors;
  for (int dim = 0; dim < cat.dimensionCount(); ++dim) {
    factors.push_back(gdomValues(cat, q.atoms[dim], q.groupers[dim]));
  }
  return makeFactored(q.groupers, std::move(factors));
}

Signature querySignatureViaDetailed(const Catalog& cat, const CubeQuery& q,
                                    std::uint64_t cap) {
  auto detailed = materialize(detailedSignature(cat, q), cap);
  std::vector<std::vector<MemberIndex>> tuples;
  tuples.reserve(detailed.size());
  for (const auto& t : detailed) {
    std::vector<MemberIndex> up(t.size());
    for (size_t dim = 0; dim < t.size(); ++dim) {
      const Dimension& d = cat.dimension(static_cast<int>(dim));
      up[dim] = d.anc(d.bottom(), q.groupers[dim], t[dim]);
    }
    tuples.push_back(std::move(up));
  }
  return makeExplicit(q.groupers, std::move(tuples));
}

CoverageReport coveredAndNovel(const Catalog& cat, const CubeQuery& q,
                               const CubeQuery& qstar, std::uint64_t cap) {
  if (q.groupers != qstar.groupers) {
    fail(ErrorKind::LevelMismatch,
         "covered/novel needs both queries grouped at the same levels");
  }
  Signature qs = querySignature(cat, q);
  Signature ss = querySignature(cat, qstar);
  CoverageReport r;
  r.covered = sigIntersect(qs, ss, cap);
  r.novel = sigDifference(qs, ss, cap);
  return r;
}

}  // namespace cubealg
