#include "mereo/cells.hpp"

#include <algorithm>

#include "mereo/error.hpp"

namespace mereo {

CellProfile CellProfile::unconstrained(std::vector<std::string> params) {
  if (params.size() > kMaxCellParams)
    throw CapError("too many parameters for a cell profile");
  CellProfile p;
  p.params = std::move(params);
  p.cells.assign(size_t{1} << p.params.size(), SizeSet::all());
  return p;
}

void CellProfile::constrain(CellMask m, const SizeSet& s) {
  cells.at(m) = cells.at(m) & s;
}

bool CellProfile::structurally_satisfiable() const {
  for (const SizeSet& s : cells)
    if (s.empty()) return false;
  return true;
}

bool CellProfile::trivial() const {
  for (const SizeSet& s : cells)
    if (!s.full()) return false;
  return true;
}

std::string CellProfile::mask_name(CellMask m) const {
  if (m == 0) return "(exterior)";
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < arity(); ++i) {
    if (m & (CellMask{1} << i)) {
      if (!first) s += ',';
      s += params[i];
      first = false;
    }
  }
  s += '}';
  return s;
}

std::string CellProfile::dump() const {
  std::string out;
  for (CellMask m = 1; m < cells.size(); ++m)
    out += mask_name(m) + " : " + cells[m].str() + "\n";
  out += mask_name(0) + " : " + cells[0].str() + "\n";
  return out;
}

ProfileSet ProfileSet::falsum(std::vector<std::string> params) {
  ProfileSet d;
  d.params = std::move(params);
  return d;
}

ProfileSet ProfileSet::verum(std::vector<std::string> params) {
  ProfileSet d;
  d.params = params;
  d.alts.push_back(CellProfile::unconstrained(std::move(params)));
  return d;
}

void ProfileSet::canonicalize() {
  alts.erase(std::remove_if(alts.begin(), alts.end(),
                            [](const CellProfile& p) {
                              return !p.structurally_satisfiable();
                            }),
             alts.end());
  std::sort(alts.begin(), alts.end());
  alts.erase(std::unique(alts.begin(), alts.end()), alts.end());
  // Drop disjuncts that imply a surviving disjunct; keeps complement products
  // from compounding. Quadratic, so only at sizes where it pays for itself.
  if (alts.size() < 2 || alts.size() > 512) return;
  auto subsumed = [&](const CellProfile& p, const CellProfile& q) {
    for (size_t m = 0; m < p.cells.size(); ++m)
      if (!p.cells[m].subset_of(q.cells[m])) return false;
    return true;
  };
  std::vector<bool> dead(alts.size(), false);
  for (size_t i = 0; i < alts.size(); ++i) {
    if (dead[i]) continue;
    for (size_t j = 0; j < alts.size(); ++j)
      if (j != i && !dead[j] && subsumed(alts[i], alts[j])) { dead[i] = true; break; }
  }
  size_t w = 0;
  for (size_t i = 0; i < alts.size(); ++i) {
    if (dead[i]) continue;
    if (w != i) alts[w] = std::move(alts[i]);
    ++w;
  }
  alts.resize(w);
}

std::string ProfileSet::dump() const {
  std::string out = "params: [";
  for (size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += params[i];
  }
  out += "]\ndisjuncts: " + std::to_string(alts.size()) + "\n";
  for (size_t i = 0; i < alts.size(); ++i) {
    out += "-- disjunct " + std::to_string(i + 1) + "\n";
    out += alts[i].dump();
  }
  return out;
}

namespace {

// Denotation of a term as the set of masks it covers, as a bitmap over masks.
std::vector<bool> term_denotation(const Term& t, std::span<const std::string> params,
                                  TheoryMode mode) {
  size_t n_cells = size_t{1} << params.size();
  std::vector<bool> out(n_cells, false);
  switch (t.kind()) {
    case Term::Kind::Var: {
      auto it = std::find(params.begin(), params.end(), t.name());
      if (it == params.end())
        throw Error("unknown variable '" + t.name() + "' in term");
      CellMask bit = CellMask{1} << (it - params.begin());
      for (size_t m = 0; m < n_cells; ++m) out[m] = (m & bit) != 0;
      return out;
    }
    case Term::Kind::Empty:
      return out;
    case Term::Kind::Universe:
      if (mode == TheoryMode::Set)
        throw ModeError("the universe constant 1 is not available in set mode");
      out.assign(n_cells, true);
      return out;
    case Term::Kind::Union: {
      auto a = term_denotation(t.left(), params, mode);
      auto b = term_denotation(t.right(), params, mode);
      for (size_t m = 0; m < n_cells; ++m) out[m] = a[m] || b[m];
      return out;
    }
    case Term::Kind::Inter: {
      auto a = term_denotation(t.left(), params, mode);
      auto b = term_denotation(t.right(), params, mode);
      for (size_t m = 0; m < n_cells; ++m) out[m] = a[m] && b[m];
      return out;
    }
    case Term::Kind::Diff: {
      auto a = term_denotation(t.left(), params, mode);
      auto b = term_denotation(t.right(), params, mode);
      for (size_t m = 0; m < n_cells; ++m) out[m] = a[m] && !b[m];
      return out;
    }
  }
  throw std::logic_error("bad term kind");
}

}  // namespace

std::vector<CellMask> term_cells(const Term& t, std::span<const std::string> params,
                                 TheoryMode mode) {
  if (params.size() > kMaxCellParams)
    throw CapError("too many parameters for a cell diagram");
  auto d = term_denotation(t, params, mode);
  std::vector<CellMask> out;
  for (size_t m = 0; m < d.size(); ++m)
    if (d[m]) out.push_back(static_cast<CellMask>(m));
  return out;
}

uint64_t card_eq_disjunct_count(uint64_t k, size_t cell_count) {
  if (cell_count == 0) return k == 0 ? 1 : 0;
  // C(k + c - 1, c - 1), saturating.
  uint64_t c = cell_count;
  long double acc = 1.0L;
  for (uint64_t i = 1; i < c; ++i) acc = acc * (k + i) / i;
  return acc > 1e18L ? ~0ull : static_cast<uint64_t>(acc + 0.5L);
}

namespace {

// Sizes {a, a+1, ...} together with inf.
SizeSet at_least(uint64_t a) {
  std::vector<uint64_t> below(a);
  for (uint64_t i = 0; i < a; ++i) below[i] = i;
  return SizeSet::cofin(std::move(below));
}

// exact: each cell pinned to its part. Otherwise each cell lower-bounded, so
// the emitted profiles cover exactly "sum >= k".
void compositions(uint64_t k, size_t cells, std::vector<uint64_t>& cur,
                  const std::vector<CellMask>& masks, const CellProfile& base,
                  std::vector<CellProfile>& out, bool exact) {
  if (cur.size() + 1 == cells) {
    CellProfile p = base;
    for (size_t i = 0; i < cur.size(); ++i)
      p.constrain(masks[i], exact ? SizeSet::exactly(cur[i]) : at_least(cur[i]));
    p.constrain(masks[cur.size()], exact ? SizeSet::exactly(k) : at_least(k));
    out.push_back(std::move(p));
    return;
  }
  for (uint64_t v = 0; v <= k; ++v) {
    cur.push_back(v);
    compositions(k - v, cells, cur, masks, base, out, exact);
    cur.pop_back();
  }
}

}  // namespace

ProfileSet atomic_to_profiles(const Formula& atom, std::span<const std::string> params,
                              TheoryMode mode) {
  std::vector<std::string> pvec(params.begin(), params.end());
  ProfileSet d = ProfileSet::falsum(pvec);
  switch (atom.kind()) {
    case Formula::Kind::Subseteq:
    case Formula::Kind::Equal: {
      auto a = term_cells(atom.lhs(), params, mode);
      auto b = term_cells(atom.rhs(), params, mode);
      CellProfile p = CellProfile::unconstrained(pvec);
      for (CellMask m : a)
        if (!std::binary_search(b.begin(), b.end(), m))
          p.constrain(m, SizeSet::exactly(0));
      if (atom.kind() == Formula::Kind::Equal) {
        for (CellMask m : b)
          if (!std::binary_search(a.begin(), a.end(), m))
            p.constrain(m, SizeSet::exactly(0));
      }
      d.alts.push_back(std::move(p));
      break;
    }
    case Formula::Kind::CardEq: {
      auto masks = term_cells(atom.term(), params, mode);
      if (masks.empty()) {
        if (atom.k() == 0) d.alts.push_back(CellProfile::unconstrained(pvec));
        break;
      }
      CellProfile base = CellProfile::unconstrained(pvec);
      std::vector<uint64_t> cur;
      compositions(atom.k(), masks.size(), cur, masks, base, d.alts, true);
      break;
    }
    default:
      throw Error("atomic_to_profiles requires an atom");
  }
  d.canonicalize();
  return d;
}

ProfileSet negated_atomic_to_profiles(const Formula& atom,
                                      std::span<const std::string> params,
                                      TheoryMode mode) {
  std::vector<std::string> pvec(params.begin(), params.end());
  ProfileSet d = ProfileSet::falsum(pvec);
  switch (atom.kind()) {
    case Formula::Kind::Subseteq:
    case Formula::Kind::Equal: {
      auto a = term_cells(atom.lhs(), params, mode);
      auto b = term_cells(atom.rhs(), params, mode);
      auto witness = [&](CellMask m) {
        CellProfile p = CellProfile::unconstrained(pvec);
        p.constrain(m, at_least(1));
        d.alts.push_back(std::move(p));
      };
      for (CellMask m : a)
        if (!std::binary_search(b.begin(), b.end(), m)) witness(m);
      if (atom.kind() == Formula::Kind::Equal) {
        for (CellMask m : b)
          if (!std::binary_search(a.begin(), a.end(), m)) witness(m);
      }
      break;
    }
    case Formula::Kind::CardEq: {
      auto masks = term_cells(atom.term(), params, mode);
      if (masks.empty()) {
        if (atom.k() != 0) return ProfileSet::verum(std::move(pvec));
        break;
      }
      CellProfile base = CellProfile::unconstrained(pvec);
      std::vector<uint64_t> cur;
      for (uint64_t j = 0; j < atom.k(); ++j)
        compositions(j, masks.size(), cur, masks, base, d.alts, true);
      compositions(atom.k() + 1, masks.size(), cur, masks, base, d.alts, false);
      break;
    }
    default:
      throw Error("negated_atomic_to_profiles requires an atom");
  }
  d.canonicalize();
  return d;
}

CellProfile profile_and(const CellProfile& a, const CellProfile& b) {
  if (a.params != b.params)
    throw Error("profile_and: parameter lists differ");
  CellProfile p = a;
  for (size_t m = 0; m < p.cells.size(); ++m) p.cells[m] = p.cells[m] & b.cells[m];
  return p;
}

}  // namespace mereo
