#include "mereo/qe.hpp"

#include <algorithm>
#include <set>

#include "mereo/error.hpp"

namespace mereo {

namespace {

void check_cap(size_t n) {
  if (n > kMaxDisjuncts)
    throw CapError("normal form exceeds " + std::to_string(kMaxDisjuncts) + " disjuncts");
}

ProfileSet disjoin(ProfileSet a, const ProfileSet& b) {
  check_cap(a.alts.size() + b.alts.size());
  a.alts.insert(a.alts.end(), b.alts.begin(), b.alts.end());
  a.canonicalize();
  return a;
}

ProfileSet conjoin(const ProfileSet& a, const ProfileSet& b) {
  ProfileSet out = ProfileSet::falsum(a.params);
  for (const CellProfile& p : a.alts) {
    for (const CellProfile& q : b.alts) {
      CellProfile r = profile_and(p, q);
      if (r.structurally_satisfiable()) out.alts.push_back(std::move(r));
      // Dedupe mid-product so a redundant blowup doesn't ride to the cap.
      if (out.alts.size() >= 65536) out.canonicalize();
      check_cap(out.alts.size());
    }
  }
  out.canonicalize();
  return out;
}

// DNF of f itself (positive) or of its negation, keeping negation flat at the
// atoms. Profile-level complementation is then only ever needed on the output
// of a quantifier step, where the parameter list has already shrunk.
ProfileSet qe_pol(const Formula& f, const std::vector<std::string>& params,
                  TheoryMode mode, bool positive, bool allow_quantifiers) {
  switch (f.kind()) {
    case Formula::Kind::Subseteq:
    case Formula::Kind::Equal:
    case Formula::Kind::CardEq:
      return positive ? atomic_to_profiles(f, params, mode)
                      : negated_atomic_to_profiles(f, params, mode);
    case Formula::Kind::Not:
      return qe_pol(f.child(0), params, mode, !positive, allow_quantifiers);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      ProfileSet a = qe_pol(f.child(0), params, mode, positive, allow_quantifiers);
      ProfileSet b = qe_pol(f.child(1), params, mode, positive, allow_quantifiers);
      bool meet = (f.kind() == Formula::Kind::And) == positive;
      return meet ? conjoin(a, b) : disjoin(std::move(a), b);
    }
    case Formula::Kind::Implies: {
      ProfileSet na = qe_pol(f.child(0), params, mode, !positive, allow_quantifiers);
      ProfileSet b = qe_pol(f.child(1), params, mode, positive, allow_quantifiers);
      return positive ? disjoin(std::move(na), b) : conjoin(na, b);
    }
    case Formula::Kind::Iff: {
      ProfileSet a = qe_pol(f.child(0), params, mode, true, allow_quantifiers);
      ProfileSet na = qe_pol(f.child(0), params, mode, false, allow_quantifiers);
      ProfileSet b = qe_pol(f.child(1), params, mode, true, allow_quantifiers);
      ProfileSet nb = qe_pol(f.child(1), params, mode, false, allow_quantifiers);
      if (positive) return disjoin(conjoin(a, b), conjoin(na, nb));
      return disjoin(conjoin(a, nb), conjoin(na, b));
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      if (!allow_quantifiers)
        throw Error("to_profiles requires a quantifier-free formula");
      std::vector<std::string> inner = params;
      inner.push_back(f.var());
      // Rewrite the node as E or ~E: an E body keeps its polarity, an A body
      // flips it (A x. phi = ~E x. ~phi). The node is effectively existential
      // when the syntactic quantifier agrees with the requested polarity;
      // otherwise the eliminated set gets complemented once.
      bool is_exists = f.kind() == Formula::Kind::Exists;
      ProfileSet body = qe_pol(f.child(0), inner, mode, is_exists, true);
      ProfileSet gone = eliminate_exists(body, mode);
      return is_exists == positive ? gone : negate_profiles(gone);
    }
  }
  throw std::logic_error("bad formula kind");
}

}  // namespace

ProfileSet negate_profiles(const ProfileSet& d) {
  ProfileSet acc = ProfileSet::verum(d.params);
  for (const CellProfile& p : d.alts) {
    ProfileSet neg = ProfileSet::falsum(d.params);
    for (size_t m = 0; m < p.cells.size(); ++m) {
      if (p.cells[m].full()) continue;
      CellProfile q = CellProfile::unconstrained(d.params);
      q.cells[m] = p.cells[m].complement();
      neg.alts.push_back(std::move(q));
    }
    neg.canonicalize();
    acc = conjoin(acc, neg);
    if (acc.is_false()) break;
  }
  return acc;
}

ProfileSet to_profiles(const Formula& qf, std::span<const std::string> params,
                       TheoryMode mode) {
  std::vector<std::string> pvec(params.begin(), params.end());
  return qe_pol(qf, pvec, mode, true, false);
}

ProfileSet eliminate_exists(const ProfileSet& d, TheoryMode mode) {
  if (d.params.empty()) throw Error("eliminate_exists: no parameter to eliminate");
  std::vector<std::string> params(d.params.begin(), d.params.end() - 1);
  size_t n = params.size();
  CellMask xbit = CellMask{1} << n;
  ProfileSet out = ProfileSet::falsum(params);
  for (const CellProfile& p : d.alts) {
    CellProfile q = CellProfile::unconstrained(params);
    if (mode == TheoryMode::Set) {
      // The x-only cell is the part of x inside the (infinite, untouchable)
      // exterior; any demanded value can be carved out of it, so the demand
      // just has to be nonempty.
      if (p.cells[xbit].empty()) continue;
      q.cells[0] = p.cells[0];
    } else {
      q.cells[0] = sumset(p.cells[xbit], p.cells[0]);
    }
    for (CellMask m = 1; m < (CellMask{1} << n); ++m)
      q.cells[m] = sumset(p.cells[m | xbit], p.cells[m]);
    out.alts.push_back(std::move(q));
    check_cap(out.alts.size());
  }
  out.canonicalize();
  return out;
}

ProfileSet qe_normal_form(const Formula& f, TheoryMode mode) {
  Formula g = rename_bound_apart(f);
  return qe_pol(g, free_variables(g), mode, true, true);
}

bool type_satisfiable(const CellProfile& p, TheoryMode mode) {
  if (!p.structurally_satisfiable()) return false;
  if (mode == TheoryMode::Set) return p.cells[0].cofinite();
  for (const SizeSet& s : p.cells)
    if (s.cofinite()) return true;
  return false;
}

bool decide(const Formula& sentence, TheoryMode mode) {
  if (!is_sentence(sentence)) throw Error("decide requires a sentence");
  ProfileSet nf = qe_normal_form(sentence, mode);
  for (const CellProfile& p : nf.alts)
    if (type_satisfiable(p, mode)) return true;
  return false;
}

bool equivalent(const Formula& f, const Formula& g, TheoryMode mode) {
  std::vector<std::string> fv = free_variables(f), gv = free_variables(g);
  std::set<std::string> fs(fv.begin(), fv.end()), gs(gv.begin(), gv.end());
  if (fs != gs) throw Error("equivalent: free-variable sets differ");
  Formula h = Formula::iff(f, g);
  for (auto it = fv.rbegin(); it != fv.rend(); ++it)
    h = Formula::forall(*it, std::move(h));
  return decide(h, mode);
}

}  // namespace mereo
