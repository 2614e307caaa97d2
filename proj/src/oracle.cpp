#include "mereo/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <unordered_map>

#include "mereo/error.hpp"

namespace mereo {

namespace {

constexpr uint64_t kBruteSteps = 200'000'000;  // quantifier iterations
constexpr uint64_t kRungSpaceCap = 10'000'000;
// Sized so a full two-deep universal sweep over the two largest consecutive
// default rungs (11^3 * 11^4 descriptors) completes; three-deep full sweeps
// exceed it and come back Unstable.
constexpr uint64_t kSetStepsPerBase = 22'000'000;

uint64_t full_mask(uint32_t n) { return n >= 64 ? ~uint64_t{0} : (uint64_t{1} << n) - 1; }

// ---- class mode: bitsets over n atoms ----

struct Scope {
  // Innermost binding last; lookups scan backwards so shadowing works.
  std::vector<std::pair<std::string, uint64_t>> vals;

  uint64_t get(const std::string& name) const {
    for (auto it = vals.rbegin(); it != vals.rend(); ++it)
      if (it->first == name) return it->second;
    throw ModelError("unbound variable " + name);
  }
};

uint64_t eval_term_mask(const Term& t, uint32_t n, const Scope& env) {
  switch (t.kind()) {
    case Term::Kind::Var: return env.get(t.name());
    case Term::Kind::Empty: return 0;
    case Term::Kind::Universe: return full_mask(n);
    case Term::Kind::Union:
      return eval_term_mask(t.left(), n, env) | eval_term_mask(t.right(), n, env);
    case Term::Kind::Inter:
      return eval_term_mask(t.left(), n, env) & eval_term_mask(t.right(), n, env);
    case Term::Kind::Diff:
      return eval_term_mask(t.left(), n, env) & ~eval_term_mask(t.right(), n, env);
  }
  throw std::logic_error("bad term");
}

bool eval_mask_atom(const Formula& f, uint32_t n, const Scope& env) {
  switch (f.kind()) {
    case Formula::Kind::Subseteq:
      return (eval_term_mask(f.lhs(), n, env) & ~eval_term_mask(f.rhs(), n, env)) == 0;
    case Formula::Kind::Equal:
      return eval_term_mask(f.lhs(), n, env) == eval_term_mask(f.rhs(), n, env);
    case Formula::Kind::CardEq:
      return static_cast<uint64_t>(std::popcount(eval_term_mask(f.term(), n, env))) ==
             f.k();
    default:
      throw std::logic_error("not an atom");
  }
}

bool brute_rec(const Formula& f, uint32_t n, Scope& env, uint64_t& steps) {
  switch (f.kind()) {
    case Formula::Kind::Not: return !brute_rec(f.child(), n, env, steps);
    case Formula::Kind::And:
      return brute_rec(f.child(0), n, env, steps) && brute_rec(f.child(1), n, env, steps);
    case Formula::Kind::Or:
      return brute_rec(f.child(0), n, env, steps) || brute_rec(f.child(1), n, env, steps);
    case Formula::Kind::Implies:
      return !brute_rec(f.child(0), n, env, steps) || brute_rec(f.child(1), n, env, steps);
    case Formula::Kind::Iff:
      return brute_rec(f.child(0), n, env, steps) == brute_rec(f.child(1), n, env, steps);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool is_forall = f.kind() == Formula::Kind::Forall;
      env.vals.emplace_back(f.var(), 0);
      for (uint64_t x = 0; x <= full_mask(n); ++x) {
        if (++steps > kBruteSteps) throw CapError("finite oracle step budget exceeded");
        env.vals.back().second = x;
        if (brute_rec(f.child(), n, env, steps) != !is_forall) continue;
        env.vals.pop_back();
        return !is_forall;
      }
      env.vals.pop_back();
      return is_forall;
    }
    default:
      return eval_mask_atom(f, n, env);
  }
}

bool orbit_rec(const Formula& f, uint32_t n, Scope& env, uint64_t& steps) {
  switch (f.kind()) {
    case Formula::Kind::Not: return !orbit_rec(f.child(), n, env, steps);
    case Formula::Kind::And:
      return orbit_rec(f.child(0), n, env, steps) && orbit_rec(f.child(1), n, env, steps);
    case Formula::Kind::Or:
      return orbit_rec(f.child(0), n, env, steps) || orbit_rec(f.child(1), n, env, steps);
    case Formula::Kind::Implies:
      return !orbit_rec(f.child(0), n, env, steps) || orbit_rec(f.child(1), n, env, steps);
    case Formula::Kind::Iff:
      return orbit_rec(f.child(0), n, env, steps) == orbit_rec(f.child(1), n, env, steps);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool is_forall = f.kind() == Formula::Kind::Forall;
      // Venn cells of the variables in scope. Atoms with the same membership
      // signature are interchangeable under any permutation fixing the scope,
      // so a quantified element is determined up to that action by its count
      // of atoms per cell; one representative per count vector is enough.
      std::vector<uint64_t> cells;
      {
        std::map<uint64_t, uint64_t> by_sig;
        for (uint32_t i = 0; i < n; ++i) {
          uint64_t sig = 0;
          for (size_t j = 0; j < env.vals.size(); ++j)
            if (env.vals[j].second >> i & 1) sig |= uint64_t{1} << j;
          by_sig[sig] |= uint64_t{1} << i;
        }
        for (const auto& kv : by_sig) cells.push_back(kv.second);
      }
      std::vector<uint32_t> count(cells.size(), 0);
      env.vals.emplace_back(f.var(), 0);
      for (;;) {
        if (++steps > kBruteSteps) throw CapError("finite oracle step budget exceeded");
        uint64_t rep = 0;
        for (size_t c = 0; c < cells.size(); ++c) {
          uint64_t m = cells[c];
          for (uint32_t k = 0; k < count[c]; ++k) {
            rep |= m & -m;
            m &= m - 1;
          }
        }
        env.vals.back().second = rep;
        if (orbit_rec(f.child(), n, env, steps) == !is_forall) {
          env.vals.pop_back();
          return !is_forall;
        }
        size_t c = 0;
        while (c < cells.size() &&
               count[c] == static_cast<uint32_t>(std::popcount(cells[c]))) {
          count[c] = 0;
          ++c;
        }
        if (c == cells.size()) break;
        ++count[c];
      }
      env.vals.pop_back();
      return is_forall;
    }
    default:
      return eval_mask_atom(f, n, env);
  }
}

Scope scope_from(const std::map<std::string, uint64_t>& assignment, uint64_t top) {
  Scope env;
  for (const auto& [name, mask] : assignment) {
    if (mask & ~top) throw ModelError("assignment for " + name + " uses atoms out of range");
    env.vals.emplace_back(name, mask);
  }
  return env;
}

}  // namespace

bool brute_eval_finite(uint32_t n_atoms, const Formula& f,
                       const std::map<std::string, uint64_t>& assignment) {
  if (n_atoms > 16)
    throw CapError("exhaustive search over 2^n subsets needs n <= 16");
  Scope env = scope_from(assignment, full_mask(n_atoms));
  uint64_t steps = 0;
  return brute_rec(f, n_atoms, env, steps);
}

bool orbit_eval_finite(uint32_t n_atoms, const Formula& f,
                       const std::map<std::string, uint64_t>& assignment) {
  if (n_atoms > 63) throw CapError("orbit search needs n <= 63");
  Scope env = scope_from(assignment, full_mask(n_atoms));
  uint64_t steps = 0;
  return orbit_rec(f, n_atoms, env, steps);
}

std::vector<uint32_t> default_class_window() { return {8, 10, 12, 14}; }

OracleVerdict stabilized_decide_class(const Formula& f,
                                      const std::vector<uint32_t>& window) {
  if (!is_sentence(f))
    throw ModeError("stabilized decision needs a sentence, not free variables");
  if (window.empty()) throw Error("empty stabilization window");
  for (size_t i = 1; i < window.size(); ++i)
    if (window[i] <= window[i - 1]) throw Error("window must be strictly increasing");
  bool first = orbit_eval_finite(window[0], f);
  for (size_t i = 1; i < window.size(); ++i)
    if (orbit_eval_finite(window[i], f) != first) return OracleVerdict::Unstable;
  return verdict_of(first);
}

// ---- set mode: bounded column descriptors ----

namespace {

// One column: members below t come from the prefix bits, members at or above
// t follow the residue bits mod p. Kept canonical (minimal period, then
// minimal threshold) so equality is structural.
struct EP {
  uint32_t prefix = 0;
  uint32_t t = 0;
  uint32_t p = 1;
  uint64_t r = 0;

  bool contains(uint32_t i) const {
    return i < t ? (prefix >> i & 1) != 0 : (r >> (i % p) & 1) != 0;
  }
  bool none() const { return prefix == 0 && r == 0; }
  bool infinite() const { return r != 0; }

  void canonicalize() {
    for (uint32_t d = 1; d < p; ++d) {
      if (p % d) continue;
      bool ok = true;
      for (uint32_t i = 0; i < p && ok; ++i)
        ok = ((r >> i) & 1) == ((r >> (i % d)) & 1);
      if (ok) {
        r &= (uint64_t{1} << d) - 1;
        p = d;
        break;
      }
    }
    while (t > 0 && ((prefix >> (t - 1)) & 1) == ((r >> ((t - 1) % p)) & 1)) {
      --t;
      prefix &= (uint32_t{1} << t) - 1;
    }
  }
};

bool operator==(const EP& a, const EP& b) {
  return a.prefix == b.prefix && a.t == b.t && a.p == b.p && a.r == b.r;
}

template <class Op>
EP ep_combine_slow(const EP& a, const EP& b, Op op) {
  EP out;
  out.p = std::lcm(a.p, b.p);
  out.t = std::max(a.t, b.t);
  for (uint32_t i = 0; i < out.t; ++i)
    if (op(a.contains(i), b.contains(i))) out.prefix |= uint32_t{1} << i;
  for (uint32_t i = 0; i < out.p; ++i)
    if (op((a.r >> (i % a.p) & 1) != 0, (b.r >> (i % b.p) & 1) != 0))
      out.r |= uint64_t{1} << i;
  out.canonicalize();
  return out;
}

// Canonical EP from a 32-bit membership mask whose bits are constant `tail`
// from some position on (the period-1 case reduces combine to bitwise ops).
EP ep_from_mask(uint32_t m, bool tail) {
  uint32_t varying = tail ? ~m : m;
  uint32_t t = varying == 0 ? 0 : 32 - static_cast<uint32_t>(std::countl_zero(varying));
  return {m & ((uint32_t{1} << t) - 1), t, 1, tail};
}

EP ep_op(Term::Kind k, const EP& a, const EP& b) {
  if (a.p == 1 && b.p == 1) {
    uint32_t ma = a.prefix | (a.r ? ~uint32_t{0} << a.t : 0);
    uint32_t mb = b.prefix | (b.r ? ~uint32_t{0} << b.t : 0);
    switch (k) {
      case Term::Kind::Union: return ep_from_mask(ma | mb, a.r || b.r);
      case Term::Kind::Inter: return ep_from_mask(ma & mb, a.r && b.r);
      default: return ep_from_mask(ma & ~mb, a.r && !b.r);
    }
  }
  switch (k) {
    case Term::Kind::Union:
      return ep_combine_slow(a, b, [](bool x, bool y) { return x || y; });
    case Term::Kind::Inter:
      return ep_combine_slow(a, b, [](bool x, bool y) { return x && y; });
    default:
      return ep_combine_slow(a, b, [](bool x, bool y) { return x && !y; });
  }
}

constexpr uint32_t kMaxCols = 8;

struct BElem {
  std::array<EP, kMaxCols> col;
};

BElem belem_op(Term::Kind k, const BElem& a, const BElem& b, uint32_t ncols) {
  BElem out;
  for (uint32_t c = 0; c < ncols; ++c) {
    if (a.col[c].none() && b.col[c].none()) continue;
    out.col[c] = ep_op(k, a.col[c], b.col[c]);
  }
  return out;
}

bool belem_eq(const BElem& a, const BElem& b, uint32_t ncols) {
  for (uint32_t c = 0; c < ncols; ++c)
    if (!(a.col[c] == b.col[c])) return false;
  return true;
}

struct BScope {
  std::vector<std::pair<std::string, BElem>> vals;

  const BElem& get(const std::string& name) const {
    for (auto it = vals.rbegin(); it != vals.rend(); ++it)
      if (it->first == name) return it->second;
    throw ModelError("unbound variable " + name);
  }
};

BElem eval_term_belem(const Term& t, const BScope& env, uint32_t ncols) {
  switch (t.kind()) {
    case Term::Kind::Var: return env.get(t.name());
    case Term::Kind::Empty: return BElem{};
    case Term::Kind::Universe:
      throw ModeError("the universe constant has no set-mode meaning");
    default:
      return belem_op(t.kind(), eval_term_belem(t.left(), env, ncols),
                      eval_term_belem(t.right(), env, ncols), ncols);
  }
}

bool eval_belem_atom(const Formula& f, const BScope& env, uint32_t ncols) {
  switch (f.kind()) {
    case Formula::Kind::Subseteq: {
      BElem d = belem_op(Term::Kind::Diff, eval_term_belem(f.lhs(), env, ncols),
                         eval_term_belem(f.rhs(), env, ncols), ncols);
      for (uint32_t c = 0; c < ncols; ++c)
        if (!d.col[c].none()) return false;
      return true;
    }
    case Formula::Kind::Equal:
      return belem_eq(eval_term_belem(f.lhs(), env, ncols),
                      eval_term_belem(f.rhs(), env, ncols), ncols);
    case Formula::Kind::CardEq: {
      BElem e = eval_term_belem(f.term(), env, ncols);
      uint64_t total = 0;
      for (uint32_t c = 0; c < ncols; ++c) {
        if (e.col[c].infinite()) return false;
        total += static_cast<uint64_t>(std::popcount(e.col[c].prefix));
      }
      return total == f.k();
    }
    default:
      throw std::logic_error("not an atom");
  }
}

// The column sets a quantifier ranges over: initial segments and singletons
// up to the threshold, the two cofinite tails, and (for period >= 2) the
// single residue classes starting at the threshold. The same family at every
// rung (only the column count grows along the schedule) is what keeps the
// space sound: every member position of every family set is itself reachable
// as a singleton, so an element never loses its finite parts at the next
// rung. Sorted with small finite sets first so universal loops meet the
// likely counterexamples early.
std::vector<EP> rung_column_sets(const Rung& rung) {
  uint32_t t = rung.threshold;
  std::set<std::tuple<uint32_t, uint32_t, uint32_t, uint64_t>> seen;
  std::vector<EP> out;
  auto add = [&](EP e) {
    e.canonicalize();
    if (seen.insert({e.prefix, e.t, e.p, e.r}).second) out.push_back(e);
  };
  add({0, 0, 1, 0});                                     // empty
  for (uint32_t i = 0; i <= t; ++i) add({uint32_t{1} << i, i + 1, 1, 0});  // {i}
  for (uint32_t a = 2; a <= t; ++a) add({(uint32_t{1} << a) - 1, a, 1, 0});  // [0,a)
  add({0, 0, 1, 1});                                     // all
  add({0, t, 1, 1});                                     // [t, inf)
  for (uint32_t p = 2; p <= rung.period; ++p)
    for (uint32_t c = 0; c < p; ++c) add({0, t, p, uint64_t{1} << ((t + c) % p)});
  std::sort(out.begin(), out.end(), [](const EP& a, const EP& b) {
    auto key = [](const EP& e) {
      return std::tuple(e.infinite(), std::popcount(e.prefix), e.prefix, e.p, e.r);
    };
    return key(a) < key(b);
  });
  return out;
}

struct BoundedSpace {
  std::vector<std::vector<EP>> rung_sets;  // per rung, canonical column sets
  std::vector<Rung> schedule;
};

struct BudgetExceeded {};

// Atoms are memoized on the last change tick of the slots they mention, so a
// sweep of an inner quantifier only re-evaluates the atoms that can see it.
// Never changes a verdict: the step budget counts loop iterations, not atom
// work. An atom node reached under two different scopes stays uncached.
struct AtomInfo {
  uint64_t mask = 0;        // env slots the atom reads, as bits
  bool cacheable = true;
  uint64_t at = 0;          // tick when val was computed, 0 = never
  bool val = false;
};

struct SetEval {
  const BoundedSpace& space;
  uint32_t ncols;
  BScope env;
  std::unordered_map<const Formula*, AtomInfo> atoms;
  std::vector<uint64_t> changed;  // per env slot, tick of last rebinding
  uint64_t tick = 1;
  uint64_t steps = 0;

  SetEval(const BoundedSpace& sp, uint32_t nc, BScope free_env, const Formula& f)
      : space(sp), ncols(nc), env(std::move(free_env)) {
    changed.assign(env.vals.size(), 0);
    std::vector<std::string> names;
    for (const auto& [name, unused] : env.vals) names.push_back(name);
    index(f, names);
  }

  void term_mask(const Term& t, const std::vector<std::string>& names, AtomInfo& info) {
    switch (t.kind()) {
      case Term::Kind::Var: {
        for (size_t i = names.size(); i-- > 0;) {
          if (names[i] == t.name()) {
            if (i < 64) info.mask |= uint64_t{1} << i;
            else info.cacheable = false;
            return;
          }
        }
        info.cacheable = false;  // unbound; evaluation will throw anyway
        return;
      }
      case Term::Kind::Empty:
      case Term::Kind::Universe:
        return;
      default:
        term_mask(t.left(), names, info);
        term_mask(t.right(), names, info);
    }
  }

  void index(const Formula& f, std::vector<std::string>& names) {
    switch (f.kind()) {
      case Formula::Kind::Subseteq:
      case Formula::Kind::Equal:
      case Formula::Kind::CardEq: {
        AtomInfo info;
        if (f.kind() == Formula::Kind::CardEq) {
          term_mask(f.term(), names, info);
        } else {
          term_mask(f.lhs(), names, info);
          term_mask(f.rhs(), names, info);
        }
        auto [it, fresh] = atoms.emplace(&f, info);
        if (!fresh && it->second.mask != info.mask) it->second.cacheable = false;
        return;
      }
      case Formula::Kind::Exists:
      case Formula::Kind::Forall:
        names.push_back(f.var());
        index(f.child(), names);
        names.pop_back();
        return;
      default:
        for (size_t i = 0; i < f.arity(); ++i) index(f.child(i), names);
    }
  }

  bool atom(const Formula& f) {
    AtomInfo& info = atoms.find(&f)->second;
    if (info.cacheable && info.at != 0) {
      bool valid = true;
      for (uint64_t m = info.mask; m; m &= m - 1) {
        if (changed[std::countr_zero(m)] > info.at) { valid = false; break; }
      }
      if (valid) return info.val;
    }
    info.val = eval_belem_atom(f, env, ncols);
    info.at = tick;
    return info.val;
  }

  bool eval(const Formula& f, size_t rung_idx) {
    switch (f.kind()) {
      case Formula::Kind::Not:
        return !eval(f.child(), rung_idx);
      case Formula::Kind::And:
        return eval(f.child(0), rung_idx) && eval(f.child(1), rung_idx);
      case Formula::Kind::Or:
        return eval(f.child(0), rung_idx) || eval(f.child(1), rung_idx);
      case Formula::Kind::Implies:
        return !eval(f.child(0), rung_idx) || eval(f.child(1), rung_idx);
      case Formula::Kind::Iff:
        return eval(f.child(0), rung_idx) == eval(f.child(1), rung_idx);
      case Formula::Kind::Exists:
      case Formula::Kind::Forall: {
        bool is_forall = f.kind() == Formula::Kind::Forall;
        size_t at = std::min(rung_idx, space.rung_sets.size() - 1);
        const std::vector<EP>& sets = space.rung_sets[at];
        uint32_t cols = space.schedule[at].cols;
        std::vector<uint32_t> idx(cols, 0);
        env.vals.emplace_back(f.var(), BElem{});
        size_t slot = env.vals.size() - 1;
        if (changed.size() <= slot) changed.resize(slot + 1, 0);
        for (uint32_t c = 0; c < cols; ++c) env.vals[slot].second.col[c] = sets[0];
        changed[slot] = ++tick;
        for (;;) {
          if (++steps > kSetStepsPerBase) throw BudgetExceeded{};
          if (eval(f.child(), rung_idx + 1) == !is_forall) {
            env.vals.pop_back();
            return !is_forall;
          }
          uint32_t c = 0;
          while (c < cols && idx[c] == sets.size() - 1) {
            idx[c] = 0;
            env.vals[slot].second.col[c] = sets[0];
            ++c;
          }
          if (c == cols) break;
          ++idx[c];
          env.vals[slot].second.col[c] = sets[idx[c]];
          changed[slot] = ++tick;
        }
        env.vals.pop_back();
        return is_forall;
      }
      default:
        return atom(f);
    }
  }
};

EP ep_from_epset(const EPSet& s) {
  if (s.threshold() > 31) throw CapError("assignment threshold too large for the bounded oracle");
  if (s.period() > 64) throw CapError("assignment period too large for the bounded oracle");
  EP e;
  e.t = s.threshold();
  e.p = s.period();
  for (uint32_t m : s.prefix()) e.prefix |= uint32_t{1} << m;
  for (uint32_t m : s.residues()) e.r |= uint64_t{1} << m;
  e.canonicalize();
  return e;
}

}  // namespace

std::vector<Rung> default_set_schedule() {
  return {{1, 1, 4}, {2, 1, 4}, {3, 1, 4}, {4, 1, 4}, {5, 1, 4}};
}

OracleVerdict bounded_eval_set(const ModelHandle& m, const Formula& f,
                               const std::map<std::string, ModelElement>& assignment,
                               const std::vector<Rung>& schedule) {
  if (m.pres != Presentation::Columns)
    throw ModelError("bounded evaluation runs in the columns presentation");
  if (mentions_universe(f))
    throw ModeError("the universe constant has no set-mode meaning");
  if (schedule.size() < 3) throw Error("bound schedule needs at least 3 rungs");

  BoundedSpace space;
  space.schedule = schedule;
  uint64_t period_lcm = 1;
  for (const Rung& r : schedule) {
    if (r.cols == 0 || r.cols > kMaxCols) throw CapError("rung column count out of range");
    if (r.threshold > 10) throw CapError("rung threshold out of range");
    if (r.period == 0 || r.period > 6) throw CapError("rung period out of range");
    period_lcm = std::lcm(period_lcm, static_cast<uint64_t>(r.period));
    if (period_lcm > 64) throw CapError("rung periods out of range");
    space.rung_sets.push_back(rung_column_sets(r));
    double sz = std::pow(static_cast<double>(space.rung_sets.back().size()),
                         static_cast<double>(r.cols));
    if (sz > static_cast<double>(kRungSpaceCap))
      throw CapError("rung descriptor space exceeds 10^7 elements");
  }

  uint32_t ncols = 1;
  for (const Rung& r : schedule) ncols = std::max(ncols, r.cols);
  BScope env;
  for (const auto& [name, elem] : assignment) {
    BElem b;
    for (const auto& [c, s] : elem.cols) {
      if (c >= kMaxCols) throw CapError("assignment column out of range for the bounded oracle");
      b.col[c] = ep_from_epset(s);
      ncols = std::max(ncols, c + 1);
    }
    env.vals.emplace_back(name, b);
  }

  std::optional<bool> verdict;
  for (size_t base = 0; base < 3; ++base) {
    bool v;
    try {
      SetEval ev(space, ncols, env, f);
      v = ev.eval(f, base);
    } catch (const BudgetExceeded&) {
      return OracleVerdict::Unstable;
    }
    if (verdict && *verdict != v) return OracleVerdict::Unstable;
    verdict = v;
  }
  return verdict_of(*verdict);
}

}  // namespace mereo
