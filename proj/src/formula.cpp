#include "mereo/formula.hpp"

#include <algorithm>
#include <set>

namespace mereo {

namespace {

template <typename N>
std::shared_ptr<const N> freeze(N n) {
  return std::make_shared<const N>(std::move(n));
}

}  // namespace

Term Term::var(std::string name) {
  Node n;
  n.kind = Kind::Var;
  n.name = std::move(name);
  return Term(freeze(std::move(n)));
}

Term Term::empty() {
  Node n;
  n.kind = Kind::Empty;
  return Term(freeze(std::move(n)));
}

Term Term::universe() {
  Node n;
  n.kind = Kind::Universe;
  return Term(freeze(std::move(n)));
}

Term Term::union_of(Term a, Term b) {
  Node n;
  n.kind = Kind::Union;
  n.args = {std::move(a), std::move(b)};
  return Term(freeze(std::move(n)));
}

Term Term::inter(Term a, Term b) {
  Node n;
  n.kind = Kind::Inter;
  n.args = {std::move(a), std::move(b)};
  return Term(freeze(std::move(n)));
}

Term Term::diff(Term a, Term b) {
  Node n;
  n.kind = Kind::Diff;
  n.args = {std::move(a), std::move(b)};
  return Term(freeze(std::move(n)));
}

bool Term::operator==(const Term& o) const {
  if (n_ == o.n_) return true;
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case Kind::Var: return name() == o.name();
    case Kind::Empty:
    case Kind::Universe: return true;
    default: return left() == o.left() && right() == o.right();
  }
}

Formula Formula::subseteq(Term a, Term b) {
  Node n;
  n.kind = Kind::Subseteq;
  n.terms = {std::move(a), std::move(b)};
  return Formula(freeze(std::move(n)));
}

Formula Formula::equal(Term a, Term b) {
  Node n;
  n.kind = Kind::Equal;
  n.terms = {std::move(a), std::move(b)};
  return Formula(freeze(std::move(n)));
}

Formula Formula::card_eq(Term t, uint64_t k) {
  Node n;
  n.kind = Kind::CardEq;
  n.terms = {std::move(t)};
  n.k = k;
  return Formula(freeze(std::move(n)));
}

Formula Formula::neg(Formula f) {
  Node n;
  n.kind = Kind::Not;
  n.subs = {std::move(f)};
  return Formula(freeze(std::move(n)));
}

Formula Formula::conj(Formula a, Formula b) {
  Node n;
  n.kind = Kind::And;
  n.subs = {std::move(a), std::move(b)};
  return Formula(freeze(std::move(n)));
}

Formula Formula::disj(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Or;
  n.subs = {std::move(a), std::move(b)};
  return Formula(freeze(std::move(n)));
}

Formula Formula::implies(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Implies;
  n.subs = {std::move(a), std::move(b)};
  return Formula(freeze(std::move(n)));
}

Formula Formula::iff(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Iff;
  n.subs = {std::move(a), std::move(b)};
  return Formula(freeze(std::move(n)));
}

Formula Formula::exists(std::string var, Formula body) {
  Node n;
  n.kind = Kind::Exists;
  n.var = std::move(var);
  n.subs = {std::move(body)};
  return Formula(freeze(std::move(n)));
}

Formula Formula::forall(std::string var, Formula body) {
  Node n;
  n.kind = Kind::Forall;
  n.var = std::move(var);
  n.subs = {std::move(body)};
  return Formula(freeze(std::move(n)));
}

bool Formula::operator==(const Formula& o) const {
  if (n_ == o.n_) return true;
  if (kind() != o.kind()) return false;
  switch (kind()) {
    case Kind::Subseteq:
    case Kind::Equal:
      return lhs() == o.lhs() && rhs() == o.rhs();
    case Kind::CardEq:
      return k() == o.k() && term() == o.term();
    case Kind::Not:
      return child(0) == o.child(0);
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Iff:
      return child(0) == o.child(0) && child(1) == o.child(1);
    case Kind::Exists:
    case Kind::Forall:
      return var() == o.var() && child(0) == o.child(0);
  }
  return false;
}

namespace {

void term_vars(const Term& t, const std::set<std::string>& bound,
               std::vector<std::string>& out, std::set<std::string>& seen) {
  switch (t.kind()) {
    case Term::Kind::Var:
      if (!bound.count(t.name()) && seen.insert(t.name()).second)
        out.push_back(t.name());
      break;
    case Term::Kind::Empty:
    case Term::Kind::Universe:
      break;
    default:
      term_vars(t.left(), bound, out, seen);
      term_vars(t.right(), bound, out, seen);
  }
}

void collect_free(const Formula& f, std::set<std::string>& bound,
                  std::vector<std::string>& out, std::set<std::string>& seen) {
  switch (f.kind()) {
    case Formula::Kind::Subseteq:
    case Formula::Kind::Equal:
      term_vars(f.lhs(), bound, out, seen);
      term_vars(f.rhs(), bound, out, seen);
      break;
    case Formula::Kind::CardEq:
      term_vars(f.term(), bound, out, seen);
      break;
    case Formula::Kind::Not:
      collect_free(f.child(0), bound, out, seen);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff:
      collect_free(f.child(0), bound, out, seen);
      collect_free(f.child(1), bound, out, seen);
      break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool fresh = bound.insert(f.var()).second;
      collect_free(f.child(0), bound, out, seen);
      if (fresh) bound.erase(f.var());
      break;
    }
  }
}

}  // namespace

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> out;
  std::set<std::string> bound, seen;
  collect_free(f, bound, out, seen);
  return out;
}

bool is_sentence(const Formula& f) { return free_variables(f).empty(); }

bool quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  for (size_t i = 0; i < f.arity(); ++i)
    if (!quantifier_free(f.child(i))) return false;
  return true;
}

int quantifier_rank(const Formula& f) {
  int r = 0;
  for (size_t i = 0; i < f.arity(); ++i)
    r = std::max(r, quantifier_rank(f.child(i)));
  return r + (f.is_quantifier() ? 1 : 0);
}

namespace {

bool term_mentions_universe(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Universe: return true;
    case Term::Kind::Var:
    case Term::Kind::Empty: return false;
    default:
      return term_mentions_universe(t.left()) || term_mentions_universe(t.right());
  }
}

}  // namespace

bool mentions_universe(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Subseteq:
    case Formula::Kind::Equal:
      return term_mentions_universe(f.lhs()) || term_mentions_universe(f.rhs());
    case Formula::Kind::CardEq:
      return term_mentions_universe(f.term());
    default:
      for (size_t i = 0; i < f.arity(); ++i)
        if (mentions_universe(f.child(i))) return true;
      return false;
  }
}

namespace {

Term substitute_var(const Term& t, const std::string& from, const std::string& to) {
  switch (t.kind()) {
    case Term::Kind::Var:
      return t.name() == from ? Term::var(to) : t;
    case Term::Kind::Empty:
    case Term::Kind::Universe:
      return t;
    case Term::Kind::Union:
      return Term::union_of(substitute_var(t.left(), from, to),
                            substitute_var(t.right(), from, to));
    case Term::Kind::Inter:
      return Term::inter(substitute_var(t.left(), from, to),
                         substitute_var(t.right(), from, to));
    case Term::Kind::Diff:
      return Term::diff(substitute_var(t.left(), from, to),
                        substitute_var(t.right(), from, to));
  }
  throw std::logic_error("bad term kind");
}

// Renames free occurrences of `from` to `to`; stops at shadowing binders.
Formula substitute_free(const Formula& f, const std::string& from, const std::string& to) {
  switch (f.kind()) {
    case Formula::Kind::Subseteq:
      return Formula::subseteq(substitute_var(f.lhs(), from, to),
                               substitute_var(f.rhs(), from, to));
    case Formula::Kind::Equal:
      return Formula::equal(substitute_var(f.lhs(), from, to),
                            substitute_var(f.rhs(), from, to));
    case Formula::Kind::CardEq:
      return Formula::card_eq(substitute_var(f.term(), from, to), f.k());
    case Formula::Kind::Not:
      return Formula::neg(substitute_free(f.child(0), from, to));
    case Formula::Kind::And:
      return Formula::conj(substitute_free(f.child(0), from, to),
                           substitute_free(f.child(1), from, to));
    case Formula::Kind::Or:
      return Formula::disj(substitute_free(f.child(0), from, to),
                           substitute_free(f.child(1), from, to));
    case Formula::Kind::Implies:
      return Formula::implies(substitute_free(f.child(0), from, to),
                              substitute_free(f.child(1), from, to));
    case Formula::Kind::Iff:
      return Formula::iff(substitute_free(f.child(0), from, to),
                          substitute_free(f.child(1), from, to));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      if (f.var() == from) return f;  // shadowed
      Formula body = substitute_free(f.child(0), from, to);
      return f.kind() == Formula::Kind::Exists ? Formula::exists(f.var(), std::move(body))
                                               : Formula::forall(f.var(), std::move(body));
    }
  }
  throw std::logic_error("bad formula kind");
}

Formula rename_apart_rec(const Formula& f, std::set<std::string>& used) {
  switch (f.kind()) {
    case Formula::Kind::Subseteq:
    case Formula::Kind::Equal:
    case Formula::Kind::CardEq:
      return f;
    case Formula::Kind::Not:
      return Formula::neg(rename_apart_rec(f.child(0), used));
    case Formula::Kind::And:
      return Formula::conj(rename_apart_rec(f.child(0), used),
                           rename_apart_rec(f.child(1), used));
    case Formula::Kind::Or:
      return Formula::disj(rename_apart_rec(f.child(0), used),
                           rename_apart_rec(f.child(1), used));
    case Formula::Kind::Implies:
      return Formula::implies(rename_apart_rec(f.child(0), used),
                              rename_apart_rec(f.child(1), used));
    case Formula::Kind::Iff:
      return Formula::iff(rename_apart_rec(f.child(0), used),
                          rename_apart_rec(f.child(1), used));
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::string name = f.var();
      Formula body = f.child(0);
      if (used.count(name)) {
        int i = 1;
        std::string fresh;
        do {
          fresh = name + "_" + std::to_string(i++);
        } while (used.count(fresh));
        body = substitute_free(body, name, fresh);
        name = fresh;
      }
      used.insert(name);
      body = rename_apart_rec(body, used);
      return f.kind() == Formula::Kind::Exists ? Formula::exists(name, std::move(body))
                                               : Formula::forall(name, std::move(body));
    }
  }
  throw std::logic_error("bad formula kind");
}

}  // namespace

Formula rename_bound_apart(const Formula& f) {
  std::vector<std::string> fv = free_variables(f);
  std::set<std::string> used(fv.begin(), fv.end());
  return rename_apart_rec(f, used);
}

}  // namespace mereo
