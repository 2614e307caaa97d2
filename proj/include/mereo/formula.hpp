#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mereo/error.hpp"

namespace mereo {

// Which mereology the surface language talks about. Set mode has no universe
// constant (the lattice is unbounded); class mode has the top element 1.
enum class TheoryMode { Set, Class };

inline const char* mode_name(TheoryMode m) {
  return m == TheoryMode::Set ? "set" : "class";
}

// Lattice-valued terms. Immutable; cheap to copy (shared nodes).
class Term {
 public:
  enum class Kind { Var, Empty, Universe, Union, Inter, Diff };

  static Term var(std::string name);
  static Term empty();
  static Term universe();
  static Term union_of(Term a, Term b);
  static Term inter(Term a, Term b);
  static Term diff(Term a, Term b);

  Kind kind() const { return n_->kind; }
  const std::string& name() const { return n_->name; }
  const Term& left() const { return n_->args[0]; }
  const Term& right() const { return n_->args[1]; }

  bool operator==(const Term& o) const;

 private:
  struct Node {
    Kind kind;
    std::string name;        // Var
    std::vector<Term> args;  // binary ops
  };
  explicit Term(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// First-order formulas over the lattice language plus the cardinality
// predicates |t| = k for concrete k. Immutable; cheap to copy.
class Formula {
 public:
  enum class Kind {
    Subseteq, Equal, CardEq,       // atoms
    Not, And, Or, Implies, Iff,    // connectives
    Exists, Forall                 // quantifiers
  };

  static Formula subseteq(Term a, Term b);
  static Formula equal(Term a, Term b);
  static Formula card_eq(Term t, uint64_t k);
  static Formula neg(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);

  Kind kind() const { return n_->kind; }
  bool is_atom() const {
    return kind() == Kind::Subseteq || kind() == Kind::Equal || kind() == Kind::CardEq;
  }
  bool is_quantifier() const {
    return kind() == Kind::Exists || kind() == Kind::Forall;
  }
  const Term& lhs() const { return n_->terms[0]; }
  const Term& rhs() const { return n_->terms[1]; }
  const Term& term() const { return n_->terms[0]; }  // CardEq
  uint64_t k() const { return n_->k; }               // CardEq
  const std::string& var() const { return n_->var; }
  const Formula& child(size_t i = 0) const { return n_->subs[i]; }
  size_t arity() const { return n_->subs.size(); }

  bool operator==(const Formula& o) const;

 private:
  struct Node {
    Kind kind;
    std::vector<Term> terms;
    uint64_t k = 0;
    std::string var;
    std::vector<Formula> subs;
  };
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// Parses the ASCII surface syntax. Whitespace-insensitive. Throws ParseError
// on syntax errors (with position) and ModeError if 1 occurs in set mode.
Formula parse(const std::string& text, TheoryMode mode);

// Fully parenthesized ASCII; reparses to a structurally equal formula.
std::string render(const Formula& f);
std::string render(const Term& t);

// Free variables in first-occurrence order.
std::vector<std::string> free_variables(const Formula& f);
bool is_sentence(const Formula& f);
bool quantifier_free(const Formula& f);
// Maximum quantifier nesting depth.
int quantifier_rank(const Formula& f);
bool mentions_universe(const Formula& f);

// Renames bound variables so that no binder shadows a free variable or
// another binder. Free occurrences are untouched.
Formula rename_bound_apart(const Formula& f);

}  // namespace mereo
