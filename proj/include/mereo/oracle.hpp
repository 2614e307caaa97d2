#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mereo/formula.hpp"
#include "mereo/models.hpp"

namespace mereo {

// Brute-force semantics used to cross-check the decision pipeline. Everything
// here evaluates formulas directly on bitsets or column descriptors and never
// touches cell profiles or the normal-form machinery, so agreement between
// the two paths is meaningful.

enum class OracleVerdict { True, False, Unstable };

inline const char* verdict_name(OracleVerdict v) {
  switch (v) {
    case OracleVerdict::True: return "true";
    case OracleVerdict::False: return "false";
    default: return "unstable";
  }
}

inline OracleVerdict verdict_of(bool b) {
  return b ? OracleVerdict::True : OracleVerdict::False;
}

// Textbook Tarski evaluation in the powerset algebra of {0..n_atoms-1}
// (class mode: the universe constant denotes the full set). Free variables
// take their values, as atom bitmasks, from the assignment. Quantifiers
// range over all 2^n subsets, so n_atoms <= 16; a generous internal step
// cap guards against deeply nested quantifiers.
bool brute_eval_finite(uint32_t n_atoms, const Formula& f,
                       const std::map<std::string, uint64_t>& assignment = {});

// Same value as brute_eval_finite on every input. Quantifiers range only
// over orbit representatives: an element is determined up to an atom
// permutation fixing the variables in scope by how many atoms it takes from
// each Venn cell, so one representative per count vector suffices. This
// makes large n_atoms affordable (n_atoms <= 63).
bool orbit_eval_finite(uint32_t n_atoms, const Formula& f,
                       const std::map<std::string, uint64_t>& assignment = {});

std::vector<uint32_t> default_class_window();  // {8, 10, 12, 14}

// Evaluates a class-mode sentence in the finite algebra at every window size
// and keeps the verdict only if they all agree; a flip anywhere in the
// window yields Unstable. The window must be strictly increasing.
OracleVerdict stabilized_decide_class(
    const Formula& f, const std::vector<uint32_t>& window = default_class_window());

// One rung of the bounded set-mode search space: elements supported on the
// first `cols` columns, each column drawn from a small witness family with
// eventual period <= `period` and prefix positions <= `threshold` (initial
// segments, singletons, the cofinite tails, and one residue class per period
// when period >= 2; not the full powerset, which would make complete
// universal sweeps unaffordable).
struct Rung {
  uint32_t cols = 1;
  uint32_t period = 1;
  uint32_t threshold = 0;
};

// Column counts increase along the schedule while the per-column family
// stays fixed. That is what gives quantifier escalation its bite (the full
// element of one rung is a proper part of the next rung's), and the fixed
// family is what keeps escalation sound: every member position of a rung
// element is reachable as a singleton at the next rung too.
std::vector<Rung> default_set_schedule();  // cols 1..5, period 1, threshold 4

// Bounded-witness evaluation in the saturated column model (set mode; m must
// be the columns presentation). The sentence is evaluated once per base rung
// b in {0,1,2}; a quantifier at nesting depth d ranges over rung b+d, so
// every inner quantifier outranges the outer one and in particular each
// universal is checked one rung above its enclosing context before a true
// verdict is accepted (per-rung full elements are not full at the next
// rung). The verdict is kept only if all three base evaluations agree.
// Returns Unstable on any flip or when the per-base step budget runs out;
// throws CapError if a rung's descriptor space exceeds 10^7 elements.
OracleVerdict bounded_eval_set(
    const ModelHandle& m, const Formula& f,
    const std::map<std::string, ModelElement>& assignment = {},
    const std::vector<Rung>& schedule = default_set_schedule());

}  // namespace mereo
