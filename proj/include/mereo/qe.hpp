#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mereo/cells.hpp"
#include "mereo/formula.hpp"

namespace mereo {

// Hard cap on the disjunct count of any intermediate normal form.
inline constexpr uint64_t kMaxDisjuncts = 1000000;

// Quantifier-free translation. Drops only structurally unsatisfiable
// disjuncts (an empty SizeSet on some cell), so the result is faithful in
// every field of sets of the right mode, not just in models of the theory.
ProfileSet to_profiles(const Formula& qf, std::span<const std::string> params,
                       TheoryMode mode);

// Negation of a normal form (general de Morgan over cells).
ProfileSet negate_profiles(const ProfileSet& d);

// Eliminates the last parameter x of d's parameter list. Each remaining cell
// receives the sumset of its x-part and its x-free part. In set mode the
// x-only cell's SizeSet must be nonempty (the exterior it came from is
// infinite, so any demanded finite part of x can be carved out of it); in
// class mode the exterior is an ordinary cell and is merged like the rest.
ProfileSet eliminate_exists(const ProfileSet& d, TheoryMode mode);

// Full normal form over free_variables(f), eliminating quantifiers
// innermost-first after renaming bound variables apart.
ProfileSet qe_normal_form(const Formula& f, TheoryMode mode);

// Satisfiability of a profile as a type over its parameters, in models of
// the mode's theory: every cell nonempty, plus the universe-size rule (set
// mode: the exterior admits inf; class mode: some cell admits inf).
bool type_satisfiable(const CellProfile& p, TheoryMode mode);

// Truth of a sentence in the (complete) theory of the mode.
bool decide(const Formula& sentence, TheoryMode mode);

// Truth of the universal closure of f <-> g. Requires equal free-variable
// sets.
bool equivalent(const Formula& f, const Formula& g, TheoryMode mode);

}  // namespace mereo
