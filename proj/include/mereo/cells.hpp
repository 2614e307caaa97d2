#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mereo/formula.hpp"
#include "mereo/sizeset.hpp"

namespace mereo {

// A cell of the Venn diagram of a parameter list: bit i set means "inside
// params[i]". Mask 0 is the exterior region. In set mode no term denotes any
// part of the exterior; in class mode it is an ordinary cell.
using CellMask = uint32_t;

inline constexpr int kMaxCellParams = 20;

// A conjunction constraining the size of every cell of the diagram. The
// default constraint is SizeSet::all() ("anything"). Invariant kept
// throughout: in set mode cells[0] stays SizeSet::all() - the exterior is
// not expressible there, and its actual size is infinite in every model.
struct CellProfile {
  std::vector<std::string> params;
  std::vector<SizeSet> cells;  // size 1 << params.size(), indexed by mask

  static CellProfile unconstrained(std::vector<std::string> params);

  int arity() const { return static_cast<int>(params.size()); }
  size_t cell_count() const { return cells.size(); }
  // Meets the existing constraint with s.
  void constrain(CellMask m, const SizeSet& s);
  bool structurally_satisfiable() const;  // no cell has an empty SizeSet
  bool trivial() const;                   // every cell unconstrained

  // Diagnostic dump, one line per cell "mask : sizeset", exterior last.
  std::string dump() const;
  std::string mask_name(CellMask m) const;

  friend bool operator==(const CellProfile& a, const CellProfile& b) {
    return a.cells == b.cells;
  }
  friend bool operator<(const CellProfile& a, const CellProfile& b) {
    return a.cells < b.cells;
  }
};

// A finite disjunction of profiles over a shared parameter list; the
// quantifier-free normal form. Canonical: disjuncts sorted, deduplicated,
// structurally unsatisfiable ones dropped.
struct ProfileSet {
  std::vector<std::string> params;
  std::vector<CellProfile> alts;

  static ProfileSet falsum(std::vector<std::string> params);
  static ProfileSet verum(std::vector<std::string> params);

  bool is_false() const { return alts.empty(); }
  void canonicalize();
  std::string dump() const;
};

// Cells (masks) whose union denotes t in the diagram of params. Throws on a
// variable not listed in params; Universe is a ModeError in set mode.
std::vector<CellMask> term_cells(const Term& t, std::span<const std::string> params,
                                 TheoryMode mode);

// Translation of one atom to profiles. CardEq expands into one profile per
// composition of k over the term's cells; the count is C(k+c-1, c-1).
ProfileSet atomic_to_profiles(const Formula& atom, std::span<const std::string> params,
                              TheoryMode mode);
uint64_t card_eq_disjunct_count(uint64_t k, size_t cell_count);

// Translation of the negation of one atom, directly:
//   ~(s <= t)   some cell of s - t is nonempty
//   ~(s = t)    some cell of the symmetric difference is nonempty
//   ~(|t| = k)  the cell sizes of t sum to some j < k, or to at least k+1
//               (the latter via lower-bound compositions of k+1)
// Keeping negation flat at the atoms is what lets the eliminator avoid
// products of complements except right after a quantifier step.
ProfileSet negated_atomic_to_profiles(const Formula& atom,
                                      std::span<const std::string> params,
                                      TheoryMode mode);

// Cellwise meet of two profiles over the same parameter list.
CellProfile profile_and(const CellProfile& a, const CellProfile& b);

}  // namespace mereo
