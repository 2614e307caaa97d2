#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mereo/cells.hpp"
#include "mereo/epset.hpp"
#include "mereo/formula.hpp"
#include "mereo/sizeset.hpp"

namespace mereo {

// The model zoo. Every presentation is a relative field of sets over atoms
// identified as (column, position) pairs; an element is the finite map from
// columns to eventually periodic slices. The per-presentation restrictions
// on the slices are what make the zoo interesting:
//
//   Prime          col 0 only, finite slices (the finite sets of atoms)
//   Columns        any columns, any slices (the saturated set-mode model)
//   ColumnsPerm    same model, columns relabeled 2k <-> 2k+1 (a distinct
//                  surface presentation with a different enumeration order)
//   Characteristic n+1 columns: cols < n finite-or-cofinite (period 1),
//                  col n finite only
//   Amorphous      col 0 finite-or-cofinite (period 1), other columns free
//   FiniteBA       col 0 only, subsets of {0..N-1}; top is the whole row
//   SaturatedBA    col 0 only, any slice; top is all of N
//
// Prime/Columns/ColumnsPerm/Characteristic/Amorphous have no top (set mode);
// FiniteBA/SaturatedBA do (class mode).
enum class Presentation {
  Prime,
  Columns,
  ColumnsPerm,
  Characteristic,
  Amorphous,
  FiniteBA,
  SaturatedBA,
};

struct ModelHandle {
  Presentation pres = Presentation::Columns;
  uint32_t n = 0;  // block count for Characteristic, atom count for FiniteBA

  TheoryMode mode() const;
  // Registry id: prime, columns, columns-perm, char<N>, amorphous, ba<N>,
  // ba-sat.
  std::string name() const;
  static ModelHandle from_name(const std::string& id);

  friend bool operator==(const ModelHandle& a, const ModelHandle& b) {
    return a.pres == b.pres && a.n == b.n;
  }
};

struct ModelElement {
  Presentation pres = Presentation::Columns;
  std::map<uint32_t, EPSet> cols;  // no empty slices stored

  bool empty() const { return cols.empty(); }
  // The slice at column c; an empty EPSet when the column is absent.
  EPSet slice(uint32_t c) const;

  friend bool operator==(const ModelElement& a, const ModelElement& b) {
    return a.pres == b.pres && a.cols == b.cols;
  }
  friend bool operator<(const ModelElement& a, const ModelElement& b) {
    if (a.pres != b.pres) return a.pres < b.pres;
    return a.cols < b.cols;
  }
};

// Validated, canonicalized construction (drops empty slices; checks the
// presentation's slice restrictions). Throws ModelError on a bad descriptor.
ModelElement make_element(const ModelHandle& m, std::map<uint32_t, EPSet> cols);
ModelElement bottom(const ModelHandle& m);
// Class mode only; ModeError otherwise.
ModelElement top(const ModelHandle& m);
ModelElement atom_element(const ModelHandle& m, uint32_t col, uint32_t pos);

enum class LatticeOp { Union, Inter, Diff };

ModelElement lattice_op(const ModelHandle& m, LatticeOp op, const ModelElement& a,
                        const ModelElement& b);
bool leq(const ModelHandle& m, const ModelElement& a, const ModelElement& b);
bool is_infinite(const ModelHandle& m, const ModelElement& a);
Card element_size(const ModelHandle& m, const ModelElement& a);
// Up to k atoms of a, in column-major order (columns ascending, positions
// ascending within a column).
std::vector<ModelElement> atoms_below(const ModelHandle& m, const ModelElement& a,
                                      uint64_t k);

// The exact size of every Venn cell of a tuple. Cards, not SizeSets: the
// formula language cannot say "exactly infinite", but a model can. In set
// mode the exterior is infinite in every presentation (there are always
// infinitely many atoms beyond any element's support), so cells[0] is
// Card::inf() there; in class mode it is the measured complement.
struct CellSizes {
  std::vector<std::string> params;
  std::vector<Card> cells;  // size 1 << params.size(), index = mask

  std::string dump() const;

  friend bool operator==(const CellSizes& a, const CellSizes& b) {
    return a.cells == b.cells;
  }
};

CellSizes cell_sizes(const ModelHandle& m, const std::vector<ModelElement>& tuple,
                     std::vector<std::string> names = {});

// Does the measured tuple satisfy the profile? Cellwise SizeSet membership;
// Card::inf() lands exactly in the cofinite SizeSets.
bool satisfies(const CellSizes& actual, const CellProfile& p);

// A demanded refinement of the params diagram by one new element x: for
// every cell, how much of it x takes (in) and how much it leaves (out).
// Index 0 is the exterior; in set mode out[0] must be Card::inf() (the
// exterior always stays infinite).
struct SplitDemand {
  std::vector<Card> in, out;  // each of size 1 << params.size()
};

struct RealizeResult {
  std::optional<ModelElement> elem;
  CellMask bad_cell = 0;  // meaningful when !ok()
  std::string reason;

  bool ok() const { return elem.has_value(); }
};

// Constructs an element meeting the demand exactly, or reports the first
// cell where this fails: an arithmetic mismatch (in + out != actual size),
// or a presentation that cannot split the cell (an infinite/infinite split
// needs a slice family that splits into two infinite pieces), or an
// exterior that cannot supply the demanded part.
RealizeResult realize_type(const ModelHandle& m,
                           const std::vector<ModelElement>& params,
                           const SplitDemand& d);

// A sub-element x of cell with |x| = in_part and |cell - x| = out_part, or
// nullopt when the presentation cannot divide the cell that way. The choice
// is canonical: finite parts take atoms in column-major order; an
// infinite/infinite division halves the least splittable infinite slice, or
// separates two unsplittable infinite slices. The caller is responsible for
// in_part + out_part matching the cell's size.
std::optional<ModelElement> split_element(const ModelHandle& m,
                                          const ModelElement& cell, Card in_part,
                                          Card out_part);

// An element of the demanded size disjoint from everything in elems, drawn
// from the set-mode exterior (a fresh column, spare atoms, or a block met
// only finitely). nullopt when the presentation has no such room; always
// nullopt in class mode, where the exterior is an ordinary cell.
std::optional<ModelElement> exterior_take(const ModelHandle& m, Card demand,
                                          const std::vector<ModelElement>& elems);

// An infinite element disjoint from a, when the presentation has one:
// Columns/ColumnsPerm/Amorphous take a fresh column, Characteristic a block
// that a meets only finitely, SaturatedBA the complement if infinite.
// Prime and FiniteBA never do.
std::optional<ModelElement> fresh_disjoint_infinite(const ModelHandle& m,
                                                    const ModelElement& a);

// Deterministic enumeration of all canonical descriptors of a presentation,
// stratified by descriptor weight so that simple elements come first.
// Injective, and every element appears at some finite index.
class EnumStream {
 public:
  explicit EnumStream(ModelHandle m);
  ModelElement next();
  uint64_t index() const { return index_; }  // index of the next element

 private:
  void refill();

  ModelHandle m_;
  uint64_t weight_ = 0;
  size_t pos_ = 0;
  uint64_t index_ = 0;
  std::vector<ModelElement> batch_;
};

ModelElement enumerate_element(const ModelHandle& m, uint64_t i);

// Truth of f in the presentation under the assignment: the normal form of f
// evaluated against the measured cell sizes of the assigned tuple.
bool eval(const ModelHandle& m, const Formula& f,
          const std::map<std::string, ModelElement>& assignment);

// Descriptor I/O, the CLI file format:
//   {"presentation":"columns","cols":{"0":{"prefix":[1],"t":4,"p":2,"r":[0]}}}
// elements_from_json accepts a single descriptor or an array of them.
// Splits: {"in":[...],"out":[...]} indexed by cell mask, entries naturals or
// "inf".
std::string element_to_json(const ModelElement& e);
ModelElement element_from_json(const ModelHandle& m, const std::string& text);
std::vector<ModelElement> elements_from_json(const ModelHandle& m,
                                             const std::string& text);
SplitDemand split_from_json(size_t nparams, const std::string& text);
std::string split_to_json(const SplitDemand& d);

}  // namespace mereo
