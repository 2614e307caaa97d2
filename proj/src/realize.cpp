#include <algorithm>
#include <optional>

#include "mereo/error.hpp"
#include "mereo/models.hpp"

namespace mereo {

namespace {

// Columns whose infinite slices can be divided into two infinite slices that
// the presentation still accepts. Period-1 restrictions forbid it: two
// disjoint cofinite sets cannot exist, so a finite-or-cofinite slice family
// never splits an infinite slice.
bool splittable_col(const ModelHandle& m, uint32_t c) {
  switch (m.pres) {
    case Presentation::Columns:
    case Presentation::ColumnsPerm:
    case Presentation::SaturatedBA:
      return true;
    case Presentation::Amorphous:
      return c >= 1;
    case Presentation::Prime:
    case Presentation::Characteristic:
    case Presentation::FiniteBA:
      return false;
  }
  return false;
}

ModelElement union_all(const ModelHandle& m, const std::vector<ModelElement>& xs) {
  ModelElement u = bottom(m);
  for (const ModelElement& x : xs) u = lattice_op(m, LatticeOp::Union, u, x);
  return u;
}

// First k atoms of a in column-major order, as one element.
ModelElement take_atoms(const ModelHandle& m, const ModelElement& a, uint64_t k) {
  ModelElement out = bottom(m);
  for (const auto& [c, e] : a.cols) {
    if (k == 0) break;
    Card sz = e.size();
    uint64_t here = sz.infinite() ? k : std::min(k, sz.value());
    EPSet taken = e.take_first(here);
    if (!taken.is_empty()) out.cols.emplace(c, std::move(taken));
    k -= here;
  }
  return out;
}

// a minus its first k atoms, column-major.
ModelElement drop_atoms(const ModelHandle& m, const ModelElement& a, uint64_t k) {
  ModelElement out = bottom(m);
  for (const auto& [c, e] : a.cols) {
    Card sz = e.size();
    uint64_t here = sz.infinite() ? k : std::min(k, sz.value());
    EPSet kept = e.drop_first(here);
    if (!kept.is_empty()) out.cols.emplace(c, kept);
    k -= here;
  }
  return out;
}

}  // namespace

std::optional<ModelElement> split_element(const ModelHandle& m, const ModelElement& cell,
                                          Card in, Card out) {
  if (!in.infinite()) return take_atoms(m, cell, in.value());
  if (!out.infinite()) return drop_atoms(m, cell, out.value());
  // Infinite on both sides: halve the least splittable infinite slice, or
  // separate two unsplittable infinite slices.
  for (const auto& [c, e] : cell.cols) {
    if (!e.infinite() || !splittable_col(m, c)) continue;
    ModelElement x = bottom(m);
    x.cols.emplace(c, e.even_half());
    return x;
  }
  std::optional<uint32_t> first_inf;
  for (const auto& [c, e] : cell.cols) {
    if (!e.infinite()) continue;
    if (!first_inf) {
      first_inf = c;
      continue;
    }
    ModelElement x = bottom(m);
    x.cols.emplace(*first_inf, cell.slice(*first_inf));
    return x;
  }
  return std::nullopt;
}

std::optional<ModelElement> exterior_take(const ModelHandle& m, Card demand,
                                          const std::vector<ModelElement>& elems) {
  if (demand == Card::fin(0)) return bottom(m);
  ModelElement used = union_all(m, elems);
  switch (m.pres) {
    case Presentation::Columns:
    case Presentation::ColumnsPerm:
    case Presentation::Amorphous: {
      uint32_t c = m.pres == Presentation::Amorphous ? 1 : 0;
      while (used.cols.count(c)) ++c;
      EPSet s = demand.infinite() ? EPSet::all() : EPSet::all().take_first(demand.value());
      ModelElement x = bottom(m);
      x.cols.emplace(c, std::move(s));
      return x;
    }
    case Presentation::Prime: {
      if (demand.infinite()) return std::nullopt;
      EPSet rest = EPSet::all() - used.slice(0);
      ModelElement x = bottom(m);
      x.cols.emplace(0, rest.take_first(demand.value()));
      return x;
    }
    case Presentation::Characteristic: {
      if (!demand.infinite()) {
        // The spare block admits any finite slice and every element meets it
        // finitely, so there is always room.
        EPSet rest = EPSet::all() - used.slice(m.n);
        ModelElement x = bottom(m);
        x.cols.emplace(m.n, rest.take_first(demand.value()));
        return x;
      }
      // An infinite exterior part needs a block met only finitely so far.
      for (uint32_t c = 0; c < m.n; ++c) {
        if (used.slice(c).infinite()) continue;
        ModelElement x = bottom(m);
        x.cols.emplace(c, EPSet::all() - used.slice(c));
        return x;
      }
      return std::nullopt;
    }
    case Presentation::FiniteBA:
    case Presentation::SaturatedBA:
      // Class mode: the exterior is an ordinary cell; no implicit space.
      return std::nullopt;
  }
  return std::nullopt;
}

namespace {

bool decomposition_ok(Card in, Card out, Card actual) {
  if (!in.infinite() && !out.infinite())
    return !actual.infinite() && in.value() + out.value() == actual.value();
  return actual.infinite();
}

}  // namespace

RealizeResult realize_type(const ModelHandle& m,
                           const std::vector<ModelElement>& params,
                           const SplitDemand& d) {
  size_t n = params.size();
  if (n > static_cast<size_t>(kMaxCellParams))
    throw CapError("too many parameters for a cell diagram");
  size_t want = size_t{1} << n;
  if (d.in.size() != want || d.out.size() != want)
    throw ModelError("split needs one (in, out) pair per cell mask");

  auto fail = [](CellMask mask, std::string reason) {
    RealizeResult r;
    r.bad_cell = mask;
    r.reason = std::move(reason);
    return r;
  };

  bool class_mode = m.mode() == TheoryMode::Class;
  std::vector<ModelElement> pieces;
  for (CellMask mask = 1; mask < want; ++mask) {
    ModelElement cell = bottom(m);
    bool started = false;
    for (size_t i = 0; i < n; ++i) {
      if (!(mask & (CellMask{1} << i))) continue;
      cell = started ? lattice_op(m, LatticeOp::Inter, cell, params[i]) : params[i];
      started = true;
    }
    for (size_t i = 0; i < n; ++i)
      if (!(mask & (CellMask{1} << i)))
        cell = lattice_op(m, LatticeOp::Diff, cell, params[i]);
    Card actual = element_size(m, cell);
    if (!decomposition_ok(d.in[mask], d.out[mask], actual))
      return fail(mask, "cell has size " + actual.str() + ", demanded " +
                            d.in[mask].str() + " in + " + d.out[mask].str() + " out");
    std::optional<ModelElement> x = split_element(m, cell, d.in[mask], d.out[mask]);
    if (!x)
      return fail(mask, "cell does not split into two infinite parts here");
    pieces.push_back(std::move(*x));
  }

  if (class_mode) {
    ModelElement ext = top(m);
    for (const ModelElement& p : params) ext = lattice_op(m, LatticeOp::Diff, ext, p);
    Card actual = element_size(m, ext);
    if (!decomposition_ok(d.in[0], d.out[0], actual))
      return fail(0, "exterior has size " + actual.str() + ", demanded " +
                         d.in[0].str() + " in + " + d.out[0].str() + " out");
    std::optional<ModelElement> x = split_element(m, ext, d.in[0], d.out[0]);
    if (!x) return fail(0, "exterior does not split into two infinite parts here");
    pieces.push_back(std::move(*x));
  } else {
    if (!d.out[0].infinite())
      return fail(0, "the exterior remainder is always infinite here");
    std::optional<ModelElement> x = exterior_take(m, d.in[0], params);
    if (!x)
      return fail(0, "no room in the exterior for an element of size " +
                         d.in[0].str());
    pieces.push_back(std::move(*x));
  }

  RealizeResult r;
  r.elem = union_all(m, pieces);
  return r;
}

std::optional<ModelElement> fresh_disjoint_infinite(const ModelHandle& m,
                                                    const ModelElement& a) {
  switch (m.pres) {
    case Presentation::Prime:
    case Presentation::FiniteBA:
      return std::nullopt;
    case Presentation::SaturatedBA: {
      ModelElement rest = lattice_op(m, LatticeOp::Diff, top(m), a);
      if (!is_infinite(m, rest)) return std::nullopt;
      return rest;
    }
    default:
      return exterior_take(m, Card::inf(), {a});
  }
}

}  // namespace mereo
