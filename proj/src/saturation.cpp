#include "mereo/saturation.hpp"

#include <algorithm>
#include <random>

#include "mereo/error.hpp"

namespace mereo {

namespace {

uint64_t bounded(std::mt19937_64& rng, uint64_t n) { return rng() % n; }

// A small seeded infinite element, for criterion replays. mt19937_64 output
// is pinned by the standard, so these replays are portable.
ModelElement random_infinite_element(const ModelHandle& m, std::mt19937_64& rng) {
  uint32_t col = 0;
  uint32_t p = 1;
  switch (m.pres) {
    case Presentation::Columns:
    case Presentation::ColumnsPerm:
      col = static_cast<uint32_t>(bounded(rng, 3));
      p = static_cast<uint32_t>(1 + bounded(rng, 4));
      break;
    case Presentation::Amorphous:
      col = static_cast<uint32_t>(bounded(rng, 3));
      p = col == 0 ? 1 : static_cast<uint32_t>(1 + bounded(rng, 4));
      break;
    case Presentation::SaturatedBA:
      col = 0;
      p = static_cast<uint32_t>(1 + bounded(rng, 4));
      break;
    default:
      throw std::logic_error("no random infinite elements here");
  }
  std::vector<uint32_t> r{static_cast<uint32_t>(bounded(rng, p))};
  uint32_t t = static_cast<uint32_t>(bounded(rng, 4));
  std::vector<uint32_t> prefix;
  for (uint32_t i = 0; i < t; ++i)
    if (bounded(rng, 2)) prefix.push_back(i);
  return make_element(m, {{col, EPSet::make(prefix, t, p, r)}});
}

// E x. over the conjunction saying x meets u in at least k atoms and misses
// at least k atoms of u; "at least k" is the conjunction of the k negated
// exact sizes, which is all the language offers.
Formula split_fragment(uint32_t k) {
  Term x = Term::var("x"), u = Term::var("u");
  Formula body = Formula::neg(Formula::card_eq(Term::inter(x, u), 0));
  for (uint32_t i = 1; i < k; ++i)
    body = Formula::conj(body, Formula::neg(Formula::card_eq(Term::inter(x, u), i)));
  for (uint32_t i = 0; i < k; ++i)
    body = Formula::conj(body, Formula::neg(Formula::card_eq(Term::diff(u, x), i)));
  return Formula::exists("x", body);
}

SplitDemand halving_demand(const ModelHandle& m, const ModelElement& a) {
  SplitDemand d;
  d.in = {Card::fin(0), Card::inf()};
  d.out = {Card::inf(), Card::inf()};
  if (m.mode() == TheoryMode::Class) {
    Card ext = element_size(m, lattice_op(m, LatticeOp::Diff, top(m), a));
    d.out[0] = ext;
  }
  return d;
}

void replay_saturated(const ModelHandle& m, uint32_t trials, uint64_t seed,
                      SaturationReport& rep) {
  std::mt19937_64 rng(seed);
  for (uint32_t t = 0; t < trials; ++t) {
    ModelElement a = random_infinite_element(m, rng);
    RealizeResult r = realize_type(m, {a}, halving_demand(m, a));
    if (!r.ok()) throw std::logic_error("halving failed in a saturated presentation");
    CellSizes two = cell_sizes(m, {a, *r.elem});
    if (!two.cells[3].infinite() || !two.cells[1].infinite() ||
        two.cells[2] != Card::fin(0))
      throw std::logic_error("halving produced the wrong division");
    rep.log.push_back("trial " + std::to_string(t) + ": " + element_to_json(a) +
                      " divides into two infinite parts");
    std::optional<ModelElement> u = fresh_disjoint_infinite(m, a);
    if (m.mode() == TheoryMode::Set) {
      if (!u) throw std::logic_error("no disjoint companion in a saturated presentation");
      if (!is_infinite(m, *u) ||
          element_size(m, lattice_op(m, LatticeOp::Inter, a, *u)) != Card::fin(0))
        throw std::logic_error("bad disjoint companion");
      rep.log.push_back("trial " + std::to_string(t) +
                        ": disjoint infinite companion " + element_to_json(*u));
    } else if (u) {
      rep.log.push_back("trial " + std::to_string(t) +
                        ": complement is infinite and disjoint");
    } else {
      rep.log.push_back("trial " + std::to_string(t) +
                        ": complement is finite; no infinite companion exists or is "
                        "demanded by any realized type");
    }
  }
}

void verify_unsplittable(const ModelHandle& m, const ModelElement& u,
                         SaturationReport& rep) {
  if (!is_infinite(m, u)) throw std::logic_error("witness must be infinite");
  rep.log.push_back("witness " + element_to_json(u) + " is infinite");
  RealizeResult r = realize_type(m, {u}, halving_demand(m, u));
  if (r.ok()) throw std::logic_error("witness unexpectedly divides");
  rep.log.push_back("halving demand on the witness is unrealizable: " + r.reason);
  for (uint32_t k = 1; k <= 16; ++k) {
    if (!eval(m, split_fragment(k), {{"u", u}}))
      throw std::logic_error("finite fragment of the halving type failed");
    rep.log.push_back("fragment k=" + std::to_string(k) +
                      " of the halving type is realized");
  }
}

}  // namespace

SaturationReport check_criterion(const ModelHandle& m, uint32_t trials,
                                 uint64_t seed) {
  SaturationReport rep;
  switch (m.pres) {
    case Presentation::Columns:
    case Presentation::ColumnsPerm:
    case Presentation::SaturatedBA:
      rep.saturated = true;
      replay_saturated(m, trials, seed, rep);
      return rep;
    case Presentation::Prime:
    case Presentation::FiniteBA: {
      rep.saturated = false;
      rep.failure = SatFailure::NoInfiniteElements;
      uint64_t scan = 32;
      if (m.pres == Presentation::FiniteBA && m.n < 6)
        scan = uint64_t{1} << m.n;  // the whole algebra
      EnumStream s(m);
      for (uint64_t i = 0; i < scan; ++i)
        if (is_infinite(m, s.next()))
          throw std::logic_error("unexpected infinite element");
      rep.log.push_back("first " + std::to_string(scan) +
                        " enumerated elements are all finite");
      if (fresh_disjoint_infinite(m, bottom(m)))
        throw std::logic_error("unexpected infinite element");
      rep.log.push_back("no infinite element is available at all");
      return rep;
    }
    case Presentation::Amorphous:
    case Presentation::Characteristic: {
      rep.saturated = false;
      rep.failure = SatFailure::UnsplittableInfinite;
      ModelElement u = make_element(m, {{0, EPSet::all()}});
      rep.witness = u;
      verify_unsplittable(m, u, rep);
      return rep;
    }
  }
  throw std::logic_error("bad presentation");
}

std::string SaturationReport::dump() const {
  std::string out = saturated ? "verdict: saturated\n" : "verdict: not saturated\n";
  if (failure) {
    out += "failure: ";
    out += *failure == SatFailure::NoInfiniteElements ? "no infinite elements"
                                                      : "unsplittable infinite element";
    out += "\n";
  }
  if (witness) out += "witness: " + element_to_json(*witness) + "\n";
  for (const std::string& line : log) out += "  " + line + "\n";
  return out;
}

namespace {

struct Region {
  ModelElement left, right;  // equal sizes, by construction
};

}  // namespace

BackAndForthResult back_and_forth(const ModelHandle& left, const ModelHandle& right,
                                  uint64_t steps) {
  if (left.mode() != right.mode())
    throw ModeError("cannot match a set-mode model with a class-mode one");
  bool class_mode = left.mode() == TheoryMode::Class;

  std::vector<Region> regions;
  if (class_mode) regions.push_back({top(left), top(right)});

  EnumStream stream_l(left), stream_r(right);
  PartialIso iso;
  iso.left = left;
  iso.right = right;

  BackAndForthResult res;
  for (uint64_t step = 0; step < steps; ++step) {
    int origin = static_cast<int>(step % 2);
    const ModelHandle& src = origin ? right : left;
    const ModelHandle& dst = origin ? left : right;
    ModelElement e = origin ? stream_r.next() : stream_l.next();

    struct Division {
      ModelElement src_in, src_out;  // the region refined on the source side
      Card in, out;
    };
    std::vector<Division> divs(regions.size());
    ModelElement e_rest = e;
    for (size_t i = 0; i < regions.size(); ++i) {
      const ModelElement& part = origin ? regions[i].right : regions[i].left;
      Division& d = divs[i];
      d.src_in = lattice_op(src, LatticeOp::Inter, part, e);
      d.src_out = lattice_op(src, LatticeOp::Diff, part, e);
      d.in = element_size(src, d.src_in);
      d.out = element_size(src, d.src_out);
      e_rest = lattice_op(src, LatticeOp::Diff, e_rest, part);
    }
    Card ext_in = element_size(src, e_rest);

    std::vector<std::optional<ModelElement>> images(regions.size());
    bool failed = false;
    for (size_t i = 0; i < regions.size() && !failed; ++i) {
      const Division& d = divs[i];
      if (d.in == Card::fin(0)) continue;
      const ModelElement& part = origin ? regions[i].left : regions[i].right;
      if (d.out == Card::fin(0)) {
        images[i] = part;
        continue;
      }
      images[i] = split_element(dst, part, d.in, d.out);
      if (!images[i]) {
        res.obstruction = Obstruction{
            origin, step, e,
            "a mapped region of size " + element_size(dst, part).str() +
                " cannot divide into " + d.in.str() + " inside and " + d.out.str() +
                " outside in " + dst.name()};
        failed = true;
      }
    }
    std::optional<ModelElement> ext_piece;
    if (!failed && ext_in != Card::fin(0)) {
      std::vector<ModelElement> dst_material;
      for (const Region& r : regions)
        dst_material.push_back(origin ? r.left : r.right);
      ext_piece = exterior_take(dst, ext_in, dst_material);
      if (!ext_piece) {
        res.obstruction =
            Obstruction{origin, step, e,
                        "the exterior of " + dst.name() +
                            " has no room for an element of size " + ext_in.str()};
        failed = true;
      }
    }
    if (failed) return res;

    ModelElement f = bottom(dst);
    for (size_t i = 0; i < regions.size(); ++i)
      if (images[i]) f = lattice_op(dst, LatticeOp::Union, f, *images[i]);
    if (ext_piece) f = lattice_op(dst, LatticeOp::Union, f, *ext_piece);

    std::vector<Region> next;
    next.reserve(regions.size() + 1);
    for (size_t i = 0; i < regions.size(); ++i) {
      const Division& d = divs[i];
      if (d.in == Card::fin(0) || d.out == Card::fin(0)) {
        next.push_back(std::move(regions[i]));
        continue;
      }
      const ModelElement& dst_part = origin ? regions[i].left : regions[i].right;
      ModelElement dst_in = *images[i];
      ModelElement dst_out = lattice_op(dst, LatticeOp::Diff, dst_part, dst_in);
      if (origin) {
        next.push_back({dst_in, d.src_in});
        next.push_back({dst_out, d.src_out});
      } else {
        next.push_back({d.src_in, dst_in});
        next.push_back({d.src_out, dst_out});
      }
    }
    if (ext_piece) {
      if (origin)
        next.push_back({*ext_piece, e_rest});
      else
        next.push_back({e_rest, *ext_piece});
    }
    regions = std::move(next);

    if (origin)
      iso.pairs.push_back({f, e, origin});
    else
      iso.pairs.push_back({e, f, origin});
  }
  iso.left_consumed = stream_l.index();
  iso.right_consumed = stream_r.index();
  res.iso = std::move(iso);
  return res;
}

namespace {

// One side of a pairing atomized into the common refinement of its elements:
// every element is a union of parts, encoded as a bitset over part indices.
// Cell sizes of any subtuple then reduce to summing part sizes under bitwise
// combinations, which is what makes the full <=3-subtuple sweep affordable.
struct SideSpace {
  size_t words = 0;
  std::vector<Card> part_size;
  std::vector<uint64_t> inf_words;             // parts of infinite size
  std::vector<std::vector<uint64_t>> bits;     // per element
  bool set_mode = false;
};

SideSpace build_side(const ModelHandle& m, const std::vector<ModelElement>& elems) {
  std::vector<ModelElement> parts;
  std::vector<std::vector<bool>> member;  // member[p][k]: part p inside elems[k]
  if (m.mode() == TheoryMode::Class) {
    parts.push_back(top(m));
    member.push_back({});
  }
  for (size_t k = 0; k < elems.size(); ++k) {
    std::vector<ModelElement> next_parts;
    std::vector<std::vector<bool>> next_member;
    ModelElement rest = elems[k];
    for (size_t p = 0; p < parts.size(); ++p) {
      ModelElement in = lattice_op(m, LatticeOp::Inter, parts[p], elems[k]);
      ModelElement out = lattice_op(m, LatticeOp::Diff, parts[p], elems[k]);
      rest = lattice_op(m, LatticeOp::Diff, rest, parts[p]);
      if (!in.empty()) {
        next_parts.push_back(std::move(in));
        next_member.push_back(member[p]);
        next_member.back().push_back(true);
      }
      if (!out.empty()) {
        next_parts.push_back(std::move(out));
        next_member.push_back(member[p]);
        next_member.back().push_back(false);
      }
    }
    if (!rest.empty()) {
      next_parts.push_back(std::move(rest));
      next_member.push_back(std::vector<bool>(k, false));
      next_member.back().push_back(true);
    }
    parts = std::move(next_parts);
    member = std::move(next_member);
  }

  SideSpace s;
  s.set_mode = m.mode() == TheoryMode::Set;
  s.words = (parts.size() + 63) / 64;
  s.inf_words.assign(s.words, 0);
  for (size_t p = 0; p < parts.size(); ++p) {
    s.part_size.push_back(element_size(m, parts[p]));
    if (s.part_size.back().infinite()) s.inf_words[p / 64] |= uint64_t{1} << (p % 64);
  }
  s.bits.assign(elems.size(), std::vector<uint64_t>(s.words, 0));
  for (size_t p = 0; p < parts.size(); ++p)
    for (size_t k = 0; k < elems.size(); ++k)
      if (member[p][k]) s.bits[k][p / 64] |= uint64_t{1} << (p % 64);
  return s;
}

// Exact size of the parts selected by the word array.
Card selection_size(const SideSpace& s, const std::vector<uint64_t>& sel) {
  uint64_t total = 0;
  for (size_t w = 0; w < s.words; ++w) {
    if (sel[w] & s.inf_words[w]) return Card::inf();
    uint64_t v = sel[w] & ~s.inf_words[w];
    while (v) {
      size_t b = static_cast<size_t>(std::countr_zero(v));
      total += s.part_size[w * 64 + b].value();
      v &= v - 1;
    }
  }
  return Card::fin(total);
}

// The 8 cell selections of up to three elements (absent ones use index
// SIZE_MAX and contribute their complement, i.e. everything).
std::array<Card, 8> subtuple_cells(const SideSpace& s, size_t i, size_t j, size_t k) {
  std::array<std::vector<uint64_t>, 8> sel;
  for (auto& v : sel) v.assign(s.words, 0);
  for (size_t w = 0; w < s.words; ++w) {
    uint64_t all = ~uint64_t{0};
    if (w == s.words - 1 && s.part_size.size() % 64)
      all = (uint64_t{1} << (s.part_size.size() % 64)) - 1;
    uint64_t bi = i == SIZE_MAX ? 0 : s.bits[i][w];
    uint64_t bj = j == SIZE_MAX ? 0 : s.bits[j][w];
    uint64_t bk = k == SIZE_MAX ? 0 : s.bits[k][w];
    for (int mask = 0; mask < 8; ++mask) {
      uint64_t v = all;
      v &= (mask & 1) ? bi : ~bi;
      v &= (mask & 2) ? bj : ~bj;
      v &= (mask & 4) ? bk : ~bk;
      sel[static_cast<size_t>(mask)][w] = v;
    }
  }
  std::array<Card, 8> out;
  for (int mask = 0; mask < 8; ++mask)
    out[static_cast<size_t>(mask)] = selection_size(s, sel[static_cast<size_t>(mask)]);
  return out;
}

bool cells_agree(const SideSpace& l, const SideSpace& r, size_t i, size_t j, size_t k,
                 std::string* why) {
  std::array<Card, 8> cl = subtuple_cells(l, i, j, k);
  std::array<Card, 8> cr = subtuple_cells(r, i, j, k);
  int top_mask = (i != SIZE_MAX ? 1 : 0) | (j != SIZE_MAX ? 2 : 0) |
                 (k != SIZE_MAX ? 4 : 0);
  for (int mask = 0; mask <= top_mask; ++mask) {
    if ((mask | top_mask) != top_mask) continue;
    // The exterior cell of a set-mode model is infinite on both sides
    // regardless of the finite region space.
    if (mask == 0 && l.set_mode) continue;
    if (cl[static_cast<size_t>(mask)] != cr[static_cast<size_t>(mask)]) {
      if (why)
        *why = "subtuple (" + std::to_string(i) + "," + std::to_string(j) + "," +
               std::to_string(k) + ") cell " + std::to_string(mask) +
               " measures " + cl[static_cast<size_t>(mask)].str() + " vs " +
               cr[static_cast<size_t>(mask)].str();
      return false;
    }
  }
  return true;
}

}  // namespace

bool verify_partial_iso(const PartialIso& iso, std::string* why) {
  size_t n = iso.pairs.size();
  std::vector<ModelElement> ls, rs;
  for (const PairedElements& p : iso.pairs) {
    ls.push_back(p.left);
    rs.push_back(p.right);
  }
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (leq(iso.left, ls[i], ls[j]) != leq(iso.right, rs[i], rs[j])) {
        if (why)
          *why = "pair (" + std::to_string(i) + "," + std::to_string(j) +
                 ") inclusion disagrees";
        return false;
      }
    }
  }
  SideSpace l = build_side(iso.left, ls);
  SideSpace r = build_side(iso.right, rs);
  for (size_t i = 0; i < n; ++i)
    if (!cells_agree(l, r, i, SIZE_MAX, SIZE_MAX, why)) return false;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (!cells_agree(l, r, i, j, SIZE_MAX, why)) return false;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      for (size_t k = j + 1; k < n; ++k)
        if (!cells_agree(l, r, i, j, k, why)) return false;
  return true;
}

Card characteristic(const ModelHandle& m) {
  switch (m.pres) {
    case Presentation::Prime:
    case Presentation::FiniteBA:
      // No infinite elements at all.
      return Card::fin(0);
    case Presentation::Characteristic:
      // The n blocks are pairwise disjoint and infinite; an (n+1)-th
      // pairwise-disjoint element is squeezed into finite slices by the
      // pigeonhole principle.
      return Card::fin(m.n);
    case Presentation::Columns:
    case Presentation::ColumnsPerm:
    case Presentation::Amorphous:
      // Unboundedly many disjoint full columns.
      return Card::inf();
    case Presentation::SaturatedBA:
      // Residue classes mod k for every k.
      return Card::inf();
  }
  throw std::logic_error("bad presentation");
}

}  // namespace mereo
