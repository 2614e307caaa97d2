#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mereo/models.hpp"

namespace mereo {

// The two ways a presentation here fails the saturation criterion: it has
// no infinite elements at all, or it has an infinite element that does not
// split into two infinite parts.
enum class SatFailure { NoInfiniteElements, UnsplittableInfinite };

struct SaturationReport {
  bool saturated = false;
  std::optional<SatFailure> failure;
  // The unsplittable element for UnsplittableInfinite.
  std::optional<ModelElement> witness;
  // Replayed evidence, one line per check performed. For a positive verdict
  // these are seeded criterion replays; for a negative one they verify the
  // failure (the witness is infinite, its halving demand is unrealizable,
  // yet every finite fragment of that demand is realized).
  std::vector<std::string> log;

  std::string dump() const;
};

// Structural verdict per presentation, with `trials` seeded witness replays
// in the log. The negative evidence is verified, not asserted: the report is
// only produced after the checks in the log actually ran.
SaturationReport check_criterion(const ModelHandle& m, uint32_t trials,
                                 uint64_t seed = 0);

struct PairedElements {
  ModelElement left, right;
  // 0 when the left element was enumerated and the right realized, 1 for
  // the converse.
  int origin = 0;
};

struct PartialIso {
  ModelHandle left, right;
  std::vector<PairedElements> pairs;
  uint64_t left_consumed = 0, right_consumed = 0;  // enumeration indices used
};

struct Obstruction {
  int origin = 0;  // side the unmappable element came from, as above
  uint64_t step = 0;
  ModelElement element;
  std::string reason;
};

struct BackAndForthResult {
  std::optional<PartialIso> iso;
  std::optional<Obstruction> obstruction;

  bool ok() const { return iso.has_value(); }
};

// Alternating extension: even steps consume the next enumerated element of
// the left model, odd steps of the right, and the other side realizes an
// element with the same division profile over everything mapped so far.
// Deterministic. An Obstruction can only arise when a side fails the
// saturation criterion.
BackAndForthResult back_and_forth(const ModelHandle& left, const ModelHandle& right,
                                  uint64_t steps);

// Independent check of a pairing: leq agreement both ways on all ordered
// pairs, and exact cell-size agreement on every subtuple of size <= 3. On
// failure, *why names the first offending pair or subtuple.
bool verify_partial_iso(const PartialIso& iso, std::string* why = nullptr);

// The largest number of pairwise disjoint infinite elements, read off the
// presentation: no infinite elements at all gives 0, n blocks give n, and a
// presentation with infinitely many free columns (or an infinitely
// divisible top) gives Card::inf().
Card characteristic(const ModelHandle& m);

}  // namespace mereo
