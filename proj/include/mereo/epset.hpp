#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mereo/sizeset.hpp"

namespace mereo {

// An eventually periodic subset of N: a finite prefix below a threshold t,
// then the positions n >= t with n mod p in a residue set R. Canonical form
// has minimal period, then minimal threshold, and prefix contained in [0, t).
// The family is closed under union, intersection and difference, which is
// what makes column descriptors computable.
class EPSet {
 public:
  EPSet() : threshold_(0), period_(1) {}  // empty set

  static EPSet empty() { return EPSet(); }
  static EPSet finite(std::vector<uint32_t> members);
  // All of N.
  static EPSet all() { return make({}, 0, 1, {0}); }
  // prefix ∪ {n >= t : n mod p in r}; arguments need not be canonical.
  static EPSet make(std::vector<uint32_t> prefix, uint32_t t, uint32_t p,
                    std::vector<uint32_t> r);

  const std::vector<uint32_t>& prefix() const { return prefix_; }
  uint32_t threshold() const { return threshold_; }
  uint32_t period() const { return period_; }
  const std::vector<uint32_t>& residues() const { return residues_; }

  bool contains(uint32_t n) const;
  bool is_empty() const { return prefix_.empty() && residues_.empty(); }
  bool infinite() const { return !residues_.empty(); }
  Card size() const {
    return infinite() ? Card::inf() : Card::fin(prefix_.size());
  }

  friend EPSet operator|(const EPSet& a, const EPSet& b);
  friend EPSet operator&(const EPSet& a, const EPSet& b);
  friend EPSet operator-(const EPSet& a, const EPSet& b);
  EPSet complement() const;
  bool subset_of(const EPSet& b) const { return (*this - b).is_empty(); }

  // First k members, ascending. Requires size() >= k.
  std::vector<uint32_t> first_members(uint64_t k) const;
  EPSet take_first(uint64_t k) const;
  EPSet drop_first(uint64_t k) const;
  // Even-indexed members (by occurrence order). For an infinite set both the
  // result and the remainder are infinite, with period at most 2p.
  EPSet even_half() const;

  std::string str() const;

  friend bool operator==(const EPSet& a, const EPSet& b) {
    return a.threshold_ == b.threshold_ && a.period_ == b.period_ &&
           a.prefix_ == b.prefix_ && a.residues_ == b.residues_;
  }
  friend bool operator<(const EPSet& a, const EPSet& b) {
    if (a.threshold_ != b.threshold_) return a.threshold_ < b.threshold_;
    if (a.period_ != b.period_) return a.period_ < b.period_;
    if (a.prefix_ != b.prefix_) return a.prefix_ < b.prefix_;
    return a.residues_ < b.residues_;
  }

 private:
  void canonicalize();

  std::vector<uint32_t> prefix_;    // sorted, unique, all < threshold_
  uint32_t threshold_;
  uint32_t period_;                 // >= 1
  std::vector<uint32_t> residues_;  // sorted, unique, all < period_
};

}  // namespace mereo
