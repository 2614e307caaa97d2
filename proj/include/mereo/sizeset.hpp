#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mereo {

// A cardinality drawn from N ∪ {inf}. Addition saturates at inf.
class Card {
 public:
  static constexpr uint64_t kInf = ~0ull;

  constexpr Card() : v_(0) {}
  static constexpr Card inf() { return Card(kInf); }
  static constexpr Card fin(uint64_t n) { return Card(n); }

  constexpr bool infinite() const { return v_ == kInf; }
  // Only meaningful when finite.
  constexpr uint64_t value() const { return v_; }

  friend constexpr Card operator+(Card a, Card b) {
    if (a.infinite() || b.infinite()) return inf();
    uint64_t s = a.v_ + b.v_;
    return s < a.v_ ? inf() : fin(s);
  }
  friend constexpr bool operator==(Card a, Card b) { return a.v_ == b.v_; }
  friend constexpr bool operator!=(Card a, Card b) { return a.v_ != b.v_; }
  // inf compares greatest.
  friend constexpr bool operator<(Card a, Card b) { return a.v_ < b.v_; }

  std::string str() const { return infinite() ? "inf" : std::to_string(v_); }

 private:
  explicit constexpr Card(uint64_t v) : v_(v) {}
  uint64_t v_;
};

// A set of cardinalities expressible by the language: either a finite set of
// naturals, or the complement of one together with inf. The key type-level
// fact: inf is a member exactly of the cofinite variant, so no SizeSet can
// say "infinite" without also admitting all large finite values.
class SizeSet {
 public:
  SizeSet() : cofinite_(false) {}

  // Exactly the listed finite sizes.
  static SizeSet fin(std::vector<uint64_t> elems);
  // Everything (including inf) except the listed finite sizes.
  static SizeSet cofin(std::vector<uint64_t> excluded);
  static SizeSet none() { return fin({}); }
  static SizeSet all() { return cofin({}); }
  static SizeSet exactly(uint64_t n) { return fin({n}); }

  bool cofinite() const { return cofinite_; }
  // Members (fin variant) or exclusions (cofin variant), sorted.
  const std::vector<uint64_t>& base() const { return base_; }

  bool empty() const { return !cofinite_ && base_.empty(); }
  bool full() const { return cofinite_ && base_.empty(); }
  bool contains(Card v) const;

  SizeSet complement() const;
  bool subset_of(const SizeSet& o) const;
  friend SizeSet operator&(const SizeSet& a, const SizeSet& b);
  friend SizeSet operator|(const SizeSet& a, const SizeSet& b);
  // {i + o : i in a, o in b} with inf absorbing.
  friend SizeSet sumset(const SizeSet& a, const SizeSet& b);

  // "{1,2}" for fin, "~{0}" for cofin.
  std::string str() const;

  friend bool operator==(const SizeSet& a, const SizeSet& b) {
    return a.cofinite_ == b.cofinite_ && a.base_ == b.base_;
  }
  friend bool operator<(const SizeSet& a, const SizeSet& b) {
    if (a.cofinite_ != b.cofinite_) return a.cofinite_ < b.cofinite_;
    return a.base_ < b.base_;
  }

 private:
  bool cofinite_;
  std::vector<uint64_t> base_;  // sorted, unique
};

}  // namespace mereo
