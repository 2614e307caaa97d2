#include "mereo/epset.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace mereo {

namespace {

std::vector<uint32_t> normalized(std::vector<uint32_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool sorted_contains(const std::vector<uint32_t>& v, uint32_t n) {
  return std::binary_search(v.begin(), v.end(), n);
}

}  // namespace

EPSet EPSet::finite(std::vector<uint32_t> members) {
  members = normalized(std::move(members));
  uint32_t t = members.empty() ? 0 : members.back() + 1;
  return make(std::move(members), t, 1, {});
}

EPSet EPSet::make(std::vector<uint32_t> prefix, uint32_t t, uint32_t p,
                  std::vector<uint32_t> r) {
  if (p == 0) throw std::invalid_argument("EPSet period must be positive");
  EPSet s;
  s.period_ = p;
  s.residues_ = normalized(std::move(r));
  for (uint32_t x : s.residues_)
    if (x >= p) throw std::invalid_argument("EPSet residue out of range");
  prefix = normalized(std::move(prefix));
  // Fold prefix entries at or past the threshold into the representation by
  // raising the threshold and absorbing the tail pattern below it.
  uint32_t top = prefix.empty() ? 0 : prefix.back() + 1;
  s.threshold_ = std::max(t, top);
  std::vector<uint32_t> pre;
  auto tail_member = [&s](uint32_t n) {
    return sorted_contains(s.residues_, n % s.period_);
  };
  for (uint32_t n = 0; n < s.threshold_; ++n) {
    bool m = sorted_contains(prefix, n) || (n >= t && tail_member(n));
    if (m) pre.push_back(n);
  }
  s.prefix_ = std::move(pre);
  s.canonicalize();
  return s;
}

void EPSet::canonicalize() {
  if (residues_.empty()) period_ = 1;
  // Minimal period: the smallest divisor of p under which R is invariant.
  for (uint32_t d = 1; d < period_; ++d) {
    if (period_ % d != 0) continue;
    bool ok = true;
    for (uint32_t r = 0; r < period_ && ok; ++r) {
      bool a = sorted_contains(residues_, r);
      bool b = sorted_contains(residues_, (r + d) % period_);
      ok = a == b;
    }
    if (ok) {
      std::vector<uint32_t> rr;
      for (uint32_t r : residues_)
        if (r < d) rr.push_back(r);
      residues_ = std::move(rr);
      period_ = d;
      break;
    }
  }
  // Minimal threshold: pull positions into the tail while they agree with it.
  while (threshold_ > 0) {
    uint32_t b = threshold_ - 1;
    bool in_prefix = !prefix_.empty() && prefix_.back() == b;
    bool in_tail = sorted_contains(residues_, b % period_);
    if (in_prefix != in_tail) break;
    if (in_prefix) prefix_.pop_back();
    threshold_ = b;
  }
}

bool EPSet::contains(uint32_t n) const {
  if (n < threshold_) return sorted_contains(prefix_, n);
  return sorted_contains(residues_, n % period_);
}

namespace {

EPSet lift_op(const EPSet& a, const EPSet& b, bool (*op)(bool, bool)) {
  uint64_t l = std::lcm<uint64_t>(a.period(), b.period());
  uint32_t t = std::max(a.threshold(), b.threshold());
  std::vector<uint32_t> pre;
  for (uint32_t n = 0; n < t; ++n)
    if (op(a.contains(n), b.contains(n))) pre.push_back(n);
  std::vector<uint32_t> res;
  for (uint32_t r = 0; r < l; ++r) {
    // For n >= t with n ≡ r (mod l) tail membership depends only on r.
    bool ma = std::binary_search(a.residues().begin(), a.residues().end(),
                                 r % a.period());
    bool mb = std::binary_search(b.residues().begin(), b.residues().end(),
                                 r % b.period());
    if (op(ma, mb)) res.push_back(r);
  }
  return EPSet::make(std::move(pre), t, static_cast<uint32_t>(l), std::move(res));
}

}  // namespace

EPSet operator|(const EPSet& a, const EPSet& b) {
  return lift_op(a, b, [](bool x, bool y) { return x || y; });
}

EPSet operator&(const EPSet& a, const EPSet& b) {
  return lift_op(a, b, [](bool x, bool y) { return x && y; });
}

EPSet operator-(const EPSet& a, const EPSet& b) {
  return lift_op(a, b, [](bool x, bool y) { return x && !y; });
}

EPSet EPSet::complement() const {
  return all() - *this;
}

std::vector<uint32_t> EPSet::first_members(uint64_t k) const {
  std::vector<uint32_t> out;
  out.reserve(k);
  for (uint32_t n : prefix_) {
    if (out.size() == k) return out;
    out.push_back(n);
  }
  if (out.size() < k && residues_.empty())
    throw std::logic_error("first_members: set too small");
  for (uint64_t n = threshold_; out.size() < k; ++n) {
    if (sorted_contains(residues_, static_cast<uint32_t>(n % period_)))
      out.push_back(static_cast<uint32_t>(n));
  }
  return out;
}

EPSet EPSet::take_first(uint64_t k) const { return finite(first_members(k)); }

EPSet EPSet::drop_first(uint64_t k) const { return *this - take_first(k); }

EPSet EPSet::even_half() const {
  // Member indices below the threshold come from the prefix; past it, each
  // window of length 2p holds an even number of members, so index parity is a
  // function of (n - t) mod 2p. That makes the even-indexed half eventually
  // periodic with period at most 2p.
  std::vector<uint32_t> pre;
  for (size_t i = 0; i < prefix_.size(); i += 2) pre.push_back(prefix_[i]);
  if (residues_.empty()) {
    return finite(std::move(pre));
  }
  uint64_t p2 = 2ull * period_;
  std::vector<uint32_t> res;
  uint64_t count_before = prefix_.size();
  for (uint64_t j = 0; j < p2; ++j) {
    uint64_t n = threshold_ + j;
    if (sorted_contains(residues_, static_cast<uint32_t>(n % period_))) {
      if (count_before % 2 == 0) res.push_back(static_cast<uint32_t>(n % p2));
      ++count_before;
    }
  }
  return make(std::move(pre), threshold_, static_cast<uint32_t>(p2), std::move(res));
}

std::string EPSet::str() const {
  std::string s = "{";
  for (size_t i = 0; i < prefix_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(prefix_[i]);
  }
  s += '}';
  if (!residues_.empty()) {
    s += "+[t=" + std::to_string(threshold_) + ",p=" + std::to_string(period_) + ",r={";
    for (size_t i = 0; i < residues_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(residues_[i]);
    }
    s += "}]";
  }
  return s;
}

}  // namespace mereo
