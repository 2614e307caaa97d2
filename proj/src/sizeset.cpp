#include "mereo/sizeset.hpp"

#include <algorithm>

namespace mereo {

namespace {

std::vector<uint64_t> normalized(std::vector<uint64_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

SizeSet SizeSet::fin(std::vector<uint64_t> elems) {
  SizeSet s;
  s.cofinite_ = false;
  s.base_ = normalized(std::move(elems));
  return s;
}

SizeSet SizeSet::cofin(std::vector<uint64_t> excluded) {
  SizeSet s;
  s.cofinite_ = true;
  s.base_ = normalized(std::move(excluded));
  return s;
}

bool SizeSet::contains(Card v) const {
  if (v.infinite()) return cofinite_;
  bool listed = std::binary_search(base_.begin(), base_.end(), v.value());
  return cofinite_ ? !listed : listed;
}

SizeSet SizeSet::complement() const {
  SizeSet s;
  s.cofinite_ = !cofinite_;
  s.base_ = base_;
  return s;
}

bool SizeSet::subset_of(const SizeSet& o) const {
  if (!cofinite_ && !o.cofinite_)
    return std::includes(o.base_.begin(), o.base_.end(), base_.begin(), base_.end());
  if (!cofinite_ && o.cofinite_) {
    // Members must avoid o's exclusions.
    std::vector<uint64_t> hit;
    std::set_intersection(base_.begin(), base_.end(), o.base_.begin(), o.base_.end(),
                          std::back_inserter(hit));
    return hit.empty();
  }
  if (cofinite_ && !o.cofinite_) return false;  // inf is in *this but not in o
  return std::includes(base_.begin(), base_.end(), o.base_.begin(), o.base_.end());
}

SizeSet operator&(const SizeSet& a, const SizeSet& b) {
  std::vector<uint64_t> out;
  if (!a.cofinite_ && !b.cofinite_) {
    std::set_intersection(a.base_.begin(), a.base_.end(), b.base_.begin(), b.base_.end(),
                          std::back_inserter(out));
    return SizeSet::fin(std::move(out));
  }
  if (a.cofinite_ && b.cofinite_) {
    std::set_union(a.base_.begin(), a.base_.end(), b.base_.begin(), b.base_.end(),
                   std::back_inserter(out));
    return SizeSet::cofin(std::move(out));
  }
  const SizeSet& f = a.cofinite_ ? b : a;
  const SizeSet& c = a.cofinite_ ? a : b;
  std::set_difference(f.base_.begin(), f.base_.end(), c.base_.begin(), c.base_.end(),
                      std::back_inserter(out));
  return SizeSet::fin(std::move(out));
}

SizeSet operator|(const SizeSet& a, const SizeSet& b) {
  return (a.complement() & b.complement()).complement();
}

SizeSet sumset(const SizeSet& a, const SizeSet& b) {
  if (a.empty() || b.empty()) return SizeSet::none();
  if (!a.cofinite() && !b.cofinite()) {
    std::vector<uint64_t> out;
    out.reserve(a.base().size() * b.base().size());
    for (uint64_t i : a.base())
      for (uint64_t o : b.base()) out.push_back(i + o);
    return SizeSet::fin(std::move(out));
  }
  // At least one operand admits inf, and both are nonempty, so the result
  // admits inf and excludes only finitely many values. Every n past the bound
  // below is representable: if a is cofinite take i = max(a.base)+1 <= n with
  // n-i past b's data; symmetrically if only b is cofinite.
  auto maxOf = [](const std::vector<uint64_t>& v) -> uint64_t {
    return v.empty() ? 0 : v.back();
  };
  uint64_t bound = maxOf(a.base()) + maxOf(b.base()) + 2;
  if (!a.cofinite()) bound = std::max(bound, a.base().front() + maxOf(b.base()) + 1);
  if (!b.cofinite()) bound = std::max(bound, b.base().front() + maxOf(a.base()) + 1);
  std::vector<uint64_t> excluded;
  for (uint64_t n = 0; n < bound; ++n) {
    bool representable = false;
    for (uint64_t i = 0; i <= n && !representable; ++i)
      representable = a.contains(Card::fin(i)) && b.contains(Card::fin(n - i));
    if (!representable) excluded.push_back(n);
  }
  return SizeSet::cofin(std::move(excluded));
}

std::string SizeSet::str() const {
  std::string s = cofinite_ ? "~{" : "{";
  for (size_t i = 0; i < base_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(base_[i]);
  }
  s += '}';
  return s;
}

}  // namespace mereo
