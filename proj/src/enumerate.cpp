#include <algorithm>
#include <functional>
#include <map>
#include <mutex>

#include "mereo/error.hpp"
#include "mereo/models.hpp"

namespace mereo {

namespace {

// Lexicographic size-k subsets of {0..n-1}.
void for_each_combination(uint32_t n, uint32_t k,
                          const std::function<void(const std::vector<uint32_t>&)>& f) {
  std::vector<uint32_t> pick(k);
  for (uint32_t i = 0; i < k; ++i) pick[i] = i;
  if (k > n) return;
  while (true) {
    f(pick);
    uint32_t i = k;
    while (i > 0 && pick[i - 1] == n - (k - i) - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (uint32_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }
}

// All canonical EPSets of the given weight, in a fixed order (period, then
// residue count, then residues, then threshold, then prefix). Non-canonical
// parameter tuples collapse to a lighter descriptor and are skipped, so each
// set appears exactly once, at its own weight.
std::vector<EPSet> build_epsets_of_weight(uint32_t v) {
  std::vector<EPSet> out;
  if (v == 0) return out;
  for (uint32_t p = 1; p <= v + 1; ++p) {
    uint64_t base = p - 1;
    if (base > v) break;
    for (uint32_t nr = 0; nr <= p && base + nr <= v; ++nr) {
      for_each_combination(p, nr, [&](const std::vector<uint32_t>& r) {
        uint64_t rem = v - base - nr;
        for (uint32_t t = 0; t <= rem; ++t) {
          uint64_t np = rem - t;
          if (np > t) continue;
          for_each_combination(t, static_cast<uint32_t>(np),
                               [&](const std::vector<uint32_t>& prefix) {
            EPSet e = EPSet::make(prefix, t, p, r);
            if (e.threshold() == t && e.period() == p && e.prefix() == prefix &&
                e.residues() == r)
              out.push_back(std::move(e));
          });
        }
      });
    }
  }
  return out;
}

const std::vector<EPSet>& epsets_of_weight(uint32_t v) {
  static std::mutex mu;
  static std::map<uint32_t, std::vector<EPSet>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(v);
  if (it == cache.end()) it = cache.emplace(v, build_epsets_of_weight(v)).first;
  return it->second;
}

bool entry_ok(const ModelHandle& m, uint32_t col, const EPSet& e) {
  switch (m.pres) {
    case Presentation::Prime:
      return col == 0 && !e.infinite();
    case Presentation::Columns:
    case Presentation::ColumnsPerm:
      return true;
    case Presentation::Characteristic:
      if (col > m.n) return false;
      if (col < m.n) return e.period() == 1;
      return !e.infinite();
    case Presentation::Amorphous:
      return col > 0 || e.period() == 1;
    case Presentation::FiniteBA:
      return col == 0 && !e.infinite() &&
             (e.prefix().empty() || e.prefix().back() < m.n);
    case Presentation::SaturatedBA:
      return col == 0;
  }
  return false;
}

void build_rec(const ModelHandle& m, uint32_t min_col, uint64_t remaining,
               std::map<uint32_t, EPSet>& current,
               std::vector<ModelElement>& out) {
  if (remaining == 0) {
    ModelElement e;
    e.pres = m.pres;
    e.cols = current;
    out.push_back(std::move(e));
    return;
  }
  for (uint64_t c = min_col; c + 1 <= remaining; ++c) {
    for (uint64_t v = 1; c + v <= remaining; ++v) {
      for (const EPSet& e : epsets_of_weight(static_cast<uint32_t>(v))) {
        if (!entry_ok(m, static_cast<uint32_t>(c), e)) continue;
        current.emplace(static_cast<uint32_t>(c), e);
        build_rec(m, static_cast<uint32_t>(c) + 1, remaining - c - v, current, out);
        current.erase(static_cast<uint32_t>(c));
      }
    }
  }
}

// ColumnsPerm shares the Columns descriptor space under the column
// relabeling 2k <-> 2k+1; elements are generated in the relabeled order.
ModelElement permute_columns(ModelElement e) {
  std::map<uint32_t, EPSet> cols;
  for (auto& [c, s] : e.cols) cols.emplace(c ^ 1u, std::move(s));
  e.cols = std::move(cols);
  return e;
}

std::vector<ModelElement> elements_of_weight(const ModelHandle& m, uint64_t w) {
  std::vector<ModelElement> out;
  if (w == 0) {
    out.push_back(bottom(m));
    return out;
  }
  std::map<uint32_t, EPSet> current;
  if (m.pres == Presentation::ColumnsPerm) {
    ModelHandle cols{Presentation::Columns, 0};
    std::vector<ModelElement> plain;
    build_rec(cols, 0, w, current, plain);
    for (ModelElement& e : plain) {
      e = permute_columns(std::move(e));
      e.pres = Presentation::ColumnsPerm;
      out.push_back(std::move(e));
    }
    return out;
  }
  build_rec(m, 0, w, current, out);
  return out;
}

}  // namespace

EnumStream::EnumStream(ModelHandle m) : m_(m) {
  batch_ = elements_of_weight(m_, 0);
}

void EnumStream::refill() {
  // A finite algebra on n atoms runs out of descriptors at weight 2n
  // (threshold n plus a full prefix); past that every batch is empty forever,
  // so stop instead of grinding through ever larger descriptor strata.
  uint64_t cap = m_.pres == Presentation::FiniteBA ? uint64_t{2} * m_.n : 64;
  while (pos_ >= batch_.size()) {
    ++weight_;
    if (weight_ > cap) throw CapError("enumeration exhausted " + m_.name());
    pos_ = 0;
    batch_ = elements_of_weight(m_, weight_);
  }
}

ModelElement EnumStream::next() {
  refill();
  ++index_;
  return batch_[pos_++];
}

ModelElement enumerate_element(const ModelHandle& m, uint64_t i) {
  EnumStream s(m);
  ModelElement e = s.next();
  for (uint64_t k = 0; k < i; ++k) e = s.next();
  return e;
}

}  // namespace mereo
