#include "mereo/corpus.hpp"

#include <algorithm>
#include <iterator>

namespace mereo {

namespace {

uint64_t draw(std::mt19937_64& rng, uint64_t n) { return rng() % n; }

const char* kVarPool[] = {"x", "y", "z", "w", "u", "v"};

struct Gen {
  std::mt19937_64& rng;
  const CorpusOptions& opts;
  uint64_t card_left;

  Term term(const std::vector<std::string>& scope, uint32_t depth) {
    if (depth > 0 && draw(rng, 100) < 35) {
      Term a = term(scope, depth - 1);
      Term b = term(scope, depth - 1);
      switch (draw(rng, 3)) {
        case 0: return Term::union_of(a, b);
        case 1: return Term::inter(a, b);
        default: return Term::diff(a, b);
      }
    }
    uint64_t roll = draw(rng, 100);
    if (!scope.empty() && roll < 80) return Term::var(scope[draw(rng, scope.size())]);
    if (opts.mode == TheoryMode::Class && roll >= 90) return Term::universe();
    return scope.empty() ? (opts.mode == TheoryMode::Class && roll >= 50
                                ? Term::universe()
                                : Term::empty())
                         : Term::empty();
  }

  Formula atom(const std::vector<std::string>& scope) {
    switch (draw(rng, 3)) {
      case 0: return Formula::subseteq(term(scope, 2), term(scope, 2));
      case 1: return Formula::equal(term(scope, 2), term(scope, 2));
      default: {
        uint64_t cap = std::min(opts.max_constant, card_left);
        uint64_t k = draw(rng, cap + 1);
        card_left -= k;
        return Formula::card_eq(term(scope, 2), k);
      }
    }
  }

  Formula build(uint32_t natoms, std::vector<std::string>& scope, uint32_t rank_left) {
    bool can_quantify =
        rank_left > 0 && scope.size() < opts.max_vars &&
        scope.size() < std::size(kVarPool);
    // Always bind at least one variable over an empty scope so the atoms
    // have something to talk about.
    if (can_quantify && (scope.empty() || draw(rng, 100) < 40)) {
      std::string v = kVarPool[scope.size()];
      scope.push_back(v);
      Formula body = build(natoms, scope, rank_left - 1);
      scope.pop_back();
      return draw(rng, 2) ? Formula::forall(v, body) : Formula::exists(v, body);
    }
    if (natoms <= 1) {
      Formula a = atom(scope);
      return draw(rng, 100) < 25 ? Formula::neg(a) : a;
    }
    uint32_t left = 1 + static_cast<uint32_t>(draw(rng, natoms - 1));
    Formula a = build(left, scope, rank_left);
    Formula b = build(natoms - left, scope, rank_left);
    Formula out = [&] {
      switch (draw(rng, 5)) {
        case 0: return Formula::conj(a, b);
        case 1: return Formula::disj(a, b);
        case 2: return Formula::implies(a, b);
        case 3: return Formula::iff(a, b);
        default: return Formula::conj(a, Formula::neg(b));
      }
    }();
    return draw(rng, 100) < 15 ? Formula::neg(out) : out;
  }
};

}  // namespace

Formula generate_sentence(std::mt19937_64& rng, const CorpusOptions& opts) {
  Gen g{rng, opts, opts.card_budget};
  uint32_t natoms = 1 + static_cast<uint32_t>(draw(rng, opts.max_atoms));
  std::vector<std::string> scope;
  return g.build(natoms, scope, opts.max_rank);
}

std::vector<Formula> generate_corpus(uint32_t count, uint64_t seed,
                                     const CorpusOptions& opts) {
  std::mt19937_64 rng(seed);
  std::vector<Formula> out;
  out.reserve(count);
  for (uint32_t i = 0; i < count; ++i) out.push_back(generate_sentence(rng, opts));
  return out;
}

}  // namespace mereo
