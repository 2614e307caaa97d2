#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mereo/formula.hpp"

namespace mereo {

// Random sentence generation for cross-checking the decision procedure
// against the brute-force oracles. All randomness flows through mt19937_64
// with modular draws, so a seed pins the corpus on every platform.

struct CorpusOptions {
  TheoryMode mode = TheoryMode::Class;
  uint32_t max_rank = 3;      // quantifier nesting depth
  uint32_t max_vars = 3;      // binders in scope at once
  uint64_t max_constant = 4;  // largest k in |t| = k
  uint32_t max_atoms = 4;     // atomic subformulas per sentence
  uint64_t card_budget = 8;   // sum of all k over the sentence
};

// Always a sentence: leaf terms only use variables bound on the path above.
Formula generate_sentence(std::mt19937_64& rng, const CorpusOptions& opts = {});

std::vector<Formula> generate_corpus(uint32_t count, uint64_t seed,
                                     const CorpusOptions& opts = {});

}  // namespace mereo
