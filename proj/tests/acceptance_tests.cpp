// End-to-end acceptance gate. Each numbered check prints exactly one
// PASS/FAIL line; the process exits nonzero if any check fails. Budgets and
// expected values are pinned here, not configurable.
#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "mereo/cells.hpp"
#include "mereo/corpus.hpp"
#include "mereo/epset.hpp"
#include "mereo/formula.hpp"
#include "mereo/models.hpp"
#include "mereo/oracle.hpp"
#include "mereo/qe.hpp"
#include "mereo/saturation.hpp"
#include "mereo/sizeset.hpp"

using namespace mereo;

namespace {

constexpr uint64_t kClassSeed = 2026;
constexpr uint64_t kSetSeed = 4096;
constexpr uint32_t kClassCount = 500;
constexpr uint32_t kSetCount = 300;
constexpr double kClassBudgetSec = 60.0;
constexpr double kSetBudgetSec = 120.0;
constexpr double kIsoBudgetSec = 30.0;

int failures = 0;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(int num, const char* label, bool ok, const std::string& detail) {
  std::printf("%s  %d  %s  (%s)\n", ok ? "PASS" : "FAIL", num, label, detail.c_str());
  if (!ok) ++failures;
}

std::vector<Formula> class_corpus() {
  CorpusOptions opts;
  return generate_corpus(kClassCount, kClassSeed, opts);
}

std::vector<Formula> set_corpus() {
  CorpusOptions opts;
  opts.mode = TheoryMode::Set;
  return generate_corpus(kSetCount, kSetSeed, opts);
}

void criterion_class_agreement() {
  auto t0 = std::chrono::steady_clock::now();
  uint32_t unstable = 0, disagree = 0;
  for (const Formula& f : class_corpus()) {
    bool d = decide(f, TheoryMode::Class);
    OracleVerdict v = stabilized_decide_class(f);
    if (v == OracleVerdict::Unstable)
      ++unstable;
    else if (v != verdict_of(d))
      ++disagree;
  }
  double secs = seconds_since(t0);
  bool ok = disagree == 0 && unstable * 50 < kClassCount && secs < kClassBudgetSec;
  report(1, "class decide matches the stabilized finite window", ok,
         std::to_string(kClassCount) + " sentences, " + std::to_string(disagree) +
             " disagree, " + std::to_string(unstable) + " unstable (< 2% required), " +
             std::to_string(secs).substr(0, 5) + "s of " +
             std::to_string((int)kClassBudgetSec) + "s");
}

void criterion_set_agreement() {
  auto t0 = std::chrono::steady_clock::now();
  ModelHandle columns = ModelHandle::from_name("columns");
  uint32_t unstable = 0, disagree = 0;
  for (const Formula& f : set_corpus()) {
    bool d = decide(f, TheoryMode::Set);
    OracleVerdict v = bounded_eval_set(columns, f);
    if (v == OracleVerdict::Unstable)
      ++unstable;
    else if (v != verdict_of(d))
      ++disagree;
  }
  double secs = seconds_since(t0);
  bool ok = disagree == 0 && secs < kSetBudgetSec;
  report(2, "set decide matches the bounded witness search", ok,
         std::to_string(kSetCount) + " sentences, " + std::to_string(disagree) +
             " disagree, " + std::to_string(unstable) + " unstable, " +
             std::to_string(secs).substr(0, 5) + "s of " +
             std::to_string((int)kSetBudgetSec) + "s");
}

void criterion_completeness() {
  uint32_t violations = 0, total = 0;
  for (const Formula& f : class_corpus()) {
    ++total;
    if (decide(f, TheoryMode::Class) == decide(Formula::neg(f), TheoryMode::Class))
      ++violations;
  }
  for (const Formula& f : set_corpus()) {
    ++total;
    if (decide(f, TheoryMode::Set) == decide(Formula::neg(f), TheoryMode::Set))
      ++violations;
  }
  report(3, "exactly one of each sentence and its negation holds", violations == 0,
         std::to_string(total) + " sentences, " + std::to_string(violations) +
             " violations");
}

// The three-element configuration with prescribed overlaps: two whole
// columns give the two infinite regions, a third column packs the four
// finite regions side by side.
std::vector<ModelElement> figure_elements(const ModelHandle& m) {
  auto range = [](uint32_t lo, uint32_t hi) {  // [lo, hi)
    std::vector<uint32_t> v;
    for (uint32_t i = lo; i < hi; ++i) v.push_back(i);
    return EPSet::finite(v);
  };
  EPSet b_only = range(0, 2), ab = range(2, 5), c_only = range(5, 22),
        abc = range(22, 27);
  ModelElement a = make_element(m, {{0, EPSet::all()}, {2, ab | abc}});
  ModelElement b = make_element(m, {{1, EPSet::all()}, {2, b_only | ab | abc}});
  ModelElement c = make_element(m, {{1, EPSet::all()}, {2, c_only | abc}});
  return {a, b, c};
}

std::vector<ModelElement> class_figure_elements(const ModelHandle& m) {
  auto range = [](uint32_t lo, uint32_t hi) {
    std::vector<uint32_t> v;
    for (uint32_t i = lo; i < hi; ++i) v.push_back(i);
    return v;
  };
  auto with_tail = [&](std::vector<uint32_t> prefix, uint32_t residue) {
    return EPSet::make(std::move(prefix), 84, 2, {residue});
  };
  std::vector<uint32_t> ab = range(2, 5), abc = range(22, 27);
  std::vector<uint32_t> a_pref = ab;
  a_pref.insert(a_pref.end(), abc.begin(), abc.end());
  std::vector<uint32_t> b_pref = range(0, 5);
  b_pref.insert(b_pref.end(), abc.begin(), abc.end());
  std::vector<uint32_t> c_pref = range(5, 27);
  ModelElement a = make_element(m, {{0, with_tail(a_pref, 0)}});
  ModelElement b = make_element(m, {{0, with_tail(b_pref, 1)}});
  ModelElement c = make_element(m, {{0, with_tail(c_pref, 1)}});
  return {a, b, c};
}

void criterion_figures() {
  ModelHandle cols = ModelHandle::from_name("columns");
  CellSizes set_cs = cell_sizes(cols, figure_elements(cols), {"a", "b", "c"});
  const Card set_want[8] = {Card::inf(), Card::inf(), Card::fin(2), Card::fin(3),
                            Card::fin(17), Card::fin(0), Card::inf(), Card::fin(5)};
  bool set_ok = true;
  for (int m = 0; m < 8; ++m)
    if (set_cs.cells[m] != set_want[m]) set_ok = false;

  ModelHandle ba = ModelHandle::from_name("ba-sat");
  CellSizes cls_cs = cell_sizes(ba, class_figure_elements(ba), {"a", "b", "c"});
  const Card cls_want[8] = {Card::fin(57), Card::inf(), Card::fin(2), Card::fin(3),
                            Card::fin(17), Card::fin(0), Card::inf(), Card::fin(5)};
  bool cls_ok = true;
  for (int m = 0; m < 8; ++m)
    if (cls_cs.cells[m] != cls_want[m]) cls_ok = false;

  std::string detail = "set cells";
  for (int m = 1; m < 8; ++m) detail += " " + set_cs.cells[m].str();
  detail += ", exterior " + set_cs.cells[0].str();
  detail += "; class exterior " + cls_cs.cells[0].str();
  report(4, "three-set figures measure their prescribed cells", set_ok && cls_ok,
         detail);
}

void criterion_iso_replay() {
  auto t0 = std::chrono::steady_clock::now();
  BackAndForthResult r = back_and_forth(ModelHandle::from_name("columns"),
                                        ModelHandle::from_name("columns-perm"), 200);
  std::string why;
  bool ok = r.iso.has_value() && !r.obstruction.has_value() &&
            r.iso->pairs.size() == 200 && verify_partial_iso(*r.iso, &why);
  double secs = seconds_since(t0);
  ok = ok && secs < kIsoBudgetSec;
  report(5, "200-step matching of the two saturated presentations verifies", ok,
         (r.iso ? "200 pairs, verifier " + std::string(why.empty() ? "clean" : why)
                : "no iso built") +
             ", " + std::to_string(secs).substr(0, 5) + "s of " +
             std::to_string((int)kIsoBudgetSec) + "s");
}

void criterion_failure_modes() {
  SaturationReport prime = check_criterion(ModelHandle::from_name("prime"), 2);
  bool prime_ok = !prime.saturated && prime.failure == SatFailure::NoInfiniteElements;

  SaturationReport amor = check_criterion(ModelHandle::from_name("amorphous"), 2);
  size_t fragments = 0;
  for (const std::string& line : amor.log)
    if (line.find("fragment") != std::string::npos) ++fragments;
  bool amor_ok = !amor.saturated &&
                 amor.failure == SatFailure::UnsplittableInfinite &&
                 amor.witness.has_value() && fragments == 16;

  BackAndForthResult r = back_and_forth(ModelHandle::from_name("columns"),
                                        ModelHandle::from_name("amorphous"), 400);
  bool obst_ok = r.obstruction.has_value() && !r.iso.has_value();

  report(6, "non-saturated presentations fail for their stated reasons",
         prime_ok && amor_ok && obst_ok,
         std::string("prime: no infinite elements ") + (prime_ok ? "yes" : "NO") +
             "; amorphous: unsplittable witness with 16 realized fragments " +
             (amor_ok ? "yes" : "NO") + "; columns vs amorphous obstructed " +
             (obst_ok ? ("at step " + std::to_string(r.obstruction->step)) : "NO"));
}

void criterion_characteristic() {
  bool values_ok = true;
  for (uint32_t n = 1; n <= 5; ++n)
    if (characteristic(ModelHandle::from_name("char" + std::to_string(n))) !=
        Card::fin(n))
      values_ok = false;

  ModelHandle c2 = ModelHandle::from_name("char2");
  ModelHandle c3 = ModelHandle::from_name("char3");
  BackAndForthResult same = back_and_forth(c2, c2, 100);
  std::string why;
  bool same_ok = same.iso.has_value() && verify_partial_iso(*same.iso, &why);
  BackAndForthResult diff = back_and_forth(c2, c3, 400);
  bool diff_ok = diff.obstruction.has_value();
  // Both independently enumerated sides of the verified matching report the
  // same invariant.
  bool invariant_ok = characteristic(same.iso->left) == Card::fin(2) &&
                      characteristic(same.iso->right) == Card::fin(2);

  report(7, "finite characteristic separates the block models",
         values_ok && same_ok && diff_ok && invariant_ok,
         std::string("char1..5 values ") + (values_ok ? "exact" : "WRONG") +
             "; char2 vs char2 verified over 100 steps " + (same_ok ? "yes" : "NO") +
             "; char2 vs char3 obstructed " + (diff_ok ? "yes" : "NO") +
             "; invariant agrees on both sides " + (invariant_ok ? "yes" : "NO"));
}

void criterion_elementary_agreement() {
  CorpusOptions opts;
  opts.mode = TheoryMode::Set;
  auto corpus = generate_corpus(200, 88, opts);
  ModelHandle prime = ModelHandle::from_name("prime");
  ModelHandle cols = ModelHandle::from_name("columns");
  uint32_t disagree = 0;
  for (const Formula& f : corpus) {
    bool d = decide(f, TheoryMode::Set);
    if (eval(prime, f, {}) != d || eval(cols, f, {}) != d) ++disagree;
  }
  report(8, "the prime and saturated presentations satisfy the decided theory",
         disagree == 0,
         "200 sentences, " + std::to_string(disagree) + " disagreements");
}

void criterion_property_suites() {
  std::mt19937_64 rng(99);
  auto draw = [&](uint64_t n) { return rng() % n; };
  auto rand_sizeset = [&] {
    std::vector<uint64_t> base;
    size_t count = draw(6);
    for (size_t i = 0; i < count; ++i) base.push_back(draw(64));
    return draw(2) ? SizeSet::cofin(base) : SizeSet::fin(base);
  };
  uint32_t sizeset_bad = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    SizeSet a = rand_sizeset(), b = rand_sizeset();
    SizeSet u = a | b, i = a & b, c = a.complement(), s = sumset(a, b);
    for (uint64_t v = 0; v <= 200; ++v) {
      Card n = Card::fin(v);
      if (u.contains(n) != (a.contains(n) || b.contains(n))) ++sizeset_bad;
      if (i.contains(n) != (a.contains(n) && b.contains(n))) ++sizeset_bad;
      if (c.contains(n) != !a.contains(n)) ++sizeset_bad;
      bool any = false;
      for (uint64_t x = 0; x <= v && !any; ++x)
        any = a.contains(Card::fin(x)) && b.contains(Card::fin(v - x));
      if (s.contains(n) != any) ++sizeset_bad;
    }
    if (c.contains(Card::inf()) == a.contains(Card::inf())) ++sizeset_bad;
    if (s.contains(Card::inf()) !=
        ((a.contains(Card::inf()) && !b.empty()) ||
         (b.contains(Card::inf()) && !a.empty())))
      ++sizeset_bad;
  }

  uint32_t parse_bad = 0;
  CorpusOptions copts;
  for (const Formula& f : generate_corpus(500, 97, copts))
    if (!(parse(render(f), TheoryMode::Class) == f)) ++parse_bad;
  copts.mode = TheoryMode::Set;
  for (const Formula& f : generate_corpus(500, 98, copts))
    if (!(parse(render(f), TheoryMode::Set) == f)) ++parse_bad;

  auto rand_epset = [&] {
    uint32_t t = static_cast<uint32_t>(draw(9));
    std::vector<uint32_t> prefix;
    for (uint32_t i = 0; i < t; ++i)
      if (draw(3) == 0) prefix.push_back(i);
    uint32_t p = static_cast<uint32_t>(1 + draw(6));
    std::vector<uint32_t> r;
    for (uint32_t i = 0; i < p; ++i)
      if (draw(4) == 0) r.push_back(i);
    return EPSet::make(prefix, t, p, r);
  };
  uint32_t epset_bad = 0;
  for (int iter = 0; iter < 1000; ++iter) {
    EPSet a = rand_epset(), b = rand_epset();
    EPSet u = a | b, i = a & b, d = a - b;
    for (uint32_t n = 0; n <= 200; ++n) {
      if (u.contains(n) != (a.contains(n) || b.contains(n))) ++epset_bad;
      if (i.contains(n) != (a.contains(n) && b.contains(n))) ++epset_bad;
      if (d.contains(n) != (a.contains(n) && !b.contains(n))) ++epset_bad;
    }
  }

  report(9, "size algebra, parser and slice descriptor property suites",
         sizeset_bad == 0 && parse_bad == 0 && epset_bad == 0,
         "sizeset 1000 cases " + std::to_string(sizeset_bad) +
             " bad; parser 1000 round trips " + std::to_string(parse_bad) +
             " bad; epset 1000 cases " + std::to_string(epset_bad) + " bad");
}

}  // namespace

int main() {
  criterion_class_agreement();
  criterion_set_agreement();
  criterion_completeness();
  criterion_figures();
  criterion_iso_replay();
  criterion_failure_modes();
  criterion_characteristic();
  criterion_elementary_agreement();
  criterion_property_suites();
  std::printf("acceptance: %d/9 passed\n", 9 - failures);
  return failures == 0 ? 0 : 1;
}
