// mereo: decision procedure, model zoo, saturation checks, isomorphism
// builder and oracle comparisons for set- and class-mode mereology.
//
// Exit codes: 0/1 carry the verdict (true/realized/saturated/isomorphic vs
// false/unrealizable/not-saturated/obstruction), 2 is any input or mode
// error, 3 is a resource cap.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mereo/corpus.hpp"
#include "mereo/error.hpp"
#include "mereo/formula.hpp"
#include "mereo/models.hpp"
#include "mereo/oracle.hpp"
#include "mereo/qe.hpp"
#include "mereo/saturation.hpp"

using namespace mereo;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TheoryMode mode_of(const std::string& s) {
  if (s == "set") return TheoryMode::Set;
  if (s == "class") return TheoryMode::Class;
  throw Error("mode must be set or class");
}

std::vector<std::string> default_names(size_t n) {
  static const char* pool = "abcdefghijklmnopqrst";
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) out.emplace_back(1, pool[i % 20]);
  return out;
}

// The composition expansion of |t| = k is exponential in the variables in
// scope; flag the atoms that will dominate before they do.
void warn_wide_card_atoms(const Formula& f, size_t scope_depth = 0) {
  switch (f.kind()) {
    case Formula::Kind::CardEq: {
      size_t cells = size_t{1} << std::min<size_t>(scope_depth, 20);
      uint64_t n = card_eq_disjunct_count(f.k(), cells);
      if (n > 10000)
        std::cerr << "warning: |t| = " << f.k() << " over " << scope_depth
                  << " variables expands to " << n << " profile disjuncts\n";
      return;
    }
    case Formula::Kind::Subseteq:
    case Formula::Kind::Equal:
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      warn_wide_card_atoms(f.child(), scope_depth + 1);
      return;
    default:
      for (size_t i = 0; i < f.arity(); ++i) warn_wide_card_atoms(f.child(i), scope_depth);
  }
}

Formula parse_arg(const std::string& text, TheoryMode mode) {
  Formula f = parse(text, mode);
  warn_wide_card_atoms(f, free_variables(f).size());
  return f;
}

std::string origin_name(int origin) { return origin == 0 ? "left" : "right"; }

void print_iso(const PartialIso& iso) {
  std::cout << "pairs: " << iso.pairs.size() << "\n";
  for (size_t i = 0; i < iso.pairs.size(); ++i) {
    const PairedElements& p = iso.pairs[i];
    std::cout << "  " << i << " [" << origin_name(p.origin)
              << "] " << element_to_json(p.left) << "  <->  "
              << element_to_json(p.right) << "\n";
  }
  std::cout << "consumed: left " << iso.left_consumed << ", right "
            << iso.right_consumed << "\n";
}

int run_iso(const std::string& left, const std::string& right, uint64_t steps,
            bool verify) {
  ModelHandle l = ModelHandle::from_name(left);
  ModelHandle r = ModelHandle::from_name(right);
  BackAndForthResult res = back_and_forth(l, r, steps);
  if (!res.ok()) {
    const Obstruction& o = *res.obstruction;
    std::cout << "OBSTRUCTION at step " << o.step << " (from the "
              << origin_name(o.origin) << " model)\n  element: "
              << element_to_json(o.element) << "\n  reason: " << o.reason << "\n";
    return 1;
  }
  print_iso(*res.iso);
  if (verify) {
    std::string why;
    if (!verify_partial_iso(*res.iso, &why)) {
      std::cout << "VERIFICATION FAILED: " << why << "\n";
      return 2;
    }
    std::cout << "verified: leq agreement and cell profiles on all subtuples up to size 3\n";
  }
  return 0;
}

// ---- demos: one-command replays of the headline constructions ----

// Three elements whose Venn diagram carries the sizes
//   a-only inf, b-only 2, ab 3, c-only 17, ac 0, bc inf, abc 5
// with an infinite exterior: column 0 is a's private infinite part, column 1
// sits inside b and c, and column 2 packs all the finite cells.
std::vector<ModelElement> types_figure_elements(const ModelHandle& m) {
  auto seg = [](uint32_t lo, uint32_t hi) {  // [lo, hi)
    std::vector<uint32_t> v;
    for (uint32_t i = lo; i < hi; ++i) v.push_back(i);
    return v;
  };
  auto cat = [](std::vector<uint32_t> a, const std::vector<uint32_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  EPSet ab = EPSet::finite(seg(2, 5));       // the ab - c part
  EPSet bon = EPSet::finite(seg(0, 2));      // b only
  EPSet con = EPSet::finite(seg(5, 22));     // c only
  EPSet abc = EPSet::finite(seg(22, 27));
  ModelElement a = make_element(m, {{0, EPSet::all()},
                                    {2, EPSet::finite(cat(seg(2, 5), seg(22, 27)))}});
  ModelElement b = make_element(m, {{1, EPSet::all()},
                                    {2, bon | ab | abc}});
  ModelElement c = make_element(m, {{1, EPSet::all()},
                                    {2, con | abc}});
  return {a, b, c};
}

// The same inner diagram in class mode over a single column, arranged so the
// exterior comes out to exactly 57: positions 0..26 carry the finite cells,
// 27..83 stay outside everything, and past 84 the evens belong to a alone
// while the odds land in b and c.
std::vector<ModelElement> class_types_figure_elements(const ModelHandle& m) {
  auto seg = [](uint32_t lo, uint32_t hi) {
    std::vector<uint32_t> v;
    for (uint32_t i = lo; i < hi; ++i) v.push_back(i);
    return v;
  };
  auto cat = [](std::vector<uint32_t> a, const std::vector<uint32_t>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
  };
  ModelElement a = make_element(m, {{0, EPSet::make(cat(seg(2, 5), seg(22, 27)), 84, 2, {0})}});
  ModelElement b = make_element(m, {{0, EPSet::make(cat(seg(0, 5), seg(22, 27)), 84, 2, {1})}});
  ModelElement c = make_element(m, {{0, EPSet::make(seg(5, 27), 84, 2, {1})}});
  return {a, b, c};
}

int check_figure(const CellSizes& sizes, const std::vector<Card>& expect) {
  if (sizes.cells == expect) {
    std::cout << "figure sizes check: ok\n";
    return 0;
  }
  std::cout << "figure sizes check: MISMATCH\n";
  return 2;
}

int demo_types_figure() {
  ModelHandle m = ModelHandle::from_name("columns");
  auto elems = types_figure_elements(m);
  CellSizes sizes = cell_sizes(m, elems, {"a", "b", "c"});
  std::cout << "model: " << m.name() << "\n" << sizes.dump();
  return check_figure(sizes, {Card::inf(), Card::inf(), Card::fin(2), Card::fin(3),
                              Card::fin(17), Card::fin(0), Card::inf(), Card::fin(5)});
}

int demo_class_types_figure() {
  ModelHandle m = ModelHandle::from_name("ba-sat");
  auto elems = class_types_figure_elements(m);
  CellSizes sizes = cell_sizes(m, elems, {"a", "b", "c"});
  std::cout << "model: " << m.name() << "\n" << sizes.dump();
  return check_figure(sizes, {Card::fin(57), Card::inf(), Card::fin(2), Card::fin(3),
                              Card::fin(17), Card::fin(0), Card::inf(), Card::fin(5)});
}

int demo_all_isomorphic() {
  std::cout << "back-and-forth between columns and columns-perm, 200 steps\n";
  return run_iso("columns", "columns-perm", 200, true);
}

int demo_amorphous_fails() {
  SaturationReport rep = check_criterion(ModelHandle::from_name("amorphous"), 4);
  std::cout << rep.dump();
  std::cout << "\nback-and-forth between columns and amorphous:\n";
  int rc = run_iso("columns", "amorphous", 400, false);
  return rc == 1 ? 0 : 2;  // the obstruction is the expected outcome
}

int demo_prime_not_saturated() {
  SaturationReport rep = check_criterion(ModelHandle::from_name("prime"), 4);
  std::cout << rep.dump();
  return rep.saturated ? 2 : 0;
}

int demo_characteristic_classifier() {
  for (const char* id : {"prime", "ba4", "char1", "char2", "char3", "char4", "char5",
                         "amorphous", "columns", "ba-sat"}) {
    ModelHandle m = ModelHandle::from_name(id);
    std::cout << m.name() << ": " << characteristic(m).str() << "\n";
  }
  std::cout << "\nchar2 against a second char2 enumeration, 100 steps:\n";
  BackAndForthResult same = back_and_forth(ModelHandle::from_name("char2"),
                                           ModelHandle::from_name("char2"), 100);
  std::cout << (same.ok() ? "paired without obstruction\n" : "OBSTRUCTION (unexpected)\n");
  std::cout << "\nchar2 against char3:\n";
  BackAndForthResult diff = back_and_forth(ModelHandle::from_name("char2"),
                                           ModelHandle::from_name("char3"), 400);
  if (diff.ok()) {
    std::cout << "paired without obstruction (unexpected)\n";
    return 2;
  }
  const Obstruction& o = *diff.obstruction;
  std::cout << "OBSTRUCTION at step " << o.step << ": " << o.reason << "\n";
  return same.ok() ? 0 : 2;
}

int run_demo(const std::string& id) {
  if (id == "types-figure") return demo_types_figure();
  if (id == "class-types-figure") return demo_class_types_figure();
  if (id == "all-isomorphic") return demo_all_isomorphic();
  if (id == "amorphous-fails") return demo_amorphous_fails();
  if (id == "prime-not-saturated") return demo_prime_not_saturated();
  if (id == "characteristic-classifier") return demo_characteristic_classifier();
  throw Error("unknown demo '" + id +
              "'; available: types-figure, class-types-figure, all-isomorphic, "
              "amorphous-fails, prime-not-saturated, characteristic-classifier");
}

std::vector<uint32_t> parse_window(const std::string& s) {
  std::vector<uint32_t> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoul(tok));
  return out;
}

std::vector<Rung> parse_rungs(const std::string& s) {
  std::vector<Rung> out;
  std::stringstream ss(s);
  std::string tri;
  while (std::getline(ss, tri, ';')) {
    std::stringstream ts(tri);
    std::string tok;
    std::vector<uint32_t> v;
    while (std::getline(ts, tok, ',')) v.push_back(std::stoul(tok));
    if (v.size() != 3) throw Error("each rung is cols,period,threshold");
    out.push_back(Rung{v[0], v[1], v[2]});
  }
  return out;
}

int run_oracle_compare(TheoryMode mode, uint32_t corpus_size, uint64_t seed,
                       const std::string& window_arg, const std::string& rungs_arg) {
  CorpusOptions opts;
  opts.mode = mode;
  auto corpus = generate_corpus(corpus_size, seed, opts);
  ModelHandle cols = ModelHandle::from_name("columns");
  std::vector<uint32_t> window =
      window_arg.empty() ? default_class_window() : parse_window(window_arg);
  std::vector<Rung> rungs =
      rungs_arg.empty() ? default_set_schedule() : parse_rungs(rungs_arg);

  uint32_t agree = 0, disagree = 0, unstable = 0;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const Formula& f = corpus[i];
    bool dv = decide(f, mode);
    OracleVerdict ov = mode == TheoryMode::Class
                           ? stabilized_decide_class(f, window)
                           : bounded_eval_set(cols, f, {}, rungs);
    const char* tag;
    if (ov == OracleVerdict::Unstable) {
      tag = "unstable";
      ++unstable;
    } else if ((ov == OracleVerdict::True) == dv) {
      tag = "agree";
      ++agree;
    } else {
      tag = "DISAGREE";
      ++disagree;
    }
    std::cout << i << "  decide=" << (dv ? "true" : "false") << "  oracle="
              << verdict_name(ov) << "  " << tag << "  " << render(f) << "\n";
  }
  std::cout << "summary: " << agree << "/" << disagree << "/" << unstable
            << " agree/disagree/unstable\n";
  return disagree == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"decision procedure and computable models for set and class mereology"};
  app.require_subcommand(1);

  std::string mode_s = "class", formula_s, formula2_s;
  std::string model_s, left_s, right_s, elems_path, params_path, split_path;
  uint64_t steps = 100, seed = 2026;
  uint32_t trials = 4, corpus_size = 100;
  std::string window_s, rungs_s;

  auto* cmd_decide = app.add_subcommand("decide", "decide a sentence; exit 0 true, 1 false");
  cmd_decide->add_option("--mode", mode_s, "set or class")->required();
  cmd_decide->add_option("formula", formula_s, "sentence text")->required();

  auto* cmd_qe = app.add_subcommand("qe", "print the cell-profile normal form");
  cmd_qe->add_option("--mode", mode_s)->required();
  cmd_qe->add_option("formula", formula_s)->required();

  auto* cmd_equiv = app.add_subcommand("equiv", "decide equivalence of two formulas");
  cmd_equiv->add_option("--mode", mode_s)->required();
  cmd_equiv->add_option("formula", formula_s)->required();
  cmd_equiv->add_option("formula2", formula2_s)->required();

  auto* cmd_type = app.add_subcommand("type", "measured cell sizes of a tuple");
  cmd_type->add_option("--model", model_s)->required();
  cmd_type->add_option("--elems", elems_path, "descriptor file (one or an array)")->required();

  auto* cmd_realize = app.add_subcommand("realize", "realize a split demand over parameters");
  cmd_realize->add_option("--model", model_s)->required();
  cmd_realize->add_option("--params", params_path, "parameter descriptors")->required();
  cmd_realize->add_option("--split", split_path, "demand file {\"in\":[...],\"out\":[...]}")
      ->required();

  auto* cmd_sat = app.add_subcommand("check-sat", "saturation criterion report");
  cmd_sat->add_option("--model", model_s)->required();
  cmd_sat->add_option("--trials", trials);
  cmd_sat->add_option("--seed", seed);

  auto* cmd_iso = app.add_subcommand("iso", "back-and-forth pairing of two models");
  cmd_iso->add_option("--left", left_s)->required();
  cmd_iso->add_option("--right", right_s)->required();
  cmd_iso->add_option("--steps", steps);

  auto* cmd_char = app.add_subcommand("characteristic",
                                      "largest disjoint family of infinite elements");
  cmd_char->add_option("--model", model_s)->required();

  auto* cmd_oc = app.add_subcommand("oracle-compare",
                                    "decide against the independent oracle on a corpus");
  cmd_oc->add_option("--mode", mode_s)->required();
  cmd_oc->add_option("--corpus-size", corpus_size);
  cmd_oc->add_option("--seed", seed);
  cmd_oc->add_option("--window", window_s, "class mode atom counts, e.g. 8,10,12,14");
  cmd_oc->add_option("--rungs", rungs_s, "set mode rungs cols,period,threshold;...");

  std::string demo_id;
  auto* cmd_demo = app.add_subcommand("demo", "replay a named construction");
  cmd_demo->add_option("id", demo_id)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_decide) {
      TheoryMode mode = mode_of(mode_s);
      bool v = decide(parse_arg(formula_s, mode), mode);
      std::cout << (v ? "true" : "false") << "\n";
      return v ? 0 : 1;
    }
    if (*cmd_qe) {
      TheoryMode mode = mode_of(mode_s);
      std::cout << qe_normal_form(parse_arg(formula_s, mode), mode).dump();
      return 0;
    }
    if (*cmd_equiv) {
      TheoryMode mode = mode_of(mode_s);
      bool v = equivalent(parse_arg(formula_s, mode), parse_arg(formula2_s, mode), mode);
      std::cout << (v ? "true" : "false") << "\n";
      return v ? 0 : 1;
    }
    if (*cmd_type) {
      ModelHandle m = ModelHandle::from_name(model_s);
      auto elems = elements_from_json(m, slurp(elems_path));
      std::cout << cell_sizes(m, elems, default_names(elems.size())).dump();
      return 0;
    }
    if (*cmd_realize) {
      ModelHandle m = ModelHandle::from_name(model_s);
      auto params = elements_from_json(m, slurp(params_path));
      SplitDemand d = split_from_json(params.size(), slurp(split_path));
      RealizeResult res = realize_type(m, params, d);
      if (!res.ok()) {
        CellProfile naming = CellProfile::unconstrained(default_names(params.size()));
        std::cout << "UNREALIZABLE " << naming.mask_name(res.bad_cell) << ": "
                  << res.reason << "\n";
        return 1;
      }
      std::cout << element_to_json(*res.elem) << "\n";
      return 0;
    }
    if (*cmd_sat) {
      SaturationReport rep = check_criterion(ModelHandle::from_name(model_s), trials, seed);
      std::cout << rep.dump();
      return rep.saturated ? 0 : 1;
    }
    if (*cmd_iso) return run_iso(left_s, right_s, steps, true);
    if (*cmd_char) {
      std::cout << characteristic(ModelHandle::from_name(model_s)).str() << "\n";
      return 0;
    }
    if (*cmd_oc)
      return run_oracle_compare(mode_of(mode_s), corpus_size, seed, window_s, rungs_s);
    if (*cmd_demo) return run_demo(demo_id);
  } catch (const CapError& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
