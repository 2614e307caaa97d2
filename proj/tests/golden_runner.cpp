// Byte-compares CLI stdout against pinned golden files.
//   golden_runner <mereo-binary> <golden-dir> [--update]
// --update rewrites the golden files from the current outputs instead of
// comparing, for intentional output changes.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Entry {
  const char* name;
  const char* args;
  int expected_exit;
};

const Entry kEntries[] = {
    {"demo-types-figure", "demo types-figure", 0},
    {"demo-class-types-figure", "demo class-types-figure", 0},
    {"demo-all-isomorphic", "demo all-isomorphic", 0},
    {"demo-amorphous-fails", "demo amorphous-fails", 0},
    {"demo-prime-not-saturated", "demo prime-not-saturated", 0},
    {"demo-characteristic-classifier", "demo characteristic-classifier", 0},
    {"decide-set-no-top", "decide --mode set 'E x. A y. (y <= x)'", 1},
    {"decide-class-top", "decide --mode class 'E x. A y. (y <= x)'", 0},
    {"qe-three-atom-type", "qe --mode set 'E x. (x <= u & |x| = 2 & |u - x| = 1)'", 0},
    {"equiv-demorgan",
     "equiv --mode class '~(u <= v & v <= u)' '~(u <= v) | ~(v <= u)'", 0},
    {"characteristic-char3", "characteristic --model char3", 0},
    {"check-sat-ba4", "check-sat --model ba4", 1},
    {"check-sat-columns", "check-sat --model columns --trials 2 --seed 5", 0},
    {"iso-prime-columns", "iso --left prime --right columns --steps 40", 1},
    {"oracle-compare-class", "oracle-compare --mode class --corpus-size 20 --seed 7", 0},
};

// stdout only; stderr carries warnings and error prose, which are not pinned.
std::string run(const std::string& cmd, int* exit_code) {
  FILE* pipe = popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!pipe) {
    *exit_code = -1;
    return "";
  }
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  *exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

std::string slurp(const std::string& path, bool* found) {
  std::ifstream in(path, std::ios::binary);
  *found = static_cast<bool>(in);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: golden_runner <mereo-binary> <golden-dir> [--update]\n";
    return 2;
  }
  std::string binary = argv[1], dir = argv[2];
  bool update = argc > 3 && std::string(argv[3]) == "--update";

  int bad = 0;
  for (const Entry& e : kEntries) {
    int code = 0;
    std::string out = run(binary + " " + e.args, &code);
    std::string path = dir + "/" + e.name + ".golden";
    if (update) {
      std::ofstream(path, std::ios::binary) << out;
      std::cout << "updated " << e.name << " (" << out.size() << " bytes, exit "
                << code << ")\n";
      if (code != e.expected_exit) {
        std::cout << "  EXIT MISMATCH: expected " << e.expected_exit << "\n";
        ++bad;
      }
      continue;
    }
    bool found = false;
    std::string want = slurp(path, &found);
    if (!found) {
      std::cout << "MISSING  " << e.name << " (no golden file)\n";
      ++bad;
      continue;
    }
    if (code != e.expected_exit) {
      std::cout << "FAIL     " << e.name << " (exit " << code << ", expected "
                << e.expected_exit << ")\n";
      ++bad;
      continue;
    }
    if (out != want) {
      size_t at = 0;
      while (at < out.size() && at < want.size() && out[at] == want[at]) ++at;
      std::cout << "FAIL     " << e.name << " (output diverges at byte " << at
                << ")\n";
      ++bad;
      continue;
    }
    std::cout << "ok       " << e.name << "\n";
  }
  if (bad) std::cout << bad << " golden checks failed\n";
  return bad == 0 ? 0 : 1;
}
