#include "mereo/models.hpp"

#include <algorithm>

#include <json.hpp>

#include "mereo/error.hpp"
#include "mereo/qe.hpp"

namespace mereo {

TheoryMode ModelHandle::mode() const {
  switch (pres) {
    case Presentation::FiniteBA:
    case Presentation::SaturatedBA:
      return TheoryMode::Class;
    default:
      return TheoryMode::Set;
  }
}

std::string ModelHandle::name() const {
  switch (pres) {
    case Presentation::Prime: return "prime";
    case Presentation::Columns: return "columns";
    case Presentation::ColumnsPerm: return "columns-perm";
    case Presentation::Characteristic: return "char" + std::to_string(n);
    case Presentation::Amorphous: return "amorphous";
    case Presentation::FiniteBA: return "ba" + std::to_string(n);
    case Presentation::SaturatedBA: return "ba-sat";
  }
  throw std::logic_error("bad presentation");
}

ModelHandle ModelHandle::from_name(const std::string& id) {
  if (id == "prime") return {Presentation::Prime, 0};
  if (id == "columns") return {Presentation::Columns, 0};
  if (id == "columns-perm") return {Presentation::ColumnsPerm, 0};
  if (id == "amorphous") return {Presentation::Amorphous, 0};
  if (id == "ba-sat") return {Presentation::SaturatedBA, 0};
  auto tail_number = [&](const std::string& prefix) -> std::optional<uint32_t> {
    if (id.size() <= prefix.size() || id.compare(0, prefix.size(), prefix) != 0)
      return std::nullopt;
    uint32_t v = 0;
    for (size_t i = prefix.size(); i < id.size(); ++i) {
      char c = id[i];
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + static_cast<uint32_t>(c - '0');
      if (v > 1000000) throw ModelError("model parameter too large in '" + id + "'");
    }
    return v;
  };
  if (auto v = tail_number("char")) {
    if (*v == 0) throw ModelError("char<N> needs N >= 1");
    return {Presentation::Characteristic, *v};
  }
  if (auto v = tail_number("ba")) {
    if (*v == 0) throw ModelError("ba<N> needs N >= 1");
    return {Presentation::FiniteBA, *v};
  }
  throw ModelError("unknown model id '" + id + "'");
}

EPSet ModelElement::slice(uint32_t c) const {
  auto it = cols.find(c);
  return it == cols.end() ? EPSet::empty() : it->second;
}

namespace {

// Period-1 means finite (no residues) or cofinite (residue {0}).
bool fin_or_cofin(const EPSet& e) { return e.period() == 1; }

void check_slice(const ModelHandle& m, uint32_t col, const EPSet& e) {
  switch (m.pres) {
    case Presentation::Prime:
      if (col != 0) throw ModelError("prime elements live in column 0");
      if (e.infinite()) throw ModelError("prime elements are finite");
      return;
    case Presentation::Columns:
    case Presentation::ColumnsPerm:
      return;
    case Presentation::Characteristic:
      if (col > m.n) throw ModelError("char" + std::to_string(m.n) + " has columns 0.." +
                                      std::to_string(m.n));
      if (col < m.n && !fin_or_cofin(e))
        throw ModelError("block slices must be finite or cofinite");
      if (col == m.n && e.infinite())
        throw ModelError("the spare block admits only finite slices");
      return;
    case Presentation::Amorphous:
      if (col == 0 && !fin_or_cofin(e))
        throw ModelError("the amorphous column admits only finite or cofinite slices");
      return;
    case Presentation::FiniteBA:
      if (col != 0) throw ModelError("ba elements live in column 0");
      if (e.infinite() || (!e.prefix().empty() && e.prefix().back() >= m.n))
        throw ModelError("ba" + std::to_string(m.n) + " elements are subsets of {0.." +
                         std::to_string(m.n - 1) + "}");
      return;
    case Presentation::SaturatedBA:
      if (col != 0) throw ModelError("ba-sat elements live in column 0");
      return;
  }
}

void check_element(const ModelHandle& m, const ModelElement& a) {
  if (a.pres != m.pres)
    throw ModelError("element belongs to a different presentation");
  for (const auto& [c, e] : a.cols) check_slice(m, c, e);
}

void check_pair(const ModelHandle& m, const ModelElement& a, const ModelElement& b) {
  check_element(m, a);
  check_element(m, b);
}

// The atom row a column ranges over: {0..N-1} for FiniteBA, all of N
// otherwise.
EPSet column_space(const ModelHandle& m) {
  if (m.pres == Presentation::FiniteBA) {
    std::vector<uint32_t> row(m.n);
    for (uint32_t i = 0; i < m.n; ++i) row[i] = i;
    return EPSet::finite(std::move(row));
  }
  return EPSet::all();
}

}  // namespace

ModelElement make_element(const ModelHandle& m, std::map<uint32_t, EPSet> cols) {
  ModelElement e;
  e.pres = m.pres;
  for (auto& [c, s] : cols)
    if (!s.is_empty()) e.cols.emplace(c, std::move(s));
  check_element(m, e);
  return e;
}

ModelElement bottom(const ModelHandle& m) { return make_element(m, {}); }

ModelElement top(const ModelHandle& m) {
  if (m.mode() != TheoryMode::Class)
    throw ModeError("no top element in " + m.name());
  return make_element(m, {{0, column_space(m)}});
}

ModelElement atom_element(const ModelHandle& m, uint32_t col, uint32_t pos) {
  return make_element(m, {{col, EPSet::finite({pos})}});
}

ModelElement lattice_op(const ModelHandle& m, LatticeOp op, const ModelElement& a,
                        const ModelElement& b) {
  check_pair(m, a, b);
  ModelElement out;
  out.pres = m.pres;
  std::vector<uint32_t> support;
  for (const auto& [c, _] : a.cols) support.push_back(c);
  for (const auto& [c, _] : b.cols) support.push_back(c);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  for (uint32_t c : support) {
    EPSet x = a.slice(c), y = b.slice(c);
    EPSet r;
    switch (op) {
      case LatticeOp::Union: r = x | y; break;
      case LatticeOp::Inter: r = x & y; break;
      case LatticeOp::Diff: r = x - y; break;
    }
    if (!r.is_empty()) out.cols.emplace(c, std::move(r));
  }
  return out;
}

bool leq(const ModelHandle& m, const ModelElement& a, const ModelElement& b) {
  check_pair(m, a, b);
  for (const auto& [c, e] : a.cols)
    if (!e.subset_of(b.slice(c))) return false;
  return true;
}

bool is_infinite(const ModelHandle& m, const ModelElement& a) {
  check_element(m, a);
  for (const auto& [_, e] : a.cols)
    if (e.infinite()) return true;
  return false;
}

Card element_size(const ModelHandle& m, const ModelElement& a) {
  check_element(m, a);
  Card total = Card::fin(0);
  for (const auto& [_, e] : a.cols) total = total + e.size();
  return total;
}

std::vector<ModelElement> atoms_below(const ModelHandle& m, const ModelElement& a,
                                      uint64_t k) {
  check_element(m, a);
  std::vector<ModelElement> out;
  for (const auto& [c, e] : a.cols) {
    if (out.size() >= k) break;
    uint64_t want = k - out.size();
    Card sz = e.size();
    if (!sz.infinite()) want = std::min(want, sz.value());
    for (uint32_t pos : e.first_members(want))
      out.push_back(atom_element(m, c, pos));
  }
  return out;
}

CellSizes cell_sizes(const ModelHandle& m, const std::vector<ModelElement>& tuple,
                     std::vector<std::string> names) {
  for (const ModelElement& a : tuple) check_element(m, a);
  size_t n = tuple.size();
  if (n > static_cast<size_t>(kMaxCellParams))
    throw CapError("tuple too long for a cell diagram");
  if (names.empty())
    for (size_t i = 0; i < n; ++i) names.push_back("a" + std::to_string(i + 1));
  if (names.size() != n) throw ModelError("one name per tuple entry");

  CellSizes out;
  out.params = std::move(names);
  out.cells.assign(size_t{1} << n, Card::fin(0));

  std::vector<uint32_t> support;
  for (const ModelElement& a : tuple)
    for (const auto& [c, _] : a.cols) support.push_back(c);
  if (m.mode() == TheoryMode::Class) support.push_back(0);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  // Per column, refine the column space by each slice; every Venn cell of the
  // tuple meets the column in one piece of the refinement.
  for (uint32_t c : support) {
    std::vector<std::pair<CellMask, EPSet>> parts{{0, column_space(m)}};
    for (size_t i = 0; i < n; ++i) {
      EPSet s = tuple[i].slice(c);
      std::vector<std::pair<CellMask, EPSet>> next;
      for (auto& [mask, piece] : parts) {
        EPSet in = piece & s, outp = piece - s;
        if (!in.is_empty()) next.emplace_back(mask | (CellMask{1} << i), in);
        if (!outp.is_empty()) next.emplace_back(mask, outp);
      }
      parts = std::move(next);
    }
    for (auto& [mask, piece] : parts)
      out.cells[mask] = out.cells[mask] + piece.size();
  }
  if (m.mode() == TheoryMode::Set) out.cells[0] = Card::inf();
  return out;
}

std::string CellSizes::dump() const {
  CellProfile naming = CellProfile::unconstrained(params);
  std::string out;
  for (CellMask m = 1; m < cells.size(); ++m)
    out += naming.mask_name(m) + " : " + cells[m].str() + "\n";
  out += naming.mask_name(0) + " : " + cells[0].str() + "\n";
  return out;
}

bool satisfies(const CellSizes& actual, const CellProfile& p) {
  if (actual.cells.size() != p.cells.size())
    throw ModelError("profile arity mismatch");
  for (size_t m = 0; m < p.cells.size(); ++m)
    if (!p.cells[m].contains(actual.cells[m])) return false;
  return true;
}

bool eval(const ModelHandle& m, const Formula& f,
          const std::map<std::string, ModelElement>& assignment) {
  ProfileSet nf = qe_normal_form(f, m.mode());
  std::vector<ModelElement> tuple;
  for (const std::string& v : nf.params) {
    auto it = assignment.find(v);
    if (it == assignment.end()) throw ModelError("no assignment for '" + v + "'");
    tuple.push_back(it->second);
  }
  CellSizes actual = cell_sizes(m, tuple, nf.params);
  for (const CellProfile& p : nf.alts)
    if (satisfies(actual, p)) return true;
  return false;
}

std::string element_to_json(const ModelElement& e) {
  nlohmann::json j;
  ModelHandle m{e.pres, 0};
  // name() only needs n for char/ba handles; recover nothing here and print
  // the family name instead.
  switch (e.pres) {
    case Presentation::Characteristic: j["presentation"] = "char"; break;
    case Presentation::FiniteBA: j["presentation"] = "ba"; break;
    default: j["presentation"] = m.name(); break;
  }
  nlohmann::json cols = nlohmann::json::object();
  for (const auto& [c, s] : e.cols) {
    nlohmann::json je;
    je["prefix"] = s.prefix();
    je["t"] = s.threshold();
    je["p"] = s.period();
    je["r"] = s.residues();
    cols[std::to_string(c)] = je;
  }
  j["cols"] = cols;
  return j.dump();
}

namespace {

ModelElement element_from_parsed(const ModelHandle& m, const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("cols"))
    throw ModelError("element descriptor needs a 'cols' object");
  if (j.contains("presentation")) {
    std::string p = j["presentation"].get<std::string>();
    std::string want = m.name();
    bool family_ok = (m.pres == Presentation::Characteristic && p == "char") ||
                     (m.pres == Presentation::FiniteBA && p == "ba");
    if (p != want && !family_ok)
      throw ModelError("descriptor is for presentation '" + p + "', model is '" +
                       want + "'");
  }
  std::map<uint32_t, EPSet> cols;
  for (const auto& [key, je] : j["cols"].items()) {
    size_t used = 0;
    unsigned long c = std::stoul(key, &used);
    if (used != key.size() || c > 1000000)
      throw ModelError("bad column key '" + key + "'");
    std::vector<uint32_t> prefix = je.value("prefix", std::vector<uint32_t>{});
    uint32_t t = je.value("t", 0u);
    uint32_t p = je.value("p", 1u);
    std::vector<uint32_t> r = je.value("r", std::vector<uint32_t>{});
    if (p == 0) throw ModelError("period must be >= 1");
    if (t > 1000000 || p > 1000000) throw ModelError("descriptor out of range");
    for (uint32_t x : prefix)
      if (x >= t) throw ModelError("prefix entries must lie below t");
    for (uint32_t x : r)
      if (x >= p) throw ModelError("residues must lie below p");
    cols[static_cast<uint32_t>(c)] = EPSet::make(prefix, t, p, r);
  }
  return make_element(m, std::move(cols));
}

Card card_from_json(const nlohmann::json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return Card::inf();
  if (j.is_number_unsigned()) return Card::fin(j.get<uint64_t>());
  throw ModelError("sizes are naturals or \"inf\"");
}

nlohmann::json card_to_json(Card c) {
  if (c.infinite()) return "inf";
  return c.value();
}

}  // namespace

ModelElement element_from_json(const ModelHandle& m, const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, true, true);
  return element_from_parsed(m, j);
}

std::vector<ModelElement> elements_from_json(const ModelHandle& m,
                                             const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, true, true);
  std::vector<ModelElement> out;
  if (j.is_array()) {
    for (const auto& je : j) out.push_back(element_from_parsed(m, je));
  } else {
    out.push_back(element_from_parsed(m, j));
  }
  return out;
}

SplitDemand split_from_json(size_t nparams, const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, true, true);
  if (!j.is_object() || !j.contains("in") || !j.contains("out"))
    throw ModelError("split needs 'in' and 'out' arrays");
  SplitDemand d;
  for (const auto& je : j["in"]) d.in.push_back(card_from_json(je));
  for (const auto& je : j["out"]) d.out.push_back(card_from_json(je));
  size_t want = size_t{1} << nparams;
  if (d.in.size() != want || d.out.size() != want)
    throw ModelError("split arrays need one entry per cell mask (" +
                     std::to_string(want) + ")");
  return d;
}

std::string split_to_json(const SplitDemand& d) {
  nlohmann::json j;
  j["in"] = nlohmann::json::array();
  j["out"] = nlohmann::json::array();
  for (Card c : d.in) j["in"].push_back(card_to_json(c));
  for (Card c : d.out) j["out"].push_back(card_to_json(c));
  return j.dump();
}

}  // namespace mereo
