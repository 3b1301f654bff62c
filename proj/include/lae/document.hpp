#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lae/decision.hpp"
#include "lae/errors.hpp"
#include "lae/parser.hpp"
#include "lae/proofs.hpp"
#include "lae/semantics.hpp"
#include "lae/spaces.hpp"
#include "lae/syntax.hpp"

namespace lae {

/// Everything a text file can declare. Theory, model and proof sections are all optional.
struct Document {
  Logic logic = Logic::lae;
  ScalePtr scale;
  Signature sig;
  Theory theory;
  std::vector<std::size_t> theory_lines;
  std::optional<OuterFormula> query;
  std::optional<Model> model;
  ProofScript proof;
  bool declares_logic = false;
  bool declares_scale = false;
};

/// Values used when the file does not declare them; a file that declares a different value is rejected.
struct LoadDefaults {
  std::optional<Logic> logic;
  ScalePtr scale;
};

inline ScalePtr default_scale() { return share(GradeScale::godel({Rational(0), Rational(1, 2), Rational(1)})); }

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline bool starts_with_word(const std::string& line, std::string_view word) {
  if (!line.starts_with(word)) return false;
  return line.size() == word.size() || std::isspace(static_cast<unsigned char>(line[word.size()])) ||
         line[word.size()] == ':';
}

inline bool plain_name(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' || c == '-';
  });
}

[[noreturn]] inline void fail(std::size_t line, const std::string& message) { throw ParseError(line, 1, {}, message); }

inline ScalePtr parse_scale(const std::vector<std::string>& w, std::size_t line) {
  // w[0] == "scale"
  if (w.size() < 2) fail(line, "scale needs a kind: godel, lukasiewicz or table");
  std::vector<Rational> levels;
  auto rational = [&](const std::string& t) {
    try {
      return Rational::parse(t);
    } catch (const Error& e) {
      fail(line, "bad grade '" + t + "': " + e.what());
    }
  };
  try {
    if (w[1] == "godel" || w[1] == "lukasiewicz") {
      for (std::size_t i = 2; i < w.size(); ++i) levels.push_back(rational(w[i]));
      if (levels.empty()) fail(line, "scale " + w[1] + " needs its levels");
      return share(w[1] == "godel" ? GradeScale::godel(levels) : GradeScale::lukasiewicz(levels));
    }
    if (w[1] == "table") {
      // n levels followed by n*n row-major indices
      const std::size_t t = w.size() - 2;
      std::size_t n = 0;
      while ((n + 1) + (n + 1) * (n + 1) <= t) ++n;
      if (n + n * n != t) fail(line, "scale table needs n levels followed by n*n indices");
      for (std::size_t i = 0; i < n; ++i) levels.push_back(rational(w[2 + i]));
      GradeScale::Table table(n, std::vector<std::size_t>(n));
      for (std::size_t k = 0; k < n * n; ++k) {
        const auto& s = w[2 + n + k];
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
          fail(line, "bad table index '" + s + "'");
        table[k / n][k % n] = std::stoul(s);
      }
      return share(GradeScale::build(levels, table));
    }
  } catch (const ScaleError& e) {
    fail(line, e.what());
  }
  fail(line, "unknown scale kind '" + w[1] + "'");
}

inline std::vector<std::string> names_after_colon(const std::string& line, std::size_t at) {
  const auto colon = line.find(':');
  if (colon == std::string::npos) fail(at, "expected ':' in declaration");
  auto names = words(line.substr(colon + 1));
  for (const auto& n : names)
    if (!plain_name(n)) fail(at, "bad variable name '" + n + "'");
  return names;
}

struct RawSpace {
  std::vector<std::string> worlds;
  std::vector<std::tuple<std::string, std::string, std::string, std::size_t>> sims;
  std::vector<std::string> order;
  std::size_t line = 0;
  bool has_order = false;
};

struct RawEval {
  std::string var;
  std::vector<std::string> members;
  std::size_t line;
};

inline SimilaritySpace build_space(const RawSpace& r, const ScalePtr& scale) {
  const std::size_t n = r.worlds.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i)
    if (!index.emplace(r.worlds[i], i).second) fail(r.line, "world '" + r.worlds[i] + "' is listed twice");
  std::vector<Grade> sim(n * n, scale->bottom());
  for (std::size_t i = 0; i < n; ++i) sim[i * n + i] = scale->top();
  for (const auto& [a, b, g, line] : r.sims) {
    auto ia = index.find(a), ib = index.find(b);
    if (ia == index.end() || ib == index.end()) fail(line, "sim mentions an unknown world");
    std::optional<Grade> grade;
    try {
      grade = scale->find(Rational::parse(g));
    } catch (const Error& e) {
      fail(line, "bad grade '" + g + "': " + e.what());
    }
    if (!grade) fail(line, "grade " + g + " is not a level of the scale");
    if (ia->second == ib->second && *grade != scale->top()) fail(line, "a world is similar to itself to degree 1");
    sim[ia->second * n + ib->second] = sim[ib->second * n + ia->second] = *grade;
  }
  return SimilaritySpace(scale, r.worlds, sim);
}

inline ChainSpace build_chain(const RawSpace& r, const ScalePtr& scale) {
  auto base = build_space(r, scale);
  if (!r.has_order) return ChainSpace::identity_order(std::move(base));
  std::vector<std::size_t> order;
  for (const auto& w : r.order) {
    auto i = base.find(w);
    if (!i) fail(r.line, "order mentions unknown world '" + w + "'");
    order.push_back(*i);
  }
  if (order.size() != base.size()) fail(r.line, "order must list every world exactly once");
  return ChainSpace(std::move(base), std::move(order));
}

/// `w1 < w2 < w3` or `w1 w2 w3`.
inline std::vector<std::string> order_names(const std::string& rest) {
  std::vector<std::string> out;
  for (auto& w : words(rest))
    if (w != "<") out.push_back(w);
  return out;
}

/// Drops blanks inside parentheses so "(a, b)" is one token.
inline std::string squeeze_tuples(const std::string& s) {
  std::string out;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth > 0 && std::isspace(static_cast<unsigned char>(c))) continue;
    out += c;
  }
  return out;
}

}  // namespace detail

/// Parses a document. Header lines (`logic`, `scale`, `vars:`, `sort <name>:`, `unsorted:`) come first;
/// then model lines (`worlds`, `sim`, `order`, `component <sort> {` ... `}`, `eval v: ...`), theory
/// formulas one per line, `query <formula>`, and proof lines `n. <formula> ; axiom A9 | hyp 2 | mp 3 5`.
inline Document load_document(std::string_view text, const LoadDefaults& defaults = {}) {
  Document doc;
  doc.logic = defaults.logic.value_or(Logic::lae);
  doc.scale = defaults.scale ? defaults.scale : default_scale();

  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::istringstream in{std::string(text)};
    std::size_t no = 0;
    for (std::string raw; std::getline(in, raw);) {
      ++no;
      const auto hash = raw.find('#');
      if (hash != std::string::npos) raw.erase(hash);
      auto t = detail::trim(raw);
      if (!t.empty()) lines.emplace_back(no, std::move(t));
    }
  }

  bool body = false;  // a non-header line has been seen
  detail::RawSpace plain;
  bool has_plain = false;
  std::vector<std::pair<std::string, detail::RawSpace>> components;
  detail::RawSpace* current = nullptr;  // open component block
  std::vector<detail::RawEval> evals;

  auto header = [&](std::size_t no) {
    if (body) detail::fail(no, "declarations must precede formulas and model lines");
  };
  auto space_line = [&](std::size_t no) -> detail::RawSpace& {
    body = true;
    if (current) return *current;
    if (!has_plain) plain.line = no;
    has_plain = true;
    return plain;
  };

  for (const auto& [no, line] : lines) {
    const auto w = detail::words(line);
    if (current && line == "}") {
      current = nullptr;
      continue;
    }
    if (detail::starts_with_word(line, "logic")) {
      header(no);
      if (w.size() != 2) detail::fail(no, "expected 'logic lae|laec|laepc'");
      Logic l;
      try {
        l = parse_logic(w[1]);
      } catch (const Error& e) {
        detail::fail(no, e.what());
      }
      if (defaults.logic && *defaults.logic != l)
        detail::fail(no, "file declares logic " + w[1] + " but " + std::string(to_string(*defaults.logic)) +
                             " was requested");
      doc.logic = l;
      doc.declares_logic = true;
    } else if (detail::starts_with_word(line, "scale")) {
      header(no);
      auto s = detail::parse_scale(w, no);
      if (defaults.scale && !(*defaults.scale == *s)) detail::fail(no, "file declares a different scale than requested");
      doc.scale = s;
      doc.declares_scale = true;
    } else if (detail::starts_with_word(line, "vars")) {
      header(no);
      try {
        doc.sig.add_sort("", detail::names_after_colon(line, no));
      } catch (const SortError& e) {
        detail::fail(no, e.what());
      }
    } else if (detail::starts_with_word(line, "sort")) {
      header(no);
      const auto colon = line.find(':');
      const auto name = colon == std::string::npos ? std::string() : detail::trim(line.substr(4, colon - 4));
      if (!detail::plain_name(name)) detail::fail(no, "expected 'sort <name>: v1 v2 ...'");
      try {
        doc.sig.add_sort(name, detail::names_after_colon(line, no));
      } catch (const SortError& e) {
        detail::fail(no, e.what());
      }
    } else if (detail::starts_with_word(line, "unsorted")) {
      header(no);
      try {
        doc.sig.add_unsorted(detail::names_after_colon(line, no));
      } catch (const SortError& e) {
        detail::fail(no, e.what());
      }
    } else if (detail::starts_with_word(line, "worlds")) {
      auto& s = space_line(no);
      if (!s.worlds.empty()) detail::fail(no, "worlds declared twice");
      s.worlds.assign(w.begin() + 1, w.end());
      if (s.worlds.empty()) detail::fail(no, "a space needs at least one world");
      for (const auto& x : s.worlds)
        if (!detail::plain_name(x)) detail::fail(no, "bad world name '" + x + "'");
    } else if (detail::starts_with_word(line, "sim")) {
      auto& s = space_line(no);
      if (w.size() != 4) detail::fail(no, "expected 'sim <world> <world> <grade>'");
      s.sims.emplace_back(w[1], w[2], w[3], no);
    } else if (detail::starts_with_word(line, "order")) {
      auto& s = space_line(no);
      s.order = detail::order_names(line.substr(5));
      s.has_order = true;
    } else if (detail::starts_with_word(line, "component")) {
      body = true;
      if (current) detail::fail(no, "component blocks do not nest");
      if (w.size() != 3 || w[2] != "{") detail::fail(no, "expected 'component <sort> {'");
      components.emplace_back(w[1], detail::RawSpace{});
      current = &components.back().second;
      current->line = no;
    } else if (detail::starts_with_word(line, "eval")) {
      body = true;
      const auto colon = line.find(':');
      if (colon == std::string::npos) detail::fail(no, "expected 'eval <variable>: worlds ...'");
      evals.push_back({detail::trim(line.substr(4, colon - 4)), detail::words(detail::squeeze_tuples(line.substr(colon + 1))), no});
    } else if (detail::starts_with_word(line, "query")) {
      body = true;
      if (doc.query) detail::fail(no, "only one query per file");
      doc.query = parse_formula(line.substr(5), doc.sig, *doc.scale, doc.logic, no);
    } else if (std::isdigit(static_cast<unsigned char>(line[0]))) {
      body = true;
      const auto dot = line.find('.');
      const auto semi = line.rfind(';');
      if (dot == std::string::npos || semi == std::string::npos || semi < dot)
        detail::fail(no, "expected 'n. <formula> ; axiom A<k> | hyp <i> | mp <i> <j>'");
      const auto num = detail::trim(line.substr(0, dot));
      if (num != std::to_string(doc.proof.size() + 1))
        detail::fail(no, "proof lines must be numbered 1, 2, ... in order (expected " +
                             std::to_string(doc.proof.size() + 1) + ")");
      ProofLine pl;
      pl.source_line = no;
      pl.formula = parse_formula(line.substr(dot + 1, semi - dot - 1), doc.sig, *doc.scale, doc.logic, no);
      const auto why = detail::words(line.substr(semi + 1));
      auto number = [&](const std::string& s) -> std::size_t {
        if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
          detail::fail(no, "expected a number, got '" + s + "'");
        return std::stoul(s);
      };
      if (why.size() == 1 && why[0] == "axiom") {
        pl.why = Justification::by_axiom();
      } else if (why.size() == 2 && why[0] == "axiom") {
        const auto& id = why[1];
        if (id.size() < 2 || (id[0] != 'A' && id[0] != 'a')) detail::fail(no, "axioms are named A1 ... A22");
        const auto k = number(id.substr(1));
        if (k < 1 || k > static_cast<std::size_t>(kAxiomCount)) detail::fail(no, "axioms are named A1 ... A22");
        pl.why = Justification::by_axiom(static_cast<int>(k));
      } else if (why.size() == 2 && why[0] == "hyp") {
        pl.why = Justification::hyp(number(why[1]));
      } else if (why.size() == 3 && why[0] == "mp") {
        pl.why = Justification::mp(number(why[1]), number(why[2]));
      } else {
        detail::fail(no, "expected 'axiom A<k>', 'hyp <i>' or 'mp <i> <j>' after ';'");
      }
      doc.proof.push_back(std::move(pl));
    } else {
      body = true;
      doc.theory.push_back(parse_formula(line, doc.sig, *doc.scale, doc.logic, no));
      doc.theory_lines.push_back(no);
    }
  }
  if (current) detail::fail(current->line, "component block is not closed");

  const bool has_model = has_plain || !components.empty();
  if (!has_model) {
    if (!evals.empty()) detail::fail(evals.front().line, "eval lines need a space (worlds or component blocks)");
    return doc;
  }
  if (has_plain && !components.empty()) detail::fail(plain.line, "use either worlds or component blocks, not both");

  Space space;
  std::size_t model_line = has_plain ? plain.line : components.front().second.line;
  if (doc.logic == Logic::laepc) {
    if (components.empty()) detail::fail(model_line, "laepc models are built from 'component <sort> {' blocks");
    std::vector<ChainSpace> chains(doc.sig.sorts().size());
    std::vector<bool> seen(chains.size(), false);
    for (const auto& [sort, raw] : components) {
      std::optional<std::size_t> idx;
      for (std::size_t i = 0; i < doc.sig.sorts().size(); ++i)
        if (doc.sig.sorts()[i].name == sort) idx = i;
      if (!idx) detail::fail(raw.line, "component for undeclared sort '" + sort + "'");
      if (seen[*idx]) detail::fail(raw.line, "sort '" + sort + "' has two components");
      if (raw.worlds.empty()) detail::fail(raw.line, "component '" + sort + "' lists no worlds");
      seen[*idx] = true;
      chains[*idx] = detail::build_chain(raw, doc.scale);
    }
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (!seen[i]) detail::fail(model_line, "sort '" + doc.sig.sorts()[i].name + "' has no component");
    std::map<std::string, int> owner;
    for (std::size_t i = 0; i < chains.size(); ++i)
      for (const auto& n : chains[i].base().names())
        if (!owner.emplace(n, static_cast<int>(i)).second)
          detail::fail(model_line, "world name '" + n + "' is used by two components");
    space = ProductSpace(chains);
  } else {
    if (!components.empty()) detail::fail(model_line, "component blocks are only for laepc");
    if (plain.worlds.empty()) detail::fail(model_line, "model lines without 'worlds'");
    if (doc.logic == Logic::laec)
      space = detail::build_chain(plain, doc.scale);
    else {
      if (plain.has_order) detail::fail(model_line, "order lines need logic laec");
      space = detail::build_space(plain, doc.scale);
    }
  }

  const auto& base = base_of(space);
  Evaluation ev(doc.sig.size(), WorldSet(base.size()));
  std::vector<bool> assigned(doc.sig.size(), false);
  for (const auto& e : evals) {
    auto v = doc.sig.find(e.var);
    if (!v) detail::fail(e.line, "eval for undeclared variable '" + e.var + "'");
    if (assigned[*v]) detail::fail(e.line, "variable '" + e.var + "' is evaluated twice");
    assigned[*v] = true;
    for (const auto& m : e.members) {
      if (auto w = base.find(m)) {
        ev[*v].set(*w);
        continue;
      }
      // component world name: its cylinder
      bool found = false;
      if (const auto* p = std::get_if<ProductSpace>(&space))
        for (std::size_t i = 0; i < p->dimension() && !found; ++i)
          if (auto x = p->component(i).base().find(m)) {
            ev[*v] |= p->cylinder(i, WorldSet::of(p->component(i).size(), {*x}));
            found = true;
          }
      if (!found) detail::fail(e.line, "unknown world '" + m + "'");
    }
    const auto* p = std::get_if<ProductSpace>(&space);
    if (p && doc.sig.is_sorted(*v)) {
      const auto i = static_cast<std::size_t>(doc.sig.sort_of(*v));
      WorldSet coords(p->component(i).size());
      ev[*v].for_each([&](std::size_t w) { coords.set(p->coord(w, i)); });
      if (p->cylinder(i, coords) != ev[*v])
        detail::fail(e.line, "'" + e.var + "' must be a cylinder over sort '" + doc.sig.sorts()[i].name + "'");
    }
  }
  try {
    doc.model.emplace(doc.logic, doc.sig, std::move(space), std::move(ev));
  } catch (const ModelError& e) {
    detail::fail(model_line, e.what());
  }
  return doc;
}

inline Document load_file(const std::string& path, const LoadDefaults& defaults = {}) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return load_document(buf.str(), defaults);
}

// --- Writers ---------------------------------------------------------------

namespace detail {

inline std::string level_list(const GradeScale& s) {
  std::string out;
  for (const auto& l : s.levels()) out += " " + l.str();
  return out;
}

inline bool is_lukasiewicz(const GradeScale& s) {
  try {
    return GradeScale::lukasiewicz(s.levels()) == s;
  } catch (const Error&) {
    return false;
  }
}

inline std::string names_of(const WorldSet& s, const SimilaritySpace& base) {
  std::string out;
  s.for_each([&](std::size_t w) { out += " " + base.name(w); });
  return out;
}

inline void write_sims(std::ostream& out, const SimilaritySpace& s, const std::string& indent) {
  for (std::size_t u = 0; u < s.size(); ++u)
    for (std::size_t v = u + 1; v < s.size(); ++v)
      if (s.sim(u, v) != s.scale().bottom())
        out << indent << "sim " << s.name(u) << " " << s.name(v) << " " << s.scale().value(s.sim(u, v)).str() << "\n";
}

inline void write_chain_body(std::ostream& out, const ChainSpace& c, const std::string& indent) {
  out << indent << "worlds";
  for (const auto& n : c.base().names()) out << " " << n;
  out << "\n";
  write_sims(out, c.base(), indent);
  out << indent << "order";
  for (std::size_t r = 0; r < c.size(); ++r) out << (r ? " < " : " ") << c.base().name(c.order()[r]);
  out << "\n";
}

}  // namespace detail

inline std::string write_scale(const GradeScale& s) {
  if (s.is_godel()) return "scale godel" + detail::level_list(s);
  if (detail::is_lukasiewicz(s)) return "scale lukasiewicz" + detail::level_list(s);
  std::string out = "scale table" + detail::level_list(s);
  for (auto i : s.table_indices()) out += " " + std::to_string(i);
  return out;
}

inline std::string write_header(Logic logic, const GradeScale& scale, const Signature& sig) {
  std::ostringstream out;
  out << "logic " << to_string(logic) << "\n" << write_scale(scale) << "\n";
  for (const auto& s : sig.sorts()) {
    out << (s.name.empty() ? "vars:" : "sort " + s.name + ":");
    for (VarId v : s.vars) out << " " << sig.var(v).name;
    out << "\n";
  }
  if (!sig.unsorted().empty()) {
    out << "unsorted:";
    for (VarId v : sig.unsorted()) out << " " << sig.var(v).name;
    out << "\n";
  }
  return out.str();
}

/// Model lines without the header. Sorted variables of a product are written as component worlds.
inline std::string write_model_body(const Model& m) {
  std::ostringstream out;
  const auto& sig = m.signature();
  const auto& base = m.base();
  if (const auto* p = std::get_if<ProductSpace>(&m.space())) {
    for (std::size_t i = 0; i < p->dimension(); ++i) {
      out << "component " << sig.sorts()[i].name << " {\n";
      detail::write_chain_body(out, p->component(i), "  ");
      out << "}\n";
    }
    for (VarId v = 0; v < sig.size(); ++v) {
      out << "eval " << sig.var(v).name << ":";
      const auto& e = m.evaluation()[v];
      if (sig.is_sorted(v)) {
        const auto i = static_cast<std::size_t>(sig.sort_of(v));
        WorldSet coords(p->component(i).size());
        e.for_each([&](std::size_t w) { coords.set(p->coord(w, i)); });
        out << detail::names_of(coords, p->component(i).base());
      } else {
        out << detail::names_of(e, base);
      }
      out << "\n";
    }
    return out.str();
  }
  if (const auto* c = std::get_if<ChainSpace>(&m.space())) {
    detail::write_chain_body(out, *c, "");
  } else {
    out << "worlds";
    for (const auto& n : base.names()) out << " " << n;
    out << "\n";
    detail::write_sims(out, base, "");
  }
  for (VarId v = 0; v < sig.size(); ++v)
    out << "eval " << sig.var(v).name << ":" << detail::names_of(m.evaluation()[v], base) << "\n";
  return out.str();
}

inline std::string write_model(const Model& m) {
  return write_header(m.logic(), m.scale(), m.signature()) + write_model_body(m);
}

inline std::string write_theory(const Theory& t, const std::optional<OuterFormula>& query, const Signature& sig,
                                const GradeScale& scale) {
  std::string out;
  for (const auto& f : t) out += to_string(f, sig, scale) + "\n";
  if (query) out += "query " + to_string(*query, sig, scale) + "\n";
  return out;
}

inline std::string write_proof(const ProofScript& script, const Signature& sig, const GradeScale& scale) {
  std::string out;
  for (std::size_t i = 0; i < script.size(); ++i) {
    const auto& l = script[i];
    out += std::to_string(i + 1) + ". " + to_string(l.formula, sig, scale) + " ; ";
    switch (l.why.kind) {
      case Justification::Kind::axiom: out += l.why.axiom ? "axiom " + axiom_name(l.why.axiom) : "axiom"; break;
      case Justification::Kind::hypothesis: out += "hyp " + std::to_string(l.why.a); break;
      case Justification::Kind::mp: out += "mp " + std::to_string(l.why.a) + " " + std::to_string(l.why.b); break;
    }
    out += "\n";
  }
  return out;
}

/// Verdict line, search statistics, then the countermodel as a loadable model file.
inline std::string write_verdict(const EntailmentVerdict& v) {
  std::ostringstream out;
  out << "verdict: " << to_string(v.verdict) << "\n";
  if (!v.reason.empty()) out << "reason: " << v.reason << "\n";
  out << "searched: " << v.stats.subsets << " world sets, " << v.stats.candidates << " candidate models\n";
  if (v.countermodel) out << "countermodel:\n" << write_model(*v.countermodel);
  return out.str();
}

}  // namespace lae
