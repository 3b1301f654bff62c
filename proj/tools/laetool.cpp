#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "lae/lae.hpp"

using namespace lae;

namespace {

enum Status { ok = 0, negative = 1, unknown = 2, usage = 3 };

struct Config {
  std::string command;
  std::vector<std::string> inputs;
  std::string variant;
  std::string scale;
  std::string bounds;
  std::size_t workers = 1;
  std::uint64_t seed = 1;
  std::string out;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

LoadDefaults defaults_of(const Config& c) {
  LoadDefaults d;
  if (!c.variant.empty()) d.logic = parse_logic(c.variant);
  if (!c.scale.empty()) {
    std::string text = c.scale;
    std::replace(text.begin(), text.end(), ',', ' ');
    auto w = detail::words(text);
    w.insert(w.begin(), "scale");
    d.scale = detail::parse_scale(w, 0);
  }
  return d;
}

SearchBounds bounds_of(const Config& c) {
  SearchBounds b;
  if (c.bounds == "exhaustive") {
    b = SearchBounds::full();
  } else if (c.bounds.starts_with("worlds=")) {
    const auto n = c.bounds.substr(7);
    if (n.empty() || !std::all_of(n.begin(), n.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); }))
      throw UsageError("--bounds worlds=N needs a positive number");
    b = SearchBounds::worlds(std::stoul(n));
    if (b.max_worlds == 0) throw UsageError("--bounds worlds=N needs a positive number");
  } else if (!c.bounds.empty()) {
    throw UsageError("--bounds must be 'exhaustive' or 'worlds=N'");
  }
  b.workers = c.workers;
  return b;
}

const std::string& input(const Config& c, std::size_t i = 0) {
  if (c.inputs.size() <= i) throw UsageError(c.command + " needs an input file");
  return c.inputs[i];
}

void write_out(const Config& c, const std::string& text) {
  if (c.out.empty()) return;
  std::ofstream f(c.out);
  if (!f) throw Error("cannot write " + c.out);
  f << text;
}

std::string world_list(const Model& m, const WorldSet& s) {
  std::string out;
  s.for_each([&](std::size_t w) { out += (out.empty() ? "" : " ") + m.base().name(w); });
  return out.empty() ? "(none)" : out;
}

void collect_atoms(const OuterFormula& f, std::vector<const GradedImplication*>& out) {
  if (f.op() == OuterOp::atom) {
    out.push_back(&f.atom());
  } else if (f.op() == OuterOp::neg) {
    collect_atoms(f.child(), out);
  } else {
    collect_atoms(f.left(), out);
    collect_atoms(f.right(), out);
  }
}

/// One line per graded implication: whether it holds and, if not, the worlds of the left side
/// outside the neighbourhood of the right side.
void explain(std::ostream& os, const Model& m, const OuterFormula& f) {
  std::vector<const GradedImplication*> atoms;
  collect_atoms(f, atoms);
  std::set<std::string> done;
  for (const auto* g : atoms) {
    const auto text = to_string(*g, m.signature(), m.scale());
    if (!done.insert(text).second) continue;
    const auto lhs = eval_basic(m, g->lhs);
    const auto bad = lhs - neighborhood(m.space(), g->grade, eval_basic(m, g->rhs));
    if (bad.empty())
      os << "  holds: " << text << "\n";
    else
      os << "  fails: " << text << " at " << world_list(m, bad) << "\n";
  }
}

int cmd_parse(const Config& c) {
  const auto defaults = defaults_of(c);
  const auto& arg = input(c);
  if (std::filesystem::is_regular_file(arg)) {
    const auto d = load_file(arg, defaults);
    std::cout << write_header(d.logic, *d.scale, d.sig);
    if (d.model) std::cout << write_model_body(*d.model);
    std::cout << write_theory(d.theory, d.query, d.sig, *d.scale) << write_proof(d.proof, d.sig, *d.scale);
    return ok;
  }
  // a bare formula: its variables form one anonymous sort
  const auto scale = defaults.scale ? defaults.scale : default_scale();
  const auto logic = defaults.logic.value_or(Logic::lae);
  std::vector<std::string> names;
  for (const auto& t : detail::tokenize(arg, 1))
    if (t.kind == detail::Tok::ident && std::find(names.begin(), names.end(), t.text) == names.end())
      names.push_back(t.text);
  Signature sig;
  if (logic == Logic::laepc)
    sig.add_unsorted(names);
  else if (!names.empty())
    sig = Signature::single(names);
  std::cout << to_string(parse(arg, sig, *scale, logic), sig, *scale) << "\n";
  return ok;
}

/// Formulas of `from` re-read in the signature of `to`, so a theory file can be checked against
/// a model file that declares the same variables.
OuterFormula rebase(const OuterFormula& f, const Document& from, const Document& to) {
  return parse_formula(to_string(f, from.sig, *from.scale), to.sig, *to.scale, to.logic);
}

int cmd_check(const Config& c) {
  const auto defaults = defaults_of(c);
  const auto doc = load_file(input(c), defaults);
  if (!doc.model) throw UsageError(input(c) + " declares no model");
  const Model& m = *doc.model;
  std::vector<std::pair<std::string, OuterFormula>> items;
  auto add_from = [&](const Document& d, const std::string& origin) {
    for (std::size_t i = 0; i < d.theory.size(); ++i)
      items.emplace_back(origin + ":" + std::to_string(d.theory_lines[i]), rebase(d.theory[i], d, doc));
    if (d.query) items.emplace_back("query", rebase(*d.query, d, doc));
  };
  add_from(doc, input(c));
  for (std::size_t i = 1; i < c.inputs.size(); ++i) {
    LoadDefaults same{doc.logic, doc.scale};
    add_from(load_file(c.inputs[i], same), c.inputs[i]);
  }
  if (items.empty()) throw UsageError("nothing to check: no theory formulas or query");

  bool theory_ok = true, query_ok = true, has_query = false;
  for (const auto& [where, f] : items) {
    const bool sat = sat_formula(m, f);
    std::cout << where << ": " << (sat ? "satisfied" : "violated") << ": " << to_string(f, m.signature(), m.scale())
              << "\n";
    explain(std::cout, m, f);
    if (where == "query") {
      has_query = true;
      query_ok = query_ok && sat;
    } else {
      theory_ok = theory_ok && sat;
    }
  }
  std::cout << "theory: " << (theory_ok ? "satisfied" : "violated") << "\n";
  if (has_query) std::cout << "query: " << (query_ok ? "satisfied" : "violated") << "\n";
  return theory_ok && query_ok ? ok : negative;
}

int cmd_entail(const Config& c) {
  const auto doc = load_file(input(c), defaults_of(c));
  if (!doc.query) throw UsageError(input(c) + " has no query line");
  const auto v = decide_entailment(doc.logic, doc.sig, *doc.scale, doc.theory, *doc.query, bounds_of(c));
  std::cout << write_verdict(v);
  if (v.countermodel) write_out(c, write_model(*v.countermodel));
  switch (v.verdict) {
    case Verdict::entailed: return ok;
    case Verdict::countermodel: return negative;
    case Verdict::unknown: return unknown;
  }
  return unknown;
}

int cmd_prove(const Config& c) {
  const auto doc = load_file(input(c), defaults_of(c));
  const auto v = check_proof(doc.theory, doc.proof, doc.sig, *doc.scale, doc.logic);
  if (v.accepted) {
    std::cout << "accepted: " << to_string(*v.conclusion, doc.sig, *doc.scale) << "\n";
    return ok;
  }
  std::cout << "rejected";
  if (v.line > 0) {
    std::cout << " at step " << v.line;
    if (doc.proof[v.line - 1].source_line) std::cout << " (line " << doc.proof[v.line - 1].source_line << ")";
  }
  std::cout << ": " << v.reason << "\n";
  return negative;
}

int cmd_canon(const Config& c) {
  const auto doc = load_file(input(c), defaults_of(c));
  if (!doc.model) throw UsageError(input(c) + " declares no model");
  const auto r = canonical_space(*doc.model, doc.logic);
  std::cout << "isomorphic: " << (r.isomorphic ? "yes" : "no") << "\n";
  for (std::size_t w = 0; w < r.witness.size(); ++w)
    std::cout << "  " << doc.model->base().name(w) << " -> " << r.model.base().name(r.witness[w]) << "\n";
  const auto text = write_model(r.model);
  if (c.out.empty())
    std::cout << "canonical:\n" << text;
  else
    write_out(c, text);
  return r.isomorphic ? ok : negative;
}

int cmd_fuzz(const Config& c) {
  gen::Rng rng(c.seed);
  std::size_t checks = 0, violations = 0, suites = 0;
  fuzz::standard_run(rng, {}, [&](const fuzz::Report& r) {
    ++suites;
    checks += r.checks;
    violations += r.violations;
    std::cout << r.suite << ": " << r.checks << " checks, " << r.violations << " violations\n";
    for (const auto& e : r.examples) std::cout << "  " << e << "\n";
  });
  std::cout << "total: " << suites << " suites, " << checks << " checks, " << violations << " violations\n";
  return violations == 0 ? ok : negative;
}

}  // namespace

int main(int argc, char** argv) {
  Config c;
  CLI::App app{"Graded implication toolkit"};
  app.add_option("command", c.command, "parse | check | entail | prove | canon | fuzz")
      ->required()
      ->check(CLI::IsMember({"parse", "check", "entail", "prove", "canon", "fuzz"}));
  app.add_option("inputs", c.inputs, "input files (parse also takes a formula)");
  app.add_option("--variant", c.variant, "lae | laec | laepc")->check(CLI::IsMember({"lae", "laec", "laepc"}));
  app.add_option("--scale", c.scale, "e.g. 'godel 0 1/2 1' or 'lukasiewicz 0,1/2,1'");
  app.add_option("--bounds", c.bounds, "exhaustive | worlds=N");
  app.add_option("--workers", c.workers, "parallel workers for entail")->check(CLI::PositiveNumber);
  app.add_option("--seed", c.seed, "seed for fuzz");
  app.add_option("--out", c.out, "output file for entail and canon models");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return ok;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    for (std::size_t i = 0; i < c.inputs.size(); ++i)
      if (!(c.command == "parse" && i == 0) && !std::filesystem::is_regular_file(c.inputs[i]))
        throw UsageError("no such file: " + c.inputs[i]);
    if (c.command == "parse") return cmd_parse(c);
    if (c.command == "check") return cmd_check(c);
    if (c.command == "entail") return cmd_entail(c);
    if (c.command == "prove") return cmd_prove(c);
    if (c.command == "canon") return cmd_canon(c);
    return cmd_fuzz(c);
  } catch (const ParseError& e) {
    const bool bare = c.inputs.empty() || !std::filesystem::is_regular_file(c.inputs.front());
    std::cerr << (bare ? std::string("formula") : c.inputs.front()) << ":" << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return usage;
}
