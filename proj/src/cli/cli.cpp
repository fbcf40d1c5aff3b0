#include "ttbfl/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ttbfl/derivation_json.hpp"
#include "ttbfl/frontend/source.hpp"
#include "ttbfl/frontend/syntax.hpp"
#include "ttbfl/harness/properties.hpp"
#include "ttbfl/reduction.hpp"
#include "ttbfl/substitution.hpp"

namespace ttbfl::cli {

namespace {

// Raised for unreadable files and bad flag values; reported with exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::optional<std::uint64_t> fuel;
  std::optional<std::string> domain;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Command-line flags win over file pragmas.
const LevelDomain& pick_domain(const Globals& g, const frontend::SourceFile* file) {
  std::optional<std::string> name = g.domain;
  if (!name && file) name = file->domain;
  if (!name) return nat_omega_domain();
  const LevelDomain* d = domain_by_name(*name);
  if (!d) throw UsageError("unknown level domain '" + *name + "' (expected nat or nat-omega)");
  return *d;
}

Fuel pick_fuel(const Globals& g, const frontend::SourceFile* file) {
  if (g.fuel) return Fuel{*g.fuel};
  if (file && file->fuel) return Fuel{*file->fuel};
  return kDefaultFuel;
}

int report_exit(const frontend::CheckReport& report) {
  if (report.all_passed()) return kOk;
  return report.fuel_exhausted() ? kFuelExhausted : kCheckFailed;
}

// EXPR resolved against the definitions of `file`, if one was given.
struct Program {
  std::optional<frontend::SourceFile> file;
  std::map<std::string, Term> globals;
};

Program load_program(const std::string& path) {
  Program p;
  if (path.empty()) return p;
  p.file = frontend::parse_source(read_file(path));
  for (const auto& d : frontend::resolve_source(*p.file)) p.globals.emplace(d.source->name, d.body);
  return p;
}

Term closed_term(const Program& p, const std::string& expr, const std::string& def) {
  if (!def.empty()) {
    auto it = p.globals.find(def);
    if (it == p.globals.end()) throw UsageError("no definition named '" + def + "'");
    return it->second;
  }
  if (expr.empty()) throw UsageError("expected an expression or --def NAME");
  return frontend::resolve(frontend::parse_term(expr), {}, p.globals);
}

int cmd_check(const Globals& g, const std::string& path, std::ostream& out) {
  frontend::SourceFile file = frontend::parse_source(read_file(path));
  frontend::CheckReport report = frontend::check_source(file, pick_domain(g, &file), pick_fuel(g, &file));
  out << report.text();
  return report_exit(report);
}

int cmd_eval(const Globals& g, const std::string& expr, const std::string& def, const std::string& path,
             std::ostream& out, std::ostream& err) {
  Program p = load_program(path);
  const frontend::SourceFile* file = p.file ? &*p.file : nullptr;
  pick_domain(g, file);
  Term t = closed_term(p, expr, def);
  if (t.free_bound() > 0) throw UsageError("eval needs a closed term");
  EvalResult r = cbn_eval(t, pick_fuel(g, file));
  if (!r.halted) {
    err << "fuel exhausted after " << r.steps << " steps\n";
    return kFuelExhausted;
  }
  out << frontend::print_term(r.term) << "\n";
  if (!is_value(r.term)) {
    err << "stuck: not a value\n";
    return kCheckFailed;
  }
  return kOk;
}

int cmd_reduce(const std::string& expr, const std::string& def, const std::string& path,
               std::size_t steps, std::ostream& out) {
  Program p = load_program(path);
  Term t = closed_term(p, expr, def);
  ReductionTrace trace = development_trace(t, steps);
  for (std::size_t i = 0; i < trace.terms.size(); ++i) out << i << ": " << frontend::print_term(trace.terms[i]) << "\n";
  if (!has_redex(trace.terms.back())) out << "normal\n";
  return kOk;
}

int cmd_derive(const Globals& g, const std::string& path, const std::string& out_path, std::ostream& out) {
  frontend::SourceFile file = frontend::parse_source(read_file(path));
  const LevelDomain& domain = pick_domain(g, &file);
  Fuel fuel = pick_fuel(g, &file);
  frontend::CheckReport report = frontend::check_source(file, domain, fuel);
  nlohmann::json doc;
  doc["domain"] = std::string(domain.name());
  doc["fuel"] = fuel.steps;
  nlohmann::json defs = nlohmann::json::array();
  for (const auto& r : report.results) {
    nlohmann::json d;
    d["name"] = r.name;
    d["expect_fail"] = r.expect_fail;
    d["verdict"] = std::string(verdict_name(r.judgement.verdict));
    d["type"] = term_to_json(r.type);
    d["body"] = term_to_json(r.body);
    if (r.judgement.accepted()) {
      d["derivation"] = derivation_to_json(r.judgement.derivation);
    } else {
      d["derivation"] = nullptr;
      d["diagnostic"] = r.judgement.diagnostic;
    }
    defs.push_back(std::move(d));
  }
  doc["definitions"] = std::move(defs);
  std::ofstream o(out_path, std::ios::binary);
  if (!o) throw UsageError("cannot write '" + out_path + "'");
  o << doc.dump(1) << "\n";
  out << report.text();
  return report_exit(report);
}

struct FuzzOptions {
  std::string suite = "all";
  std::size_t cases = 1000;
  std::uint64_t seed = 1;
  std::size_t size = 24;
  std::size_t context = 3;
  std::size_t jobs = 1;
  std::string json_path;
  bool mutate = false;
};

int cmd_fuzz(const Globals& g, const FuzzOptions& o, std::ostream& out) {
  std::vector<harness::Suite> suites;
  if (o.suite == "all") {
    suites.assign(std::begin(harness::kAllSuites), std::end(harness::kAllSuites));
  } else if (auto s = harness::suite_from_name(o.suite)) {
    suites.push_back(*s);
  } else {
    throw UsageError("unknown suite '" + o.suite + "'");
  }
  if (o.size == 0) throw UsageError("--size must be positive");
  harness::GenConfig cfg;
  cfg.seed = o.seed;
  cfg.cases = o.cases;
  cfg.max_size = o.size;
  cfg.max_context = o.context;
  cfg.jobs = std::max<std::size_t>(1, o.jobs);
  cfg.domain = &pick_domain(g, nullptr);
  cfg.fuel = pick_fuel(g, nullptr);
  std::optional<ScopedSubstitutionFault> fault;
  if (o.mutate) fault.emplace(SubstitutionFault::OffByOneBinderDepth);
  nlohmann::json reports = nlohmann::json::array();
  bool passed = true;
  for (harness::Suite s : suites) {
    harness::PropertyReport r = harness::run_suite(s, cfg);
    out << r.text();
    passed = passed && r.passed();
    reports.push_back(r.to_json());
  }
  if (!o.json_path.empty()) {
    nlohmann::json doc;
    doc["seed"] = cfg.seed;
    doc["cases"] = cfg.cases;
    doc["size"] = cfg.max_size;
    doc["domain"] = std::string(cfg.domain->name());
    doc["mutated"] = o.mutate;
    doc["reports"] = std::move(reports);
    std::ofstream f(o.json_path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + o.json_path + "'");
    f << doc.dump(1) << "\n";
  }
  return passed ? kOk : kCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ttbfl: bounded first-class universe levels", "ttbfl"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t fuel = 0;
  std::string domain;
  app.add_option("--fuel", fuel, "beta contractions per normalization")->check(CLI::PositiveNumber);
  app.add_option("--domain", domain, "level domain: nat or nat-omega");

  std::string file, expr, def, out_path;
  std::size_t steps = 10;

  auto* check = app.add_subcommand("check", "typecheck every definition of FILE");
  check->add_option("FILE", file)->required();

  auto* eval = app.add_subcommand("eval", "call-by-name evaluate a closed term");
  eval->add_option("EXPR", expr);
  eval->add_option("--def", def, "evaluate a definition of --file");
  eval->add_option("--file", file, "definitions visible to EXPR");

  auto* reduce = app.add_subcommand("reduce", "print a parallel-reduction (development) trace");
  reduce->add_option("EXPR", expr);
  reduce->add_option("--def", def, "reduce a definition of --file");
  reduce->add_option("--file", file, "definitions visible to EXPR");
  reduce->add_option("--steps", steps, "maximum number of steps");

  auto* derive = app.add_subcommand("derive", "write derivations of FILE as JSON");
  derive->add_option("FILE", file)->required();
  derive->add_option("--out", out_path, "output path")->required();

  FuzzOptions fz;
  auto* fuzz = app.add_subcommand("fuzz", "run metatheory property suites");
  fuzz->add_option("--suite", fz.suite, "suite name or 'all'");
  fuzz->add_option("--cases", fz.cases);
  fuzz->add_option("--seed", fz.seed);
  fuzz->add_option("--size", fz.size, "node budget of generated terms");
  fuzz->add_option("--context", fz.context, "maximum context length");
  fuzz->add_option("--jobs", fz.jobs, "worker threads");
  fuzz->add_option("--json", fz.json_path, "also write a JSON report");
  fuzz->add_flag("--mutate", fz.mutate, "run with a deliberately broken substitution");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }
  if (fuel) g.fuel = fuel;
  if (!domain.empty()) g.domain = domain;

  try {
    if (*check) return cmd_check(g, file, out);
    if (*eval) return cmd_eval(g, expr, def, file, out, err);
    if (*reduce) return cmd_reduce(expr, def, file, steps, out);
    if (*derive) return cmd_derive(g, file, out_path, out);
    if (*fuzz) return cmd_fuzz(g, fz, out);
  } catch (const frontend::SyntaxError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace ttbfl::cli
