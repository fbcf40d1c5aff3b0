#include "ttbfl/harness/properties.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "ttbfl/frontend/syntax.hpp"
#include "ttbfl/harness/shrink.hpp"
#include "ttbfl/reduction.hpp"
#include "ttbfl/substitution.hpp"
#include "ttbfl/typing.hpp"

namespace ttbfl::harness {

namespace {

struct SuiteInfo {
  Suite suite;
  std::string_view name;
};

constexpr SuiteInfo kSuiteNames[] = {
    {Suite::Generator, "generator"},   {Suite::SubjectReduction, "subject-reduction"},
    {Suite::Diamond, "diamond"},       {Suite::Progress, "progress"},
    {Suite::Canonicity, "canonicity"}, {Suite::Coherence, "coherence"},
    {Suite::Consistency, "consistency"},
};

struct Outcome {
  bool skipped = false;
  bool undecided = false;
  std::size_t obligations = 0;
  std::optional<Counterexample> failure;
  std::function<bool(const Term&)> still_fails;  // for shrinking
  std::function<std::vector<std::string>(const Term&)> retrace;
  std::map<Rule, std::size_t> rules;
};

// Runs f(i) for i < n on `jobs` threads; results are indexed, so the merged
// report does not depend on scheduling. Workers inherit the caller's
// substitution fault.
std::vector<Outcome> run_indexed(std::size_t n, std::size_t jobs, const std::function<Outcome(std::size_t)>& f) {
  std::vector<Outcome> out(n);
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  SubstitutionFault fault = substitution_fault();
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < std::min(jobs, n); ++w) {
    workers.emplace_back([&] {
      ScopedSubstitutionFault scoped(fault);
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          out[i] = f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

PropertyReport collect(Suite suite, const GenConfig& cfg, const std::function<Outcome(std::size_t)>& f) {
  auto start = std::chrono::steady_clock::now();
  std::vector<Outcome> outcomes = run_indexed(cfg.cases, cfg.jobs, f);
  PropertyReport report;
  report.suite = std::string(suite_name(suite));
  for (Outcome& o : outcomes) {
    for (const auto& [rule, n] : o.rules) report.rule_nodes[rule] += n;
    if (o.skipped) {
      ++report.skipped;
      continue;
    }
    ++report.cases_run;
    report.obligations += o.obligations;
    if (o.undecided) ++report.undecided;
    if (!o.failure) continue;
    if (report.failures.size() < kShrinkLimit && o.still_fails) {
      o.failure->term = shrink(o.failure->original, o.still_fails);
      if (o.retrace && !alpha_equal(o.failure->term, o.failure->original)) {
        o.failure->trace = o.retrace(o.failure->term);
      }
    }
    report.failures.push_back(std::move(*o.failure));
  }
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::string show(const Context& ctx, const Term& t) { return frontend::print_term(t, frontend::name_context(ctx)); }

std::string show_context(const Context& ctx) {
  std::vector<std::string> names = frontend::name_context(ctx);
  std::string out;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (i) out += ", ";
    std::vector<std::string> scope(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(i));
    out += names[i] + " : " + frontend::print_term(ctx.entry(i), scope);
  }
  return out;
}

Counterexample counterexample(std::size_t index, const Context& ctx, const Term& term, std::optional<Term> type,
                              std::string detail) {
  Counterexample c;
  c.case_index = index;
  c.ctx = ctx;
  c.term = term;
  c.original = term;
  c.type = std::move(type);
  c.detail = std::move(detail);
  return c;
}

bool same_context(const Context& a, const Context& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!alpha_equal(a.entry(i), b.entry(i))) return false;
  }
  return true;
}

// Single contractions: each beta-redex contracted alone.
void single_contractions(const Term& a, std::vector<Term>& out) {
  if (a.is(TermKind::App) && a.fun().is(TermKind::Lam)) out.push_back(subst1(a.fun().body(), a.arg()));
  for (std::size_t i = 0; i < a.arity(); ++i) {
    std::vector<Term> inner;
    single_contractions(a.child(i), inner);
    for (Term& c : inner) {
      if (a.arity() == 1) {
        out.push_back(a.with_children(std::move(c)));
      } else if (i == 0) {
        out.push_back(a.with_children(std::move(c), a.child(1)));
      } else {
        out.push_back(a.with_children(a.child(0), std::move(c)));
      }
    }
  }
}

// The first few call-by-name steps from t.
std::vector<std::string> cbn_lines(const Term& start) {
  std::vector<std::string> lines;
  Term t = start;
  for (std::size_t k = 0; k < 8; ++k) {
    lines.push_back(frontend::print_term(t));
    auto next = cbn_step(t);
    if (!next) break;
    t = *next;
  }
  return lines;
}

std::vector<std::string> development_lines(const Term& start) {
  std::vector<std::string> lines;
  for (const Term& step : development_trace(start, 6).terms) lines.push_back(frontend::print_term(step));
  return lines;
}

GenConfig closed(GenConfig cfg) {
  cfg.max_context = 0;
  return cfg;
}

}  // namespace

std::string_view suite_name(Suite s) {
  for (const auto& info : kSuiteNames) {
    if (info.suite == s) return info.name;
  }
  return "?";
}

std::optional<Suite> suite_from_name(std::string_view name) {
  for (const auto& info : kSuiteNames) {
    if (info.name == name) return info.suite;
  }
  return std::nullopt;
}

std::vector<Term> one_step_reducts(const Term& a, std::size_t cap) {
  std::vector<Term> out;
  if (auto all = parallel_reducts(a, cap)) {
    out = std::move(*all);
  } else {
    single_contractions(a, out);
  }
  Term dev = complete_development(a);
  bool seen = false;
  for (const Term& t : out) seen = seen || alpha_equal(t, dev);
  if (!seen) out.push_back(dev);
  return out;
}

PropertyReport prop_generator(const GenConfig& cfg) {
  return collect(Suite::Generator, cfg, [&](std::size_t i) {
    Outcome o;
    auto c = generate_case(cfg, i, CaseShape::Any);
    if (!c) {
      o.skipped = true;
      return o;
    }
    count_rules(c->derivation, o.rules);
    o.obligations = 1;
    DerivationReport r = check_derivation(c->derivation, *cfg.domain);
    if (r.fuel_exhausted) {
      o.undecided = true;
    } else if (!r.ok) {
      o.failure = counterexample(i, c->ctx, c->term, c->type,
                                 "derivation rejected: " + (r.diagnostics.empty() ? "" : r.diagnostics.front()));
    }
    return o;
  });
}

PropertyReport prop_subject_reduction(const GenConfig& cfg) {
  return collect(Suite::SubjectReduction, cfg, [&](std::size_t i) {
    Outcome o;
    auto c = generate_case(cfg, i, CaseShape::Any);
    if (!c) {
      o.skipped = true;
      return o;
    }
    count_rules(c->derivation, o.rules);
    TypeChecker tc(*cfg.domain, cfg.fuel);
    Context ctx = c->ctx;
    Term type = c->type;
    // First rejected reduct of t, if t itself checks.
    auto bad_reduct = [tc, ctx, type](const Term& t, std::size_t* obligations, bool* undecided) {
      std::optional<std::pair<Term, std::string>> bad;
      for (const Term& b : one_step_reducts(t)) {
        if (alpha_equal(b, t)) continue;
        if (obligations) ++*obligations;
        Judgement j = tc.check(ctx, b, type);
        if (j.verdict == Verdict::FuelExhausted) {
          if (undecided) *undecided = true;
        } else if (!j.accepted()) {
          bad = std::make_pair(b, j.diagnostic);
          break;
        }
      }
      return bad;
    };
    o.obligations = 1;
    Judgement j = tc.check(ctx, c->term, type);
    if (j.verdict == Verdict::FuelExhausted) {
      o.undecided = true;
      return o;
    }
    if (!j.accepted()) {
      // The generator built a derivation, so this is a failure of the
      // substitution machinery the checker relies on.
      o.failure = counterexample(i, ctx, c->term, type, "generated term rejected: " + j.diagnostic);
      return o;
    }
    if (auto bad = bad_reduct(c->term, &o.obligations, &o.undecided)) {
      o.failure = counterexample(i, ctx, c->term, type, "reduct rejected: " + bad->second);
      o.failure->trace = {show(ctx, c->term), show(ctx, bad->first)};
      o.still_fails = [tc, ctx, type, bad_reduct](const Term& t) {
        return tc.check(ctx, t, type).accepted() && bad_reduct(t, nullptr, nullptr).has_value();
      };
      o.retrace = [ctx, bad_reduct](const Term& t) {
        auto b = bad_reduct(t, nullptr, nullptr);
        return std::vector<std::string>{show(ctx, t), show(ctx, b->first), b->second};
      };
    }
    return o;
  });
}

PropertyReport prop_diamond_completion(const GenConfig& cfg) {
  return collect(Suite::Diamond, cfg, [&](std::size_t i) {
    Outcome o;
    std::mt19937_64 rng(case_seed(cfg.seed, i));
    std::size_t size = 1 + std::uniform_int_distribution<std::size_t>(0, cfg.max_size - 1)(rng);
    std::size_t free_vars = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
    Term t = random_term(rng, size, free_vars);
    auto rejoin_failure = [](const Term& a, std::size_t* obligations) -> std::optional<Term> {
      Term dev = complete_development(a);
      for (const Term& b : one_step_reducts(a)) {
        if (obligations) ++*obligations;
        if (!par_step_check(b, dev)) return b;
      }
      return std::nullopt;
    };
    if (auto b = rejoin_failure(t, &o.obligations)) {
      o.failure = counterexample(i, Context(), t, std::nullopt, "reduct does not reach the complete development");
      o.failure->trace = {frontend::print_term(t), frontend::print_term(*b),
                          frontend::print_term(complete_development(t))};
      o.still_fails = [rejoin_failure](const Term& a) { return rejoin_failure(a, nullptr).has_value(); };
      o.retrace = [rejoin_failure](const Term& a) {
        return std::vector<std::string>{frontend::print_term(a), frontend::print_term(*rejoin_failure(a, nullptr)),
                                        frontend::print_term(complete_development(a))};
      };
    }
    return o;
  });
}

PropertyReport prop_progress_safety(const GenConfig& cfg) {
  GenConfig gen = closed(cfg);
  return collect(Suite::Progress, cfg, [gen](std::size_t i) {
    Outcome o;
    auto c = generate_case(gen, i, CaseShape::Closed);
    if (!c) {
      o.skipped = true;
      return o;
    }
    count_rules(c->derivation, o.rules);
    o.obligations = 1;
    EvalResult r = cbn_eval(c->term, gen.fuel);
    if (!r.halted) {
      o.undecided = true;
    } else if (!is_value(r.term)) {
      o.failure = counterexample(i, Context(), c->term, c->type, "stuck after " + std::to_string(r.steps) + " steps");
      o.failure->trace = cbn_lines(c->term);
      o.retrace = cbn_lines;
      TypeChecker tc(*gen.domain, gen.fuel);
      Term type = c->type;
      Fuel fuel = gen.fuel;
      o.still_fails = [tc, type, fuel](const Term& t) {
        if (!tc.check(Context(), t, type).accepted()) return false;
        EvalResult e = cbn_eval(t, fuel);
        return e.halted && !is_value(e.term);
      };
    }
    return o;
  });
}

namespace {

enum class Canon { Ok, Bad, Undecided };

Canon worst(Canon a, Canon b) {
  if (a == Canon::Bad || b == Canon::Bad) return Canon::Bad;
  if (a == Canon::Undecided || b == Canon::Undecided) return Canon::Undecided;
  return Canon::Ok;
}

// Head forms reached by call-by-name evaluation, recursing into level
// arguments and Pi domains.
Canon cbn_level(const Term& k, Fuel fuel, std::optional<LevelValue>& out) {
  EvalResult r = cbn_eval(k, fuel);
  if (!r.halted) return Canon::Undecided;
  if (!r.term.is(TermKind::Lvl)) return Canon::Bad;
  out = r.term.level();
  return Canon::Ok;
}

Canon cbn_type(const Term& c, Fuel fuel) {
  EvalResult r = cbn_eval(c, fuel);
  if (!r.halted) return Canon::Undecided;
  std::optional<LevelValue> level;
  switch (r.term.kind()) {
    case TermKind::Pi: return cbn_type(r.term.dom(), fuel);
    case TermKind::Mty: return Canon::Ok;
    case TermKind::Univ:
    case TermKind::LevelLt: return cbn_level(r.term.operand(), fuel, level);
    default: return Canon::Bad;
  }
}

bool canonical_type(const Term& nf) {
  switch (nf.kind()) {
    case TermKind::Pi: return canonical_type(nf.dom());
    case TermKind::Mty: return true;
    case TermKind::Univ:
    case TermKind::LevelLt: return nf.operand().is(TermKind::Lvl);
    default: return false;
  }
}

// Checked along two reduction paths: full normalization by developments and
// call-by-name head evaluation.
Canon canonical(const Term& t, const Term& type, const LevelDomain& domain, Fuel fuel, std::string* why) {
  ParsResult n = pars(t, fuel);
  if (type.is(TermKind::Univ)) {
    Canon by_nf = !n.normal ? Canon::Undecided : canonical_type(n.term) ? Canon::Ok : Canon::Bad;
    Canon by_cbn = cbn_type(t, fuel);
    if (why && by_nf == Canon::Bad) *why = "type normal form is not canonical: " + frontend::print_term(n.term);
    if (why && by_nf != Canon::Bad && by_cbn == Canon::Bad) {
      *why = "type head is not canonical: " + frontend::print_term(cbn_eval(t, fuel).term);
    }
    return worst(by_nf, by_cbn);
  }
  ParsResult bound = pars(type.operand(), fuel);
  Canon by_nf = Canon::Undecided;
  if (n.normal && bound.normal) {
    by_nf = n.term.is(TermKind::Lvl) && bound.term.is(TermKind::Lvl) &&
                    domain.lt(n.term.level(), bound.term.level())
                ? Canon::Ok
                : Canon::Bad;
  }
  if (why && by_nf == Canon::Bad) {
    *why = "level normal form " + frontend::print_term(n.term) + " is not a concrete level below " +
           frontend::print_term(bound.term);
  }
  std::optional<LevelValue> value, limit;
  Canon by_cbn = worst(cbn_level(t, fuel, value), cbn_level(type.operand(), fuel, limit));
  if (by_cbn == Canon::Ok && !domain.lt(*value, *limit)) by_cbn = Canon::Bad;
  if (why && by_nf != Canon::Bad && by_cbn == Canon::Bad) {
    *why = "level evaluates to " + frontend::print_term(cbn_eval(t, fuel).term) + ", bound to " +
           frontend::print_term(cbn_eval(type.operand(), fuel).term);
  }
  return worst(by_nf, by_cbn);
}

}  // namespace

PropertyReport prop_canonicity(const GenConfig& cfg) {
  GenConfig gen = closed(cfg);
  return collect(Suite::Canonicity, cfg, [gen](std::size_t i) {
    Outcome o;
    auto c = generate_case(gen, i, CaseShape::ClosedSortOrLevel);
    if (!c) {
      o.skipped = true;
      return o;
    }
    count_rules(c->derivation, o.rules);
    o.obligations = 1;
    std::string why;
    Canon verdict = canonical(c->term, c->type, *gen.domain, gen.fuel, &why);
    if (verdict == Canon::Undecided) o.undecided = true;
    if (verdict != Canon::Bad) return o;
    o.failure = counterexample(i, Context(), c->term, c->type, why);
    o.failure->trace = development_lines(c->term);
    o.retrace = development_lines;
    TypeChecker tc(*gen.domain, gen.fuel);
    Term type = c->type;
    const LevelDomain* domain = gen.domain;
    Fuel fuel = gen.fuel;
    o.still_fails = [tc, type, domain, fuel](const Term& t) {
      return tc.check(Context(), t, type).accepted() && canonical(t, type, *domain, fuel, nullptr) == Canon::Bad;
    };
    return o;
  });
}

PropertyReport prop_coherence(const GenConfig& cfg) {
  return collect(Suite::Coherence, cfg, [&](std::size_t i) {
    Outcome o;
    auto c = generate_case(cfg, i, CaseShape::Any);
    if (!c) {
      o.skipped = true;
      return o;
    }
    count_rules(c->derivation, o.rules);
    TypeChecker tc(*cfg.domain, cfg.fuel);
    auto incoherent = [&](const Judgement& j, const std::optional<Term>& type) -> std::optional<std::string> {
      ++o.obligations;
      if (j.verdict == Verdict::FuelExhausted) o.undecided = true;
      if (!j.accepted()) return std::nullopt;
      const Derivation& d = *j.derivation;
      if (!same_context(d.ctx, c->ctx) || !d.term || !alpha_equal(*d.term, c->term) ||
          (type && !alpha_equal(*d.type, *type))) {
        return "derivation concludes " + describe_judgement(d);
      }
      DerivationReport r = check_derivation(j.derivation, *cfg.domain);
      if (r.fuel_exhausted) o.undecided = true;
      if (!r.ok && !r.fuel_exhausted) return "emitted derivation invalid: " + r.diagnostics.front();
      return std::nullopt;
    };
    auto bad = incoherent(tc.check(c->ctx, c->term, c->type), c->type);
    if (!bad) bad = incoherent(tc.infer(c->ctx, c->term), std::nullopt);
    if (bad) o.failure = counterexample(i, c->ctx, c->term, c->type, *bad);
    return o;
  });
}

PropertyReport prop_consistency(const GenConfig& cfg) {
  GenConfig gen = closed(cfg);
  return collect(Suite::Consistency, cfg, [gen](std::size_t i) {
    Outcome o;
    Term t = Term::mty();
    if (i % 2 == 0) {
      auto c = generate_case(gen, i, CaseShape::Closed);
      if (!c) {
        o.skipped = true;
        return o;
      }
      t = c->term;
    } else {
      std::mt19937_64 rng(case_seed(gen.seed, i));
      t = random_term(rng, 1 + std::uniform_int_distribution<std::size_t>(0, gen.max_size - 1)(rng), 0);
    }
    o.obligations = 1;
    TypeChecker tc(*gen.domain, gen.fuel);
    Judgement j = tc.check(Context(), t, Term::mty());
    if (j.verdict == Verdict::FuelExhausted) o.undecided = true;
    if (j.accepted()) o.failure = counterexample(i, Context(), t, Term::mty(), "closed proof of Bot accepted");
    return o;
  });
}

PropertyReport run_suite(Suite suite, const GenConfig& cfg) {
  switch (suite) {
    case Suite::Generator: return prop_generator(cfg);
    case Suite::SubjectReduction: return prop_subject_reduction(cfg);
    case Suite::Diamond: return prop_diamond_completion(cfg);
    case Suite::Progress: return prop_progress_safety(cfg);
    case Suite::Canonicity: return prop_canonicity(cfg);
    case Suite::Coherence: return prop_coherence(cfg);
    case Suite::Consistency: return prop_consistency(cfg);
  }
  throw std::logic_error("unknown suite");
}

std::string PropertyReport::text() const {
  std::ostringstream out;
  out << "suite " << suite << ": " << (passed() ? "PASS" : "FAIL") << "\n";
  out << "  cases " << cases_run << ", skipped " << skipped << ", undecided " << undecided << ", obligations "
      << obligations << ", failures " << failures.size() << "\n";
  if (!rule_nodes.empty()) {
    std::size_t total = 0;
    for (const auto& [rule, n] : rule_nodes) total += n;
    out << "  rule nodes " << total << ":";
    for (Rule rule : kAllRules) {
      auto it = rule_nodes.find(rule);
      std::size_t n = it == rule_nodes.end() ? 0 : it->second;
      char pct[16];
      std::snprintf(pct, sizeof pct, "%.1f%%", total ? 100.0 * double(n) / double(total) : 0.0);
      out << " " << rule_name(rule) << "=" << pct;
    }
    out << "\n";
  }
  char elapsed[32];
  std::snprintf(elapsed, sizeof elapsed, "%.2f", elapsed_seconds);
  out << "  elapsed " << elapsed << " s\n";
  std::size_t shown = 0;
  for (const Counterexample& c : failures) {
    if (shown++ == kShrinkLimit) {
      out << "  ... " << failures.size() - kShrinkLimit << " more\n";
      break;
    }
    out << "  case " << c.case_index << ": " << c.detail << "\n";
    if (!c.ctx.empty()) out << "    context  " << show_context(c.ctx) << "\n";
    out << "    term     " << show(c.ctx, c.term) << "\n";
    if (!alpha_equal(c.term, c.original)) out << "    original " << show(c.ctx, c.original) << "\n";
    if (c.type) out << "    type     " << show(c.ctx, *c.type) << "\n";
    for (const std::string& line : c.trace) out << "    | " << line << "\n";
  }
  return out.str();
}

nlohmann::json PropertyReport::to_json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["passed"] = passed();
  j["cases"] = cases_run;
  j["skipped"] = skipped;
  j["undecided"] = undecided;
  j["obligations"] = obligations;
  j["elapsed_seconds"] = elapsed_seconds;
  nlohmann::json rules = nlohmann::json::object();
  for (const auto& [rule, n] : rule_nodes) rules[std::string(rule_name(rule))] = n;
  j["rule_nodes"] = rules;
  nlohmann::json fs = nlohmann::json::array();
  for (const Counterexample& c : failures) {
    nlohmann::json f;
    f["case"] = c.case_index;
    f["detail"] = c.detail;
    f["context"] = show_context(c.ctx);
    f["term"] = show(c.ctx, c.term);
    f["original"] = show(c.ctx, c.original);
    if (c.type) f["type"] = show(c.ctx, *c.type);
    f["trace"] = c.trace;
    fs.push_back(std::move(f));
  }
  j["failures"] = fs;
  return j;
}

}  // namespace ttbfl::harness
