// Acceptance run: one PASS/FAIL line per criterion, exit 0 iff all pass.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ttbfl/cli.hpp"
#include "ttbfl/frontend/source.hpp"
#include "ttbfl/frontend/syntax.hpp"
#include "ttbfl/harness/properties.hpp"
#include "ttbfl/harness/search.hpp"
#include "ttbfl/substitution.hpp"
#include "ttbfl/typing.hpp"

namespace fs = std::filesystem;
using namespace ttbfl;
using namespace ttbfl::harness;

namespace {

constexpr std::size_t kCases = 10000;
constexpr std::size_t kCanonicityCases = 2000;
constexpr std::size_t kDiamondSize = 12;
constexpr std::size_t kSearchDepth = 8;
constexpr std::uint64_t kSeed = 20240601;
constexpr std::uint64_t kEvalFuel = 10000;
constexpr double kCorpusSeconds = 5.0;
constexpr double kSubjectReductionSeconds = 600.0;
constexpr std::size_t kMaxFailures = 0;
constexpr std::size_t kMaxUndecided = 0;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string fmt(double v, const char* format = "%.2f") {
  char buf[32];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

struct Line {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

GenConfig config(std::size_t cases) {
  GenConfig cfg;
  cfg.seed = kSeed;
  cfg.cases = cases;
  cfg.fuel = Fuel{kEvalFuel};
  return cfg;
}

std::vector<fs::path> corpus_files() {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(TTBFL_CORPUS_DIR)) {
    if (e.path().extension() == ".ttbfl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Term parse(std::string_view text, const std::vector<std::string>& scope = {}) {
  return frontend::resolve(frontend::parse_term(text), scope);
}

Context context(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::vector<Term> types;
  std::vector<std::string> scope;
  for (const auto& [name, type] : entries) {
    types.push_back(parse(type, scope));
    scope.push_back(name);
  }
  return Context(types);
}

std::vector<std::string> names(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::vector<std::string> out;
  for (const auto& e : entries) out.push_back(e.first);
  return out;
}

Line corpus_reproduction() {
  Line line;
  auto start = Clock::now();
  TypeChecker tc(nat_omega_domain());
  struct Pinned {
    std::vector<std::pair<std::string, std::string>> ctx;
    const char* term;
    const char* type;
    bool holds;
  };
  const std::vector<Pinned> pinned = {
      {{}, "2", "Level< 3", true},
      {{}, "Level< 2", "U 0", true},
      {{{"x", "Level< omega"}, {"y", "Level< x"}}, "x", "Level< omega", true},
      {{{"x", "Level< omega"}, {"y", "Level< x"}}, "y", "Level< omega", true},
      {{{"f", "U 2 -> U 0"}}, "fun (x : U 1) . f x", "U 1 -> U 1", true},
      {{{"f", "U 2 -> U 0"}}, "f", "U 1 -> U 1", false},
      {{}, "Pi (x : Level< omega) (y : U x) . y -> y", "U omega", true},
  };
  std::size_t held = 0;
  for (const Pinned& p : pinned) {
    Context ctx = context(p.ctx);
    auto scope = names(p.ctx);
    Judgement j = tc.check(ctx, parse(p.term, scope), parse(p.type, scope));
    bool ok = j.accepted() == p.holds;
    held += ok;
    line.require(ok, std::string(p.term) + " : " + p.type + (p.holds ? " rejected" : " accepted"));
  }
  std::size_t files = 0;
  for (const fs::path& f : corpus_files()) {
    std::ostringstream out, err;
    int code = cli::run_cli({"check", f.string()}, out, err);
    fs::path expected = f;
    expected.replace_extension(".expected");
    bool ok = code == cli::kOk && out.str() == slurp(expected);
    files += ok;
    line.require(ok, f.filename().string() + " differs from its pinned report");
  }
  double secs = since(start);
  line.require(secs < kCorpusSeconds, "took " + fmt(secs) + " s");
  line.detail = std::to_string(held) + "/" + std::to_string(pinned.size()) + " judgements, " + std::to_string(files) +
                " corpus files reproduced, " + fmt(secs) + " s" + (line.detail.empty() ? "" : " | " + line.detail);
  return line;
}

Line absurd_regression() {
  Line line;
  TypeChecker tc(nat_omega_domain());
  auto scope = std::vector<std::string>{"x"};
  Context ctx = context({{"x", "Bot"}});
  Term inner = parse("absurd [Level< 0] x", scope);
  Term outer = parse("absurd [Level< (absurd [Level< 0] x)] x", scope);
  line.require(tc.check(ctx, Term::univ(outer), Term::univ(inner)).accepted(), "annotated candidate rejected");
  line.require(!tc.check(ctx, Term::univ(inner), Term::univ(inner)).accepted(), "self-typed variant accepted");
  SearchConfig cfg;
  cfg.max_depth = kSearchDepth;
  SearchResult found = search_derivation(ctx, Term::univ(outer), Term::univ(inner), cfg);
  line.require(found.derivation && check_derivation(found.derivation, nat_omega_domain()).ok,
               "search misses the annotated derivation");
  SearchResult none = search_derivation(ctx, Term::univ(inner), Term::univ(inner), cfg);
  line.require(!none.derivation, "search found a derivation of the self-typed variant");
  line.detail = "checker accepts annotated / rejects self-typed; depth-" + std::to_string(kSearchDepth) +
                " search over " + std::to_string(none.pool_size) + " pool terms, " + std::to_string(none.goals) +
                " goals: no derivation" + (line.detail.empty() ? "" : " | " + line.detail);
  return line;
}

std::string summary(const PropertyReport& r) {
  return std::to_string(r.cases_run) + " cases, " + std::to_string(r.skipped) + " skipped, " +
         std::to_string(r.obligations) + " obligations, " + std::to_string(r.failures.size()) + " failures, undecided " +
         std::to_string(r.undecided) + " (" + fmt(100.0 * r.undecided_rate(), "%.2f%%") + "), " +
         fmt(r.elapsed_seconds) + " s";
}

void require_clean(Line& line, const PropertyReport& r, std::size_t expected_cases) {
  line.require(r.cases_run + r.skipped == expected_cases, "case count");
  line.require(r.failures.size() <= kMaxFailures, "failures:\n" + r.text());
  line.detail = summary(r) + (line.detail.empty() ? "" : " | " + line.detail);
}

Line subject_reduction() {
  Line line;
  PropertyReport r = prop_subject_reduction(config(kCases));
  line.require(r.elapsed_seconds <= kSubjectReductionSeconds, "too slow");
  require_clean(line, r, kCases);
  return line;
}

Line diamond() {
  Line line;
  GenConfig cfg = config(kCases);
  cfg.max_size = kDiamondSize;
  require_clean(line, prop_diamond_completion(cfg), kCases);
  return line;
}

Line progress() {
  Line line;
  PropertyReport r = prop_progress_safety(config(kCases));
  line.require(r.undecided <= kMaxUndecided, "undecided cases");
  require_clean(line, r, kCases);
  return line;
}

Line canonicity() {
  Line line;
  PropertyReport r = prop_canonicity(config(kCanonicityCases));
  line.require(r.undecided <= kMaxUndecided, "undecided cases");
  require_clean(line, r, kCanonicityCases);
  return line;
}

Line coherence() {
  Line line;
  std::size_t accepted = 0, valid = 0;
  for (const fs::path& f : corpus_files()) {
    frontend::SourceFile file = frontend::parse_source(slurp(f));
    const LevelDomain* domain = domain_by_name(file.domain.value_or("nat-omega"));
    TypeChecker tc(*domain, Fuel{file.fuel.value_or(kEvalFuel)});
    for (const auto& d : frontend::resolve_source(file)) {
      for (const Judgement& j : {tc.check(Context(), d.body, d.type), tc.infer(Context(), d.body)}) {
        if (!j.accepted()) continue;
        ++accepted;
        bool ok = check_derivation(j.derivation, *domain).ok && j.derivation->ctx.empty() &&
                  alpha_equal(*j.derivation->term, d.body);
        valid += ok;
        line.require(ok, "corpus " + d.source->name + ": emitted derivation invalid");
      }
    }
  }
  PropertyReport r = prop_coherence(config(kCases));
  require_clean(line, r, kCases);
  line.detail = "corpus " + std::to_string(valid) + "/" + std::to_string(accepted) + " acceptances validated; " +
                line.detail;
  return line;
}

Line consistency() {
  Line line;
  fs::path adversarial = fs::path(TTBFL_CORPUS_DIR) / "consistency.ttbfl";
  frontend::SourceFile file = frontend::parse_source(slurp(adversarial));
  TypeChecker tc(nat_omega_domain(), Fuel{kEvalFuel});
  std::size_t attempts = 0, accepted = 0;
  for (const auto& d : frontend::resolve_source(file)) {
    ++attempts;
    bool bot = tc.check(Context(), d.body, Term::mty()).accepted();
    accepted += bot;
    line.require(!bot, d.source->name + " accepted at Bot");
  }
  PropertyReport r = prop_consistency(config(kCases));
  require_clean(line, r, kCases);
  line.detail = "adversarial corpus " + std::to_string(accepted) + "/" + std::to_string(attempts) +
                " accepted at Bot; random closed terms: " + line.detail;
  return line;
}

Line mutation_canary() {
  Line line;
  ScopedSubstitutionFault fault(SubstitutionFault::OffByOneBinderDepth);
  GenConfig cfg = config(kCases);
  GenConfig diamond_cfg = cfg;
  diamond_cfg.max_size = kDiamondSize;
  std::vector<std::pair<std::string, PropertyReport>> runs;
  runs.emplace_back("subject-reduction", prop_subject_reduction(cfg));
  runs.emplace_back("diamond", prop_diamond_completion(diamond_cfg));
  runs.emplace_back("progress", prop_progress_safety(cfg));
  runs.emplace_back("canonicity", prop_canonicity(config(kCanonicityCases)));
  std::string counts;
  for (const auto& [name, r] : runs) {
    line.require(!r.failures.empty(), name + " found nothing");
    counts += (counts.empty() ? "" : ", ") + name + " " + std::to_string(r.failures.size());
  }
  line.detail = "failures with broken substitution: " + counts + (line.detail.empty() ? "" : " | " + line.detail);
  return line;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Line()>>> criteria = {
      {"corpus reproduction", corpus_reproduction},
      {"absurd regression", absurd_regression},
      {"subject reduction", subject_reduction},
      {"diamond / completion", diamond},
      {"progress / type safety", progress},
      {"canonicity", canonicity},
      {"checker coherence", coherence},
      {"consistency smoke", consistency},
      {"mutation canary", mutation_canary},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Line line;
    try {
      line = criteria[i].second();
    } catch (const std::exception& e) {
      line.pass = false;
      line.detail = std::string("exception: ") + e.what();
    }
    all = all && line.pass;
    std::printf("%s %zu %s: %s\n", line.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, line.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
