#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ttbfl/context.hpp"
#include "ttbfl/derivation.hpp"
#include "ttbfl/harness/generator.hpp"
#include "ttbfl/term.hpp"

namespace ttbfl::harness {

enum class Suite {
  Generator,  // self-check: every emitted derivation validates
  SubjectReduction,
  Diamond,
  Progress,
  Canonicity,
  Coherence,
  Consistency,
};

inline constexpr Suite kAllSuites[] = {Suite::Generator, Suite::SubjectReduction, Suite::Diamond,
                                       Suite::Progress,  Suite::Canonicity,       Suite::Coherence,
                                       Suite::Consistency};

std::string_view suite_name(Suite s);
std::optional<Suite> suite_from_name(std::string_view name);

struct Counterexample {
  std::size_t case_index = 0;
  Context ctx;
  Term term = Term::mty();      // after shrinking
  Term original = Term::mty();  // as generated
  std::optional<Term> type;   // absent for untyped suites
  std::string detail;
  std::vector<std::string> trace;
};

struct PropertyReport {
  std::string suite;
  std::size_t cases_run = 0;
  std::size_t skipped = 0;      // generation gave up
  std::size_t undecided = 0;    // fuel ran out
  std::size_t obligations = 0;  // individual checks, e.g. one per reduct
  std::vector<Counterexample> failures;
  std::map<Rule, std::size_t> rule_nodes;  // over generated derivations
  double elapsed_seconds = 0;

  bool passed() const { return failures.empty(); }
  double undecided_rate() const { return cases_run ? double(undecided) / double(cases_run) : 0.0; }
  std::string text() const;
  nlohmann::json to_json() const;
};

// Failures beyond this many are recorded without shrinking.
inline constexpr std::size_t kShrinkLimit = 5;
// Upper bound on enumerated parallel reducts per term.
inline constexpr std::size_t kReductCap = 256;

PropertyReport run_suite(Suite suite, const GenConfig& cfg);

PropertyReport prop_generator(const GenConfig& cfg);
PropertyReport prop_subject_reduction(const GenConfig& cfg);
// Untyped; cfg.max_size bounds the random terms.
PropertyReport prop_diamond_completion(const GenConfig& cfg);
PropertyReport prop_progress_safety(const GenConfig& cfg);
PropertyReport prop_canonicity(const GenConfig& cfg);
PropertyReport prop_coherence(const GenConfig& cfg);
// Random closed terms, generated and untyped, never check against Bot.
PropertyReport prop_consistency(const GenConfig& cfg);

// Every one-step reduct of a: the parallel reducts when there are at most
// `cap` of them, otherwise each single contraction. Always includes the
// complete development.
std::vector<Term> one_step_reducts(const Term& a, std::size_t cap = kReductCap);

}  // namespace ttbfl::harness
