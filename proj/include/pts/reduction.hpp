#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pts/environment.hpp"
#include "pts/term.hpp"

namespace pts {

enum class Strategy { HeadDef, HeadLinear };

std::string_view strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(std::string_view name);

enum class EventKind { Start, DeltaUnfold, BetaContract, RewriteFire, LinearSubst };

std::string_view event_kind_name(EventKind k);

struct StepEvent {
    EventKind kind = EventKind::Start;
    std::string name;       // unfolded constant or fired rule
    std::size_t count = 0;  // contracted beta redexes
    std::string path;       // occurrence path of a linear substitution
};

/// Human readable form, e.g. `delta l₂ + beta 3`.
std::string describe(const StepEvent& e);

struct StepResult {
    StepEvent event;
    Term term;
};

/// Raised by the throwing step functions when no step applies.
class HeadNormal : public std::runtime_error {
public:
    HeadNormal() : std::runtime_error("term is in head normal form") {}
};

/// One head-definitional step under the leading lambdas: unfold the head
/// definition and contract the exposed leading beta redexes, or contract the
/// head beta chain (lets count as redexes), or fire one head rewrite rule.
std::optional<StepResult> try_head_def_step(const GlobalEnv& env, const Term& t);
StepResult head_def_step(const GlobalEnv& env, const Term& t);

/// Contracts the head beta/let chain only; no delta, no rules.
std::optional<Term> head_beta_step(const Term& t);

/// Head linear step on a machine state. The state is an ordinary term whose
/// prime redexes and lets act as the pending substitution context: the head
/// variable occurrence is replaced by its binding and nothing else moves.
/// Head constants are unfolded in place. When the head is an opaque constant
/// with an applicable rule, the rule fires on the readback.
std::optional<StepResult> try_head_linear_step(const GlobalEnv& env, const Term& state);
StepResult head_linear_step(const GlobalEnv& env, const Term& state);

/// Flattens the pending substitutions of a head linear state: contracts
/// head beta redexes and lets until none is left. No delta.
Term readback(const Term& state, std::size_t fuel = 100000);

/// Beta/delta/let/rule normal form; throws TypeError(FuelExhausted).
Term normalize(const GlobalEnv& env, const Term& t, std::size_t fuel = 100000);

struct TraceStep {
    std::size_t index = 0;
    StepEvent event;
    Term raw;                      // observable state (readback for head-linear)
    std::string display;           // folded display of raw
    std::optional<Term> machine;   // head-linear machine state
};

enum class StopReason { HeadNormal, MaxSteps, Loop };

std::string_view stop_reason_name(StopReason r);

struct Trace {
    std::vector<TraceStep> steps;  // steps[0] is the start term
    StopReason stop = StopReason::MaxSteps;
    std::optional<std::size_t> loop_entry;  // set when stop == Loop
};

/// Runs up to `max_steps` steps from `t`. Stops early at a head normal form
/// or when an observed state repeats; the repeated state is the last row.
Trace trace(const GlobalEnv& env, const Term& t, Strategy strategy, std::size_t max_steps);

enum class ErasureMode { AnnotationsOnly, DropPolymorphism };

std::string_view erasure_mode_name(ErasureMode m);
std::optional<ErasureMode> erasure_mode_from_name(std::string_view name);

class ErasureNeedsTypes : public std::runtime_error {
public:
    ErasureNeedsTypes() : std::runtime_error("DropPolymorphism erasure needs a typed environment") {}
};

/// AnnotationsOnly replaces lambda domains and let annotations by the hole
/// marker and turns products and sorts into holes. DropPolymorphism also
/// removes binders over kinds (domain `#`, `##`, or an arity ending in one
/// of them), together with the matching arguments; it needs `env` to
/// classify binders.
Term erase(const Term& t, ErasureMode mode, const GlobalEnv* env = nullptr);

/// Erased copy of an environment, built without checking. Definitions keep
/// their types. Under DropPolymorphism, definitions and rules whose type is
/// a kind get a hole body or are dropped.
GlobalEnv erase_env(const GlobalEnv& env, ErasureMode mode);

/// How states are compared by detect_loop. Exact compares states up to
/// alpha-equivalence. ArgumentNormal first expands the head and normalizes
/// every spine argument, so states that differ only by redexes inside
/// arguments (such as erased identity wrappers) are identified.
enum class Observation { Exact, ArgumentNormal };

std::string_view observation_name(Observation o);

/// Exact for typed runs, ArgumentNormal for erased ones.
Observation default_observation(std::optional<ErasureMode> mode);

/// Observed form of a state under `obs`. Arguments whose normalization runs
/// out of fuel are kept expanded but unnormalized.
Term observe(const GlobalEnv& env, const Term& state, Observation obs);

struct LoopReport {
    bool found = false;
    Observation observation = Observation::Exact;
    std::size_t entry = 0;
    std::size_t period = 0;
    std::size_t bound = 0;  // steps examined
    std::optional<ErasureMode> mode;
};

/// Runs `strategy` for at most `bound` steps (on the erased term and
/// environment when `mode` is set) and reports the first repeated state.
/// Head-linear runs observe readbacks and ignore steps that leave the
/// readback unchanged, so indices count distinct observations.
LoopReport detect_loop(const GlobalEnv& env, const Term& t, Strategy strategy,
                       std::optional<ErasureMode> mode, std::size_t bound,
                       std::optional<Observation> obs = std::nullopt);

/// The first `count` observed states used by detect_loop, for replaying
/// reports.
std::vector<Term> observations(const GlobalEnv& env, const Term& t, Strategy strategy,
                               std::optional<ErasureMode> mode, std::size_t count,
                               std::optional<Observation> obs = std::nullopt);

}  // namespace pts
