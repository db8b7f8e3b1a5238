#include <doctest.h>

#include "pts/corpus.hpp"
#include "pts/parser.hpp"
#include "pts/print.hpp"
#include "pts/reduction.hpp"
#include "pts/typechecker.hpp"

using namespace pts;

namespace {

const ParadoxBundle& bundle(std::string_view id) {
    static std::map<std::string, ParadoxBundle, std::less<>> cache;
    auto it = cache.find(id);
    if (it == cache.end()) it = cache.emplace(std::string(id), build_bundle(id)).first;
    return it->second;
}

Term bottom_proof(std::string_view id) { return bundle(id).development.key_term("bottomProof")->term; }

GlobalEnv small_env() {
    return GlobalEnv(PtsSpec::preset(PresetId::LambdaHOL))
        .add_entry(Decl{"A", mk_sort(Sort::Star)})
        .add_entry(Decl{"c", mk_const("A")});
}

std::vector<std::string> displays(const Trace& tr) {
    std::vector<std::string> out;
    for (const auto& s : tr.steps) out.push_back(s.display);
    return out;
}

struct Pinned {
    const char* bundle;
    ErasureMode mode;
    std::size_t entry;
    std::size_t period;
};

// First observed by running detect_loop; kept as regression values.
const Pinned kPinned[] = {
    {"simple", ErasureMode::AnnotationsOnly, 0, 2},
    {"simple", ErasureMode::DropPolymorphism, 0, 2},
    {"refined-axiomatic", ErasureMode::AnnotationsOnly, 0, 3},
    {"refined-axiomatic", ErasureMode::DropPolymorphism, 0, 3},
    {"reynolds-A", ErasureMode::AnnotationsOnly, 0, 3},
    {"reynolds-A", ErasureMode::DropPolymorphism, 0, 3},
    {"hurkens-B-match1", ErasureMode::AnnotationsOnly, 0, 3},
    {"hurkens-B-match1", ErasureMode::DropPolymorphism, 0, 3},
    {"hurkens-B-match2", ErasureMode::AnnotationsOnly, 0, 3},
    {"hurkens-B-match2", ErasureMode::DropPolymorphism, 0, 3},
};
}  // namespace

TEST_CASE("head-def steps") {
    const GlobalEnv& simple = bundle("simple").env;
    StepResult r = head_def_step(simple, bottom_proof("simple"));
    CHECK(r.event.kind == EventKind::DeltaUnfold);
    CHECK(r.event.name == "l₂");
    CHECK(fold_display(r.term, simple) == "l₁ x₀ l₂ l₁");

    const GlobalEnv& refined = bundle("refined-axiomatic").env;
    CHECK(fold_display(head_def_step(refined, bottom_proof("refined-axiomatic")).term, refined) ==
          "l₁ x₀ l₂ (s₂ p₀ l₁)");

    GlobalEnv env = small_env();
    Term id = parse_term("fun (x : A) => x");
    CHECK_FALSE(try_head_def_step(env, id).has_value());
    CHECK_THROWS_AS(head_def_step(env, id), HeadNormal);

    StepResult beta = head_def_step(env, parse_term("(fun (x : A) (y : A) => y) c c"));
    CHECK(beta.event.kind == EventKind::BetaContract);
    CHECK(beta.event.count == 2);
    CHECK(alpha_eq(beta.term, mk_const("c")));
}

TEST_CASE("head-def steps fire rules at an opaque head") {
    const GlobalEnv& simple = bundle("simple").env;
    Term t = elaborate(simple, parse_term("match (intro X₀) p₀"));
    StepResult r = head_def_step(simple, t);
    CHECK(r.event.kind == EventKind::RewriteFire);
    CHECK(r.event.name == "match_intro");
    CHECK(fold_display(r.term, simple) == "X₀ p₀");
}

TEST_CASE("head-linear steps") {
    GlobalEnv env = small_env();
    StepResult r = head_linear_step(env, parse_term("(fun (x : A) => x x) c"));
    CHECK(r.event.kind == EventKind::LinearSubst);
    CHECK(alpha_eq(r.term, parse_term("(fun (x : A) => c x) c")));
    CHECK(alpha_eq(readback(r.term), parse_term("c c")));

    Term id = parse_term("fun (x : A) => x");
    CHECK_FALSE(try_head_linear_step(env, id).has_value());
    CHECK_THROWS_AS(head_linear_step(env, id), HeadNormal);
}

TEST_CASE("head-linear readbacks reach the next head-def row") {
    const GlobalEnv& simple = bundle("simple").env;
    Trace tr = trace(simple, bottom_proof("simple"), Strategy::HeadLinear, 200);
    Term want = unfold_all(elaborate(simple, parse_term("l₁ x₀ l₂ l₁")), simple);
    bool seen = false;
    for (const auto& s : tr.steps) seen = seen || alpha_eq(unfold_all(s.raw, simple), want);
    CHECK(seen);
    CHECK(tr.stop == StopReason::Loop);
}

TEST_CASE("traces of the simple paradox") {
    const ParadoxBundle& b = bundle("simple");
    Trace tr = trace(b.env, bottom_proof("simple"), Strategy::HeadDef, 10);
    CHECK(displays(tr) == b.golden_traces.at(Strategy::HeadDef));
    CHECK(tr.stop == StopReason::Loop);
    REQUIRE(tr.loop_entry.has_value());
    CHECK(*tr.loop_entry == 0);
    CHECK(tr.steps[0].event.kind == EventKind::Start);
}

TEST_CASE("trace of the refined paradox") {
    const ParadoxBundle& b = bundle("refined-axiomatic");
    Trace tr = trace(b.env, bottom_proof("refined-axiomatic"), Strategy::HeadDef, 5);
    REQUIRE(tr.steps.size() == 6);
    CHECK(displays(tr) == b.golden_traces.at(Strategy::HeadDef));
    CHECK(tr.steps.back().display == "l₁ (δ x₀) (s₁ x₀ l₂) (s₂ (p₀∘δ) (s₂ p₀ l₁))");
    CHECK(tr.stop == StopReason::MaxSteps);
}

TEST_CASE("trace of a head normal form") {
    GlobalEnv env = small_env();
    for (Strategy s : {Strategy::HeadDef, Strategy::HeadLinear}) {
        Trace tr = trace(env, parse_term("fun (x : A) => x"), s, 10);
        CHECK(tr.steps.size() == 1);
        CHECK(tr.stop == StopReason::HeadNormal);
    }
}

TEST_CASE("erasure") {
    GlobalEnv env = small_env();
    Term e = erase(parse_term("fun (x : A) => x"), ErasureMode::AnnotationsOnly);
    CHECK(alpha_eq(e, mk_lam("x", mk_hole(), mk_var(0))));
    CHECK(print_raw(e) == "fun x => x");

    const GlobalEnv& simple = bundle("simple").env;
    Term poly = elaborate(simple, parse_term("fun (X : #) (f : T X -> X) => f"));
    CHECK(alpha_eq(erase(poly, ErasureMode::DropPolymorphism, &simple), mk_lam("f", mk_hole(), mk_var(0))));
    CHECK_THROWS_AS(erase(poly, ErasureMode::DropPolymorphism), ErasureNeedsTypes);

    // Applying the abstraction needs (##, #), so classify in lambda-u-minus.
    const GlobalEnv& reynolds = bundle("reynolds-A").env;
    Term app = elaborate(reynolds, parse_term("(fun (X : #) (f : T X -> X) => f) A intro"));
    CHECK(alpha_eq(erase(app, ErasureMode::DropPolymorphism, &reynolds),
                   mk_app(mk_lam("f", mk_hole(), mk_var(0)), mk_const("intro"))));
    // Annotation erasure keeps the applicative structure.
    Term kept = erase(app, ErasureMode::AnnotationsOnly);
    CHECK(unspine(kept).args.size() == 2);
}

TEST_CASE("loop detection on typed terms") {
    LoopReport simple = detect_loop(bundle("simple").env, bottom_proof("simple"), Strategy::HeadDef,
                                    std::nullopt, 10);
    CHECK(simple.found);
    CHECK(simple.entry == 0);
    CHECK(simple.period == 2);
    CHECK(simple.observation == Observation::Exact);

    for (const char* id : {"refined-axiomatic", "reynolds-A", "hurkens-B-match1", "hurkens-B-match2"}) {
        LoopReport r = detect_loop(bundle(id).env, bottom_proof(id), Strategy::HeadDef, std::nullopt, 1000);
        INFO(id);
        CHECK_FALSE(r.found);
        CHECK(r.bound == 1000);
    }
}

TEST_CASE("loop detection on erased terms") {
    for (const auto& p : kPinned) {
        for (Strategy s : {Strategy::HeadDef, Strategy::HeadLinear}) {
            LoopReport r = detect_loop(bundle(p.bundle).env, bottom_proof(p.bundle), s, p.mode, 10000);
            INFO(p.bundle, " ", erasure_mode_name(p.mode), " ", strategy_name(s));
            CHECK(r.found);
            CHECK(r.entry == p.entry);
            CHECK(r.period == p.period);
            CHECK(r.observation == Observation::ArgumentNormal);
        }
    }
}

TEST_CASE("erased states never repeat exactly") {
    // Control for the observation choice: the erased identity wrappers grow
    // inside arguments, so exact states stay distinct.
    const char* id = "refined-axiomatic";
    for (ErasureMode m : {ErasureMode::AnnotationsOnly, ErasureMode::DropPolymorphism}) {
        LoopReport r = detect_loop(bundle(id).env, bottom_proof(id), Strategy::HeadDef, m, 2000,
                                   Observation::Exact);
        CHECK_FALSE(r.found);
    }
}

TEST_CASE("loop reports replay") {
    for (const auto& p : kPinned) {
        const GlobalEnv& env = bundle(p.bundle).env;
        for (Strategy s : {Strategy::HeadDef, Strategy::HeadLinear}) {
            LoopReport r = detect_loop(env, bottom_proof(p.bundle), s, p.mode, 10000);
            REQUIRE(r.found);
            auto obs = observations(env, bottom_proof(p.bundle), s, p.mode, r.entry + r.period + 1);
            REQUIRE(obs.size() == r.entry + r.period + 1);
            CHECK(alpha_eq(obs[r.entry], obs[r.entry + r.period]));
            for (std::size_t i = 0; i < r.entry + r.period; ++i)
                for (std::size_t j = i + 1; j < r.entry + r.period; ++j) CHECK_FALSE(alpha_eq(obs[i], obs[j]));
        }
    }
    LoopReport simple = detect_loop(bundle("simple").env, bottom_proof("simple"), Strategy::HeadDef,
                                    std::nullopt, 10);
    auto obs = observations(bundle("simple").env, bottom_proof("simple"), Strategy::HeadDef, std::nullopt, 3);
    CHECK(alpha_eq(obs[simple.entry], obs[simple.entry + simple.period]));
}

TEST_CASE("traces are deterministic") {
    for (const auto& id : bundle_ids()) {
        for (Strategy s : {Strategy::HeadDef, Strategy::HeadLinear}) {
            Trace a = trace(bundle(id).env, bottom_proof(id), s, 20);
            Trace b = trace(bundle(id).env, bottom_proof(id), s, 20);
            CHECK(displays(a) == displays(b));
            REQUIRE(a.steps.size() == b.steps.size());
            for (std::size_t i = 0; i < a.steps.size(); ++i) CHECK(alpha_eq(a.steps[i].raw, b.steps[i].raw));
        }
    }
}

TEST_CASE("name lookups for strategies and modes") {
    CHECK(strategy_from_name("head-def") == Strategy::HeadDef);
    CHECK(strategy_from_name("head-linear") == Strategy::HeadLinear);
    CHECK_FALSE(strategy_from_name("cbv").has_value());
    CHECK(erasure_mode_from_name("annotations") == ErasureMode::AnnotationsOnly);
    CHECK(erasure_mode_from_name("poly") == ErasureMode::DropPolymorphism);
    CHECK(default_observation(std::nullopt) == Observation::Exact);
    CHECK(default_observation(ErasureMode::AnnotationsOnly) == Observation::ArgumentNormal);
}
