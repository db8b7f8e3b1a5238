#include <doctest.h>

#include <random>

#include "oracle.hpp"
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

// Raw rows up to, not including, the first rule firing; the oracle has no
// rules.
std::vector<Term> rows_before_rules(const Trace& tr) {
    std::vector<Term> out;
    for (const auto& s : tr.steps) {
        if (s.event.kind == EventKind::RewriteFire) break;
        out.push_back(s.raw);
    }
    return out;
}

// Every closed term a bundle mentions: definition types and bodies, and
// the key terms.
std::vector<Term> corpus_terms(const ParadoxBundle& b) {
    std::vector<Term> out;
    for (std::size_t i = 0; i < b.env.size(); ++i) {
        if (const auto* d = std::get_if<Def>(&b.env.entry(i))) {
            out.push_back(d->type);
            out.push_back(d->body);
        } else if (const auto* c = std::get_if<Decl>(&b.env.entry(i))) {
            out.push_back(c->type);
        }
    }
    for (const auto& [name, t] : b.key_terms) out.push_back(t);
    return out;
}

class RandomTerms {
public:
    explicit RandomTerms(unsigned seed) : rng_(seed) {}

    // A term whose free variables are below `depth`.
    Term make(unsigned depth, int fuel) {
        int pick = pick_(rng_) % (fuel <= 0 ? 2 : 7);
        switch (pick) {
        case 0: return depth > 0 ? mk_var(static_cast<std::uint32_t>(rng_() % depth)) : mk_const("c");
        case 1: return rng_() % 2 ? mk_const("c") : mk_sort(Sort::Star);
        case 2:
        case 3: return mk_app(make(depth, fuel - 1), make(depth, fuel - 1));
        case 4: return mk_lam(hint(), make(depth, fuel - 2), make(depth + 1, fuel - 1));
        case 5: return mk_pi(hint(), make(depth, fuel - 2), make(depth + 1, fuel - 1));
        default: return mk_let(hint(), make(depth, fuel - 2), make(depth, fuel - 2), make(depth + 1, fuel - 1));
        }
    }

    // Same term with fresh binder hints.
    Term rename(const Term& t) {
        switch (t.kind()) {
        case Kind::App: return mk_app(rename(t.fn()), rename(t.arg()));
        case Kind::Lam: return mk_lam(hint(), rename(t.dom()), rename(t.body()));
        case Kind::Pi: return mk_pi(hint(), rename(t.dom()), rename(t.body()));
        case Kind::Let: return mk_let(hint(), rename(t.ann()), rename(t.defn()), rename(t.body()));
        default: return t;
        }
    }

private:
    std::string hint() { return std::string(1, static_cast<char>('a' + rng_() % 26)); }

    std::mt19937 rng_;
    std::uniform_int_distribution<int> pick_{0, 99};
};

}  // namespace

TEST_CASE("instantiate and shift agree with the oracle on random terms") {
    RandomTerms gen(20261016);
    for (int i = 0; i < 500; ++i) {
        unsigned depth = i % 4;
        Term body = gen.make(depth + 1, 6);
        Term value = gen.make(depth, 4);
        CHECK(alpha_eq(instantiate(body, value), oracle::subst(body, value)));
        CHECK(alpha_eq(shift(body, 3, 1), oracle::lift(body, 3, 1)));
    }
}

TEST_CASE("substitution respects alpha equivalence") {
    RandomTerms gen(7);
    for (int i = 0; i < 300; ++i) {
        Term a = gen.make(1, 6);
        Term b = gen.rename(a);
        Term v = gen.make(0, 3);
        REQUIRE(alpha_eq(a, b));
        CHECK(a.hash() == b.hash());
        CHECK(alpha_eq(instantiate(a, v), instantiate(b, gen.rename(v))));
    }
}

TEST_CASE("unfold_all is idempotent on corpus terms") {
    for (const auto& id : bundle_ids()) {
        const ParadoxBundle& b = bundle(id);
        for (const Term& t : corpus_terms(b)) {
            Term once = unfold_all(t, b.env);
            CHECK(alpha_eq(unfold_all(once, b.env), once));
        }
    }
}

TEST_CASE("folded displays parse back to the same term") {
    auto round_trip = [](const GlobalEnv& env, const Term& t) {
        std::string shown = fold_display(t, env);
        Term back = elaborate(env, parse_term(shown));
        INFO(shown);
        CHECK(alpha_eq(unfold_all(back, env), unfold_all(t, env)));
    };
    for (const auto& id : bundle_ids()) {
        const ParadoxBundle& b = bundle(id);
        for (const Term& t : corpus_terms(b)) round_trip(b.env, t);
        for (Strategy s : {Strategy::HeadDef, Strategy::HeadLinear}) {
            Trace tr = trace(b.env, bottom_proof(id), s, 20);
            for (const auto& step : tr.steps) {
                round_trip(b.env, step.raw);
                // The display field is the folded form of raw.
                CHECK(step.display == fold_display(step.raw, b.env));
            }
        }
    }
}

TEST_CASE("head-def rows agree with naive full substitution") {
    for (const auto& id : bundle_ids()) {
        const ParadoxBundle& b = bundle(id);
        Trace golden = trace(b.env, bottom_proof(id), Strategy::HeadDef, golden_steps(b));
        INFO(id);
        auto rows = rows_before_rules(golden);
        REQUIRE(rows.size() == golden.steps.size());
        CHECK(oracle::agrees(b.env, rows));
        Trace longer = trace(b.env, bottom_proof(id), Strategy::HeadDef, 15);
        auto more = rows_before_rules(longer);
        CHECK(more.size() >= 3);
        CHECK(oracle::agrees(b.env, more));
    }
}

TEST_CASE("head-linear readbacks agree with naive full substitution") {
    for (const auto& id : bundle_ids()) {
        const ParadoxBundle& b = bundle(id);
        Trace tr = trace(b.env, bottom_proof(id), Strategy::HeadLinear, 40);
        INFO(id);
        auto rows = rows_before_rules(tr);
        CHECK(rows.size() >= 3);
        CHECK(oracle::agrees(b.env, rows));
    }
}

TEST_CASE("the oracle itself reproduces the simple table") {
    const GlobalEnv& env = bundle("simple").env;
    auto states = oracle::run(env, bottom_proof("simple"), 30);
    Term next = unfold_all(elaborate(env, parse_term("l₁ x₀ l₂ l₁")), env);
    bool seen = false;
    for (const auto& s : states) seen = seen || alpha_eq(unfold_all(s, env), next);
    CHECK(seen);
}

TEST_CASE("subject reduction along traces") {
    for (const auto& id : bundle_ids()) {
        const ParadoxBundle& b = bundle(id);
        Term bottom = mk_const("⊥");
        for (Strategy s : {Strategy::HeadDef, Strategy::HeadLinear}) {
            Trace tr = trace(b.env, bottom_proof(id), s, s == Strategy::HeadDef ? 12 : 30);
            for (const auto& step : tr.steps) {
                INFO(id, " ", strategy_name(s), " row ", step.index, ": ", step.display);
                // Only rows are claimed typable: a head-linear machine state
                // substitutes one occurrence while annotations still mention
                // the bound variable.
                CHECK_NOTHROW(check(b.env, step.raw, bottom));
            }
        }
    }
}

TEST_CASE("annotation erasure commutes with beta steps") {
    for (const auto& id : bundle_ids()) {
        const ParadoxBundle& b = bundle(id);
        GlobalEnv erased = erase_env(b.env, ErasureMode::AnnotationsOnly);
        auto states = oracle::run(b.env, unfold_all(bottom_proof(id), b.env), 60);
        REQUIRE(states.size() > 10);
        for (std::size_t i = 0; i + 1 < states.size(); ++i) {
            auto stepped = oracle::step(erased, erase(states[i], ErasureMode::AnnotationsOnly));
            REQUIRE(stepped.has_value());
            CHECK(alpha_eq(*stepped, erase(states[i + 1], ErasureMode::AnnotationsOnly)));
        }
    }
}

TEST_CASE("rule firings preserve types") {
    // Rules never reach the head of the traced proofs; they fire inside
    // conversion, on instances such as the unfolded `match x₀`.
    for (const char* id : {"simple", "refined-axiomatic"}) {
        const ParadoxBundle& b = bundle(id);
        INFO(std::string(id));
        LocalCtx ctx;
        ctx.push("u", elaborate(b.env, parse_term("T A")));
        for (const char* text : {"match (intro X₀)", "match (intro u)"}) {
            Term redex = elaborate(b.env, ctx, parse_term(text, ctx.names()));
            Fuel fuel(kDefaultFuel);
            auto fired = try_rewrite(b.env, redex, ctx, fuel);
            REQUIRE(fired.has_value());
            CHECK(convert(b.env, infer(b.env, ctx, redex), infer(b.env, ctx, *fired), ctx));
        }
    }
}
