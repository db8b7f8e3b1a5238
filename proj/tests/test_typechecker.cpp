#include <doctest.h>

#include "pts/corpus.hpp"
#include "pts/errors.hpp"
#include "pts/parser.hpp"
#include "pts/print.hpp"
#include "pts/typechecker.hpp"
#include "probes.hpp"

using namespace pts;

namespace {

Term term(const GlobalEnv& env, std::string_view text) { return elaborate(env, parse_term(text)); }

Term term_in(const GlobalEnv& env, LocalCtx& ctx, std::string_view text) {
    return elaborate(env, ctx, parse_term(text, ctx.names()));
}

const ParadoxBundle& bundle(std::string_view id) {
    static std::map<std::string, ParadoxBundle, std::less<>> cache;
    auto it = cache.find(id);
    if (it == cache.end()) it = cache.emplace(std::string(id), build_bundle(id)).first;
    return it->second;
}

}  // namespace

TEST_CASE("inference") {
    GlobalEnv base(PtsSpec::preset(PresetId::LambdaHOL));
    CHECK(alpha_eq(infer(base, mk_sort(Sort::Star)), mk_sort(Sort::Box)));
    CHECK(alpha_eq(infer(base, mk_sort(Sort::Box)), mk_sort(Sort::Triangle)));
    try {
        infer(base, mk_sort(Sort::Triangle));
        FAIL("the top sort has no type");
    } catch (const TypeError& e) {
        CHECK(e.kind() == TypeErrorKind::NoAxiom);
    }

    const GlobalEnv& reynolds = bundle("reynolds-A").env;
    CHECK(convert(reynolds, infer(reynolds, term(reynolds, "l₀ p₀ l₂ l₁")), mk_const("⊥")));
    const GlobalEnv& simple = bundle("simple").env;
    CHECK(convert(simple, infer(simple, term(simple, "l₂ p₀ l₂ l₁")), term(simple, "forall (p : *), p")));
}

TEST_CASE("the Reynolds carrier needs the (##, #) rule") {
    const GlobalEnv& simple = bundle("simple").env;
    try {
        infer(simple, parse_term("Pi (X : #) -> (T X -> X) -> X"));
        FAIL("expected NoRule");
    } catch (const TypeError& e) {
        CHECK(e.kind() == TypeErrorKind::NoRule);
        REQUIRE(e.rule().has_value());
        CHECK(e.rule()->first == Sort::Triangle);
        CHECK(e.rule()->second == Sort::Box);
    }
}

TEST_CASE("checking") {
    const GlobalEnv& reynolds = bundle("reynolds-A").env;
    CHECK_NOTHROW(check(reynolds, mk_const("match"), term(reynolds, "A -> T A")));
    try {
        check(reynolds, mk_const("intro"), term(reynolds, "A -> A"));
        FAIL("expected DomainMismatch");
    } catch (const TypeError& e) {
        CHECK(e.kind() == TypeErrorKind::DomainMismatch);
        CHECK(std::string(e.what()).find("T A -> A") != std::string::npos);
    }
    const GlobalEnv& refined = bundle("refined-axiomatic").env;
    CHECK_NOTHROW(check(refined, mk_const("s₁"), term(refined, "forall (x : A), p₀ x -> p₀ (δ x)")));
    CHECK_NOTHROW(check(refined, mk_const("l₀"), term(refined, "forall (p : Pow A), p x₀ -> ¬ (X₀ p)")));
    const GlobalEnv& simple = bundle("simple").env;
    CHECK_NOTHROW(check(simple, mk_const("l₁"), term(simple, "X₀ p₀")));
    CHECK_NOTHROW(check(simple, mk_const("l₁"), term(simple, "match x₀ p₀")));
    CHECK_NOTHROW(check(simple, mk_const("l₂"), term(simple, "p₀ x₀")));
}

TEST_CASE("let is checked with its definition in scope") {
    GlobalEnv env = GlobalEnv(PtsSpec::preset(PresetId::LambdaHOL)).add_entry(Decl{"c", mk_sort(Sort::Star)});
    // Typing the body needs x = c, which the App(Lam) desugaring would lose.
    Term t = parse_term("let x : * := c in fun (y : x) => (fun (z : c) => z) y");
    CHECK_NOTHROW(infer(env, t));
    Term desugared = parse_term("(fun (x : *) => fun (y : x) => (fun (z : c) => z) y) c");
    CHECK_THROWS_AS(infer(env, desugared), TypeError);
}

TEST_CASE("weak head normal forms") {
    GlobalEnv env = GlobalEnv(PtsSpec::preset(PresetId::LambdaHOL))
                        .add_entry(Decl{"A", mk_sort(Sort::Star)})
                        .add_entry(Decl{"c", mk_const("A")});
    CHECK(alpha_eq(whnf(env, parse_term("(fun (x : A) => x) c")), mk_const("c")));

    const GlobalEnv& simple = bundle("simple").env;
    Term w = whnf(simple, term(simple, "match x₀ p₀"));
    CHECK(w.is(Kind::Pi));
    CHECK(alpha_eq(w, whnf(simple, term(simple, "X₀ p₀"))));

    const GlobalEnv& reynolds = bundle("reynolds-A").env;
    LocalCtx ctx;
    ctx.push("u", term(reynolds, "T A"));
    ctx.push("p", term(reynolds, "Pow A"));
    Term lhs = term_in(reynolds, ctx, "match (intro u) p");
    Term rhs = term_in(reynolds, ctx, "Tmap A A δ u p");
    // Both sides reach `u` applied to one argument; the arguments differ only
    // by unreduced redexes, since whnf leaves arguments alone.
    Term wl = whnf(reynolds, lhs, ctx);
    Term wr = whnf(reynolds, rhs, ctx);
    CHECK(alpha_eq(unspine(wl).head, mk_var(1)));
    CHECK(alpha_eq(unspine(wr).head, mk_var(1)));
    CHECK(convert(reynolds, wl, wr, ctx));
}

TEST_CASE("conversion examples") {
    const GlobalEnv& reynolds = bundle("reynolds-A").env;
    CHECK(convert(reynolds, term(reynolds, "match∘intro"), term(reynolds, "Tmap A A (intro∘match)")));
    LocalCtx ctx;
    ctx.push("X", mk_sort(Sort::Box));
    ctx.push("f", term_in(reynolds, ctx, "T X -> X"));
    CHECK(convert(reynolds, term_in(reynolds, ctx, "(ι X f)∘intro"),
                  term_in(reynolds, ctx, "f∘(Tmap A X (ι X f))"), ctx));
    for (const char* id : {"hurkens-B-match1", "hurkens-B-match2"}) {
        const GlobalEnv& h = bundle(id).env;
        CHECK(convert(h, term(h, "match∘intro"), term(h, "Tmap B B (intro∘match)")));
    }
    const GlobalEnv& refined = bundle("refined-axiomatic").env;
    LocalCtx rc;
    rc.push("x", mk_const("A"));
    rc.push("p", term(refined, "Pow A"));
    CHECK(convert(refined, term_in(refined, rc, "match (δ x) p"), term_in(refined, rc, "match x (p∘δ)"), rc));
}

TEST_CASE("conversion is an equivalence on the probe pairs") {
    std::size_t pairs = 0;
    for (const auto& set : probes::probe_sets()) {
        const GlobalEnv& env = bundle(set.bundle).env;
        std::vector<std::pair<std::size_t, Term>> terms;
        for (std::size_t g = 0; g < set.groups.size(); ++g)
            for (const auto& text : set.groups[g]) terms.emplace_back(g, term(env, text));
        const std::size_t n = terms.size();
        std::vector<std::vector<bool>> conv(n, std::vector<bool>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                conv[i][j] = convert(env, terms[i].second, terms[j].second);
                INFO(set.bundle, ": ", set.groups[terms[i].first][0], " vs ", set.groups[terms[j].first][0]);
                CHECK(conv[i][j] == (terms[i].first == terms[j].first));
                ++pairs;
            }
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(conv[i][i]);
            for (std::size_t j = 0; j < n; ++j) {
                CHECK(conv[i][j] == conv[j][i]);
                for (std::size_t k = 0; k < n; ++k)
                    if (conv[i][j] && conv[j][k]) CHECK(conv[i][k]);
            }
        }
    }
    CHECK(pairs >= 20);
}

TEST_CASE("exhausted fuel is an error, not a negative answer") {
    Development dev = check_development_text(
        "const A : *.\nconst a : A.\nconst b : A.\nconst f : A -> A.\nrewrite spin : f $u => f $u.\n");
    REQUIRE(dev.ok);
    try {
        convert(dev.env, parse_term("f a"), parse_term("b"));
        FAIL("expected FuelExhausted");
    } catch (const TypeError& e) {
        CHECK(e.kind() == TypeErrorKind::FuelExhausted);
    }
}

TEST_CASE("inference is deterministic") {
    for (const auto& id : bundle_ids()) {
        const ParadoxBundle& b = bundle(id);
        for (const auto& [name, t] : b.key_terms) {
            CHECK(alpha_eq(infer(b.env, t), infer(b.env, t)));
        }
    }
}

TEST_CASE("lambda-hol developments check under lambda-u-minus with the same types") {
    for (const char* id : {"simple", "refined-axiomatic"}) {
        const ParadoxBundle& hol = bundle(id);
        Development u = check_development_text(bundle_source(id), PtsSpec::preset(PresetId::LambdaUMinus));
        REQUIRE(u.ok);
        for (const auto& [name, t] : hol.key_terms) {
            INFO(id, " ", name);
            CHECK(alpha_eq(infer(hol.env, t), infer(u.env, t)));
        }
    }
}

TEST_CASE("environment extension is monotone") {
    const ParadoxBundle& b = bundle("simple");
    GlobalEnv bigger = b.env.add_entry(Decl{"extra", mk_sort(Sort::Star)});
    for (const auto& [name, t] : b.key_terms) {
        CHECK_NOTHROW(check(bigger, t, b.expected_types.at(name)));
    }
}
