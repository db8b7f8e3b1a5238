#pragma once

// Naive full-substitution head reducer used as a test oracle. It has its own
// shifting and substitution and shares only the term constructors with the
// library, so agreement with the engine is evidence rather than tautology.

#include <optional>
#include <vector>

#include "pts/environment.hpp"
#include "pts/term.hpp"

namespace oracle {

using pts::Kind;
using pts::Term;

// Adds d to every variable index >= c.
inline Term lift(const Term& t, long d, unsigned c = 0) {
    switch (t.kind()) {
    case Kind::Var: return t.index() >= c ? pts::mk_var(static_cast<unsigned>(t.index() + d), t.name()) : t;
    case Kind::App: return pts::mk_app(lift(t.fn(), d, c), lift(t.arg(), d, c));
    case Kind::Lam: return pts::mk_lam(t.name(), lift(t.dom(), d, c), lift(t.body(), d, c + 1));
    case Kind::Pi: return pts::mk_pi(t.name(), lift(t.dom(), d, c), lift(t.body(), d, c + 1));
    case Kind::Let:
        return pts::mk_let(t.name(), lift(t.ann(), d, c), lift(t.defn(), d, c), lift(t.body(), d, c + 1));
    default: return t;
    }
}

// body[j := v], where v lives outside the binder being removed.
inline Term subst(const Term& body, const Term& v, unsigned j = 0) {
    switch (body.kind()) {
    case Kind::Var:
        if (body.index() == j) return lift(v, j);
        if (body.index() > j) return pts::mk_var(body.index() - 1, body.name());
        return body;
    case Kind::App: return pts::mk_app(subst(body.fn(), v, j), subst(body.arg(), v, j));
    case Kind::Lam: return pts::mk_lam(body.name(), subst(body.dom(), v, j), subst(body.body(), v, j + 1));
    case Kind::Pi: return pts::mk_pi(body.name(), subst(body.dom(), v, j), subst(body.body(), v, j + 1));
    case Kind::Let:
        return pts::mk_let(body.name(), subst(body.ann(), v, j), subst(body.defn(), v, j),
                           subst(body.body(), v, j + 1));
    default: return body;
    }
}

// One head step under leading lambdas: a single beta redex, a let, or a
// single delta unfolding of the head constant. No rewrite rules.
inline std::optional<Term> step(const pts::GlobalEnv& env, const Term& t) {
    if (t.is(Kind::Lam)) {
        auto b = step(env, t.body());
        if (!b) return std::nullopt;
        return pts::mk_lam(t.name(), t.dom(), *b);
    }
    std::vector<Term> args;
    Term head = t;
    while (head.is(Kind::App)) {
        args.insert(args.begin(), head.arg());
        head = head.fn();
    }
    std::size_t used = 0;
    if (head.is(Kind::Lam) && !args.empty()) {
        head = subst(head.body(), args[0]);
        used = 1;
    } else if (head.is(Kind::Let)) {
        head = subst(head.body(), head.defn());
    } else if (head.is(Kind::Const) && env.find_def(head.name())) {
        head = env.find_def(head.name())->body;
    } else {
        return std::nullopt;
    }
    for (std::size_t i = used; i < args.size(); ++i) head = pts::mk_app(head, args[i]);
    return head;
}

// States t, step(t), step(step(t)), ... up to `limit` steps.
inline std::vector<Term> run(const pts::GlobalEnv& env, const Term& t, std::size_t limit) {
    std::vector<Term> out{t};
    for (std::size_t i = 0; i < limit; ++i) {
        auto n = step(env, out.back());
        if (!n) break;
        out.push_back(*n);
    }
    return out;
}

// True when every state in `rows` occurs in the naive sequence from rows[0],
// in order, compared after full unfolding.
inline bool agrees(const pts::GlobalEnv& env, const std::vector<Term>& rows, std::size_t limit = 2000) {
    if (rows.empty()) return true;
    std::vector<Term> naive = run(env, rows.front(), limit);
    std::size_t j = 0;
    for (const auto& r : rows) {
        Term want = pts::unfold_all(r, env);
        while (j < naive.size() && !pts::alpha_eq(pts::unfold_all(naive[j], env), want)) ++j;
        if (j == naive.size()) return false;
    }
    return true;
}

}  // namespace oracle
