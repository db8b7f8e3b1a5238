#include "pts/typechecker.hpp"

#include <algorithm>

#include "pts/print.hpp"

namespace pts {

void Fuel::consume() {
    if (remaining_ == 0)
        throw TypeError(TypeErrorKind::FuelExhausted, "reduction step budget exhausted");
    --remaining_;
}

void LocalCtx::push(std::string hint, Term type, std::optional<Term> value) {
    bindings_.push_back({std::move(hint), std::move(type), std::move(value)});
}

void LocalCtx::pop() { bindings_.pop_back(); }

const LocalBinding& LocalCtx::at(std::uint32_t i) const {
    return bindings_.at(bindings_.size() - 1 - i);
}

Term LocalCtx::type_of(std::uint32_t i) const { return shift(at(i).type, i + 1); }

std::optional<Term> LocalCtx::value_of(std::uint32_t i) const {
    if (i >= bindings_.size()) return std::nullopt;
    const auto& b = at(i);
    if (!b.value) return std::nullopt;
    return shift(*b.value, i + 1);
}

std::vector<std::string> LocalCtx::names() const {
    std::vector<std::string> out;
    for (const auto& b : bindings_) out.push_back(b.hint);
    return out;
}

namespace {

struct Binder {
    LocalCtx& ctx;
    Binder(LocalCtx& c, std::string hint, Term type, std::optional<Term> value = std::nullopt)
        : ctx(c) {
        ctx.push(std::move(hint), std::move(type), std::move(value));
    }
    ~Binder() { ctx.pop(); }
    Binder(const Binder&) = delete;
    Binder& operator=(const Binder&) = delete;
};

Term beta_chain(Term head, const std::vector<Term>& args, std::size_t& used) {
    used = 0;
    while (head.is(Kind::Lam) && used < args.size()) head = instantiate(head.body(), args[used++]);
    return head;
}

Term rest_apps(Term head, const std::vector<Term>& args, std::size_t from) {
    for (std::size_t i = from; i < args.size(); ++i) head = mk_app(std::move(head), args[i]);
    return head;
}

Term reduce(const GlobalEnv& env, Term t, const LocalCtx& ctx, Fuel& fuel, bool delta) {
    for (;;) {
        auto sp = unspine(t);
        const Term& h = sp.head;
        if (h.is(Kind::Lam) && !sp.args.empty()) {
            fuel.consume();
            std::size_t used = 0;
            Term r = beta_chain(h, sp.args, used);
            t = rest_apps(r, sp.args, used);
            continue;
        }
        if (h.is(Kind::Let)) {
            fuel.consume();
            t = mk_apps(instantiate(h.body(), h.defn()), sp.args);
            continue;
        }
        if (h.is(Kind::Var)) {
            if (auto v = ctx.value_of(h.index())) {
                fuel.consume();
                t = mk_apps(*v, sp.args);
                continue;
            }
            return t;
        }
        if (h.is(Kind::Const)) {
            if (const Def* d = env.find_def(h.name())) {
                if (!delta) return t;
                fuel.consume();
                t = mk_apps(d->body, sp.args);
                continue;
            }
            if (auto r = try_rewrite(env, t, ctx, fuel)) {
                t = *r;
                continue;
            }
        }
        return t;
    }
}

class Checker {
public:
    Checker(const GlobalEnv& env, LocalCtx& ctx) : env_(env), ctx_(ctx) {}

    Term infer(const Term& t) {
        switch (t.kind()) {
        case Kind::Sort: {
            auto s = env_.spec().axiom_of(t.sort());
            if (!s || !env_.spec().has_sort(t.sort()))
                fail(TypeErrorKind::NoAxiom,
                     "sort " + std::string(sort_symbol(t.sort())) + " has no type");
            return mk_sort(*s);
        }
        case Kind::Var:
            if (t.index() >= ctx_.size()) fail(TypeErrorKind::UnknownConstant, "unbound variable");
            return ctx_.type_of(t.index());
        case Kind::Const: {
            auto ty = env_.type_of(t.name());
            if (!ty) fail(TypeErrorKind::UnknownConstant, "unknown constant `" + t.name() + "`");
            return *ty;
        }
        case Kind::Meta: {
            auto it = ctx_.meta_types.find(t.name());
            if (it == ctx_.meta_types.end())
                fail(TypeErrorKind::UnknownConstant, "unbound metavariable $" + t.name());
            return it->second;
        }
        case Kind::Hole: fail(TypeErrorKind::NotASort, "erased subterm has no type");
        case Kind::App: {
            Term fty;
            {
                Seg s(*this, "fn");
                fty = infer(t.fn());
            }
            Term pi = whnf_here(fty);
            if (!pi.is(Kind::Pi))
                fail(TypeErrorKind::NotAFunction,
                     "`" + show(t.fn()) + "` has type `" + show(fty) + "`");
            Term aty;
            {
                Seg s(*this, "arg");
                aty = infer(t.arg());
                if (!conv(aty, pi.dom()))
                    mismatch("argument `" + show(t.arg()) + "` has type `" + show(aty) +
                                 "` but `" + show(pi.dom()) + "` was expected",
                             {t.arg(), aty, pi.dom()});
            }
            return instantiate(pi.body(), t.arg());
        }
        case Kind::Lam: {
            Sort s1;
            {
                Seg s(*this, "dom");
                s1 = infer_sort(t.dom());
            }
            Term bty;
            Sort s2;
            {
                Seg s(*this, "body");
                Binder b(ctx_, t.name(), t.dom());
                bty = infer(t.body());
                s2 = infer_sort(bty);
            }
            if (!env_.spec().rule_of(s1, s2)) no_rule(s1, s2);
            return mk_pi(t.name(), t.dom(), bty);
        }
        case Kind::Pi: {
            Sort s1;
            Sort s2;
            {
                Seg s(*this, "dom");
                s1 = infer_sort(t.dom());
            }
            {
                Seg s(*this, "cod");
                Binder b(ctx_, t.name(), t.dom());
                s2 = infer_sort(t.body());
            }
            auto s3 = env_.spec().rule_of(s1, s2);
            if (!s3) no_rule(s1, s2);
            return mk_sort(*s3);
        }
        case Kind::Let: {
            {
                Seg s(*this, "ann");
                infer_sort(t.ann());
            }
            {
                Seg s(*this, "defn");
                check(t.defn(), t.ann());
            }
            Term bty;
            {
                Seg s(*this, "body");
                Binder b(ctx_, t.name(), t.ann(), t.defn());
                bty = infer(t.body());
            }
            return instantiate(bty, t.defn());
        }
        }
        fail(TypeErrorKind::NotASort, "unsupported term");
    }

    Sort infer_sort(const Term& t) {
        Term ty = infer(t);
        Term w = whnf_here(ty);
        if (!w.is(Kind::Sort))
            fail(TypeErrorKind::NotASort, "`" + show(t) + "` has type `" + show(ty) +
                                              "`, which is not a sort");
        return w.sort();
    }

    void check(const Term& t, const Term& expected) {
        Term ty = infer(t);
        if (!conv(ty, expected))
            mismatch("`" + show(t) + "` has type `" + show(ty) + "` but `" + show(expected) +
                         "` was expected",
                     {t, ty, expected});
    }

    void check_definition(const Term& body, const Term& type) {
        Term b = body;
        Term ty = type;
        std::size_t pushed = 0;
        try {
            while (b.is(Kind::Lam)) {
                Term pi = whnf_here(ty);
                if (!pi.is(Kind::Pi)) break;
                {
                    Seg s(*this, "dom");
                    infer_sort(b.dom());
                    if (!conv(b.dom(), pi.dom()))
                        fail(TypeErrorKind::DomainMismatch,
                             "binder `" + b.name() + "` has domain `" + show(b.dom()) +
                                 "` but `" + show(pi.dom()) + "` was expected");
                }
                ctx_.push(b.name(), b.dom());
                ++pushed;
                path_.push_back("body");
                ty = pi.body();
                b = b.body();
            }
            check(b, ty);
        } catch (...) {
            for (; pushed > 0; --pushed) {
                ctx_.pop();
                path_.pop_back();
            }
            throw;
        }
        for (; pushed > 0; --pushed) {
            ctx_.pop();
            path_.pop_back();
        }
    }

    void check_entry_type(const Term& type) {
        if (!is_arity(type)) {
            infer_sort(type);
            return;
        }
        std::size_t pushed = 0;
        Term cur = type;
        try {
            while (cur.is(Kind::Pi)) {
                Seg s(*this, "dom");
                infer_sort(cur.dom());
                ctx_.push(cur.name(), cur.dom());
                ++pushed;
                cur = cur.body();
            }
        } catch (...) {
            for (; pushed > 0; --pushed) ctx_.pop();
            throw;
        }
        for (; pushed > 0; --pushed) ctx_.pop();
    }

    bool conv(const Term& a, const Term& b) {
        Fuel fuel;
        return convert(env_, a, b, ctx_, fuel);
    }

    Term whnf_here(const Term& t) {
        Fuel fuel;
        return whnf(env_, t, ctx_, fuel);
    }

    [[noreturn]] void fail(TypeErrorKind kind, std::string detail) {
        throw TypeError(kind, std::move(detail), path());
    }

    [[noreturn]] void mismatch(std::string detail, std::vector<Term> terms) {
        TypeError e(TypeErrorKind::DomainMismatch, std::move(detail), path());
        e.terms = std::move(terms);
        e.names = ctx_.names();
        throw e;
    }

    [[noreturn]] void no_rule(Sort s1, Sort s2) {
        throw TypeError(TypeErrorKind::NoRule,
                        "no product rule (" + std::string(sort_symbol(s1)) + ", " +
                            std::string(sort_symbol(s2)) + ") in " + env_.spec().name(),
                        path(), std::make_pair(s1, s2));
    }

private:
    struct Seg {
        Checker& c;
        Seg(Checker& ch, const char* name) : c(ch) { c.path_.push_back(name); }
        ~Seg() { c.path_.pop_back(); }
    };

    std::string path() const {
        std::string out;
        for (const auto& p : path_) {
            if (!out.empty()) out += "/";
            out += p;
        }
        return out;
    }

    std::string show(const Term& t) const {
        try {
            return fold_display(t, env_, ctx_);
        } catch (const std::exception&) {
            return print_raw(t, ctx_.names());
        }
    }

    const GlobalEnv& env_;
    LocalCtx& ctx_;
    std::vector<std::string> path_;
};

class Converter {
public:
    Converter(const GlobalEnv& env, const LocalCtx& ctx, Fuel& fuel)
        : env_(env), ctx_(ctx), fuel_(fuel) {}

    bool run(const Term& a0, const Term& b0) {
        if (alpha_eq(a0, b0)) return true;
        Term a = whnf_core(env_, a0, ctx_, fuel_);
        Term b = whnf_core(env_, b0, ctx_, fuel_);
        for (;;) {
            if (alpha_eq(a, b)) return true;
            auto sa = unspine(a);
            auto sb = unspine(b);
            const Def* da = sa.head.is(Kind::Const) ? env_.find_def(sa.head.name()) : nullptr;
            const Def* db = sb.head.is(Kind::Const) ? env_.find_def(sb.head.name()) : nullptr;
            if (!da && !db) return structural(sa, sb);
            if (da && db && da == db && sa.args.size() == sb.args.size() && args_conv(sa, sb))
                return true;
            std::size_t pa = da ? *env_.position(da->name) : 0;
            std::size_t pb = db ? *env_.position(db->name) : 0;
            bool unfold_a = da && (!db || pa >= pb);
            bool unfold_b = db && (!da || pb >= pa);
            if (unfold_a) a = whnf_core(env_, unfold_head(sa, *da), ctx_, fuel_);
            if (unfold_b) b = whnf_core(env_, unfold_head(sb, *db), ctx_, fuel_);
        }
    }

private:
    Term unfold_head(const Spine& s, const Def& d) {
        fuel_.consume();
        return mk_apps(d.body, s.args);
    }

    bool args_conv(const Spine& sa, const Spine& sb) {
        for (std::size_t i = 0; i < sa.args.size(); ++i)
            if (!run(sa.args[i], sb.args[i])) return false;
        return true;
    }

    bool structural(const Spine& sa, const Spine& sb) {
        const Term& ha = sa.head;
        const Term& hb = sb.head;
        if (ha.kind() != hb.kind() || sa.args.size() != sb.args.size()) return false;
        bool heads = false;
        switch (ha.kind()) {
        case Kind::Sort: heads = ha.sort() == hb.sort(); break;
        case Kind::Var: heads = ha.index() == hb.index(); break;
        case Kind::Const:
        case Kind::Meta: heads = ha.name() == hb.name(); break;
        case Kind::Hole: heads = true; break;
        case Kind::Lam:
        case Kind::Pi: {
            if (!run(ha.dom(), hb.dom())) return false;
            Binder bind(ctx_, ha.name(), ha.dom());
            heads = run(ha.body(), hb.body());
            break;
        }
        case Kind::Let:
        case Kind::App: heads = false; break;
        }
        return heads && args_conv(sa, sb);
    }

    const GlobalEnv& env_;
    LocalCtx ctx_;
    Fuel& fuel_;
};

class Elaborator {
public:
    Elaborator(const GlobalEnv& env, LocalCtx& ctx) : env_(env), ctx_(ctx) {}

    Term run(const Term& t) {
        switch (t.kind()) {
        case Kind::App: {
            auto sp = unspine(t);
            if (sp.head.is(Kind::Const) && sp.head.name() == kComposeName && sp.args.size() >= 2) {
                Term g = run(sp.args[0]);
                Term f = run(sp.args[1]);
                Term fty = whnf(env_, infer(env_, ctx_, f), ctx_);
                if (!fty.is(Kind::Pi))
                    throw TypeError(TypeErrorKind::NotAFunction,
                                    "right operand of composition is not a function");
                Term comp = mk_lam("x", fty.dom(),
                                   mk_app(shift(g, 1), mk_app(shift(f, 1), mk_var(0, "x"))));
                std::vector<Term> rest;
                for (std::size_t i = 2; i < sp.args.size(); ++i) rest.push_back(run(sp.args[i]));
                return mk_apps(comp, rest);
            }
            return mk_app(run(t.fn()), run(t.arg()));
        }
        case Kind::Lam:
        case Kind::Pi: {
            Term dom = run(t.dom());
            Binder b(ctx_, t.name(), dom);
            Term body = run(t.body());
            return t.is(Kind::Lam) ? mk_lam(t.name(), dom, body) : mk_pi(t.name(), dom, body);
        }
        case Kind::Let: {
            Term ann = run(t.ann());
            Term defn = run(t.defn());
            Binder b(ctx_, t.name(), ann, defn);
            return mk_let(t.name(), ann, defn, run(t.body()));
        }
        default: return t;
        }
    }

private:
    const GlobalEnv& env_;
    LocalCtx& ctx_;
};

bool mentions_compose(const Term& t) {
    switch (t.kind()) {
    case Kind::Const: return t.name() == kComposeName;
    case Kind::App: return mentions_compose(t.fn()) || mentions_compose(t.arg());
    case Kind::Lam:
    case Kind::Pi: return mentions_compose(t.dom()) || mentions_compose(t.body());
    case Kind::Let:
        return mentions_compose(t.ann()) || mentions_compose(t.defn()) || mentions_compose(t.body());
    default: return false;
    }
}

}  // namespace

Term infer(const GlobalEnv& env, LocalCtx& ctx, const Term& t) { return Checker(env, ctx).infer(t); }

Term infer(const GlobalEnv& env, const Term& t) {
    LocalCtx ctx;
    return infer(env, ctx, t);
}

void check(const GlobalEnv& env, LocalCtx& ctx, const Term& t, const Term& expected) {
    Checker(env, ctx).check(t, expected);
}

void check(const GlobalEnv& env, const Term& t, const Term& expected) {
    LocalCtx ctx;
    check(env, ctx, t, expected);
}

Sort infer_sort(const GlobalEnv& env, LocalCtx& ctx, const Term& t) {
    return Checker(env, ctx).infer_sort(t);
}

Term whnf(const GlobalEnv& env, const Term& t, const LocalCtx& ctx, Fuel& fuel) {
    return reduce(env, t, ctx, fuel, true);
}

Term whnf(const GlobalEnv& env, const Term& t, const LocalCtx& ctx) {
    Fuel fuel;
    return whnf(env, t, ctx, fuel);
}

Term whnf_core(const GlobalEnv& env, const Term& t, const LocalCtx& ctx, Fuel& fuel) {
    return reduce(env, t, ctx, fuel, false);
}

std::optional<Term> try_rewrite(const GlobalEnv& env, const Term& t, const LocalCtx& ctx,
                                Fuel& fuel, std::string* fired) {
    auto sp = unspine(t);
    if (!sp.head.is(Kind::Const)) return std::nullopt;
    auto rules = env.rules_for(sp.head.name());
    if (rules.empty()) return std::nullopt;
    auto expose = [&](const Term& a) { return whnf(env, a, ctx, fuel); };
    for (const Rewrite* r : rules) {
        std::vector<Term> rest;
        if (auto s = match_pattern_prefix(r->lhs, t, expose, &rest)) {
            fuel.consume();
            if (fired) *fired = r->name;
            return mk_apps(instantiate_metas(r->rhs, *s), rest);
        }
    }
    return std::nullopt;
}

bool convert(const GlobalEnv& env, const Term& a, const Term& b, const LocalCtx& ctx, Fuel& fuel) {
    return Converter(env, ctx, fuel).run(a, b);
}

bool convert(const GlobalEnv& env, const Term& a, const Term& b, const LocalCtx& ctx) {
    Fuel fuel;
    return convert(env, a, b, ctx, fuel);
}

bool is_arity(const Term& t) {
    Term cur = t;
    while (cur.is(Kind::Pi)) cur = cur.body();
    return cur.is(Kind::Sort);
}

void check_entry_type(const GlobalEnv& env, LocalCtx& ctx, const Term& type) {
    Checker(env, ctx).check_entry_type(type);
}

void check_definition(const GlobalEnv& env, LocalCtx& ctx, const Term& body, const Term& type) {
    Checker(env, ctx).check_definition(body, type);
}

Term check_rewrite(const GlobalEnv& env, const Rewrite& rule) {
    validate_pattern(rule.lhs, rule.name);
    std::vector<std::string> lhs_metas;
    std::vector<std::string> rhs_metas;
    collect_metas(rule.lhs, lhs_metas);
    collect_metas(rule.rhs, rhs_metas);
    for (const auto& m : rhs_metas)
        if (std::find(lhs_metas.begin(), lhs_metas.end(), m) == lhs_metas.end())
            throw EnvError(EnvErrorKind::IllFormedPattern, rule.name,
                           "right-hand side metavariable $" + m + " does not occur on the left");
    const auto head = unspine(rule.lhs).head.name();
    const auto* head_entry = env.find(head);
    if (!head_entry) throw TypeError(TypeErrorKind::UnknownConstant, "unknown constant `" + head + "`");
    if (!std::holds_alternative<Decl>(*head_entry))
        throw EnvError(EnvErrorKind::IllFormedPattern, rule.name,
                       "rule head `" + head + "` must be a declared (opaque) constant");

    LocalCtx ctx;
    // Metavariables take the domain of the argument position they occupy.
    std::function<Term(const Term&)> pattern_type = [&](const Term& p) -> Term {
        auto sp = unspine(p);
        auto ty = env.type_of(sp.head.name());
        if (!ty)
            throw TypeError(TypeErrorKind::UnknownConstant,
                            "unknown constant `" + sp.head.name() + "`");
        Term cur = *ty;
        for (const auto& a : sp.args) {
            Term pi = whnf(env, cur, ctx);
            if (!pi.is(Kind::Pi))
                throw TypeError(TypeErrorKind::NotAFunction,
                                "pattern applies `" + sp.head.name() + "` to too many arguments");
            if (a.is(Kind::Meta)) {
                ctx.meta_types[a.name()] = pi.dom();
            } else {
                Term aty = pattern_type(a);
                if (!convert(env, aty, pi.dom(), ctx))
                    throw TypeError(TypeErrorKind::DomainMismatch,
                                    "sub-pattern `" + print_raw(a) + "` has the wrong type");
            }
            cur = instantiate(pi.body(), a);
        }
        return cur;
    };
    Term lhs_ty = pattern_type(rule.lhs);
    Term rhs_ty = infer(env, ctx, rule.rhs);
    if (!convert(env, lhs_ty, rhs_ty, ctx))
        throw TypeError(TypeErrorKind::DomainMismatch,
                        "rule sides have types `" + fold_display(lhs_ty, env) + "` and `" +
                            fold_display(rhs_ty, env) + "`");
    return lhs_ty;
}

Term elaborate(const GlobalEnv& env, LocalCtx& ctx, const Term& raw) {
    if (!mentions_compose(raw)) return raw;
    return Elaborator(env, ctx).run(raw);
}

Term elaborate(const GlobalEnv& env, const Term& raw) {
    LocalCtx ctx;
    return elaborate(env, ctx, raw);
}

}  // namespace pts
