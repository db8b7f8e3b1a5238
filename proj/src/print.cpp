#include "pts/print.hpp"

#include <algorithm>
#include <array>
#include <unordered_map>

#include "pts/typechecker.hpp"

namespace pts {

const Notation& composition_notation() {
    static const Notation n{
        "compose",
        mk_lam("x", mk_meta("X"), mk_app(mk_meta("g"), mk_app(mk_meta("f"), mk_var(0, "x")))),
        "{g}∘{f}",
    };
    return n;
}

namespace {

constexpr std::array<std::string_view, 8> kKeywords{"fun", "forall", "Pi", "let", "in", "under",
                                                    "λ", "_"};

// Precedence levels: 0 binders and arrows, 1 notation, 2 application, 3 atoms.
constexpr int kTop = 0;
constexpr int kNotationLeft = 1;
constexpr int kNotationRight = 2;
constexpr int kFn = 2;
constexpr int kArg = 3;

bool free_below(const Term& t, std::uint32_t depth) {
    for (std::uint32_t i = 0; i < depth; ++i)
        if (has_var(t, i)) return true;
    return false;
}

bool match_notation(const Term& p, const Term& t, std::uint32_t depth, MetaSubst& out) {
    switch (p.kind()) {
    case Kind::Meta: {
        if (free_below(t, depth)) return false;
        Term v = shift(t, -static_cast<std::int64_t>(depth), depth);
        auto [it, fresh] = out.emplace(p.name(), v);
        return fresh || alpha_eq(it->second, v);
    }
    case Kind::Var: return t.is(Kind::Var) && t.index() == p.index();
    case Kind::Sort: return t.is(Kind::Sort) && t.sort() == p.sort();
    case Kind::Const: return t.is(Kind::Const) && t.name() == p.name();
    case Kind::Hole: return t.is(Kind::Hole);
    case Kind::App:
        return t.is(Kind::App) && match_notation(p.fn(), t.fn(), depth, out) &&
               match_notation(p.arg(), t.arg(), depth, out);
    case Kind::Lam:
    case Kind::Pi:
        return t.kind() == p.kind() && match_notation(p.dom(), t.dom(), depth, out) &&
               match_notation(p.body(), t.body(), depth + 1, out);
    default: return false;
    }
}

class Printer {
public:
    Printer(const GlobalEnv* env, std::vector<std::string> names, const PrintOptions& opts,
            const LocalCtx* ctx = nullptr)
        : env_(env), names_(std::move(names)), opts_(opts), ctx_(ctx), base_(names_.size()) {}

    std::string run(const Term& t) {
        std::string out;
        print(t, kTop, out);
        return out;
    }

private:
    int level_of(const Term& t) {
        switch (t.kind()) {
        case Kind::Lam:
        case Kind::Pi:
        case Kind::Let: return kTop;
        case Kind::App: return kFn;
        default: return kArg;
        }
    }

    void print(const Term& t, int prec, std::string& out) {
        if (auto n = try_notation(t)) {
            if (prec > kNotationLeft) out += "(";
            out += *n;
            if (prec > kNotationLeft) out += ")";
            return;
        }
        bool parens = level_of(t) < prec;
        if (parens) out += "(";
        print_bare(t, out);
        if (parens) out += ")";
    }

    void print_bare(const Term& t, std::string& out) {
        switch (t.kind()) {
        case Kind::Sort: out += sort_symbol(t.sort()); break;
        case Kind::Var:
            if (t.index() < names_.size()) out += names_[names_.size() - 1 - t.index()];
            else out += "?" + std::to_string(t.index() - names_.size());
            break;
        case Kind::Const: out += t.name(); break;
        case Kind::Meta: out += "$" + t.name(); break;
        case Kind::Hole: out += "_"; break;
        case Kind::App:
            print(t.fn(), kFn, out);
            out += " ";
            print(t.arg(), kArg, out);
            break;
        case Kind::Lam: print_lam(t, out); break;
        case Kind::Pi: print_pi(t, out); break;
        case Kind::Let: {
            std::string n = fresh(t.name());
            out += "let " + n;
            if (!t.ann().is(Kind::Hole)) {
                out += " : ";
                print(t.ann(), kTop, out);
            }
            out += " := ";
            print(t.defn(), kTop, out);
            out += " in ";
            names_.push_back(n);
            print(t.body(), kTop, out);
            names_.pop_back();
            break;
        }
        }
    }

    void print_lam(const Term& t, std::string& out) {
        out += "fun";
        std::size_t pushed = 0;
        Term cur = t;
        for (;;) {
            std::string n = fresh(cur.name());
            if (cur.dom().is(Kind::Hole)) {
                out += " " + n;
            } else {
                out += " (" + n + " : ";
                print(cur.dom(), kTop, out);
                out += ")";
            }
            names_.push_back(n);
            ++pushed;
            cur = cur.body();
            if (!cur.is(Kind::Lam) || try_notation(cur)) break;
        }
        out += " => ";
        print(cur, kTop, out);
        names_.resize(names_.size() - pushed);
    }

    static bool big_domain(const Term& dom) {
        return dom.is(Kind::Sort) && dom.sort() != Sort::Star;
    }

    void print_pi(const Term& t, std::string& out) {
        if (!has_var(t.body(), 0)) {
            print(t.dom(), kNotationLeft, out);
            out += " -> ";
            names_.push_back("_");
            print(t.body(), kTop, out);
            names_.pop_back();
            return;
        }
        const bool big = big_domain(t.dom());
        out += big ? "Pi" : "forall";
        std::size_t pushed = 0;
        Term cur = t;
        for (;;) {
            std::string n = fresh(cur.name());
            out += " (" + n + " : ";
            print(cur.dom(), kTop, out);
            out += ")";
            names_.push_back(n);
            ++pushed;
            cur = cur.body();
            if (!cur.is(Kind::Pi) || !has_var(cur.body(), 0) || big_domain(cur.dom()) != big)
                break;
        }
        out += big ? " -> " : ", ";
        print(cur, kTop, out);
        names_.resize(names_.size() - pushed);
    }

    std::string fresh(const std::string& hint) {
        std::string base = hint.empty() || hint == "_" ? "x" : hint;
        std::string n = base;
        auto taken = [&](const std::string& s) {
            if (std::find(names_.begin(), names_.end(), s) != names_.end()) return true;
            if (std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end()) return true;
            return env_ && env_->find(s) != nullptr;
        };
        while (taken(n)) n += "'";
        return n;
    }

    std::optional<std::string> try_notation(const Term& t) {
        if (!opts_.fold_notations || !t.is(Kind::Lam)) return std::nullopt;
        const Notation& n = composition_notation();
        MetaSubst s;
        if (!match_notation(n.pattern, t, 0, s)) return std::nullopt;
        if (!composition_domain_ok(s.at("X"), s.at("f"))) return std::nullopt;
        std::string out;
        print(s.at("g"), kNotationLeft, out);
        out += "∘";
        print(s.at("f"), kNotationRight, out);
        return out;
    }

    // `g∘f` is re-elaborated with the domain of f's type, so only fold when
    // that reproduces the printed binder domain.
    bool composition_domain_ok(const Term& dom, const Term& f) {
        if (dom.is(Kind::Hole)) return true;
        if (!env_) return false;
        // Only variables of the typed context may occur, not printer binders.
        const auto depth = static_cast<std::uint32_t>(names_.size() - base_);
        const std::uint32_t outer = ctx_ ? static_cast<std::uint32_t>(ctx_->size()) : 0;
        if (free_below(f, depth) || free_below(dom, depth)) return false;
        if (f.loose_bound() > depth + outer || dom.loose_bound() > depth + outer) return false;
        Term f0 = shift(f, -static_cast<std::int64_t>(depth));
        Term dom0 = shift(dom, -static_cast<std::int64_t>(depth));
        try {
            LocalCtx ctx = ctx_ ? *ctx_ : LocalCtx{};
            Term fty = whnf(*env_, infer(*env_, ctx, refold(f0, *env_)), ctx);
            if (!fty.is(Kind::Pi)) return false;
            return alpha_eq(unfold_all(fty.dom(), *env_), unfold_all(dom0, *env_));
        } catch (const std::exception&) {
            return false;
        }
    }

    const GlobalEnv* env_;
    std::vector<std::string> names_;
    PrintOptions opts_;
    const LocalCtx* ctx_;
    std::size_t base_;
};

class Refolder {
public:
    explicit Refolder(const GlobalEnv& env) : env_(env) {}

    Term run(const Term& t) {
        if (auto it = memo_.find(t.ptr()); it != memo_.end()) return it->second;
        Term r = t;
        if (auto name = folded_name(t)) {
            r = mk_const(*name);
        } else {
            switch (t.kind()) {
            case Kind::App: r = mk_app(run(t.fn()), run(t.arg())); break;
            case Kind::Lam: r = mk_lam(t.name(), run(t.dom()), run(t.body())); break;
            case Kind::Pi: r = mk_pi(t.name(), run(t.dom()), run(t.body())); break;
            case Kind::Let: r = mk_let(t.name(), run(t.ann()), run(t.defn()), run(t.body())); break;
            default: break;
            }
        }
        memo_.emplace(t.ptr(), r);
        return r;
    }

private:
    std::optional<std::string> folded_name(const Term& t) const {
        if (t.loose_bound() != 0) return std::nullopt;
        switch (t.kind()) {
        case Kind::App:
        case Kind::Lam:
        case Kind::Pi:
        case Kind::Let: break;
        default: return std::nullopt;
        }
        for (const Def* d : env_.defs_with_unfolded_hash(t.hash()))
            if (alpha_eq(*env_.unfolded(d->name), t)) return d->name;
        return std::nullopt;
    }

    const GlobalEnv& env_;
    std::unordered_map<const void*, Term> memo_;
};

}  // namespace

Term refold(const Term& t, const GlobalEnv& env) { return Refolder(env).run(t); }

std::string print_term(const Term& t, const GlobalEnv* env, const std::vector<std::string>& names,
                       const PrintOptions& opts) {
    Term subject = t;
    if (opts.fold_definitions && env) subject = refold(unfold_all(t, *env), *env);
    return Printer(env, names, opts).run(subject);
}

std::string fold_display(const Term& t, const GlobalEnv& env, const std::vector<std::string>& names) {
    return print_term(t, &env, names, PrintOptions{});
}

std::string fold_display(const Term& t, const GlobalEnv& env, const LocalCtx& ctx) {
    return Printer(&env, ctx.names(), PrintOptions{}, &ctx).run(refold(unfold_all(t, env), env));
}

std::string print_raw(const Term& t, const std::vector<std::string>& names) {
    return print_term(t, nullptr, names, PrintOptions{false, false});
}

}  // namespace pts
