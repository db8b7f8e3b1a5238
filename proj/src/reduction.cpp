#include "pts/reduction.hpp"

#include <unordered_map>

#include "pts/errors.hpp"
#include "pts/print.hpp"
#include "pts/typechecker.hpp"

namespace pts {

std::string_view strategy_name(Strategy s) {
    return s == Strategy::HeadDef ? "head-def" : "head-linear";
}

std::optional<Strategy> strategy_from_name(std::string_view name) {
    if (name == "head-def") return Strategy::HeadDef;
    if (name == "head-linear") return Strategy::HeadLinear;
    return std::nullopt;
}

std::string_view event_kind_name(EventKind k) {
    switch (k) {
    case EventKind::Start: return "start";
    case EventKind::DeltaUnfold: return "delta";
    case EventKind::BetaContract: return "beta";
    case EventKind::RewriteFire: return "rewrite";
    case EventKind::LinearSubst: return "subst";
    }
    return "?";
}

std::string describe(const StepEvent& e) {
    switch (e.kind) {
    case EventKind::Start: return "start";
    case EventKind::DeltaUnfold: {
        std::string s = "delta " + e.name;
        if (e.count) s += " + beta " + std::to_string(e.count);
        return s;
    }
    case EventKind::BetaContract: return "beta " + std::to_string(e.count);
    case EventKind::RewriteFire: return "rewrite " + e.name;
    case EventKind::LinearSubst:
        return "subst " + (e.name.empty() ? std::string("var") : e.name) + " at " +
               (e.path.empty() ? std::string(".") : e.path);
    }
    return "?";
}

std::string_view stop_reason_name(StopReason r) {
    switch (r) {
    case StopReason::HeadNormal: return "head-normal";
    case StopReason::MaxSteps: return "max-steps";
    case StopReason::Loop: return "loop";
    }
    return "?";
}

std::string_view erasure_mode_name(ErasureMode m) {
    return m == ErasureMode::AnnotationsOnly ? "annotations" : "poly";
}

std::optional<ErasureMode> erasure_mode_from_name(std::string_view name) {
    if (name == "annotations") return ErasureMode::AnnotationsOnly;
    if (name == "poly") return ErasureMode::DropPolymorphism;
    return std::nullopt;
}

namespace {

struct Binder {
    std::string name;
    Term dom;
};

// Splits the leading lambdas off `t`.
Term peel(const Term& t, std::vector<Binder>& binders) {
    Term cur = t;
    while (cur.is(Kind::Lam)) {
        binders.push_back({cur.name(), cur.dom()});
        cur = cur.body();
    }
    return cur;
}

Term wrap(const std::vector<Binder>& binders, Term body) {
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        body = mk_lam(it->name, it->dom, std::move(body));
    return body;
}

// Contracts the leading redexes of `head` applied to `args`, including
// those exposed by substitution. Returns the number of contractions.
std::size_t contract_chain(Term head, std::vector<Term> args, Term& out) {
    std::size_t count = 0;
    std::size_t next = 0;
    for (;;) {
        if (head.is(Kind::App)) {
            Spine inner = unspine(head);
            args.erase(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(next));
            args.insert(args.begin(), inner.args.begin(), inner.args.end());
            next = 0;
            head = inner.head;
            continue;
        }
        if (head.is(Kind::Lam) && next < args.size()) {
            head = instantiate(head.body(), args[next++]);
        } else if (head.is(Kind::Let)) {
            head = instantiate(head.body(), head.defn());
        } else {
            break;
        }
        ++count;
    }
    out = mk_apps(head, std::vector<Term>(args.begin() + static_cast<std::ptrdiff_t>(next), args.end()));
    return count;
}

LocalCtx ctx_of(const std::vector<Binder>& binders) {
    LocalCtx ctx;
    for (const auto& b : binders) ctx.push(b.name, b.dom);
    return ctx;
}

}  // namespace

std::optional<Term> head_beta_step(const Term& t) {
    std::vector<Binder> binders;
    Term body = peel(t, binders);
    Spine sp = unspine(body);
    if (!((sp.head.is(Kind::Lam) && !sp.args.empty()) || sp.head.is(Kind::Let))) return std::nullopt;
    Term out;
    contract_chain(sp.head, sp.args, out);
    return wrap(binders, out);
}

std::optional<StepResult> try_head_def_step(const GlobalEnv& env, const Term& t) {
    std::vector<Binder> binders;
    Term body = peel(t, binders);
    Spine sp = unspine(body);
    StepEvent ev;
    Term out;
    if ((sp.head.is(Kind::Lam) && !sp.args.empty()) || sp.head.is(Kind::Let)) {
        ev.kind = EventKind::BetaContract;
        ev.count = contract_chain(sp.head, sp.args, out);
    } else if (sp.head.is(Kind::Const)) {
        if (const Def* d = env.find_def(sp.head.name())) {
            ev.kind = EventKind::DeltaUnfold;
            ev.name = d->name;
            ev.count = contract_chain(d->body, sp.args, out);
        } else {
            LocalCtx ctx = ctx_of(binders);
            Fuel fuel;
            std::string fired;
            auto r = try_rewrite(env, body, ctx, fuel, &fired);
            if (!r) return std::nullopt;
            ev.kind = EventKind::RewriteFire;
            ev.name = fired;
            out = *r;
        }
    } else {
        return std::nullopt;
    }
    return StepResult{ev, wrap(binders, out)};
}

StepResult head_def_step(const GlobalEnv& env, const Term& t) {
    auto r = try_head_def_step(env, t);
    if (!r) throw HeadNormal();
    return *r;
}

namespace {

// Walks to the head variable occurrence of a head linear state, tracking
// which binders are bound to a value (prime redex argument or let).
class LinearWalker {
public:
    explicit LinearWalker(const GlobalEnv& env) : env_(env) {}

    enum class Outcome { Stepped, Normal, Opaque };

    Outcome run(const Term& t, Term& out, StepEvent& ev) {
        ev.kind = EventKind::LinearSubst;
        auto r = walk(t, ev);
        if (!r) return opaque_ ? Outcome::Opaque : Outcome::Normal;
        out = *r;
        return Outcome::Stepped;
    }

private:
    struct Bound {
        bool has_value = false;
        Term value;
        std::size_t depth = 0;  // number of binders in scope of `value`
        std::string name;
    };
    struct Pending {
        Term arg;
        std::size_t depth;
    };

    std::optional<Term> walk(const Term& t, StepEvent& ev) {
        switch (t.kind()) {
        case Kind::App: {
            pending_.push_back({t.arg(), bound_.size()});
            path_.push_back("fn");
            auto r = walk(t.fn(), ev);
            path_.pop_back();
            pending_.pop_back();
            if (!r) return std::nullopt;
            return mk_app(*r, t.arg());
        }
        case Kind::Lam: {
            std::optional<Pending> taken;
            if (!pending_.empty()) {
                taken = pending_.back();
                pending_.pop_back();
                bound_.push_back({true, taken->arg, taken->depth, t.name()});
            } else {
                bound_.push_back({false, Term{}, 0, t.name()});
            }
            path_.push_back("body");
            auto r = walk(t.body(), ev);
            path_.pop_back();
            bound_.pop_back();
            if (taken) pending_.push_back(*taken);
            if (!r) return std::nullopt;
            return mk_lam(t.name(), t.dom(), *r);
        }
        case Kind::Let: {
            bound_.push_back({true, t.defn(), bound_.size(), t.name()});
            path_.push_back("body");
            auto r = walk(t.body(), ev);
            path_.pop_back();
            bound_.pop_back();
            if (!r) return std::nullopt;
            return mk_let(t.name(), t.ann(), t.defn(), *r);
        }
        case Kind::Var: {
            if (t.index() >= bound_.size()) return std::nullopt;
            const Bound& b = bound_[bound_.size() - 1 - t.index()];
            if (!b.has_value) return std::nullopt;
            ev.name = b.name;
            ev.path = join();
            return shift(b.value, static_cast<std::int64_t>(bound_.size() - b.depth));
        }
        case Kind::Const: {
            if (const Def* d = env_.find_def(t.name())) {
                ev.kind = EventKind::DeltaUnfold;
                ev.name = d->name;
                return d->body;
            }
            opaque_ = !env_.rules_for(t.name()).empty();
            return std::nullopt;
        }
        default: return std::nullopt;
        }
    }

    std::string join() const {
        std::string s;
        for (const auto& p : path_) {
            if (!s.empty()) s += "/";
            s += p;
        }
        return s;
    }

    const GlobalEnv& env_;
    std::vector<Bound> bound_;
    std::vector<Pending> pending_;
    std::vector<std::string> path_;
    bool opaque_ = false;
};

}  // namespace

Term readback(const Term& state, std::size_t fuel) {
    Term cur = state;
    Fuel f(fuel);
    while (auto next = head_beta_step(cur)) {
        f.consume();
        cur = *next;
    }
    return cur;
}

std::optional<StepResult> try_head_linear_step(const GlobalEnv& env, const Term& state) {
    LinearWalker w(env);
    Term out;
    StepEvent ev;
    switch (w.run(state, out, ev)) {
    case LinearWalker::Outcome::Stepped: return StepResult{ev, out};
    case LinearWalker::Outcome::Normal: return std::nullopt;
    case LinearWalker::Outcome::Opaque: break;
    }
    auto r = try_head_def_step(env, readback(state));
    if (!r || r->event.kind != EventKind::RewriteFire) return std::nullopt;
    return r;
}

StepResult head_linear_step(const GlobalEnv& env, const Term& state) {
    auto r = try_head_linear_step(env, state);
    if (!r) throw HeadNormal();
    return *r;
}

namespace {

class Normalizer {
public:
    Normalizer(const GlobalEnv& env, std::size_t fuel) : env_(env), fuel_(fuel) {}

    Term run(const Term& t) {
        Term w = whnf(env_, t, ctx_, fuel_);
        switch (w.kind()) {
        case Kind::Lam:
        case Kind::Pi: {
            Term dom = run(w.dom());
            ctx_.push(w.name(), w.dom());
            Term body = run(w.body());
            ctx_.pop();
            return w.is(Kind::Lam) ? mk_lam(w.name(), dom, body) : mk_pi(w.name(), dom, body);
        }
        case Kind::App: {
            Spine sp = unspine(w);
            std::vector<Term> args;
            for (const auto& a : sp.args) args.push_back(run(a));
            return mk_apps(sp.head.is(Kind::App) ? run(sp.head) : sp.head, args);
        }
        default: return w;
        }
    }

private:
    const GlobalEnv& env_;
    Fuel fuel_;
    LocalCtx ctx_;
};

}  // namespace

Term normalize(const GlobalEnv& env, const Term& t, std::size_t fuel) {
    return Normalizer(env, fuel).run(t);
}

namespace {

std::optional<StepResult> step_with(const GlobalEnv& env, const Term& t, Strategy s) {
    return s == Strategy::HeadDef ? try_head_def_step(env, t) : try_head_linear_step(env, t);
}

// First-seen index of each observed state, keyed by hash with exact
// alpha-equality on collision.
class StateIndex {
public:
    std::optional<std::size_t> find_or_add(const Term& t, std::size_t index) {
        auto& bucket = seen_[t.hash()];
        for (const auto& [term, i] : bucket)
            if (alpha_eq(term, t)) return i;
        bucket.emplace_back(t, index);
        return std::nullopt;
    }

private:
    std::unordered_map<std::size_t, std::vector<std::pair<Term, std::size_t>>> seen_;
};

// Drives a strategy and yields distinct observations: head-def states, or
// head-linear readbacks with stutter steps skipped.
class Runner {
public:
    Runner(const GlobalEnv& env, const Term& t, Strategy s) : env_(env), strategy_(s), state_(t) {
        obs_ = observe(t);
    }

    const Term& observation() const { return obs_; }
    const Term& state() const { return state_; }
    const StepEvent& event() const { return event_; }

    // Advances to the next distinct observation; false at head normal form.
    // `budget` counts machine steps and is decremented.
    bool advance(std::size_t& budget) {
        while (budget > 0) {
            auto r = step_with(env_, state_, strategy_);
            if (!r) return false;
            --budget;
            state_ = r->term;
            event_ = r->event;
            Term next = observe(state_);
            if (strategy_ == Strategy::HeadDef || !alpha_eq(next, obs_)) {
                obs_ = next;
                return true;
            }
        }
        return false;
    }

private:
    Term observe(const Term& t) const {
        return strategy_ == Strategy::HeadLinear ? readback(t) : t;
    }

    const GlobalEnv& env_;
    Strategy strategy_;
    Term state_;
    Term obs_;
    StepEvent event_;
};

}  // namespace

Trace trace(const GlobalEnv& env, const Term& t, Strategy strategy, std::size_t max_steps) {
    Trace tr;
    StateIndex seen;
    auto emit = [&](const StepEvent& ev, const Term& raw, std::optional<Term> machine) {
        TraceStep s;
        s.index = tr.steps.size();
        s.event = ev;
        s.raw = raw;
        s.display = fold_display(raw, env);
        if (strategy == Strategy::HeadLinear) s.machine = std::move(machine);
        tr.steps.push_back(std::move(s));
    };
    Term state = t;
    emit(StepEvent{}, strategy == Strategy::HeadLinear ? readback(t) : t, t);
    seen.find_or_add(tr.steps.back().raw, 0);
    for (std::size_t i = 0; i < max_steps; ++i) {
        auto r = step_with(env, state, strategy);
        if (!r) {
            tr.stop = StopReason::HeadNormal;
            return tr;
        }
        state = r->term;
        Term obs = strategy == Strategy::HeadLinear ? readback(state) : state;
        emit(r->event, obs, state);
        // Head-linear stutter steps repeat the readback without looping.
        if (strategy == Strategy::HeadLinear && alpha_eq(obs, tr.steps[tr.steps.size() - 2].raw))
            continue;
        if (auto first = seen.find_or_add(obs, tr.steps.size() - 1)) {
            tr.stop = StopReason::Loop;
            tr.loop_entry = *first;
            return tr;
        }
    }
    tr.stop = StopReason::MaxSteps;
    if (!step_with(env, state, strategy)) tr.stop = StopReason::HeadNormal;
    return tr;
}

namespace {

// True when `type` is # or ## or an arity ending in one of them, i.e. an
// entity of that type is a type-level (polymorphic) parameter.
bool over_kind(const GlobalEnv& env, LocalCtx& ctx, const Term& type) {
    Term t = whnf(env, type, ctx);
    if (is_arity(t)) {
        while (t.is(Kind::Pi)) t = t.body();
        return t.sort() != Sort::Star;
    }
    return infer_sort(env, ctx, t) == Sort::Triangle;
}

class Eraser {
public:
    Eraser(ErasureMode mode, const GlobalEnv* env) : mode_(mode), env_(env) {
        if (mode_ == ErasureMode::DropPolymorphism && !env_) throw ErasureNeedsTypes();
    }

    LocalCtx ctx;

    Term run(const Term& t) {
        switch (t.kind()) {
        case Kind::Sort:
        case Kind::Pi: return mk_hole();
        case Kind::Var:
        case Kind::Const:
        case Kind::Meta:
        case Kind::Hole: return t;
        case Kind::App: {
            if (poly()) {
                Term fty = whnf(*env_, infer(*env_, ctx, t.fn()), ctx);
                if (fty.is(Kind::Pi) && over_kind(*env_, ctx, fty.dom())) return run(t.fn());
            }
            return mk_app(run(t.fn()), run(t.arg()));
        }
        case Kind::Lam: {
            bool drop = poly() && over_kind(*env_, ctx, t.dom());
            ctx.push(t.name(), t.dom());
            Term body = run(t.body());
            ctx.pop();
            if (drop) return instantiate(body, mk_hole());
            return mk_lam(t.name(), mk_hole(), body);
        }
        case Kind::Let: {
            if (poly() && over_kind(*env_, ctx, t.ann()))
                return run(instantiate(t.body(), t.defn()));
            Term defn = run(t.defn());
            ctx.push(t.name(), t.ann(), t.defn());
            Term body = run(t.body());
            ctx.pop();
            return mk_let(t.name(), mk_hole(), defn, body);
        }
        }
        return t;
    }

private:
    bool poly() const { return mode_ == ErasureMode::DropPolymorphism; }

    ErasureMode mode_;
    const GlobalEnv* env_;
};

}  // namespace

Term erase(const Term& t, ErasureMode mode, const GlobalEnv* env) {
    return Eraser(mode, env).run(t);
}

GlobalEnv erase_env(const GlobalEnv& env, ErasureMode mode) {
    GlobalEnv out(env.spec());
    const bool poly = mode == ErasureMode::DropPolymorphism;
    for (std::size_t i = 0; i < env.size(); ++i) {
        const EnvEntry& e = env.entry(i);
        if (const auto* d = std::get_if<Def>(&e)) {
            LocalCtx ctx;
            bool type_level = poly && over_kind(env, ctx, d->type);
            Term body = !type_level ? erase(d->body, mode, &env) : mk_hole();
            out = out.add_unchecked(Def{d->name, d->type, body});
        } else if (const auto* r = std::get_if<Rewrite>(&e)) {
            if (poly) {
                LocalCtx ctx;
                Term lhs_type = check_rewrite(env, *r);
                if (over_kind(env, ctx, lhs_type)) continue;
            }
            out = out.add_unchecked(Rewrite{r->name, r->lhs, erase(r->rhs, ErasureMode::AnnotationsOnly)});
        } else {
            out = out.add_unchecked(e);
        }
    }
    return out;
}

std::string_view observation_name(Observation o) {
    return o == Observation::Exact ? "exact" : "argument-normal";
}

Observation default_observation(std::optional<ErasureMode> mode) {
    return mode ? Observation::ArgumentNormal : Observation::Exact;
}

namespace {

constexpr std::size_t kArgumentFuel = 10000;

}  // namespace

Term observe(const GlobalEnv& env, const Term& state, Observation obs) {
    if (obs == Observation::Exact) return state;
    std::vector<Binder> binders;
    Spine sp = unspine(peel(state, binders));
    std::vector<Term> args;
    for (const auto& a : sp.args) {
        try {
            args.push_back(normalize(env, a, kArgumentFuel));
        } catch (const TypeError&) {
            args.push_back(unfold_all(a, env));
        }
    }
    return wrap(binders, mk_apps(unfold_all(sp.head, env), args));
}

namespace {

struct LoopRun {
    std::optional<GlobalEnv> erased;
    Term start;
    Observation obs;

    LoopRun(const GlobalEnv& env, const Term& t, std::optional<ErasureMode> mode,
            std::optional<Observation> o)
        : start(t), obs(o.value_or(default_observation(mode))) {
        if (mode) {
            erased = erase_env(env, *mode);
            start = erase(t, *mode, &env);
        }
    }
};

}  // namespace

std::vector<Term> observations(const GlobalEnv& env, const Term& t, Strategy strategy,
                               std::optional<ErasureMode> mode, std::size_t count,
                               std::optional<Observation> obs) {
    LoopRun run(env, t, mode, obs);
    const GlobalEnv& run_env = run.erased ? *run.erased : env;
    Runner runner(run_env, run.start, strategy);
    std::vector<Term> out{observe(run_env, runner.observation(), run.obs)};
    std::size_t budget = SIZE_MAX;
    while (out.size() < count && runner.advance(budget))
        out.push_back(observe(run_env, runner.observation(), run.obs));
    return out;
}

LoopReport detect_loop(const GlobalEnv& env, const Term& t, Strategy strategy,
                       std::optional<ErasureMode> mode, std::size_t bound,
                       std::optional<Observation> obs) {
    LoopRun run(env, t, mode, obs);
    LoopReport rep;
    rep.mode = mode;
    rep.observation = run.obs;
    const GlobalEnv& run_env = run.erased ? *run.erased : env;
    Runner runner(run_env, run.start, strategy);
    StateIndex seen;
    std::size_t index = 0;
    seen.find_or_add(observe(run_env, runner.observation(), run.obs), index);
    std::size_t budget = bound;
    while (runner.advance(budget)) {
        ++index;
        if (auto first = seen.find_or_add(observe(run_env, runner.observation(), run.obs), index)) {
            rep.found = true;
            rep.entry = *first;
            rep.period = index - *first;
            break;
        }
    }
    rep.bound = bound - budget;
    return rep;
}

}  // namespace pts
