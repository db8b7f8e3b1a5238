#include "pts/environment.hpp"

#include <algorithm>
#include <unordered_map>

#include "pts/typechecker.hpp"

namespace pts {

const std::string& entry_name(const EnvEntry& e) {
    return std::visit([](const auto& x) -> const std::string& { return x.name; }, e);
}

struct GlobalEnv::Data {
    struct Stored {
        EnvEntry entry;
        Term unfolded;
    };
    std::vector<std::shared_ptr<const Stored>> entries;
    std::unordered_map<std::string, std::size_t> index;
    std::unordered_map<std::string, std::vector<std::size_t>> rules;
    std::unordered_multimap<std::size_t, std::size_t> fold_index;
    std::size_t rewrite_count = 0;
};

GlobalEnv::GlobalEnv(PtsSpec spec) : spec_(std::move(spec)), data_(std::make_shared<Data>()) {}

GlobalEnv GlobalEnv::extend(EnvEntry e) const {
    auto next = std::make_shared<Data>(*data_);
    auto stored = std::make_shared<Data::Stored>();
    const std::size_t pos = next->entries.size();
    const std::string name = entry_name(e);
    if (const auto* def = std::get_if<Def>(&e)) {
        stored->unfolded = unfold_all(def->body, *this);
        next->fold_index.emplace(stored->unfolded.hash(), pos);
    } else if (const auto* rw = std::get_if<Rewrite>(&e)) {
        next->rules[unspine(rw->lhs).head.name()].push_back(pos);
        ++next->rewrite_count;
    }
    stored->entry = std::move(e);
    next->entries.push_back(std::move(stored));
    next->index.emplace(name, pos);
    GlobalEnv out(spec_);
    out.data_ = std::move(next);
    return out;
}

GlobalEnv GlobalEnv::add_unchecked(EnvEntry e) const {
    if (find(entry_name(e)))
        throw EnvError(EnvErrorKind::DuplicateName, entry_name(e), "name already declared");
    return extend(std::move(e));
}

GlobalEnv GlobalEnv::add_entry(EnvEntry e) const {
    const std::string name = entry_name(e);
    if (find(name)) throw EnvError(EnvErrorKind::DuplicateName, name, "name already declared");
    try {
        if (const auto* decl = std::get_if<Decl>(&e)) {
            LocalCtx ctx;
            check_entry_type(*this, ctx, decl->type);
        } else if (const auto* def = std::get_if<Def>(&e)) {
            LocalCtx ctx;
            check_entry_type(*this, ctx, def->type);
            check_definition(*this, ctx, def->body, def->type);
        } else {
            check_rewrite(*this, std::get<Rewrite>(e));
        }
    } catch (const TypeError& err) {
        throw EnvError(EnvErrorKind::IllTyped, name, err.what(), err);
    }
    return extend(std::move(e));
}

const EnvEntry* GlobalEnv::find(std::string_view name) const {
    auto it = data_->index.find(std::string(name));
    if (it == data_->index.end()) return nullptr;
    return &data_->entries[it->second]->entry;
}

const EnvEntry& GlobalEnv::lookup(std::string_view name) const {
    if (const auto* e = find(name)) return *e;
    throw EnvError(EnvErrorKind::UnknownConstant, std::string(name), "no such constant");
}

const Def* GlobalEnv::find_def(std::string_view name) const {
    const auto* e = find(name);
    return e ? std::get_if<Def>(e) : nullptr;
}

std::optional<Term> GlobalEnv::type_of(std::string_view name) const {
    const auto* e = find(name);
    if (!e) return std::nullopt;
    if (const auto* d = std::get_if<Decl>(e)) return d->type;
    if (const auto* d = std::get_if<Def>(e)) return d->type;
    return std::nullopt;
}

const Term* GlobalEnv::unfolded(std::string_view name) const {
    auto it = data_->index.find(std::string(name));
    if (it == data_->index.end()) return nullptr;
    const auto& stored = *data_->entries[it->second];
    if (!std::holds_alternative<Def>(stored.entry)) return nullptr;
    return &stored.unfolded;
}

std::optional<std::size_t> GlobalEnv::position(std::string_view name) const {
    auto it = data_->index.find(std::string(name));
    if (it == data_->index.end()) return std::nullopt;
    return it->second;
}

std::vector<const Rewrite*> GlobalEnv::rules_for(std::string_view head) const {
    std::vector<const Rewrite*> out;
    auto it = data_->rules.find(std::string(head));
    if (it == data_->rules.end()) return out;
    for (auto pos : it->second) out.push_back(&std::get<Rewrite>(data_->entries[pos]->entry));
    return out;
}

std::vector<const Def*> GlobalEnv::defs_with_unfolded_hash(std::size_t hash) const {
    std::vector<std::size_t> positions;
    auto [lo, hi] = data_->fold_index.equal_range(hash);
    for (auto it = lo; it != hi; ++it) positions.push_back(it->second);
    std::sort(positions.rbegin(), positions.rend());
    std::vector<const Def*> out;
    for (auto pos : positions) out.push_back(&std::get<Def>(data_->entries[pos]->entry));
    return out;
}

std::size_t GlobalEnv::size() const { return data_->entries.size(); }
const EnvEntry& GlobalEnv::entry(std::size_t i) const { return data_->entries.at(i)->entry; }
std::size_t GlobalEnv::rewrite_count() const { return data_->rewrite_count; }

namespace {

class Unfolder {
public:
    explicit Unfolder(const GlobalEnv& env) : env_(env) {}

    Term run(const Term& t) {
        if (auto it = memo_.find(t.ptr()); it != memo_.end()) return it->second;
        Term r;
        switch (t.kind()) {
        case Kind::Const:
            if (const Term* u = env_.unfolded(t.name())) r = *u;
            else if (env_.find(t.name()) || t.name() == kComposeName) r = t;
            else throw EnvError(EnvErrorKind::UnknownConstant, t.name(), "no such constant");
            break;
        case Kind::App: r = rebuild_app(t); break;
        case Kind::Lam: r = mk_lam(t.name(), run(t.dom()), run(t.body())); break;
        case Kind::Pi: r = mk_pi(t.name(), run(t.dom()), run(t.body())); break;
        case Kind::Let: r = instantiate(run(t.body()), run(t.defn())); break;
        default: r = t; break;
        }
        memo_.emplace(t.ptr(), r);
        return r;
    }

private:
    Term rebuild_app(const Term& t) {
        Term f = run(t.fn());
        Term a = run(t.arg());
        if (f.ptr() == t.fn().ptr() && a.ptr() == t.arg().ptr()) return t;
        return mk_app(std::move(f), std::move(a));
    }

    const GlobalEnv& env_;
    std::unordered_map<const void*, Term> memo_;
};

}  // namespace

Term unfold_all(const Term& t, const GlobalEnv& env) { return Unfolder(env).run(t); }

namespace {

void validate_pattern_rec(const Term& p, std::vector<std::string>& seen, bool top,
                          std::string_view rule_name) {
    auto bad = [&](const std::string& why) {
        throw EnvError(EnvErrorKind::IllFormedPattern, std::string(rule_name), why);
    };
    auto sp = unspine(p);
    if (!sp.head.is(Kind::Const)) bad("pattern head must be a constant");
    if (top && sp.args.empty()) bad("rule left-hand side must apply its head constant");
    for (const auto& a : sp.args) {
        if (a.is(Kind::Meta)) {
            if (std::find(seen.begin(), seen.end(), a.name()) != seen.end())
                bad("metavariable $" + a.name() + " occurs twice (rules must be left-linear)");
            seen.push_back(a.name());
        } else {
            validate_pattern_rec(a, seen, false, rule_name);
        }
    }
}

bool match_into(const Term& p, const Term& t, MetaSubst& out,
                const std::function<Term(const Term&)>* expose, std::vector<Term>* rest) {
    auto ps = unspine(p);
    Term target = t;
    auto ts = unspine(target);
    if (!ts.head.is(Kind::Const) || ts.head.name() != ps.head.name()) return false;
    if (rest ? ts.args.size() < ps.args.size() : ts.args.size() != ps.args.size()) return false;
    for (std::size_t i = 0; i < ps.args.size(); ++i) {
        const Term& pa = ps.args[i];
        if (pa.is(Kind::Meta)) {
            out[pa.name()] = ts.args[i];
            continue;
        }
        Term arg = expose ? (*expose)(ts.args[i]) : ts.args[i];
        if (!match_into(pa, arg, out, expose, nullptr)) return false;
    }
    if (rest) rest->assign(ts.args.begin() + static_cast<std::ptrdiff_t>(ps.args.size()), ts.args.end());
    return true;
}

Term inst_metas(const Term& t, const MetaSubst& s, std::uint32_t depth) {
    switch (t.kind()) {
    case Kind::Meta: {
        auto it = s.find(t.name());
        return it == s.end() ? t : shift(it->second, depth);
    }
    case Kind::App: return mk_app(inst_metas(t.fn(), s, depth), inst_metas(t.arg(), s, depth));
    case Kind::Lam:
        return mk_lam(t.name(), inst_metas(t.dom(), s, depth), inst_metas(t.body(), s, depth + 1));
    case Kind::Pi:
        return mk_pi(t.name(), inst_metas(t.dom(), s, depth), inst_metas(t.body(), s, depth + 1));
    case Kind::Let:
        return mk_let(t.name(), inst_metas(t.ann(), s, depth), inst_metas(t.defn(), s, depth),
                      inst_metas(t.body(), s, depth + 1));
    default: return t;
    }
}

}  // namespace

void validate_pattern(const Term& lhs, std::string_view rule_name) {
    std::vector<std::string> seen;
    validate_pattern_rec(lhs, seen, true, rule_name);
}

std::optional<MetaSubst> match_pattern(const Term& pattern, const Term& t) {
    MetaSubst s;
    if (!match_into(pattern, t, s, nullptr, nullptr)) return std::nullopt;
    return s;
}

std::optional<MetaSubst> match_pattern_prefix(const Term& pattern, const Term& t,
                                              const std::function<Term(const Term&)>& expose,
                                              std::vector<Term>* rest) {
    MetaSubst s;
    std::vector<Term> tail;
    if (!match_into(pattern, t, s, expose ? &expose : nullptr, &tail)) return std::nullopt;
    if (rest) *rest = std::move(tail);
    return s;
}

Term instantiate_metas(const Term& t, const MetaSubst& subst) { return inst_metas(t, subst, 0); }

}  // namespace pts
