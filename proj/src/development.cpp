#include "pts/development.hpp"

#include <sstream>

#include "pts/print.hpp"
#include "pts/typechecker.hpp"

namespace pts {

const KeyTerm* Development::key_term(std::string_view name) const {
    for (const auto& k : key_terms)
        if (k.name == name) return &k;
    return nullptr;
}

namespace {

PtsSpec pick_spec(const std::vector<Statement>& stmts, const std::optional<PtsSpec>& override_spec) {
    if (override_spec) return *override_spec;
    std::optional<PtsSpec> chosen;
    std::vector<Sort> sorts;
    std::vector<Axiom> axioms;
    std::vector<Rule> rules;
    bool custom = false;
    for (const auto& s : stmts) {
        if (const auto* sys = std::get_if<SystemStmt>(&s.body)) {
            chosen = PtsSpec::from_name(sys->name);
            if (!chosen) throw ParseError("unknown system `" + sys->name + "`", s.line, s.column);
        } else if (const auto* st = std::get_if<SortsStmt>(&s.body)) {
            sorts.insert(sorts.end(), st->sorts.begin(), st->sorts.end());
            custom = true;
        } else if (const auto* st = std::get_if<AxiomsStmt>(&s.body)) {
            axioms.insert(axioms.end(), st->axioms.begin(), st->axioms.end());
            custom = true;
        } else if (const auto* st = std::get_if<RulesStmt>(&s.body)) {
            rules.insert(rules.end(), st->rules.begin(), st->rules.end());
            custom = true;
        }
    }
    if (custom) {
        try {
            return PtsSpec(sorts, axioms, rules);
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), 1, 1);
        }
    }
    return chosen ? *chosen : PtsSpec::preset(PresetId::LambdaHOL);
}

void record_error(Judgment& j, const TypeError& e, bool raw) {
    j.ok = false;
    j.error = e.what();
    j.error_kind = e.kind();
    j.missing_rule = e.rule();
    if (raw)
        for (const auto& t : e.terms) j.error += "\n    raw: " + print_raw(t, e.names);
}

struct Scope {
    LocalCtx ctx;
    std::vector<std::string> names;
};

Scope open_scope(const GlobalEnv& env, const Telescope& tel) {
    Scope s;
    for (const auto& [name, raw] : tel) {
        Term ty = elaborate(env, s.ctx, raw);
        infer_sort(env, s.ctx, ty);
        s.ctx.push(name, ty);
        s.names.push_back(name);
    }
    return s;
}

}  // namespace

Development check_development(const std::vector<Statement>& stmts,
                              std::optional<PtsSpec> override_spec, bool raw_errors) {
    Development dev{GlobalEnv(pick_spec(stmts, override_spec)), {}, {}, true};
    for (const auto& st : stmts) {
        Judgment j;
        j.line = st.line;
        j.column = st.column;
        bool entry_failed = false;
        try {
            std::visit(
                [&](const auto& s) {
                    using S = std::decay_t<decltype(s)>;
                    GlobalEnv& env = dev.env;
                    if constexpr (std::is_same_v<S, ConstStmt>) {
                        j.directive = "const";
                        j.subject = s.name;
                        env = env.add_entry(Decl{s.name, elaborate(env, s.type)});
                    } else if constexpr (std::is_same_v<S, DefStmt>) {
                        j.directive = "def";
                        j.subject = s.name;
                        Term type = elaborate(env, s.type);
                        env = env.add_entry(Def{s.name, type, elaborate(env, s.body)});
                    } else if constexpr (std::is_same_v<S, RewriteStmt>) {
                        j.directive = "rewrite";
                        j.subject = s.name;
                        env = env.add_entry(Rewrite{s.name, s.lhs, elaborate(env, s.rhs)});
                    } else if constexpr (std::is_same_v<S, CheckStmt>) {
                        j.directive = "check";
                        Scope sc = open_scope(env, s.ctx);
                        Term t = elaborate(env, sc.ctx, s.term);
                        Term ty = elaborate(env, sc.ctx, s.type);
                        j.subject = fold_display(t, env, sc.ctx) + " : " +
                                    fold_display(ty, env, sc.ctx);
                        infer_sort(env, sc.ctx, ty);
                        check(env, sc.ctx, t, ty);
                    } else if constexpr (std::is_same_v<S, ConvStmt>) {
                        j.directive = "conv";
                        Scope sc = open_scope(env, s.ctx);
                        Term a = elaborate(env, sc.ctx, s.lhs);
                        Term b = elaborate(env, sc.ctx, s.rhs);
                        j.subject = fold_display(a, env, sc.ctx) + " = " +
                                    fold_display(b, env, sc.ctx);
                        Term ta = infer(env, sc.ctx, a);
                        check(env, sc.ctx, b, ta);
                        if (!convert(env, a, b, sc.ctx)) {
                            j.ok = false;
                            j.error = "terms are not convertible";
                        }
                    } else if constexpr (std::is_same_v<S, TraceStmt>) {
                        j.directive = "trace";
                        j.subject = s.name;
                        Term type = elaborate(env, s.type);
                        Term t = elaborate(env, s.term);
                        LocalCtx ctx;
                        infer_sort(env, ctx, type);
                        check(env, ctx, t, type);
                        j.subject = s.name + " := " + fold_display(t, env) + " : " +
                                    fold_display(type, env);
                        dev.key_terms.push_back({s.name, t, type});
                    } else {
                        j.directive = "";
                    }
                },
                st.body);
        } catch (const EnvError& e) {
            j.ok = false;
            j.error = e.what();
            if (e.cause()) record_error(j, *e.cause(), raw_errors);
            entry_failed = true;
        } catch (const TypeError& e) {
            record_error(j, e, raw_errors);
            const auto& b = st.body;
            entry_failed = std::holds_alternative<ConstStmt>(b) || std::holds_alternative<DefStmt>(b) ||
                           std::holds_alternative<RewriteStmt>(b);
        }
        if (j.directive.empty()) continue;
        if (!j.ok) dev.ok = false;
        dev.report.push_back(std::move(j));
        if (entry_failed) break;
    }
    return dev;
}

Development check_development_text(std::string_view text, std::optional<PtsSpec> override_spec) {
    return check_development(parse_file(text), std::move(override_spec));
}

std::string render_report(const Development& dev) {
    std::ostringstream os;
    for (const auto& j : dev.report) {
        os << (j.ok ? "ok   " : "FAIL ") << j.directive << " " << j.subject;
        if (!j.ok) os << "\n  " << j.line << ":" << j.column << ": " << j.error;
        os << "\n";
    }
    return os.str();
}

}  // namespace pts
