#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pts/environment.hpp"
#include "pts/term.hpp"

namespace pts {

inline constexpr std::size_t kDefaultFuel = 100000;

/// Step budget shared by one whnf/conversion query.
class Fuel {
public:
    explicit Fuel(std::size_t steps = kDefaultFuel) : remaining_(steps) {}
    void consume();
    std::size_t remaining() const { return remaining_; }

private:
    std::size_t remaining_;
};

struct LocalBinding {
    std::string hint;
    Term type;
    std::optional<Term> value;  // let-bound
};

/// Telescope of local bindings, outermost first. Index 0 is the innermost.
class LocalCtx {
public:
    LocalCtx() = default;

    void push(std::string hint, Term type, std::optional<Term> value = std::nullopt);
    void pop();
    std::size_t size() const { return bindings_.size(); }
    bool empty() const { return bindings_.empty(); }

    /// Type of de Bruijn index i, lifted to the current depth.
    Term type_of(std::uint32_t i) const;
    std::optional<Term> value_of(std::uint32_t i) const;
    const LocalBinding& at(std::uint32_t i) const;
    /// Hints outermost first, suitable for printing.
    std::vector<std::string> names() const;

    /// Types assigned to rewrite metavariables while checking rules.
    std::map<std::string, Term> meta_types;

private:
    std::vector<LocalBinding> bindings_;
};

Term infer(const GlobalEnv& env, LocalCtx& ctx, const Term& t);
Term infer(const GlobalEnv& env, const Term& t);
void check(const GlobalEnv& env, LocalCtx& ctx, const Term& t, const Term& expected);
void check(const GlobalEnv& env, const Term& t, const Term& expected);
Sort infer_sort(const GlobalEnv& env, LocalCtx& ctx, const Term& t);

/// Weak head normal form under beta, delta (global and let) and rewrite rules.
Term whnf(const GlobalEnv& env, const Term& t, const LocalCtx& ctx, Fuel& fuel);
Term whnf(const GlobalEnv& env, const Term& t, const LocalCtx& ctx = {});

/// Beta/let/rewrite head reduction without unfolding global definitions.
Term whnf_core(const GlobalEnv& env, const Term& t, const LocalCtx& ctx, Fuel& fuel);

/// Fires one rewrite rule at the head of `t`, if any matches.
std::optional<Term> try_rewrite(const GlobalEnv& env, const Term& t, const LocalCtx& ctx,
                                Fuel& fuel, std::string* fired = nullptr);

bool convert(const GlobalEnv& env, const Term& a, const Term& b, const LocalCtx& ctx,
             Fuel& fuel);
bool convert(const GlobalEnv& env, const Term& a, const Term& b, const LocalCtx& ctx = {});

/// True for `Pi (x1 : D1) ... (xn : Dn) -> s`; such types may classify
/// parameterised definitions even when the product itself has no rule.
bool is_arity(const Term& t);

/// Checks a declaration type (a sort-typed term or an arity).
void check_entry_type(const GlobalEnv& env, LocalCtx& ctx, const Term& type);
/// Checks a definition body against its type, peeling matching binders.
void check_definition(const GlobalEnv& env, LocalCtx& ctx, const Term& body, const Term& type);
/// Checks both sides of a rewrite rule; returns the lhs type.
Term check_rewrite(const GlobalEnv& env, const Rewrite& rule);

/// Name of the internal constant that the parser uses for `g∘f` before the
/// domain of `f` is known.
inline constexpr const char* kComposeName = "∘";

/// Replaces every parsed `g∘f` by `fun (x : D) => g (f x)`, where D is the
/// domain of the inferred type of f.
Term elaborate(const GlobalEnv& env, LocalCtx& ctx, const Term& raw);
Term elaborate(const GlobalEnv& env, const Term& raw);

}  // namespace pts
