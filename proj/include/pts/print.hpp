#pragma once

#include <string>
#include <vector>

#include "pts/environment.hpp"
#include "pts/term.hpp"

namespace pts {

class LocalCtx;

/// A display-only abbreviation. `pattern` may bind metavariables under its
/// own binders as long as they do not depend on them; `display` is a
/// template such as "{g}∘{f}". Metavariables absent from `display` are
/// matched but not printed.
struct Notation {
    std::string name;
    Term pattern;
    std::string display;
};

/// The built-in composition notation `g∘f` for `fun (x : X) => g (f x)`.
const Notation& composition_notation();

struct PrintOptions {
    bool fold_definitions = true;
    bool fold_notations = true;
};

/// Canonical printer. Application is left-associative and space separated,
/// non-dependent products print as `A -> B`, dependent products over `#` or
/// `##` as `Pi (X : #) -> B`, all others as `forall (x : A), B`.
/// With `fold_definitions`, the term is fully expanded and every subterm
/// equal to the expansion of a definition is printed by its name (latest
/// definitions first).
std::string print_term(const Term& t, const GlobalEnv* env, const std::vector<std::string>& names,
                       const PrintOptions& opts);

/// Replaces every closed subterm equal to the expansion of a definition by
/// the definition's name, latest definitions first. Expects an expanded term.
Term refold(const Term& t, const GlobalEnv& env);

/// Folded display used for traces and reports.
std::string fold_display(const Term& t, const GlobalEnv& env,
                         const std::vector<std::string>& names = {});

/// Folded display under a typed local context, whose hints name the free
/// variables. The types let compositions over local functions fold.
std::string fold_display(const Term& t, const GlobalEnv& env, const LocalCtx& ctx);

/// No folding at all, not even notations.
std::string print_raw(const Term& t, const std::vector<std::string>& names = {});

}  // namespace pts
