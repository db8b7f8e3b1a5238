#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pts/errors.hpp"
#include "pts/pts_spec.hpp"
#include "pts/term.hpp"

namespace pts {

struct Decl {
    std::string name;
    Term type;
};

struct Def {
    std::string name;
    Term type;
    Term body;
};

/// Left-linear rewrite rule. `lhs` is a declared constant applied to
/// metavariables or rigid sub-patterns; `rhs` may only use metavariables of
/// `lhs`.
struct Rewrite {
    std::string name;
    Term lhs;
    Term rhs;
};

using EnvEntry = std::variant<Decl, Def, Rewrite>;

const std::string& entry_name(const EnvEntry& e);

using MetaSubst = std::map<std::string, Term>;

/// Ordered, persistent global context. Extension returns a new value and
/// never mutates the receiver.
class GlobalEnv {
public:
    explicit GlobalEnv(PtsSpec spec);

    /// Type checks `e` against this environment and returns the extension.
    GlobalEnv add_entry(EnvEntry e) const;
    /// Extension without checking; used for derived environments such as
    /// erased copies, where typing no longer applies.
    GlobalEnv add_unchecked(EnvEntry e) const;

    const EnvEntry& lookup(std::string_view name) const;
    const EnvEntry* find(std::string_view name) const;
    const Def* find_def(std::string_view name) const;
    /// Declared type of a Decl or Def.
    std::optional<Term> type_of(std::string_view name) const;
    /// Fully delta-expanded body of a Def.
    const Term* unfolded(std::string_view name) const;
    /// Position in declaration order; later entries have larger positions.
    std::optional<std::size_t> position(std::string_view name) const;

    std::vector<const Rewrite*> rules_for(std::string_view head) const;
    /// Defs whose fully expanded body has the given hash, latest first.
    std::vector<const Def*> defs_with_unfolded_hash(std::size_t hash) const;

    std::size_t size() const;
    const EnvEntry& entry(std::size_t i) const;
    std::size_t rewrite_count() const;

    const PtsSpec& spec() const { return spec_; }

private:
    struct Data;
    GlobalEnv extend(EnvEntry e) const;

    PtsSpec spec_;
    std::shared_ptr<const Data> data_;
};

/// Expands every Def and Let; the result mentions only opaque constants.
Term unfold_all(const Term& t, const GlobalEnv& env);

/// Throws EnvError(IllFormedPattern) unless `lhs` is a constant applied to
/// pairwise distinct metavariables or rigid sub-patterns.
void validate_pattern(const Term& lhs, std::string_view rule_name = {});

/// Syntactic match: instantiate(pattern, result) is alpha-equal to `t`.
std::optional<MetaSubst> match_pattern(const Term& pattern, const Term& t);

/// Matches `pattern` against a prefix of the spine of `t`. Before a rigid
/// sub-pattern is compared, `expose` is applied to the corresponding
/// argument (typically weak-head reduction). On success, `rest` receives the
/// unmatched trailing arguments.
std::optional<MetaSubst> match_pattern_prefix(
    const Term& pattern, const Term& t, const std::function<Term(const Term&)>& expose,
    std::vector<Term>* rest);

/// Replaces metavariables by their assignment, shifting under binders.
Term instantiate_metas(const Term& t, const MetaSubst& subst);

}  // namespace pts
