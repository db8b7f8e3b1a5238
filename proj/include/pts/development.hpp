#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pts/environment.hpp"
#include "pts/parser.hpp"
#include "pts/pts_spec.hpp"

namespace pts {

/// One line of a check report.
struct Judgment {
    std::string directive;  // const, def, rewrite, check, conv, trace
    std::string subject;    // entry name or folded statement
    bool ok = true;
    std::string error;
    std::optional<TypeErrorKind> error_kind;
    std::optional<std::pair<Sort, Sort>> missing_rule;
    int line = 0;
    int column = 0;
};

struct KeyTerm {
    std::string name;
    Term term;
    Term type;
};

/// Result of checking a development file.
struct Development {
    GlobalEnv env;
    std::vector<KeyTerm> key_terms;
    std::vector<Judgment> report;
    bool ok = true;

    const KeyTerm* key_term(std::string_view name) const;
};

/// Checks a parsed development. The signature comes from `system` or
/// `sorts`/`axioms`/`rules` directives unless `override_spec` is given;
/// the default is lambda-hol. Checking stops at the first failing entry;
/// failing `check`/`conv` directives are reported and checking continues.
Development check_development(const std::vector<Statement>& stmts,
                              std::optional<PtsSpec> override_spec = std::nullopt,
                              bool raw_errors = false);

Development check_development_text(std::string_view text,
                                   std::optional<PtsSpec> override_spec = std::nullopt);

/// Human readable report, one judgment per line.
std::string render_report(const Development& dev);

}  // namespace pts
