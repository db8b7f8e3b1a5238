#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pts/pts_spec.hpp"
#include "pts/term.hpp"

namespace pts {

/// `(x : T)` binders of `check`/`conv under ...` and of `def` parameters.
using Telescope = std::vector<std::pair<std::string, Term>>;

struct ConstStmt {
    std::string name;
    Term type;
};
struct DefStmt {
    std::string name;
    Term type;
    Term body;
};
struct RewriteStmt {
    std::string name;
    Term lhs;
    Term rhs;
};
struct CheckStmt {
    Telescope ctx;
    Term term;
    Term type;
};
struct ConvStmt {
    Telescope ctx;
    Term lhs;
    Term rhs;
};
/// A named start term for traces, checked against `type`.
struct TraceStmt {
    std::string name;
    Term type;
    Term term;
};
struct SystemStmt {
    std::string name;
};
struct SortsStmt {
    std::vector<Sort> sorts;
};
struct AxiomsStmt {
    std::vector<Axiom> axioms;
};
struct RulesStmt {
    std::vector<Rule> rules;
};

using StmtBody = std::variant<ConstStmt, DefStmt, RewriteStmt, CheckStmt, ConvStmt, TraceStmt,
                              SystemStmt, SortsStmt, AxiomsStmt, RulesStmt>;

struct Statement {
    StmtBody body;
    int line = 0;
    int column = 0;
};

/// Parses a development file. Terms come back unelaborated: `g∘f` is kept as
/// an application of the internal composition constant.
std::vector<Statement> parse_file(std::string_view text);

/// Parses a single term; `names` are the enclosing binders, outermost first.
Term parse_term(std::string_view text, const std::vector<std::string>& names = {});

}  // namespace pts
