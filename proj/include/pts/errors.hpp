#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pts/term.hpp"

namespace pts {

enum class TypeErrorKind {
    UnknownConstant,
    NoAxiom,
    NoRule,
    NotAFunction,
    DomainMismatch,
    NotASort,
    FuelExhausted,
};

std::string_view to_string(TypeErrorKind k);

class TypeError : public std::runtime_error {
public:
    TypeError(TypeErrorKind kind, std::string detail, std::string path = {},
              std::optional<std::pair<Sort, Sort>> rule = std::nullopt);

    TypeErrorKind kind() const { return kind_; }
    const std::string& detail() const { return detail_; }
    /// Slash-separated route from the checked term to the offending subterm.
    const std::string& path() const { return path_; }
    /// The missing (s1, s2) pair for NoRule.
    const std::optional<std::pair<Sort, Sort>>& rule() const { return rule_; }

    TypeError with_path(std::string path) const;

    /// Offending terms for mismatches (term, found type, expected type) and
    /// the local binder names they live under; used for `--raw` rendering.
    std::vector<Term> terms;
    std::vector<std::string> names;

private:
    TypeErrorKind kind_;
    std::string detail_;
    std::string path_;
    std::optional<std::pair<Sort, Sort>> rule_;
};

enum class EnvErrorKind { DuplicateName, IllTyped, IllFormedPattern, UnknownConstant };

std::string_view to_string(EnvErrorKind k);

class EnvError : public std::runtime_error {
public:
    EnvError(EnvErrorKind kind, std::string entry, std::string detail,
             std::optional<TypeError> cause = std::nullopt);

    EnvErrorKind kind() const { return kind_; }
    const std::string& entry() const { return entry_; }
    const std::optional<TypeError>& cause() const { return cause_; }

private:
    EnvErrorKind kind_;
    std::string entry_;
    std::optional<TypeError> cause_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::string message, int line, int column);
    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace pts
