#include "pts/errors.hpp"

namespace pts {

std::string_view to_string(TypeErrorKind k) {
    switch (k) {
    case TypeErrorKind::UnknownConstant: return "UnknownConstant";
    case TypeErrorKind::NoAxiom: return "NoAxiom";
    case TypeErrorKind::NoRule: return "NoRule";
    case TypeErrorKind::NotAFunction: return "NotAFunction";
    case TypeErrorKind::DomainMismatch: return "DomainMismatch";
    case TypeErrorKind::NotASort: return "NotASort";
    case TypeErrorKind::FuelExhausted: return "FuelExhausted";
    }
    return "?";
}

namespace {

std::string render(TypeErrorKind kind, const std::string& detail, const std::string& path,
                   const std::optional<std::pair<Sort, Sort>>& rule) {
    std::string s(to_string(kind));
    if (rule) {
        s += "(";
        s += sort_symbol(rule->first);
        s += ",";
        s += sort_symbol(rule->second);
        s += ")";
    }
    if (!detail.empty()) s += ": " + detail;
    if (!path.empty()) s += " [at " + path + "]";
    return s;
}

}  // namespace

TypeError::TypeError(TypeErrorKind kind, std::string detail, std::string path,
                     std::optional<std::pair<Sort, Sort>> rule)
    : std::runtime_error(render(kind, detail, path, rule)), kind_(kind),
      detail_(std::move(detail)), path_(std::move(path)), rule_(rule) {}

TypeError TypeError::with_path(std::string path) const {
    TypeError e(kind_, detail_, std::move(path), rule_);
    e.terms = terms;
    e.names = names;
    return e;
}

std::string_view to_string(EnvErrorKind k) {
    switch (k) {
    case EnvErrorKind::DuplicateName: return "DuplicateName";
    case EnvErrorKind::IllTyped: return "IllTyped";
    case EnvErrorKind::IllFormedPattern: return "IllFormedPattern";
    case EnvErrorKind::UnknownConstant: return "UnknownConstant";
    }
    return "?";
}

EnvError::EnvError(EnvErrorKind kind, std::string entry, std::string detail,
                   std::optional<TypeError> cause)
    : std::runtime_error(std::string(to_string(kind)) + " in `" + entry + "`: " + detail),
      kind_(kind), entry_(std::move(entry)), cause_(std::move(cause)) {}

ParseError::ParseError(std::string message, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line), column_(column) {}

}  // namespace pts
