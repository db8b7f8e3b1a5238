#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pts {

/// The three sorts shared by every system we check: `*`, `#` (box) and
/// `##` (triangle). Ordered Star < Box < Triangle.
enum class Sort : std::uint8_t { Star, Box, Triangle };

std::string_view sort_symbol(Sort s);

enum class Kind : std::uint8_t {
    Sort,
    Var,    // de Bruijn index, with display hint
    Const,  // global constant
    App,
    Lam,
    Pi,
    Let,
    Meta,   // pattern / rewrite metavariable `$name`
    Hole,   // opaque marker left behind by erasure
};

struct Node;

/// Immutable, shareable term. Hash and loose-index bound are computed once
/// at construction; neither depends on binder hints.
class Term {
public:
    Term() = default;

    bool valid() const { return node_ != nullptr; }
    explicit operator bool() const { return valid(); }

    Kind kind() const;
    Sort sort() const;
    std::uint32_t index() const;
    const std::string& name() const;  // Const/Meta name or binder hint

    const Term& fn() const;
    const Term& arg() const;
    const Term& dom() const;   // Lam, Pi
    const Term& body() const;  // Lam, Pi, Let
    const Term& ann() const;   // Let
    const Term& defn() const;  // Let

    std::size_t hash() const;
    /// One past the largest free de Bruijn index; 0 for closed terms.
    std::uint32_t loose_bound() const;

    bool is(Kind k) const { return valid() && kind() == k; }
    const Node* ptr() const { return node_.get(); }

private:
    friend Term make_node(Node&&);
    std::shared_ptr<const Node> node_;
};

Term mk_sort(Sort s);
Term mk_var(std::uint32_t index, std::string hint = {});
Term mk_const(std::string name);
Term mk_app(Term fn, Term arg);
Term mk_apps(Term head, const std::vector<Term>& args);
Term mk_lam(std::string hint, Term dom, Term body);
Term mk_pi(std::string hint, Term dom, Term body);
Term mk_arrow(Term dom, Term cod);  // cod is shifted under the new binder
Term mk_let(std::string hint, Term ann, Term defn, Term body);
Term mk_meta(std::string name);
Term mk_hole();

/// Head and arguments of an application spine, arguments left to right.
struct Spine {
    Term head;
    std::vector<Term> args;
};
Spine unspine(const Term& t);

/// Structural equality ignoring binder hints.
bool alpha_eq(const Term& a, const Term& b);

/// Adds `amount` to every free index >= cutoff.
Term shift(const Term& t, std::int64_t amount, std::uint32_t cutoff = 0);

/// Replaces index 0 of `body` by `value` and lowers the other free indices.
Term instantiate(const Term& body, const Term& value);

/// True if index `i` occurs free in t.
bool has_var(const Term& t, std::uint32_t i);

bool has_meta(const Term& t);
void collect_metas(const Term& t, std::vector<std::string>& out);

/// Number of nodes counted as a tree (shared subterms counted each time).
std::size_t tree_size(const Term& t, std::size_t cap = SIZE_MAX);

}  // namespace pts
