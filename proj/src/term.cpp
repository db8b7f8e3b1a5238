#include "pts/term.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <unordered_map>
#include <unordered_set>

namespace pts {

struct Node {
    Kind kind = Kind::Hole;
    Sort sort = Sort::Star;
    std::uint32_t index = 0;
    std::string name;
    Term a, b, c;
    std::size_t hash = 0;
    std::uint32_t loose = 0;
};

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
    return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::uint32_t under_binder(std::uint32_t loose) { return loose == 0 ? 0 : loose - 1; }

const std::string empty_string;

struct PairHash {
    std::size_t operator()(const std::pair<const Node*, std::uint32_t>& p) const {
        return mix(std::hash<const void*>{}(p.first), p.second);
    }
};

}  // namespace

Term make_node(Node&& n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 1000003u;
    switch (n.kind) {
    case Kind::Sort:
        h = mix(h, static_cast<std::size_t>(n.sort));
        break;
    case Kind::Var:
        h = mix(h, n.index);
        n.loose = n.index + 1;
        break;
    case Kind::Const:
    case Kind::Meta:
        h = mix(h, std::hash<std::string>{}(n.name));
        break;
    case Kind::App:
        h = mix(mix(h, n.a.hash()), n.b.hash());
        n.loose = std::max(n.a.loose_bound(), n.b.loose_bound());
        break;
    case Kind::Lam:
    case Kind::Pi:
        h = mix(mix(h, n.a.hash()), n.b.hash());
        n.loose = std::max(n.a.loose_bound(), under_binder(n.b.loose_bound()));
        break;
    case Kind::Let:
        h = mix(mix(mix(h, n.a.hash()), n.b.hash()), n.c.hash());
        n.loose = std::max({n.a.loose_bound(), n.b.loose_bound(), under_binder(n.c.loose_bound())});
        break;
    case Kind::Hole:
        break;
    }
    n.hash = h;
    Term t;
    t.node_ = std::make_shared<const Node>(std::move(n));
    return t;
}

std::string_view sort_symbol(Sort s) {
    switch (s) {
    case Sort::Star: return "*";
    case Sort::Box: return "#";
    case Sort::Triangle: return "##";
    }
    return "?";
}

Kind Term::kind() const { return node_->kind; }
Sort Term::sort() const { return node_->sort; }
std::uint32_t Term::index() const { return node_->index; }
const std::string& Term::name() const { return node_ ? node_->name : empty_string; }
const Term& Term::fn() const { return node_->a; }
const Term& Term::arg() const { return node_->b; }
const Term& Term::dom() const { return node_->a; }
const Term& Term::body() const { return node_->kind == Kind::Let ? node_->c : node_->b; }
const Term& Term::ann() const { return node_->a; }
const Term& Term::defn() const { return node_->b; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }
std::uint32_t Term::loose_bound() const { return node_ ? node_->loose : 0; }

Term mk_sort(Sort s) {
    Node n;
    n.kind = Kind::Sort;
    n.sort = s;
    return make_node(std::move(n));
}

Term mk_var(std::uint32_t index, std::string hint) {
    Node n;
    n.kind = Kind::Var;
    n.index = index;
    n.name = std::move(hint);
    return make_node(std::move(n));
}

Term mk_const(std::string name) {
    Node n;
    n.kind = Kind::Const;
    n.name = std::move(name);
    return make_node(std::move(n));
}

Term mk_app(Term fn, Term arg) {
    Node n;
    n.kind = Kind::App;
    n.a = std::move(fn);
    n.b = std::move(arg);
    return make_node(std::move(n));
}

Term mk_apps(Term head, const std::vector<Term>& args) {
    for (const auto& a : args) head = mk_app(std::move(head), a);
    return head;
}

Term mk_lam(std::string hint, Term dom, Term body) {
    Node n;
    n.kind = Kind::Lam;
    n.name = std::move(hint);
    n.a = std::move(dom);
    n.b = std::move(body);
    return make_node(std::move(n));
}

Term mk_pi(std::string hint, Term dom, Term body) {
    Node n;
    n.kind = Kind::Pi;
    n.name = std::move(hint);
    n.a = std::move(dom);
    n.b = std::move(body);
    return make_node(std::move(n));
}

Term mk_arrow(Term dom, Term cod) { return mk_pi("_", std::move(dom), shift(cod, 1)); }

Term mk_let(std::string hint, Term ann, Term defn, Term body) {
    Node n;
    n.kind = Kind::Let;
    n.name = std::move(hint);
    n.a = std::move(ann);
    n.b = std::move(defn);
    n.c = std::move(body);
    return make_node(std::move(n));
}

Term mk_meta(std::string name) {
    Node n;
    n.kind = Kind::Meta;
    n.name = std::move(name);
    return make_node(std::move(n));
}

Term mk_hole() {
    Node n;
    n.kind = Kind::Hole;
    return make_node(std::move(n));
}

Spine unspine(const Term& t) {
    Spine s;
    Term cur = t;
    while (cur.is(Kind::App)) {
        s.args.push_back(cur.arg());
        cur = cur.fn();
    }
    std::reverse(s.args.begin(), s.args.end());
    s.head = cur;
    return s;
}

bool alpha_eq(const Term& a, const Term& b) {
    if (a.ptr() == b.ptr()) return true;
    if (!a.valid() || !b.valid()) return false;
    if (a.hash() != b.hash() || a.kind() != b.kind() || a.loose_bound() != b.loose_bound())
        return false;
    switch (a.kind()) {
    case Kind::Sort: return a.sort() == b.sort();
    case Kind::Var: return a.index() == b.index();
    case Kind::Const:
    case Kind::Meta: return a.name() == b.name();
    case Kind::App: return alpha_eq(a.fn(), b.fn()) && alpha_eq(a.arg(), b.arg());
    case Kind::Lam:
    case Kind::Pi: return alpha_eq(a.dom(), b.dom()) && alpha_eq(a.body(), b.body());
    case Kind::Let:
        return alpha_eq(a.ann(), b.ann()) && alpha_eq(a.defn(), b.defn()) &&
               alpha_eq(a.body(), b.body());
    case Kind::Hole: return true;
    }
    return false;
}

namespace {

class Shifter {
public:
    explicit Shifter(std::int64_t amount) : amount_(amount) {}

    Term run(const Term& t, std::uint32_t cutoff) {
        if (t.loose_bound() <= cutoff) return t;
        auto key = std::make_pair(t.ptr(), cutoff);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Term r;
        switch (t.kind()) {
        case Kind::Var: {
            auto idx = static_cast<std::int64_t>(t.index()) + amount_;
            assert(idx >= 0);
            r = mk_var(static_cast<std::uint32_t>(idx), t.name());
            break;
        }
        case Kind::App: r = mk_app(run(t.fn(), cutoff), run(t.arg(), cutoff)); break;
        case Kind::Lam: r = mk_lam(t.name(), run(t.dom(), cutoff), run(t.body(), cutoff + 1)); break;
        case Kind::Pi: r = mk_pi(t.name(), run(t.dom(), cutoff), run(t.body(), cutoff + 1)); break;
        case Kind::Let:
            r = mk_let(t.name(), run(t.ann(), cutoff), run(t.defn(), cutoff), run(t.body(), cutoff + 1));
            break;
        default: r = t; break;
        }
        memo_.emplace(key, r);
        return r;
    }

private:
    std::int64_t amount_;
    std::unordered_map<std::pair<const Node*, std::uint32_t>, Term, PairHash> memo_;
};

class Instantiator {
public:
    explicit Instantiator(const Term& value) : value_(value) {}

    Term run(const Term& t, std::uint32_t depth) {
        if (t.loose_bound() <= depth) return t;
        auto key = std::make_pair(t.ptr(), depth);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        Term r;
        switch (t.kind()) {
        case Kind::Var:
            if (t.index() == depth) r = shifted(depth);
            else r = mk_var(t.index() - 1, t.name());
            break;
        case Kind::App: r = mk_app(run(t.fn(), depth), run(t.arg(), depth)); break;
        case Kind::Lam: r = mk_lam(t.name(), run(t.dom(), depth), run(t.body(), depth + 1)); break;
        case Kind::Pi: r = mk_pi(t.name(), run(t.dom(), depth), run(t.body(), depth + 1)); break;
        case Kind::Let:
            r = mk_let(t.name(), run(t.ann(), depth), run(t.defn(), depth), run(t.body(), depth + 1));
            break;
        default: r = t; break;
        }
        memo_.emplace(key, r);
        return r;
    }

private:
    Term shifted(std::uint32_t depth) {
        if (depth >= cache_.size()) cache_.resize(depth + 1);
        if (!cache_[depth]) cache_[depth] = shift(value_, depth);
        return cache_[depth];
    }

    Term value_;
    std::vector<Term> cache_;
    std::unordered_map<std::pair<const Node*, std::uint32_t>, Term, PairHash> memo_;
};

}  // namespace

Term shift(const Term& t, std::int64_t amount, std::uint32_t cutoff) {
    if (amount == 0 || t.loose_bound() <= cutoff) return t;
    return Shifter(amount).run(t, cutoff);
}

Term instantiate(const Term& body, const Term& value) {
    if (body.loose_bound() == 0) return body;
    return Instantiator(value).run(body, 0);
}

bool has_var(const Term& t, std::uint32_t i) {
    if (t.loose_bound() <= i) return false;
    switch (t.kind()) {
    case Kind::Var: return t.index() == i;
    case Kind::App: return has_var(t.fn(), i) || has_var(t.arg(), i);
    case Kind::Lam:
    case Kind::Pi: return has_var(t.dom(), i) || has_var(t.body(), i + 1);
    case Kind::Let: return has_var(t.ann(), i) || has_var(t.defn(), i) || has_var(t.body(), i + 1);
    default: return false;
    }
}

void collect_metas(const Term& t, std::vector<std::string>& out) {
    switch (t.kind()) {
    case Kind::Meta:
        if (std::find(out.begin(), out.end(), t.name()) == out.end()) out.push_back(t.name());
        break;
    case Kind::App:
        collect_metas(t.fn(), out);
        collect_metas(t.arg(), out);
        break;
    case Kind::Lam:
    case Kind::Pi:
        collect_metas(t.dom(), out);
        collect_metas(t.body(), out);
        break;
    case Kind::Let:
        collect_metas(t.ann(), out);
        collect_metas(t.defn(), out);
        collect_metas(t.body(), out);
        break;
    default: break;
    }
}

bool has_meta(const Term& t) {
    std::vector<std::string> ms;
    collect_metas(t, ms);
    return !ms.empty();
}

std::size_t tree_size(const Term& t, std::size_t cap) {
    std::size_t n = 0;
    std::vector<const Term*> stack{&t};
    while (!stack.empty() && n < cap) {
        const Term* cur = stack.back();
        stack.pop_back();
        ++n;
        switch (cur->kind()) {
        case Kind::App: stack.push_back(&cur->fn()); stack.push_back(&cur->arg()); break;
        case Kind::Lam:
        case Kind::Pi: stack.push_back(&cur->dom()); stack.push_back(&cur->body()); break;
        case Kind::Let:
            stack.push_back(&cur->ann());
            stack.push_back(&cur->defn());
            stack.push_back(&cur->body());
            break;
        default: break;
        }
    }
    return n;
}

}  // namespace pts
