#include "pts/parser.hpp"

#include <algorithm>
#include <cstring>

#include "pts/errors.hpp"
#include "pts/typechecker.hpp"

namespace pts {

namespace {

enum class Tok {
    Ident,
    Meta,
    Sort,
    LParen,
    RParen,
    Colon,
    ColonEq,
    FatArrow,
    Arrow,
    Comma,
    Dot,
    Compose,
    Underscore,
    Eq,
    Fun,
    Forall,
    Pi,
    Let,
    In,
    Under,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    Sort sort = Sort::Star;
    int line = 1;
    int column = 1;
};

struct Reserved {
    const char* spelling;
    Tok kind;
};

// Multi-byte symbols that terminate identifiers.
constexpr Reserved kSymbols[] = {
    {"∘", Tok::Compose}, {"→", Tok::Arrow}, {"λ", Tok::Fun}, {"∀", Tok::Forall}, {"Π", Tok::Pi},
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t{Tok::End, {}, Sort::Star, line_, col_};
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            lex_one(t);
            out.push_back(std::move(t));
        }
    }

private:
    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance(1);
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance(1);
            } else {
                break;
            }
        }
    }

    void advance(std::size_t n) {
        for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
            unsigned char c = static_cast<unsigned char>(src_[pos_]);
            if (c == '\n') {
                ++line_;
                col_ = 1;
            } else if ((c & 0xC0) != 0x80) {
                ++col_;
            }
            ++pos_;
        }
    }

    bool starts(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    const Reserved* reserved_here() const {
        for (const auto& r : kSymbols)
            if (starts(r.spelling)) return &r;
        return nullptr;
    }

    bool ident_char_here() const {
        unsigned char c = static_cast<unsigned char>(src_[pos_]);
        if (std::isalnum(c) || c == '_' || c == '\'') return true;
        return c >= 0x80 && !reserved_here();
    }

    // `lambda-hol`: a dash directly followed by a letter continues an identifier.
    bool inner_dash_here() const {
        return src_[pos_] == '-' && pos_ + 1 < src_.size() &&
               std::isalpha(static_cast<unsigned char>(src_[pos_ + 1]));
    }

    void lex_one(Token& t) {
        if (const Reserved* r = reserved_here()) {
            t.kind = r->kind;
            t.text = r->spelling;
            advance(std::strlen(r->spelling));
            return;
        }
        auto sym = [&](Tok k, std::size_t n) {
            t.kind = k;
            t.text = std::string(src_.substr(pos_, n));
            advance(n);
        };
        char c = src_[pos_];
        if (starts(":=")) return sym(Tok::ColonEq, 2);
        if (starts("=>")) return sym(Tok::FatArrow, 2);
        if (starts("->")) return sym(Tok::Arrow, 2);
        if (starts("##")) {
            t.sort = Sort::Triangle;
            return sym(Tok::Sort, 2);
        }
        switch (c) {
        case '#': t.sort = Sort::Box; return sym(Tok::Sort, 1);
        case '*': t.sort = Sort::Star; return sym(Tok::Sort, 1);
        case '(': return sym(Tok::LParen, 1);
        case ')': return sym(Tok::RParen, 1);
        case ':': return sym(Tok::Colon, 1);
        case ',': return sym(Tok::Comma, 1);
        case '.': return sym(Tok::Dot, 1);
        case '=': return sym(Tok::Eq, 1);
        default: break;
        }
        if (c == '$') {
            advance(1);
            std::size_t start = pos_;
            while (pos_ < src_.size() && ident_char_here()) advance(1);
            if (pos_ == start) throw ParseError("expected metavariable name after `$`", t.line, t.column);
            t.kind = Tok::Meta;
            t.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        if (!ident_char_here())
            throw ParseError(std::string("unexpected character `") + c + "`", t.line, t.column);
        std::size_t start = pos_;
        while (pos_ < src_.size() && (ident_char_here() || inner_dash_here())) advance(1);
        t.text = std::string(src_.substr(start, pos_ - start));
        t.kind = Tok::Ident;
        if (t.text == "_") t.kind = Tok::Underscore;
        else if (t.text == "fun") t.kind = Tok::Fun;
        else if (t.text == "forall") t.kind = Tok::Forall;
        else if (t.text == "Pi") t.kind = Tok::Pi;
        else if (t.text == "let") t.kind = Tok::Let;
        else if (t.text == "in") t.kind = Tok::In;
        else if (t.text == "under") t.kind = Tok::Under;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
public:
    Parser(std::vector<Token> toks, std::vector<std::string> names)
        : toks_(std::move(toks)), names_(std::move(names)) {}

    std::vector<Statement> file() {
        std::vector<Statement> out;
        while (!at(Tok::End)) out.push_back(statement());
        return out;
    }

    Term whole_term() {
        Term t = term();
        expect(Tok::End, "end of input");
        return t;
    }

private:
    const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(Tok k) const { return peek().kind == k; }
    Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg, peek().line, peek().column);
    }

    Token expect(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what + ", found `" + peek().text + "`");
        return next();
    }

    std::string ident(const char* what) { return expect(Tok::Ident, what).text; }

    void keyword(const char* kw) {
        if (!at(Tok::Ident) || peek().text != kw) fail(std::string("expected `") + kw + "`");
        next();
    }

    Statement statement() {
        Statement s;
        s.line = peek().line;
        s.column = peek().column;
        if (!at(Tok::Ident)) fail("expected a directive");
        std::string kw = next().text;
        if (kw == "const") {
            std::string name = ident("constant name");
            expect(Tok::Colon, "`:`");
            s.body = ConstStmt{name, term()};
        } else if (kw == "def") {
            std::string name = ident("definition name");
            Telescope params = telescope();
            for (const auto& p : params) names_.push_back(p.first);
            expect(Tok::Colon, "`:`");
            Term type = term();
            expect(Tok::ColonEq, "`:=`");
            Term body = term();
            for (auto it = params.rbegin(); it != params.rend(); ++it) {
                names_.pop_back();
                type = mk_pi(it->first, it->second, type);
                body = mk_lam(it->first, it->second, body);
            }
            s.body = DefStmt{name, type, body};
        } else if (kw == "rewrite") {
            std::string name = ident("rule name");
            expect(Tok::Colon, "`:`");
            Term lhs = application();
            expect(Tok::FatArrow, "`=>`");
            s.body = RewriteStmt{name, lhs, term()};
        } else if (kw == "check" || kw == "conv") {
            Telescope ctx;
            if (at(Tok::Under)) {
                next();
                ctx = telescope();
                expect(Tok::Comma, "`,`");
            }
            for (const auto& p : ctx) names_.push_back(p.first);
            Term a = term();
            if (kw == "check") {
                expect(Tok::Colon, "`:`");
                s.body = CheckStmt{ctx, a, term()};
            } else {
                expect(Tok::Eq, "`=`");
                s.body = ConvStmt{ctx, a, term()};
            }
            names_.resize(names_.size() - ctx.size());
        } else if (kw == "trace") {
            std::string name = ident("trace name");
            expect(Tok::Colon, "`:`");
            Term type = term();
            expect(Tok::ColonEq, "`:=`");
            s.body = TraceStmt{name, type, term()};
        } else if (kw == "system") {
            std::string name;
            while (!at(Tok::Dot) && !at(Tok::End)) name += next().text;
            s.body = SystemStmt{name};
        } else if (kw == "sorts") {
            SortsStmt st;
            while (at(Tok::Sort)) st.sorts.push_back(next().sort);
            s.body = st;
        } else if (kw == "axioms") {
            AxiomsStmt st;
            while (at(Tok::LParen)) {
                next();
                Sort a = expect(Tok::Sort, "sort").sort;
                expect(Tok::Colon, "`:`");
                Sort b = expect(Tok::Sort, "sort").sort;
                expect(Tok::RParen, "`)`");
                st.axioms.push_back({a, b});
            }
            s.body = st;
        } else if (kw == "rules") {
            RulesStmt st;
            while (at(Tok::LParen)) {
                next();
                Sort a = expect(Tok::Sort, "sort").sort;
                expect(Tok::Comma, "`,`");
                Sort b = expect(Tok::Sort, "sort").sort;
                Sort c = b;
                if (at(Tok::Comma)) {
                    next();
                    c = expect(Tok::Sort, "sort").sort;
                }
                expect(Tok::RParen, "`)`");
                st.rules.push_back({a, b, c});
            }
            s.body = st;
        } else {
            throw ParseError("unknown directive `" + kw + "`", s.line, s.column);
        }
        expect(Tok::Dot, "`.` at end of directive");
        return s;
    }

    // (x y : T) groups; each type is parsed with the earlier binders in scope.
    Telescope telescope(bool allow_bare = false) {
        Telescope out;
        std::size_t pushed = 0;
        while (at(Tok::LParen) || (allow_bare && (at(Tok::Ident) || at(Tok::Underscore)))) {
            if (!at(Tok::LParen)) {
                std::string n = next().text;
                out.emplace_back(n, mk_hole());
                names_.push_back(n);
                ++pushed;
                continue;
            }
            next();
            std::vector<std::string> group;
            while (at(Tok::Ident) || at(Tok::Underscore)) group.push_back(next().text);
            if (group.empty()) fail("expected binder name");
            expect(Tok::Colon, "`:`");
            Term ty = term();
            expect(Tok::RParen, "`)`");
            for (std::size_t i = 0; i < group.size(); ++i) {
                out.emplace_back(group[i], shift(ty, static_cast<std::int64_t>(i)));
                names_.push_back(group[i]);
                ++pushed;
            }
        }
        names_.resize(names_.size() - pushed);
        return out;
    }

    Term binder_term(Tok kind) {
        next();
        Telescope bs = telescope(kind == Tok::Fun);
        if (bs.empty()) fail("expected binders");
        if (kind == Tok::Fun) expect(Tok::FatArrow, "`=>`");
        else if (kind == Tok::Forall) {
            if (!at(Tok::Comma) && !at(Tok::Arrow)) fail("expected `,`");
            next();
        } else {
            if (!at(Tok::Arrow) && !at(Tok::Comma)) fail("expected `->`");
            next();
        }
        for (const auto& b : bs) names_.push_back(b.first);
        Term body = term();
        names_.resize(names_.size() - bs.size());
        for (auto it = bs.rbegin(); it != bs.rend(); ++it)
            body = kind == Tok::Fun ? mk_lam(it->first, it->second, body)
                                    : mk_pi(it->first, it->second, body);
        return body;
    }

    Term term() {
        switch (peek().kind) {
        case Tok::Fun:
        case Tok::Forall:
        case Tok::Pi: return binder_term(peek().kind);
        case Tok::Let: {
            next();
            std::string n = at(Tok::Underscore) ? next().text : ident("let-bound name");
            Term ann = mk_hole();
            if (at(Tok::Colon)) {
                next();
                ann = term();
            }
            expect(Tok::ColonEq, "`:=`");
            Term defn = term();
            expect(Tok::In, "`in`");
            names_.push_back(n);
            Term body = term();
            names_.pop_back();
            return mk_let(n, ann, defn, body);
        }
        default: break;
        }
        Term lhs = composition();
        if (at(Tok::Arrow)) {
            next();
            names_.push_back("_");
            Term rhs = term();
            names_.pop_back();
            return mk_pi("_", lhs, rhs);
        }
        return lhs;
    }

    Term composition() {
        Term t = application();
        while (at(Tok::Compose)) {
            next();
            t = mk_app(mk_app(mk_const(kComposeName), t), application());
        }
        return t;
    }

    bool atom_start() const {
        switch (peek().kind) {
        case Tok::Ident:
        case Tok::Meta:
        case Tok::Sort:
        case Tok::Underscore:
        case Tok::LParen: return true;
        default: return false;
        }
    }

    Term application() {
        if (!atom_start()) fail("expected a term, found `" + peek().text + "`");
        Term t = atom();
        while (atom_start()) t = mk_app(t, atom());
        return t;
    }

    Term atom() {
        Token t = next();
        switch (t.kind) {
        case Tok::Sort: return mk_sort(t.sort);
        case Tok::Meta: return mk_meta(t.text);
        case Tok::Underscore: return mk_hole();
        case Tok::LParen: {
            Term inner = term();
            expect(Tok::RParen, "`)`");
            return inner;
        }
        case Tok::Ident: {
            for (std::size_t i = names_.size(); i-- > 0;)
                if (names_[i] == t.text)
                    return mk_var(static_cast<std::uint32_t>(names_.size() - 1 - i), t.text);
            return mk_const(t.text);
        }
        default: throw ParseError("unexpected `" + t.text + "`", t.line, t.column);
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<std::string> names_;
};

}  // namespace

std::vector<Statement> parse_file(std::string_view text) {
    return Parser(Lexer(text).run(), {}).file();
}

Term parse_term(std::string_view text, const std::vector<std::string>& names) {
    return Parser(Lexer(text).run(), names).whole_term();
}

}  // namespace pts
