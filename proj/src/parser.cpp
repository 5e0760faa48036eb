#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "tydp/syntax.hpp"

namespace tydp {

namespace {

constexpr std::array<std::string_view, 10> kReserved = {
    "Leaf", "Node", "B", "leaf", "node", "bot", "forall", "rule", "symbol", "recursive"};

enum class Tok { Ident, Nat, Punct, End };

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::Nat: return "number '" + t.text + "'";
        default: return "'" + t.text + "'";
    }
}

std::vector<Token> lex(std::string_view src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    auto ident_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto ident_char = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; };

    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            continue;
        }
        SourcePos pos{line, col};
        if (ident_start(c)) {
            std::size_t j = i + 1;
            while (j < src.size() && ident_char(src[j])) ++j;
            std::string text(src.substr(i, j - i));
            out.push_back({text == "_" ? Tok::Punct : Tok::Ident, text, pos});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i + 1;
            while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
            out.push_back({Tok::Nat, std::string(src.substr(i, j - i)), pos});
            advance(j - i);
            continue;
        }
        if (src.substr(i, 2) == "->" || src.substr(i, 2) == "/\\") {
            out.push_back({Tok::Punct, std::string(src.substr(i, 2)), pos});
            advance(2);
            continue;
        }
        static constexpr std::string_view single = ":;()[],.\\";
        if (single.find(c) != std::string_view::npos) {
            out.push_back({Tok::Punct, std::string(1, c), pos});
            advance(1);
            continue;
        }
        throw ParseError(pos, std::string("unexpected character '") + c + "'");
    }
    out.push_back({Tok::End, "", SourcePos{line, col}});
    return out;
}

class Parser {
public:
    Parser(std::string_view src, bool erased) : toks_(lex(src)), erased_(erased) {}

    RewriteSystem system() {
        RewriteSystem sys;
        std::vector<std::pair<Term, Term>> raw_rules;
        std::vector<SourcePos> rule_pos;
        while (!at_end()) {
            if (is_word("symbol")) {
                sys.symbols.push_back(symbol_decl());
            } else if (is_word("rule")) {
                SourcePos pos = peek().pos;
                next();
                Term lhs = term();
                expect("->");
                Term rhs = term();
                expect(";");
                raw_rules.emplace_back(std::move(lhs), std::move(rhs));
                rule_pos.push_back(pos);
            } else {
                fail({"symbol", "rule"});
            }
        }
        std::set<std::string> symbols;
        for (const auto& s : sys.symbols) symbols.insert(s.name);
        for (std::size_t i = 0; i < raw_rules.size(); ++i)
            sys.rules.push_back(make_rule(raw_rules[i].first, raw_rules[i].second, rule_pos[i], symbols));
        return sys;
    }

    Type whole_type() {
        Type t = type();
        expect_end();
        return t;
    }

    Pattern whole_pattern() {
        Pattern p = pattern();
        expect_end();
        return p;
    }

    Term whole_term() {
        Term t = term();
        expect_end();
        return t;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    bool at_end() const { return peek().kind == Tok::End; }
    void next() {
        if (!at_end()) ++pos_;
    }
    bool is_punct(std::string_view p) const { return peek().kind == Tok::Punct && peek().text == p; }
    bool is_word(std::string_view w) const { return peek().kind == Tok::Ident && peek().text == w; }
    bool is_plain_ident() const { return peek().kind == Tok::Ident && !is_reserved_word(peek().text); }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        std::string msg = "unexpected " + describe(peek());
        throw ParseError(peek().pos, msg, std::move(expected));
    }

    void expect(std::string_view p) {
        if (!is_punct(p) && !is_word(p)) fail({std::string(p)});
        next();
    }

    void expect_end() {
        if (!at_end()) fail({"end of input"});
    }

    std::string ident() {
        if (!is_plain_ident()) fail({"identifier"});
        std::string name = peek().text;
        next();
        return name;
    }

    SymbolDecl symbol_decl() {
        SymbolDecl decl{{}, Type::base(Pattern::wildcard()), 0, peek().pos};
        expect("symbol");
        decl.name = ident();
        expect(":");
        decl.type = type();
        expect("recursive");
        if (peek().kind != Tok::Nat) fail({"natural number"});
        try {
            decl.recursive = std::stoi(peek().text);
        } catch (const std::out_of_range&) {
            throw ParseError(peek().pos, "recursive-argument count out of range");
        }
        next();
        expect(";");
        return decl;
    }

    Type type() {
        if (is_word("forall")) {
            next();
            std::vector<std::string> binders;
            binders.push_back(ident());
            while (is_plain_ident()) binders.push_back(ident());
            expect(".");
            return Type::forall(binders, type());
        }
        Type dom = atomic_type();
        if (is_punct("->")) {
            next();
            return Type::arrow(std::move(dom), type());
        }
        return dom;
    }

    Type atomic_type() {
        if (is_word("B")) {
            next();
            expect("(");
            Pattern p = pattern();
            expect(")");
            return Type::base(std::move(p));
        }
        if (is_punct("(")) {
            next();
            Type t = type();
            expect(")");
            return t;
        }
        fail({"B", "(", "forall"});
    }

    Pattern pattern() {
        if (is_word("leaf")) {
            next();
            return Pattern::leaf();
        }
        if (is_word("bot")) {
            next();
            return Pattern::bottom();
        }
        if (is_punct("_")) {
            next();
            return Pattern::wildcard();
        }
        if (is_word("node")) {
            next();
            expect("(");
            Pattern l = pattern();
            expect(",");
            Pattern r = pattern();
            expect(")");
            return Pattern::node(std::move(l), std::move(r));
        }
        if (is_plain_ident()) return Pattern::var(ident());
        fail({"identifier", "leaf", "node", "_", "bot"});
    }

    Term term() {
        SourcePos pos = peek().pos;
        if (is_punct("\\")) {
            next();
            std::string x = ident();
            Type annot = Type::base(Pattern::wildcard());
            if (erased_) {
                if (is_punct(":")) throw ParseError(peek().pos, "type annotations are not allowed in run-time terms");
            } else {
                expect(":");
                annot = type();
            }
            expect(".");
            return Term::lam(std::move(x), std::move(annot), term(), pos);
        }
        if (is_punct("/\\")) {
            if (erased_) throw ParseError(pos, "pattern abstraction is not allowed in run-time terms");
            next();
            std::vector<std::string> binders;
            binders.push_back(ident());
            while (is_plain_ident()) binders.push_back(ident());
            expect(".");
            Term body = term();
            for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = Term::pat_lam(*it, std::move(body), pos);
            return body;
        }
        return application();
    }

    bool starts_atom() const {
        return is_plain_ident() || is_word("Leaf") || is_word("Node") || is_punct("(");
    }

    Term application() {
        SourcePos pos = peek().pos;
        Term t = atom();
        for (;;) {
            if (starts_atom()) {
                t = Term::app(std::move(t), atom(), pos);
            } else if (is_punct("[")) {
                if (erased_) throw ParseError(peek().pos, "pattern arguments are not allowed in run-time terms");
                next();
                t = Term::pat_app(std::move(t), pattern(), pos);
                while (is_punct(",")) {
                    next();
                    t = Term::pat_app(std::move(t), pattern(), pos);
                }
                expect("]");
            } else {
                return t;
            }
        }
    }

    Term atom() {
        SourcePos pos = peek().pos;
        if (is_word("Leaf")) {
            next();
            return Term::leaf_con(pos);
        }
        if (is_word("Node")) {
            next();
            return Term::node_con(pos);
        }
        if (is_punct("(")) {
            next();
            Term t = term();
            expect(")");
            return t;
        }
        if (is_plain_ident()) return Term::var(ident(), pos);
        if (erased_) fail({"identifier", "Leaf", "Node", "(", "\\"});
        fail({"identifier", "Leaf", "Node", "(", "\\", "/\\"});
    }

    RewriteRule make_rule(const Term& lhs, const Term& rhs, SourcePos pos, const std::set<std::string>& symbols) {
        std::vector<const Term*> spine;
        const Term* head = &lhs;
        while (head->kind() == Term::Kind::App || head->kind() == Term::Kind::PatApp) {
            spine.push_back(head);
            head = &head->fun();
        }
        if (head->kind() != Term::Kind::Var)
            throw ParseError(head->pos(), "rule left-hand side must be headed by a function symbol", {"identifier"});
        RewriteRule rule{head->name(), {}, {}, rhs, pos};
        for (auto it = spine.rbegin(); it != spine.rend(); ++it) {
            const Term& t = **it;
            if (t.kind() == Term::Kind::PatApp) {
                if (!rule.args.empty())
                    throw ParseError(t.pos(), "pattern arguments must precede term arguments in a left-hand side");
                rule.pattern_args.push_back(t.pattern_arg());
            } else {
                rule.args.push_back(resolve(t.arg(), {}, symbols));
            }
        }
        std::set<std::string> scope;
        for (const auto& a : rule.args) {
            auto fv = free_vars(a).term_vars;
            scope.insert(fv.begin(), fv.end());
        }
        rule.rhs = resolve(rhs, scope, symbols);
        return rule;
    }

public:
    static Term resolve(const Term& t, const std::set<std::string>& scope, const std::set<std::string>& symbols) {
        switch (t.kind()) {
            case Term::Kind::Var:
                if (!scope.contains(t.name()) && symbols.contains(t.name())) return Term::symbol(t.name(), t.pos());
                return t;
            case Term::Kind::App:
                return Term::app(resolve(t.fun(), scope, symbols), resolve(t.arg(), scope, symbols), t.pos());
            case Term::Kind::PatApp: return Term::pat_app(resolve(t.fun(), scope, symbols), t.pattern_arg(), t.pos());
            case Term::Kind::Lam: {
                auto inner = scope;
                inner.insert(t.name());
                return Term::lam(t.name(), t.annotation(), resolve(t.body(), inner, symbols), t.pos());
            }
            case Term::Kind::PatLam: return Term::pat_lam(t.name(), resolve(t.body(), scope, symbols), t.pos());
            default: return t;
        }
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    bool erased_;
};

std::set<std::string> symbol_names(const RewriteSystem& sys) {
    std::set<std::string> out;
    for (const auto& s : sys.symbols) out.insert(s.name);
    return out;
}

} // namespace

ParseError::ParseError(SourcePos pos, const std::string& message, std::vector<std::string> expected)
    : std::runtime_error([&] {
          std::string what = pos.str() + ": " + message;
          if (!expected.empty()) {
              what += " (expected ";
              for (std::size_t i = 0; i < expected.size(); ++i) {
                  if (i) what += ", ";
                  what += "'" + expected[i] + "'";
              }
              what += ")";
          }
          return what;
      }()),
      pos_(pos),
      detail_(message),
      expected_(std::move(expected)) {}

bool is_reserved_word(std::string_view word) {
    return std::find(kReserved.begin(), kReserved.end(), word) != kReserved.end();
}

Term RewriteRule::lhs() const {
    Term t = Term::symbol(head, pos);
    for (const auto& p : pattern_args) t = Term::pat_app(t, p, pos);
    for (const auto& a : args) t = Term::app(t, a, pos);
    return t;
}

const SymbolDecl* RewriteSystem::find_symbol(std::string_view name) const {
    for (const auto& s : symbols)
        if (s.name == name) return &s;
    return nullptr;
}

RewriteSystem parse_system(std::string_view text) { return Parser(text, false).system(); }

Term parse_term(std::string_view text, const RewriteSystem& sys) {
    return Parser::resolve(Parser(text, false).whole_term(), {}, symbol_names(sys));
}

ErasedTerm parse_erased_term(std::string_view text, const RewriteSystem& sys) {
    return erase(Parser::resolve(Parser(text, true).whole_term(), {}, symbol_names(sys)));
}

Pattern parse_pattern(std::string_view text) { return Parser(text, false).whole_pattern(); }

Type parse_type(std::string_view text) { return Parser(text, false).whole_type(); }

} // namespace tydp
