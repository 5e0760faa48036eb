#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "tydp/pattern.hpp"
#include "tydp/term.hpp"
#include "tydp/type.hpp"

namespace tydp {

struct SymbolDecl {
    std::string name;
    Type type;
    int recursive = 0;
    SourcePos pos;
};

/// `head p1 ... pm a1 ... aj -> rhs`. The arguments are kept as parsed
/// terms; whether they are constructor terms is decided by validation.
struct RewriteRule {
    std::string head;
    std::vector<Pattern> pattern_args;
    std::vector<Term> args;
    Term rhs;
    SourcePos pos;

    Term lhs() const;
};

struct RewriteSystem {
    std::vector<SymbolDecl> symbols;
    std::vector<RewriteRule> rules;

    const SymbolDecl* find_symbol(std::string_view name) const;
    bool empty() const { return symbols.empty() && rules.empty(); }
};

class ParseError : public std::runtime_error {
public:
    ParseError(SourcePos pos, const std::string& message, std::vector<std::string> expected = {});

    SourcePos pos() const { return pos_; }
    const std::string& detail() const { return detail_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    SourcePos pos_;
    std::string detail_;
    std::vector<std::string> expected_;
};

/// Parses a whole system. Identifiers in rules are resolved to symbols
/// when declared anywhere in the file and not shadowed by a binder.
RewriteSystem parse_system(std::string_view text);

/// Parses an annotated term against the symbols of `sys`.
Term parse_term(std::string_view text, const RewriteSystem& sys);

/// Parses a run-time term: no `[..]`, no `/\`, lambdas written `\x. t`.
ErasedTerm parse_erased_term(std::string_view text, const RewriteSystem& sys);

Pattern parse_pattern(std::string_view text);
Type parse_type(std::string_view text);

std::string print_system(const RewriteSystem& sys);
std::string print_rule(const RewriteRule& rule);
std::string print_symbol(const SymbolDecl& decl);

bool is_reserved_word(std::string_view word);

/// Structural equality of systems, up to bound-variable names.
bool systems_equal(const RewriteSystem& a, const RewriteSystem& b);

} // namespace tydp
