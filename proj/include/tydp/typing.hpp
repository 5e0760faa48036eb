#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tydp/syntax.hpp"

namespace tydp {

/// Machine-readable finding. `code` is a stable identifier such as
/// "E-MIN-PATTERN-MISMATCH".
struct Diagnostic {
    std::string code;
    std::string message;
    SourcePos pos;
    std::string subject;
    /// Index of the offending rule, if any.
    std::optional<std::size_t> rule;

    std::string str() const;
};

// ---------------------------------------------------------------------------
// Subtyping and polarity

bool pattern_sub(const Pattern& p, const Pattern& q);
bool type_sub(const Type& t, const Type& u);

enum class Polarity { Absent, Positive, Negative, Both };

Polarity join(Polarity a, Polarity b);
Polarity flip(Polarity p);
Polarity polarity(const std::string& var, const Type& t);
const char* to_string(Polarity p);

// ---------------------------------------------------------------------------
// Signatures

struct SignatureEntry {
    Type type;
    int recursive = 0;
    std::size_t quantifiers = 0;
    SourcePos pos;
};

class Signature {
public:
    Signature() = default;
    explicit Signature(const RewriteSystem& sys);

    const SignatureEntry* find(const std::string& name) const;
    bool contains(const std::string& name) const { return find(name) != nullptr; }
    int recursive_count(const std::string& name) const;
    const std::map<std::string, SignatureEntry>& entries() const { return entries_; }

private:
    std::map<std::string, SignatureEntry> entries_;
};

/// Empty iff every declaration has the shape
/// `forall a1..an. B(a1) -> ... -> B(ak) -> T` with n >= k, distinct binders
/// and no negative occurrence of a1..ak in T.
std::vector<Diagnostic> validate_signature(const RewriteSystem& sys);

// ---------------------------------------------------------------------------
// Contexts and judgements

class Context {
public:
    /// Adds or shadows `name`.
    void bind(const std::string& name, Type type);
    const Type* lookup(const std::string& name) const;
    std::set<std::string> free_pattern_vars() const;
    const std::vector<std::pair<std::string, Type>>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::string str() const;

private:
    std::vector<std::pair<std::string, Type>> entries_;
};

class TypeError : public std::runtime_error {
public:
    TypeError(std::string code, SourcePos pos, const std::string& message, std::string subterm = {},
              std::optional<Type> expected = {}, std::optional<Type> actual = {});

    const std::string& code() const { return code_; }
    SourcePos pos() const { return pos_; }
    const std::string& subterm() const { return subterm_; }
    const std::optional<Type>& expected() const { return expected_; }
    const std::optional<Type>& actual() const { return actual_; }

    Diagnostic diagnostic() const;

private:
    std::string code_;
    SourcePos pos_;
    std::string subterm_;
    std::optional<Type> expected_;
    std::optional<Type> actual_;
};

/// Algorithmic type synthesis; subsumption is applied at application arguments.
/// Throws TypeError.
Type synthesize(const Context& ctx, const Term& t, const Signature& sig);

/// `synthesize(ctx, t) <= expected`. Type errors inside `t` propagate.
bool check(const Context& ctx, const Term& t, const Type& expected, const Signature& sig);

// ---------------------------------------------------------------------------
// Left-hand sides

/// Constructor term `x | Leaf | Node[p1,p2] l1 l2`; the annotation is
/// absent when it was left to inference.
struct ConstructorTerm {
    enum class Kind { Var, Leaf, Node };

    Kind kind = Kind::Leaf;
    std::string name;
    std::optional<std::pair<Pattern, Pattern>> annotation;
    std::vector<ConstructorTerm> children;
    SourcePos pos;
};

std::optional<ConstructorTerm> to_constructor_term(const Term& t);

struct MinTypingResult {
    Context context;
    Type lhs_type = Type::base(Pattern::wildcard());
    std::vector<Pattern> recursive_patterns;
    /// Every pattern variable the left-hand side introduces.
    std::set<std::string> pattern_vars;
};

/// Minimal typing of a rule's left-hand side. Throws TypeError.
MinTypingResult min_type_lhs(const RewriteRule& rule, const Signature& sig);

struct ValidatedRule {
    std::size_t index = 0;
    RewriteRule rule;
    MinTypingResult typing;
};

std::variant<ValidatedRule, std::vector<Diagnostic>> validate_rule(const RewriteRule& rule, const Signature& sig,
                                                                   std::size_t index = 0);

/// A system whose signature and every rule passed validation.
struct ValidatedSystem {
    RewriteSystem system;
    Signature signature;
    std::vector<ValidatedRule> rules;
};

struct SystemValidation {
    std::optional<ValidatedSystem> system;
    std::vector<Diagnostic> diagnostics;
    /// Per-rule outcome, parallel to the input rules.
    std::vector<std::optional<ValidatedRule>> rules;

    bool ok() const { return system.has_value(); }
};

SystemValidation validate_system(const RewriteSystem& sys);

} // namespace tydp
