#include "tydp/typing.hpp"

#include <algorithm>
#include <set>

namespace tydp {

std::string Diagnostic::str() const {
    std::string out;
    if (pos.known()) out += pos.str() + ": ";
    out += code + ": " + message;
    return out;
}

// ---------------------------------------------------------------------------
// Subtyping

bool pattern_sub(const Pattern& p, const Pattern& q) {
    if (q.is_wildcard() || p.is_bottom()) return true;
    if (p.kind() != q.kind()) return false;
    switch (p.kind()) {
        case Pattern::Kind::Var: return p.name() == q.name();
        case Pattern::Kind::Leaf: return true;
        case Pattern::Kind::Node: return pattern_sub(p.left(), q.left()) && pattern_sub(p.right(), q.right());
        default: return false;
    }
}

bool type_sub(const Type& t, const Type& u) {
    if (t.kind() != u.kind()) return false;
    switch (t.kind()) {
        case Type::Kind::Base: return pattern_sub(t.pattern(), u.pattern());
        case Type::Kind::Arrow: return type_sub(u.domain(), t.domain()) && type_sub(t.codomain(), u.codomain());
        case Type::Kind::Forall: {
            if (t.binder() == u.binder()) return type_sub(t.body(), u.body());
            std::set<std::string> names;
            t.collect_all_names(names);
            u.collect_all_names(names);
            auto shared = Pattern::var(fresh_name(t.binder(), names));
            return type_sub(subst_pattern(t.body(), t.binder(), shared), subst_pattern(u.body(), u.binder(), shared));
        }
    }
    return false;
}

// ---------------------------------------------------------------------------
// Polarity

Polarity join(Polarity a, Polarity b) {
    if (a == Polarity::Absent) return b;
    if (b == Polarity::Absent || a == b) return a;
    return Polarity::Both;
}

Polarity flip(Polarity p) {
    switch (p) {
        case Polarity::Positive: return Polarity::Negative;
        case Polarity::Negative: return Polarity::Positive;
        default: return p;
    }
}

Polarity polarity(const std::string& var, const Type& t) {
    switch (t.kind()) {
        case Type::Kind::Base: return t.pattern().vars().contains(var) ? Polarity::Positive : Polarity::Absent;
        case Type::Kind::Arrow: return join(flip(polarity(var, t.domain())), polarity(var, t.codomain()));
        case Type::Kind::Forall: return t.binder() == var ? Polarity::Absent : polarity(var, t.body());
    }
    return Polarity::Absent;
}

const char* to_string(Polarity p) {
    switch (p) {
        case Polarity::Absent: return "absent";
        case Polarity::Positive: return "positive";
        case Polarity::Negative: return "negative";
        case Polarity::Both: return "both";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Signatures

Signature::Signature(const RewriteSystem& sys) {
    for (const auto& decl : sys.symbols)
        entries_.try_emplace(decl.name, SignatureEntry{decl.type, decl.recursive, quantifier_count(decl.type), decl.pos});
}

const SignatureEntry* Signature::find(const std::string& name) const {
    auto it = entries_.find(name);
    return it == entries_.end() ? nullptr : &it->second;
}

int Signature::recursive_count(const std::string& name) const {
    const auto* e = find(name);
    return e ? e->recursive : 0;
}

std::vector<Diagnostic> validate_signature(const RewriteSystem& sys) {
    std::vector<Diagnostic> out;
    std::set<std::string> seen;
    for (const auto& decl : sys.symbols) {
        auto report = [&](const char* code, const std::string& msg) {
            out.push_back({code, "symbol '" + decl.name + "': " + msg, decl.pos, decl.name, {}});
        };
        if (!seen.insert(decl.name).second) {
            report("E-SIG-DUPLICATE", "declared more than once");
            continue;
        }
        if (auto fv = decl.type.free_vars(); !fv.empty())
            report("E-SIG-OPEN-TYPE", "type has free pattern variable '" + *fv.begin() + "'");

        std::vector<std::string> binders;
        const Type* body = &decl.type;
        bool distinct = true;
        for (; body->is_forall(); body = &body->body()) {
            if (std::find(binders.begin(), binders.end(), body->binder()) != binders.end()) {
                report("E-SIG-DUPLICATE-BINDER", "quantified variable '" + body->binder() + "' bound twice");
                distinct = false;
            }
            binders.push_back(body->binder());
        }
        const auto k = static_cast<std::size_t>(decl.recursive);
        if (k > binders.size()) {
            report("E-SIG-ARITY", "declares " + std::to_string(k) + " recursive arguments but only " +
                                      std::to_string(binders.size()) + " quantified variables");
            continue;
        }
        if (!distinct) continue;
        bool shape_ok = true;
        for (std::size_t i = 0; i < k; ++i) {
            bool matches = body->is_arrow() && body->domain().is_base() && body->domain().pattern().is_var() &&
                           body->domain().pattern().name() == binders[i];
            if (!matches) {
                report("E-SIG-RECURSIVE-ARG", "argument " + std::to_string(i + 1) + " must have type B(" + binders[i] +
                                                  ") to be a recursive argument");
                shape_ok = false;
                break;
            }
            body = &body->codomain();
        }
        if (!shape_ok) continue;
        for (std::size_t i = 0; i < k; ++i) {
            Polarity pol = polarity(binders[i], *body);
            if (pol == Polarity::Negative || pol == Polarity::Both)
                report("E-SIG-NEGATIVE", "recursive variable '" + binders[i] + "' occurs negatively in result type " +
                                             body->str());
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Judgements

void Context::bind(const std::string& name, Type type) {
    std::erase_if(entries_, [&](const auto& e) { return e.first == name; });
    entries_.emplace_back(name, std::move(type));
}

const Type* Context::lookup(const std::string& name) const {
    for (const auto& [n, t] : entries_)
        if (n == name) return &t;
    return nullptr;
}

std::set<std::string> Context::free_pattern_vars() const {
    std::set<std::string> out;
    for (const auto& [_, t] : entries_) out.merge(t.free_vars());
    return out;
}

std::string Context::str() const {
    std::string out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (i) out += ", ";
        out += entries_[i].first + ":" + entries_[i].second.str();
    }
    return out;
}

TypeError::TypeError(std::string code, SourcePos pos, const std::string& message, std::string subterm,
                     std::optional<Type> expected, std::optional<Type> actual)
    : std::runtime_error(message),
      code_(std::move(code)),
      pos_(pos),
      subterm_(std::move(subterm)),
      expected_(std::move(expected)),
      actual_(std::move(actual)) {}

Diagnostic TypeError::diagnostic() const {
    std::string msg = what();
    if (expected_ && actual_) msg += " (expected " + expected_->str() + ", got " + actual_->str() + ")";
    if (!subterm_.empty()) msg += " in '" + subterm_ + "'";
    return {code_, msg, pos_, subterm_, {}};
}

namespace {

Type node_constructor_type() {
    auto a = Pattern::var("a");
    auto b = Pattern::var("b");
    return Type::forall(std::vector<std::string>{"a", "b"},
                        Type::arrow(Type::base(a), Type::arrow(Type::base(b), Type::base(Pattern::node(a, b)))));
}

} // namespace

Type synthesize(const Context& ctx, const Term& t, const Signature& sig) {
    switch (t.kind()) {
        case Term::Kind::Var: {
            if (const Type* ty = ctx.lookup(t.name())) return *ty;
            throw TypeError("E-UNBOUND-VAR", t.pos(), "unbound variable '" + t.name() + "'", t.str());
        }
        case Term::Kind::Symbol: {
            if (const auto* e = sig.find(t.name())) return e->type;
            throw TypeError("E-UNKNOWN-SYMBOL", t.pos(), "undeclared symbol '" + t.name() + "'", t.str());
        }
        case Term::Kind::LeafCon: return Type::base(Pattern::leaf());
        case Term::Kind::NodeCon: return node_constructor_type();
        case Term::Kind::App: {
            Type fun = synthesize(ctx, t.fun(), sig);
            if (!fun.is_arrow())
                throw TypeError("E-NOT-A-FUNCTION", t.pos(), "applied term does not have an arrow type", t.str(), {},
                                fun);
            Type arg = synthesize(ctx, t.arg(), sig);
            if (!type_sub(arg, fun.domain()))
                throw TypeError("E-ARG-MISMATCH", t.arg().pos(), "argument type is not a subtype of the domain",
                                t.str(), fun.domain(), arg);
            return fun.codomain();
        }
        case Term::Kind::PatApp: {
            Type fun = synthesize(ctx, t.fun(), sig);
            if (!fun.is_forall())
                throw TypeError("E-NOT-POLYMORPHIC", t.pos(), "pattern argument given to a term without a forall type",
                                t.str(), {}, fun);
            return subst_pattern(fun.body(), fun.binder(), t.pattern_arg());
        }
        case Term::Kind::Lam: {
            Context inner = ctx;
            inner.bind(t.name(), t.annotation());
            return Type::arrow(t.annotation(), synthesize(inner, t.body(), sig));
        }
        case Term::Kind::PatLam: {
            if (ctx.free_pattern_vars().contains(t.name()))
                throw TypeError("E-PLAM-ESCAPE", t.pos(),
                                "pattern variable '" + t.name() + "' is free in the context and cannot be abstracted",
                                t.str());
            return Type::forall(t.name(), synthesize(ctx, t.body(), sig));
        }
    }
    throw TypeError("E-INTERNAL", t.pos(), "unknown term kind");
}

bool check(const Context& ctx, const Term& t, const Type& expected, const Signature& sig) {
    return type_sub(synthesize(ctx, t, sig), expected);
}

// ---------------------------------------------------------------------------
// Minimal typing

std::optional<ConstructorTerm> to_constructor_term(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::Var: return ConstructorTerm{ConstructorTerm::Kind::Var, t.name(), {}, {}, t.pos()};
        case Term::Kind::LeafCon: return ConstructorTerm{ConstructorTerm::Kind::Leaf, {}, {}, {}, t.pos()};
        case Term::Kind::App: {
            if (t.fun().kind() != Term::Kind::App) return std::nullopt;
            const Term& head = t.fun().fun();
            std::optional<std::pair<Pattern, Pattern>> annotation;
            if (head.kind() == Term::Kind::PatApp) {
                const Term& inner = head.fun();
                if (inner.kind() != Term::Kind::PatApp || inner.fun().kind() != Term::Kind::NodeCon)
                    return std::nullopt;
                annotation.emplace(inner.pattern_arg(), head.pattern_arg());
            } else if (head.kind() != Term::Kind::NodeCon) {
                return std::nullopt;
            }
            auto l = to_constructor_term(t.fun().arg());
            auto r = to_constructor_term(t.arg());
            if (!l || !r) return std::nullopt;
            return ConstructorTerm{ConstructorTerm::Kind::Node, {}, std::move(annotation), {*l, *r}, t.pos()};
        }
        default: return std::nullopt;
    }
}

namespace {

constexpr char kPlaceholder = '?';

Pattern placeholder_pattern(const ConstructorTerm& l) {
    switch (l.kind) {
        case ConstructorTerm::Kind::Var: return Pattern::var(std::string(1, kPlaceholder) + l.name);
        case ConstructorTerm::Kind::Leaf: return Pattern::leaf();
        case ConstructorTerm::Kind::Node:
            return Pattern::node(placeholder_pattern(l.children[0]), placeholder_pattern(l.children[1]));
    }
    return Pattern::leaf();
}

// Assigns user-written pattern variables to left-hand-side term variables.
class LhsNaming {
public:
    void bind(const Pattern& written, const Pattern& forced, SourcePos pos, const std::string& where) {
        if (written.is_wildcard() || written.is_bottom())
            throw TypeError("E-MIN-NONMINIMAL", pos,
                            where + ": '" + written.str() + "' is not allowed where minimal typing forces a pattern");
        if (forced.is_var()) {
            std::string term_var = forced.name().substr(1);
            if (!written.is_var())
                throw TypeError("E-MIN-PATTERN-MISMATCH", pos,
                                where + ": minimal pattern of variable '" + term_var +
                                    "' is a fresh pattern variable, not '" + written.str() + "'");
            auto [it, inserted] = names_.try_emplace(term_var, written.name());
            if (!inserted && it->second != written.name())
                throw TypeError("E-MIN-PATTERN-MISMATCH", pos,
                                where + ": variable '" + term_var + "' is typed B(" + it->second + "), not B(" +
                                    written.name() + ")");
            auto [owner, fresh] = owners_.try_emplace(written.name(), term_var);
            if (!fresh && owner->second != term_var)
                throw TypeError("E-MIN-PATTERN-MISMATCH", pos,
                                where + ": variables '" + owner->second + "' and '" + term_var +
                                    "' need distinct fresh pattern variables, both use '" + written.name() + "'");
            return;
        }
        if (written.kind() != forced.kind())
            throw TypeError("E-MIN-PATTERN-MISMATCH", pos,
                            where + ": expected a pattern of shape " + shape(forced) + ", found '" + written.str() +
                                "'");
        if (forced.is_node()) {
            bind(written.left(), forced.left(), pos, where);
            bind(written.right(), forced.right(), pos, where);
        }
    }

    void bind_annotations(const ConstructorTerm& l) {
        if (l.kind != ConstructorTerm::Kind::Node) return;
        if (l.annotation) {
            bind(l.annotation->first, placeholder_pattern(l.children[0]), l.pos, "constructor annotation");
            bind(l.annotation->second, placeholder_pattern(l.children[1]), l.pos, "constructor annotation");
        }
        bind_annotations(l.children[0]);
        bind_annotations(l.children[1]);
    }

    bool owns(const std::string& pattern_var) const { return owners_.contains(pattern_var); }
    const std::map<std::string, std::string>& names() const { return names_; }

    Pattern resolve(const Pattern& forced) const {
        std::map<std::string, std::string> renaming;
        for (const auto& [term_var, pattern_var] : names_)
            renaming[std::string(1, kPlaceholder) + term_var] = pattern_var;
        return forced.rename(renaming);
    }

private:
    static std::string shape(const Pattern& p) {
        if (p.is_var()) return "<variable>";
        if (p.is_leaf()) return "leaf";
        return "node(" + shape(p.left()) + "," + shape(p.right()) + ")";
    }

    std::map<std::string, std::string> names_;
    std::map<std::string, std::string> owners_;
};

void collect_lhs_vars(const ConstructorTerm& l, std::vector<std::string>& order) {
    if (l.kind == ConstructorTerm::Kind::Var) {
        if (std::find(order.begin(), order.end(), l.name) == order.end()) order.push_back(l.name);
    }
    for (const auto& c : l.children) collect_lhs_vars(c, order);
}

} // namespace

MinTypingResult min_type_lhs(const RewriteRule& rule, const Signature& sig) {
    const SignatureEntry* entry = sig.find(rule.head);
    if (!entry) throw TypeError("E-UNKNOWN-SYMBOL", rule.pos, "rule head '" + rule.head + "' is not declared");
    const auto k = static_cast<std::size_t>(entry->recursive);
    const std::size_t n = entry->quantifiers;
    const std::size_t m = rule.pattern_args.size();

    if (rule.args.size() != k)
        throw TypeError("E-LHS-ARITY", rule.pos,
                        "'" + rule.head + "' takes " + std::to_string(k) + " recursive arguments, left-hand side has " +
                            std::to_string(rule.args.size()));
    if ((k > 0 && m != n) || m > n)
        throw TypeError("E-LHS-PATTERN-ARITY", rule.pos,
                        "'" + rule.head + "' takes " + std::to_string(n) + " pattern arguments, left-hand side has " +
                            std::to_string(m));

    std::vector<ConstructorTerm> args;
    for (const auto& a : rule.args) {
        auto l = to_constructor_term(a);
        if (!l)
            throw TypeError("E-LHS-NOT-CONSTRUCTOR", a.pos(), "left-hand side argument is not a constructor term",
                            a.str());
        args.push_back(std::move(*l));
    }

    LhsNaming naming;
    for (std::size_t i = 0; i < k; ++i)
        naming.bind(rule.pattern_args[i], placeholder_pattern(args[i]), rule.pos,
                    "pattern argument " + std::to_string(i + 1));
    for (const auto& l : args) naming.bind_annotations(l);

    MinTypingResult result;
    for (std::size_t j = k; j < m; ++j) {
        const Pattern& p = rule.pattern_args[j];
        if (!p.is_var() || naming.owns(p.name()) || result.pattern_vars.contains(p.name()))
            throw TypeError("E-LHS-EXTRA-PATTERN", rule.pos,
                            "pattern argument " + std::to_string(j + 1) + " must be a fresh pattern variable, found '" +
                                p.str() + "'");
        result.pattern_vars.insert(p.name());
    }

    for (const auto& l : args) result.recursive_patterns.push_back(naming.resolve(placeholder_pattern(l)));
    for (const auto& p : result.recursive_patterns) p.collect_vars(result.pattern_vars);

    std::vector<std::string> order;
    for (const auto& l : args) collect_lhs_vars(l, order);
    for (const auto& x : order) result.context.bind(x, Type::base(Pattern::var(naming.names().at(x))));

    Type t = entry->type;
    for (std::size_t j = 0; j < m; ++j) {
        if (!t.is_forall()) throw TypeError("E-LHS-PATTERN-ARITY", rule.pos, "too many pattern arguments");
        const Pattern& arg = j < k ? result.recursive_patterns[j] : rule.pattern_args[j];
        t = subst_pattern(t.body(), t.binder(), arg);
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (!t.is_arrow()) throw TypeError("E-SIG-RECURSIVE-ARG", rule.pos, "symbol type has too few arrows");
        t = t.codomain();
    }
    result.lhs_type = t;
    return result;
}

namespace {

void check_pattern_application(const Term& t, const Signature& sig, std::vector<Diagnostic>& out) {
    switch (t.kind()) {
        case Term::Kind::Symbol:
        case Term::Kind::PatApp: {
            std::size_t count = 0;
            const Term* head = &t;
            while (head->kind() == Term::Kind::PatApp) {
                ++count;
                head = &head->fun();
            }
            if (head->kind() == Term::Kind::Symbol) {
                const auto* e = sig.find(head->name());
                if (e && count < e->quantifiers)
                    out.push_back({"E-RHS-PARTIAL-PATTERN-APP",
                                   "symbol '" + head->name() + "' must be applied to all " +
                                       std::to_string(e->quantifiers) + " pattern arguments, found " +
                                       std::to_string(count),
                                   head->pos(), head->name(), {}});
            } else {
                check_pattern_application(*head, sig, out);
            }
            return;
        }
        case Term::Kind::App:
            check_pattern_application(t.fun(), sig, out);
            check_pattern_application(t.arg(), sig, out);
            return;
        case Term::Kind::Lam:
        case Term::Kind::PatLam: check_pattern_application(t.body(), sig, out); return;
        default: return;
    }
}

} // namespace

std::variant<ValidatedRule, std::vector<Diagnostic>> validate_rule(const RewriteRule& rule, const Signature& sig,
                                                                   std::size_t index) {
    std::vector<Diagnostic> diags;
    MinTypingResult typing;
    try {
        typing = min_type_lhs(rule, sig);
    } catch (const TypeError& e) {
        diags.push_back(e.diagnostic());
        return diags;
    }

    auto fv = free_vars(rule.rhs);
    for (const auto& x : fv.term_vars)
        if (!typing.context.lookup(x))
            diags.push_back({"E-RHS-FREE-VAR", "variable '" + x + "' of the right-hand side does not occur on the left",
                             rule.rhs.pos(), x, {}});
    for (const auto& a : fv.pattern_vars)
        if (!typing.pattern_vars.contains(a))
            diags.push_back({"E-RHS-FREE-PATTERN-VAR",
                             "pattern variable '" + a + "' of the right-hand side is not introduced by the left-hand side",
                             rule.rhs.pos(), a, {}});
    check_pattern_application(rule.rhs, sig, diags);

    if (diags.empty()) {
        try {
            Type actual = synthesize(typing.context, rule.rhs, sig);
            if (!type_sub(actual, typing.lhs_type))
                diags.push_back(TypeError("E-RHS-TYPE-MISMATCH", rule.rhs.pos(),
                                          "right-hand side type is not a subtype of the left-hand side type",
                                          rule.rhs.str(), typing.lhs_type, actual)
                                    .diagnostic());
        } catch (const TypeError& e) {
            diags.push_back(e.diagnostic());
        }
    }
    if (!diags.empty()) return diags;
    return ValidatedRule{index, rule, std::move(typing)};
}

SystemValidation validate_system(const RewriteSystem& sys) {
    SystemValidation out;
    out.diagnostics = validate_signature(sys);
    Signature sig(sys);
    std::vector<ValidatedRule> rules;
    for (std::size_t i = 0; i < sys.rules.size(); ++i) {
        auto r = validate_rule(sys.rules[i], sig, i);
        if (auto* ok = std::get_if<ValidatedRule>(&r)) {
            out.rules.emplace_back(*ok);
            rules.push_back(std::move(*ok));
        } else {
            out.rules.emplace_back(std::nullopt);
            for (auto& d : std::get<std::vector<Diagnostic>>(r)) {
                d.rule = i;
                out.diagnostics.push_back(std::move(d));
            }
        }
    }
    if (out.diagnostics.empty()) out.system = ValidatedSystem{sys, std::move(sig), std::move(rules)};
    return out;
}

} // namespace tydp
