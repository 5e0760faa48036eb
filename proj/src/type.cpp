#include "tydp/type.hpp"

#include <cassert>
#include <map>
#include <optional>

namespace tydp {

struct Type::Rep {
    Kind kind;
    std::optional<Pattern> pattern;
    std::string binder;
    std::vector<Type> children;
};

Type Type::base(Pattern p) {
    return Type(std::make_shared<const Rep>(Rep{Kind::Base, std::move(p), {}, {}}));
}

Type Type::arrow(Type domain, Type codomain) {
    return Type(std::make_shared<const Rep>(
        Rep{Kind::Arrow, std::nullopt, {}, {std::move(domain), std::move(codomain)}}));
}

Type Type::forall(std::string binder, Type body) {
    return Type(std::make_shared<const Rep>(
        Rep{Kind::Forall, std::nullopt, std::move(binder), {std::move(body)}}));
}

Type Type::forall(const std::vector<std::string>& binders, Type body) {
    for (auto it = binders.rbegin(); it != binders.rend(); ++it)
        body = forall(*it, std::move(body));
    return body;
}

Type::Kind Type::kind() const { return rep_->kind; }

const Pattern& Type::pattern() const {
    assert(is_base());
    return *rep_->pattern;
}

const Type& Type::domain() const {
    assert(is_arrow());
    return rep_->children[0];
}

const Type& Type::codomain() const {
    assert(is_arrow());
    return rep_->children[1];
}

const std::string& Type::binder() const {
    assert(is_forall());
    return rep_->binder;
}

const Type& Type::body() const {
    assert(is_forall());
    return rep_->children[0];
}

std::set<std::string> Type::free_vars() const {
    switch (kind()) {
        case Kind::Base: return pattern().vars();
        case Kind::Arrow: {
            auto out = domain().free_vars();
            out.merge(codomain().free_vars());
            return out;
        }
        case Kind::Forall: {
            auto out = body().free_vars();
            out.erase(binder());
            return out;
        }
    }
    return {};
}

void Type::collect_all_names(std::set<std::string>& out) const {
    switch (kind()) {
        case Kind::Base: pattern().collect_vars(out); break;
        case Kind::Arrow:
            domain().collect_all_names(out);
            codomain().collect_all_names(out);
            break;
        case Kind::Forall:
            out.insert(binder());
            body().collect_all_names(out);
            break;
    }
}

namespace {

void print_type(std::string& out, const Type& t, bool as_domain) {
    switch (t.kind()) {
        case Type::Kind::Base:
            out += "B(" + t.pattern().str() + ")";
            return;
        case Type::Kind::Arrow:
            if (as_domain) out += "(";
            print_type(out, t.domain(), true);
            out += " -> ";
            print_type(out, t.codomain(), false);
            if (as_domain) out += ")";
            return;
        case Type::Kind::Forall: {
            if (as_domain) out += "(";
            out += "forall";
            const Type* cur = &t;
            while (cur->is_forall()) {
                out += " " + cur->binder();
                cur = &cur->body();
            }
            out += ". ";
            print_type(out, *cur, false);
            if (as_domain) out += ")";
            return;
        }
    }
}

// Compares modulo bound names: `env` pairs the binder names currently in scope.
bool alpha_eq(const Type& a, const Type& b, std::vector<std::pair<std::string, std::string>>& env) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Type::Kind::Base: {
            // Bound names become positional markers; inner binders shadow outer ones.
            std::map<std::string, std::string> left, right;
            for (std::size_t i = 0; i < env.size(); ++i) {
                left[env[i].first] = "#" + std::to_string(i);
                right[env[i].second] = "#" + std::to_string(i);
            }
            return a.pattern().rename(left) == b.pattern().rename(right);
        }
        case Type::Kind::Arrow:
            return alpha_eq(a.domain(), b.domain(), env) && alpha_eq(a.codomain(), b.codomain(), env);
        case Type::Kind::Forall: {
            env.emplace_back(a.binder(), b.binder());
            bool r = alpha_eq(a.body(), b.body(), env);
            env.pop_back();
            return r;
        }
    }
    return false;
}

} // namespace

std::string Type::str() const {
    std::string out;
    print_type(out, *this, false);
    return out;
}

bool alpha_equal(const Type& a, const Type& b) {
    std::vector<std::pair<std::string, std::string>> env;
    return alpha_eq(a, b, env);
}

bool operator==(const Type& a, const Type& b) {
    return a.rep_ == b.rep_ || alpha_equal(a, b);
}

std::ostream& operator<<(std::ostream& os, const Type& t) { return os << t.str(); }

std::string fresh_name(const std::string& base, const std::set<std::string>& avoid) {
    std::string candidate = base;
    while (avoid.contains(candidate)) candidate += "'";
    return candidate;
}

Type subst_pattern(const Type& t, const std::string& var, const Pattern& p) {
    switch (t.kind()) {
        case Type::Kind::Base:
            return Type::base(t.pattern().substitute({{var, p}}));
        case Type::Kind::Arrow:
            return Type::arrow(subst_pattern(t.domain(), var, p), subst_pattern(t.codomain(), var, p));
        case Type::Kind::Forall: {
            if (t.binder() == var) return t;
            auto body_free = t.body().free_vars();
            if (!body_free.contains(var)) return t;
            auto p_vars = p.vars();
            if (!p_vars.contains(t.binder()))
                return Type::forall(t.binder(), subst_pattern(t.body(), var, p));
            std::set<std::string> avoid = p_vars;
            avoid.merge(body_free);
            avoid.insert(var);
            std::string renamed = fresh_name(t.binder(), avoid);
            Type body = subst_pattern(t.body(), t.binder(), Pattern::var(renamed));
            return Type::forall(renamed, subst_pattern(body, var, p));
        }
    }
    return t;
}

Type rename_binders_away(const Type& t, const std::set<std::string>& avoid) {
    switch (t.kind()) {
        case Type::Kind::Base: return t;
        case Type::Kind::Arrow:
            return Type::arrow(rename_binders_away(t.domain(), avoid), rename_binders_away(t.codomain(), avoid));
        case Type::Kind::Forall: {
            std::set<std::string> taken = avoid;
            t.collect_all_names(taken);
            std::string renamed = avoid.contains(t.binder()) ? fresh_name(t.binder(), taken) : t.binder();
            Type body = renamed == t.binder() ? t.body() : subst_pattern(t.body(), t.binder(), Pattern::var(renamed));
            std::set<std::string> inner = avoid;
            inner.insert(renamed);
            return Type::forall(renamed, rename_binders_away(body, inner));
        }
    }
    return t;
}

std::size_t quantifier_count(const Type& t) {
    std::size_t n = 0;
    for (const Type* cur = &t; cur->is_forall(); cur = &cur->body()) ++n;
    return n;
}

} // namespace tydp
