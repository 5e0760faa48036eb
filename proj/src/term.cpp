#include "tydp/term.hpp"

#include <cassert>
#include <mutex>
#include <optional>

namespace tydp {

// ---------------------------------------------------------------------------
// Annotated terms

struct Term::Rep {
    Kind kind;
    SourcePos pos;
    std::string name;
    std::vector<Term> children;
    std::optional<Pattern> pattern;
    std::optional<Type> annotation;
};

Term Term::var(std::string name, SourcePos pos) {
    return Term(std::make_shared<const Rep>(Rep{Kind::Var, pos, std::move(name), {}, {}, {}}));
}

Term Term::symbol(std::string name, SourcePos pos) {
    return Term(std::make_shared<const Rep>(Rep{Kind::Symbol, pos, std::move(name), {}, {}, {}}));
}

Term Term::node_con(SourcePos pos) {
    return Term(std::make_shared<const Rep>(Rep{Kind::NodeCon, pos, {}, {}, {}, {}}));
}

Term Term::leaf_con(SourcePos pos) {
    return Term(std::make_shared<const Rep>(Rep{Kind::LeafCon, pos, {}, {}, {}, {}}));
}

Term Term::app(Term fun, Term arg, SourcePos pos) {
    return Term(std::make_shared<const Rep>(
        Rep{Kind::App, pos, {}, {std::move(fun), std::move(arg)}, {}, {}}));
}

Term Term::pat_app(Term fun, Pattern arg, SourcePos pos) {
    return Term(std::make_shared<const Rep>(Rep{Kind::PatApp, pos, {}, {std::move(fun)}, std::move(arg), {}}));
}

Term Term::lam(std::string binder, Type annotation, Term body, SourcePos pos) {
    return Term(std::make_shared<const Rep>(
        Rep{Kind::Lam, pos, std::move(binder), {std::move(body)}, {}, std::move(annotation)}));
}

Term Term::pat_lam(std::string binder, Term body, SourcePos pos) {
    return Term(std::make_shared<const Rep>(Rep{Kind::PatLam, pos, std::move(binder), {std::move(body)}, {}, {}}));
}

Term::Kind Term::kind() const { return rep_->kind; }
SourcePos Term::pos() const { return rep_->pos; }
const std::string& Term::name() const { return rep_->name; }

const Term& Term::fun() const {
    assert(kind() == Kind::App || kind() == Kind::PatApp);
    return rep_->children[0];
}

const Term& Term::arg() const {
    assert(kind() == Kind::App);
    return rep_->children[1];
}

const Pattern& Term::pattern_arg() const {
    assert(kind() == Kind::PatApp);
    return *rep_->pattern;
}

const Type& Term::annotation() const {
    assert(kind() == Kind::Lam);
    return *rep_->annotation;
}

const Term& Term::body() const {
    assert(kind() == Kind::Lam || kind() == Kind::PatLam);
    return rep_->children[0];
}

Term Term::at(SourcePos pos) const {
    Rep copy = *rep_;
    copy.pos = pos;
    return Term(std::make_shared<const Rep>(std::move(copy)));
}

namespace {

enum class Slot { Top, Fun, Arg };

void print_term(std::string& out, const Term& t, Slot slot) {
    switch (t.kind()) {
        case Term::Kind::Var:
        case Term::Kind::Symbol: out += t.name(); return;
        case Term::Kind::NodeCon: out += "Node"; return;
        case Term::Kind::LeafCon: out += "Leaf"; return;
        case Term::Kind::App:
            if (slot == Slot::Arg) out += "(";
            print_term(out, t.fun(), Slot::Fun);
            out += " ";
            print_term(out, t.arg(), Slot::Arg);
            if (slot == Slot::Arg) out += ")";
            return;
        case Term::Kind::PatApp: {
            std::vector<const Pattern*> args;
            const Term* head = &t;
            while (head->kind() == Term::Kind::PatApp) {
                args.push_back(&head->pattern_arg());
                head = &head->fun();
            }
            if (slot == Slot::Arg) out += "(";
            print_term(out, *head, Slot::Arg);
            out += "[";
            for (auto it = args.rbegin(); it != args.rend(); ++it) {
                if (it != args.rbegin()) out += ",";
                out += (*it)->str();
            }
            out += "]";
            if (slot == Slot::Arg) out += ")";
            return;
        }
        case Term::Kind::Lam:
            if (slot != Slot::Top) out += "(";
            out += "\\" + t.name() + ":" + t.annotation().str() + ". ";
            print_term(out, t.body(), Slot::Top);
            if (slot != Slot::Top) out += ")";
            return;
        case Term::Kind::PatLam:
            if (slot != Slot::Top) out += "(";
            out += "/\\" + t.name() + ". ";
            print_term(out, t.body(), Slot::Top);
            if (slot != Slot::Top) out += ")";
            return;
    }
}

struct BinderEnv {
    std::vector<std::pair<std::string, std::string>> terms;
    std::vector<std::pair<std::string, std::string>> patterns;

    std::map<std::string, std::string> pattern_markers(bool left) const {
        std::map<std::string, std::string> m;
        for (std::size_t i = 0; i < patterns.size(); ++i)
            m[left ? patterns[i].first : patterns[i].second] = "#p" + std::to_string(i);
        return m;
    }
};

Type rename_free_pattern_vars(const Type& t, const std::map<std::string, std::string>& m) {
    switch (t.kind()) {
        case Type::Kind::Base: return Type::base(t.pattern().rename(m));
        case Type::Kind::Arrow:
            return Type::arrow(rename_free_pattern_vars(t.domain(), m), rename_free_pattern_vars(t.codomain(), m));
        case Type::Kind::Forall: {
            auto inner = m;
            inner.erase(t.binder());
            return Type::forall(t.binder(), rename_free_pattern_vars(t.body(), inner));
        }
    }
    return t;
}

bool term_eq(const Term& a, const Term& b, BinderEnv& env) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Term::Kind::Var: {
            for (std::size_t i = env.terms.size(); i-- > 0;) {
                bool left = env.terms[i].first == a.name();
                bool right = env.terms[i].second == b.name();
                if (left || right) return left && right;
            }
            return a.name() == b.name();
        }
        case Term::Kind::Symbol: return a.name() == b.name();
        case Term::Kind::NodeCon:
        case Term::Kind::LeafCon: return true;
        case Term::Kind::App: return term_eq(a.fun(), b.fun(), env) && term_eq(a.arg(), b.arg(), env);
        case Term::Kind::PatApp:
            return a.pattern_arg().rename(env.pattern_markers(true)) ==
                       b.pattern_arg().rename(env.pattern_markers(false)) &&
                   term_eq(a.fun(), b.fun(), env);
        case Term::Kind::Lam: {
            if (!alpha_equal(rename_free_pattern_vars(a.annotation(), env.pattern_markers(true)),
                             rename_free_pattern_vars(b.annotation(), env.pattern_markers(false))))
                return false;
            env.terms.emplace_back(a.name(), b.name());
            bool r = term_eq(a.body(), b.body(), env);
            env.terms.pop_back();
            return r;
        }
        case Term::Kind::PatLam: {
            env.patterns.emplace_back(a.name(), b.name());
            bool r = term_eq(a.body(), b.body(), env);
            env.patterns.pop_back();
            return r;
        }
    }
    return false;
}

void collect_free(const Term& t, std::set<std::string>& bound_terms, std::set<std::string>& bound_patterns,
                  TermFreeVars& out) {
    auto add_patterns = [&](const std::set<std::string>& vars) {
        for (const auto& v : vars)
            if (!bound_patterns.contains(v)) out.pattern_vars.insert(v);
    };
    switch (t.kind()) {
        case Term::Kind::Var:
            if (!bound_terms.contains(t.name())) out.term_vars.insert(t.name());
            return;
        case Term::Kind::Symbol:
        case Term::Kind::NodeCon:
        case Term::Kind::LeafCon: return;
        case Term::Kind::App:
            collect_free(t.fun(), bound_terms, bound_patterns, out);
            collect_free(t.arg(), bound_terms, bound_patterns, out);
            return;
        case Term::Kind::PatApp:
            add_patterns(t.pattern_arg().vars());
            collect_free(t.fun(), bound_terms, bound_patterns, out);
            return;
        case Term::Kind::Lam: {
            add_patterns(t.annotation().free_vars());
            bool fresh = bound_terms.insert(t.name()).second;
            collect_free(t.body(), bound_terms, bound_patterns, out);
            if (fresh) bound_terms.erase(t.name());
            return;
        }
        case Term::Kind::PatLam: {
            bool fresh = bound_patterns.insert(t.name()).second;
            collect_free(t.body(), bound_terms, bound_patterns, out);
            if (fresh) bound_patterns.erase(t.name());
            return;
        }
    }
}

} // namespace

std::string Term::str() const {
    std::string out;
    print_term(out, *this, Slot::Top);
    return out;
}

bool operator==(const Term& a, const Term& b) {
    if (a.rep_ == b.rep_) return true;
    BinderEnv env;
    return term_eq(a, b, env);
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << t.str(); }

TermFreeVars free_vars(const Term& t) {
    TermFreeVars out;
    std::set<std::string> bound_terms, bound_patterns;
    collect_free(t, bound_terms, bound_patterns, out);
    return out;
}

// ---------------------------------------------------------------------------
// Erased terms

struct ErasedTerm::Rep {
    Kind kind;
    std::string name;
    std::vector<ErasedTerm> children;
    mutable std::once_flag key_once;
    mutable std::string key;
};

ErasedTerm ErasedTerm::make(Kind kind, std::string name, std::vector<ErasedTerm> children) {
    auto rep = std::make_shared<Rep>();
    rep->kind = kind;
    rep->name = std::move(name);
    rep->children = std::move(children);
    return ErasedTerm(std::move(rep));
}

ErasedTerm ErasedTerm::var(std::string name) { return make(Kind::Var, std::move(name), {}); }
ErasedTerm ErasedTerm::symbol(std::string name) { return make(Kind::Symbol, std::move(name), {}); }

ErasedTerm ErasedTerm::leaf_con() {
    static const ErasedTerm leaf = make(Kind::LeafCon, {}, {});
    return leaf;
}

ErasedTerm ErasedTerm::node_con() {
    static const ErasedTerm node = make(Kind::NodeCon, {}, {});
    return node;
}

ErasedTerm ErasedTerm::app(ErasedTerm fun, ErasedTerm arg) {
    return make(Kind::App, {}, {std::move(fun), std::move(arg)});
}

ErasedTerm ErasedTerm::lam(std::string binder, ErasedTerm body) {
    return make(Kind::Lam, std::move(binder), {std::move(body)});
}

ErasedTerm ErasedTerm::tree(ErasedTerm left, ErasedTerm right) {
    return app(app(node_con(), std::move(left)), std::move(right));
}

ErasedTerm::Kind ErasedTerm::kind() const { return rep_->kind; }
const std::string& ErasedTerm::name() const { return rep_->name; }

const ErasedTerm& ErasedTerm::fun() const {
    assert(is_app());
    return rep_->children[0];
}

const ErasedTerm& ErasedTerm::arg() const {
    assert(is_app());
    return rep_->children[1];
}

const ErasedTerm& ErasedTerm::body() const {
    assert(is_lam());
    return rep_->children[0];
}

bool ErasedTerm::is_tree_node() const { return is_app() && fun().is_app() && fun().fun().is_node_con(); }
const ErasedTerm& ErasedTerm::tree_left() const { return fun().arg(); }
const ErasedTerm& ErasedTerm::tree_right() const { return arg(); }

std::set<std::string> ErasedTerm::free_vars() const {
    switch (kind()) {
        case Kind::Var: return {name()};
        case Kind::App: {
            auto out = fun().free_vars();
            out.merge(arg().free_vars());
            return out;
        }
        case Kind::Lam: {
            auto out = body().free_vars();
            out.erase(name());
            return out;
        }
        default: return {};
    }
}

bool ErasedTerm::mentions_symbol() const {
    switch (kind()) {
        case Kind::Symbol: return true;
        case Kind::App: return fun().mentions_symbol() || arg().mentions_symbol();
        case Kind::Lam: return body().mentions_symbol();
        default: return false;
    }
}

namespace {

void build_key(std::string& out, const ErasedTerm& t, std::vector<std::string>& env) {
    switch (t.kind()) {
        case ErasedTerm::Kind::Var: {
            for (std::size_t i = env.size(); i-- > 0;) {
                if (env[i] == t.name()) {
                    out += "%" + std::to_string(env.size() - 1 - i);
                    return;
                }
            }
            out += "$" + t.name();
            return;
        }
        case ErasedTerm::Kind::Symbol: out += t.name(); return;
        case ErasedTerm::Kind::LeafCon: out += "L"; return;
        case ErasedTerm::Kind::NodeCon: out += "N"; return;
        case ErasedTerm::Kind::App:
            if (env.empty()) {
                out += "(" + t.fun().key() + " " + t.arg().key() + ")";
                return;
            }
            out += "(";
            build_key(out, t.fun(), env);
            out += " ";
            build_key(out, t.arg(), env);
            out += ")";
            return;
        case ErasedTerm::Kind::Lam:
            env.push_back(t.name());
            out += "\\.";
            build_key(out, t.body(), env);
            env.pop_back();
            return;
    }
}

void print_erased(std::string& out, const ErasedTerm& t, Slot slot) {
    switch (t.kind()) {
        case ErasedTerm::Kind::Var:
        case ErasedTerm::Kind::Symbol: out += t.name(); return;
        case ErasedTerm::Kind::LeafCon: out += "Leaf"; return;
        case ErasedTerm::Kind::NodeCon: out += "Node"; return;
        case ErasedTerm::Kind::App:
            if (slot == Slot::Arg) out += "(";
            print_erased(out, t.fun(), Slot::Fun);
            out += " ";
            print_erased(out, t.arg(), Slot::Arg);
            if (slot == Slot::Arg) out += ")";
            return;
        case ErasedTerm::Kind::Lam:
            if (slot != Slot::Top) out += "(";
            out += "\\" + t.name() + ". ";
            print_erased(out, t.body(), Slot::Top);
            if (slot != Slot::Top) out += ")";
            return;
    }
}

ErasedTerm subst_rec(const ErasedTerm& t, const TermSubstitution& sigma, const std::set<std::string>& range_free) {
    switch (t.kind()) {
        case ErasedTerm::Kind::Var: {
            auto it = sigma.find(t.name());
            return it == sigma.end() ? t : it->second;
        }
        case ErasedTerm::Kind::App:
            return ErasedTerm::app(subst_rec(t.fun(), sigma, range_free), subst_rec(t.arg(), sigma, range_free));
        case ErasedTerm::Kind::Lam: {
            TermSubstitution inner = sigma;
            inner.erase(t.name());
            if (inner.empty()) return t;
            auto body_free = t.body().free_vars();
            bool relevant = false;
            for (const auto& [v, _] : inner) relevant |= body_free.contains(v);
            if (!relevant) return t;
            if (!range_free.contains(t.name()))
                return ErasedTerm::lam(t.name(), subst_rec(t.body(), inner, range_free));
            std::set<std::string> avoid = range_free;
            avoid.merge(body_free);
            for (const auto& [v, _] : inner) avoid.insert(v);
            std::string renamed = fresh_name(t.name(), avoid);
            inner.insert_or_assign(t.name(), ErasedTerm::var(renamed));
            std::set<std::string> range = range_free;
            range.insert(renamed);
            return ErasedTerm::lam(renamed, subst_rec(t.body(), inner, range));
        }
        default: return t;
    }
}

} // namespace

const std::string& ErasedTerm::key() const {
    std::call_once(rep_->key_once, [this] {
        std::vector<std::string> env;
        std::string out;
        build_key(out, *this, env);
        rep_->key = std::move(out);
    });
    return rep_->key;
}

std::string ErasedTerm::str() const {
    std::string out;
    print_erased(out, *this, Slot::Top);
    return out;
}

std::ostream& operator<<(std::ostream& os, const ErasedTerm& t) { return os << t.str(); }

ErasedTerm substitute(const ErasedTerm& t, const TermSubstitution& sigma) {
    if (sigma.empty()) return t;
    std::set<std::string> range_free;
    for (const auto& [_, u] : sigma) range_free.merge(u.free_vars());
    return subst_rec(t, sigma, range_free);
}

ErasedTerm erase(const Term& t) {
    switch (t.kind()) {
        case Term::Kind::Var: return ErasedTerm::var(t.name());
        case Term::Kind::Symbol: return ErasedTerm::symbol(t.name());
        case Term::Kind::NodeCon: return ErasedTerm::node_con();
        case Term::Kind::LeafCon: return ErasedTerm::leaf_con();
        case Term::Kind::App: return ErasedTerm::app(erase(t.fun()), erase(t.arg()));
        case Term::Kind::PatApp: return erase(t.fun());
        case Term::Kind::Lam: return ErasedTerm::lam(t.name(), erase(t.body()));
        case Term::Kind::PatLam: return erase(t.body());
    }
    return ErasedTerm::leaf_con();
}

} // namespace tydp
