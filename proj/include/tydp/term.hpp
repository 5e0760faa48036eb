#pragma once

#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "tydp/pattern.hpp"
#include "tydp/type.hpp"

namespace tydp {

struct SourcePos {
    int line = 0;
    int column = 0;

    bool known() const { return line > 0; }
    std::string str() const { return std::to_string(line) + ":" + std::to_string(column); }
};

/// Fully annotated source term. Pattern application and abstraction are
/// explicit; lambdas carry their domain type.
class Term {
public:
    enum class Kind { Var, Symbol, NodeCon, LeafCon, App, PatApp, Lam, PatLam };

    static Term var(std::string name, SourcePos pos = {});
    static Term symbol(std::string name, SourcePos pos = {});
    static Term node_con(SourcePos pos = {});
    static Term leaf_con(SourcePos pos = {});
    static Term app(Term fun, Term arg, SourcePos pos = {});
    static Term pat_app(Term fun, Pattern arg, SourcePos pos = {});
    static Term lam(std::string binder, Type annotation, Term body, SourcePos pos = {});
    static Term pat_lam(std::string binder, Term body, SourcePos pos = {});

    Kind kind() const;
    SourcePos pos() const;

    /// Var, Symbol: the identifier. Lam, PatLam: the binder.
    const std::string& name() const;
    const Term& fun() const;
    const Term& arg() const;
    const Pattern& pattern_arg() const;
    const Type& annotation() const;
    const Term& body() const;

    /// Same term with a new position (positions never affect equality).
    Term at(SourcePos pos) const;

    std::string str() const;

    /// Structural equality up to renaming of both binder kinds.
    friend bool operator==(const Term& a, const Term& b);

private:
    struct Rep;
    explicit Term(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
    std::shared_ptr<const Rep> rep_;
};

std::ostream& operator<<(std::ostream& os, const Term& t);

struct TermFreeVars {
    std::set<std::string> term_vars;
    std::set<std::string> pattern_vars;
};

TermFreeVars free_vars(const Term& t);

/// Run-time term: no pattern arguments, pattern abstractions or annotations.
class ErasedTerm {
public:
    enum class Kind { Var, Symbol, LeafCon, NodeCon, App, Lam };

    static ErasedTerm var(std::string name);
    static ErasedTerm symbol(std::string name);
    static ErasedTerm leaf_con();
    static ErasedTerm node_con();
    static ErasedTerm app(ErasedTerm fun, ErasedTerm arg);
    static ErasedTerm lam(std::string binder, ErasedTerm body);
    /// `Node l r`.
    static ErasedTerm tree(ErasedTerm left, ErasedTerm right);

    Kind kind() const;
    bool is_var() const { return kind() == Kind::Var; }
    bool is_symbol() const { return kind() == Kind::Symbol; }
    bool is_leaf() const { return kind() == Kind::LeafCon; }
    bool is_node_con() const { return kind() == Kind::NodeCon; }
    bool is_app() const { return kind() == Kind::App; }
    bool is_lam() const { return kind() == Kind::Lam; }

    const std::string& name() const;
    const ErasedTerm& fun() const;
    const ErasedTerm& arg() const;
    const ErasedTerm& body() const;

    /// True for `Node t u` (a fully applied constructor).
    bool is_tree_node() const;
    const ErasedTerm& tree_left() const;
    const ErasedTerm& tree_right() const;

    std::set<std::string> free_vars() const;
    bool mentions_symbol() const;

    /// Alpha-invariant key: bound variables print as de Bruijn indices.
    const std::string& key() const;
    std::string str() const;

    friend bool operator==(const ErasedTerm& a, const ErasedTerm& b) { return a.key() == b.key(); }
    friend bool operator<(const ErasedTerm& a, const ErasedTerm& b) { return a.key() < b.key(); }

private:
    struct Rep;
    explicit ErasedTerm(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
    static ErasedTerm make(Kind kind, std::string name, std::vector<ErasedTerm> children);
    std::shared_ptr<const Rep> rep_;
};

std::ostream& operator<<(std::ostream& os, const ErasedTerm& t);

using TermSubstitution = std::map<std::string, ErasedTerm>;

/// Capture-avoiding simultaneous substitution.
ErasedTerm substitute(const ErasedTerm& t, const TermSubstitution& sigma);

ErasedTerm erase(const Term& t);

} // namespace tydp
